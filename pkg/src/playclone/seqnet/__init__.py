from .adam import AdamState, adam_step, clip_grad_norm
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .loss import NonFiniteLossError, loss_and_grad
from .modl import (
    LOG_SCALE_FLOOR,
    ModlHead,
    modl_all_bin_probs,
    modl_bin_logprob,
    modl_logprob,
    modl_sample,
)
from .netspec import (
    NetSpec,
    Params,
    flatten_params,
    init_params,
    unflatten_params,
    zeros_params,
)
from .rnn import (
    ForwardCache,
    WidthMismatchError,
    heads_at,
    rnn_backward,
    rnn_forward,
    split_head,
    zero_hidden,
)
