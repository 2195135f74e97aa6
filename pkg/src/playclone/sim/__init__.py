from .scene import ACT_DIM, OBS_DIM, EnvState, InvalidStateError, SceneConfig
from .simulator import Simulator, UninitializedEnvError, is_grasped, sample_rest_state
from .tasks import TASK_IDS, TaskInstance, UnknownTaskError, make_task_instance, task_success
