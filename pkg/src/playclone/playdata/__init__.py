from .episode import (
    ChecksumError,
    Episode,
    EpisodeFormatError,
    TruncatedFileError,
    VersionMismatchError,
    load_episode,
    save_episode,
)
from .dataset import (
    Dataset,
    DatasetWriter,
    ManifestEntry,
    ManifestError,
    load_dataset,
    merge_datasets,
    validate_dataset,
)
from .stats import (
    NUM_BINS,
    EmptyDatasetError,
    NormStats,
    compute_norm_stats,
    dequantize_action,
    load_norm_stats,
    normalize_obs,
    quantize_action,
    save_norm_stats,
)
from .windows import (
    MAX_WINDOW,
    MIN_WINDOW,
    NoEligibleEpisodeError,
    Window,
    WindowSampler,
    sample_window,
)
