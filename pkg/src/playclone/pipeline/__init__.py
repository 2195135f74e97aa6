from .clone import CloneConfig, generate_cloned_play
from .policy import GOAL_INPUT_WIDTH, PolicyBundle, PolicyStepper, greedy_bins
from .rollout import LearnedGoalPolicy, rollout_goal
from .train import (
    TrainConfig,
    TrainingDivergedError,
    TrainLogRow,
    train_lfp,
    train_play_bc,
    write_train_log,
)
