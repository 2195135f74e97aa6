from .collect import collect_play
from .experts import ExpertPolicy, expert_phases
from .oracle import PRIMITIVE_NAMES, OracleConfig, PlayOracle, build_primitive
from .random_policy import RandomPolicy, RandomPolicyStats, random_act
