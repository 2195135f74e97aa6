"""Goal-conditioned rollouts for evaluation."""

from __future__ import annotations

import numpy as np

from ..sim.scene import EnvState, SceneConfig
from ..sim.simulator import Simulator
from .policy import GOAL_INPUT_WIDTH, PolicyBundle, PolicyStepper


def rollout_goal(
    bundle: PolicyBundle,
    initial: EnvState,
    goal: EnvState,
    budget: int,
    scene: SceneConfig | None = None,
    temperature: float = 0.3,
    greedy: bool = False,
    rng: np.random.Generator | None = None,
) -> list[EnvState]:
    """Trajectory of budget+1 states, goal fed at every timestep."""
    if not bundle.goal_conditioned:
        raise ValueError(
            f"policy input width {bundle.spec.input_width} is not "
            f"goal-conditioned ({GOAL_INPUT_WIDTH})"
        )
    env = Simulator(scene or SceneConfig())
    state = env.reset(initial)
    stepper = PolicyStepper(bundle, temperature=temperature, greedy=greedy)
    stepper.reset(goal)
    rng = rng or np.random.default_rng(0)
    trajectory = [state]
    for _ in range(budget):
        state = env.step(stepper.act(state, rng))
        trajectory.append(state)
    return trajectory


class LearnedGoalPolicy:
    """Benchmark policy-interface adapter around a goal-conditioned bundle."""

    def __init__(self, bundle: PolicyBundle, temperature: float = 0.3, greedy: bool = False):
        self.bundle = bundle
        self.stepper = PolicyStepper(bundle, temperature=temperature, greedy=greedy)
        self.rng = np.random.default_rng(0)

    def begin_episode(self, task_id, initial, goal, rng=None):
        if rng is not None:
            self.rng = rng
        self.stepper.reset(goal)

    def act(self, state: EnvState) -> np.ndarray:
        return self.stepper.act(state, self.rng)
