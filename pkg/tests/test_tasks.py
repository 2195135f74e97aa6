import numpy as np
import pytest

from playclone.sim.scene import SceneConfig
from playclone.sim.tasks import (
    TASK_IDS,
    UnknownTaskError,
    make_task_instance,
    task_success,
)

EXPECTED_IDS = {
    "grasp_lift", "grasp_upright", "grasp_flat", "drawer", "close_drawer",
    "open_sliding", "close_sliding", "knock_object", "sweep_object",
    "push_red_button", "push_green_button", "push_blue_button",
    "put_into_shelf", "pull_out_of_shelf", "rotate_left", "rotate_right",
    "sweep_left", "sweep_right",
}


def test_exactly_18_distinct_tasks():
    assert len(TASK_IDS) == 18
    assert set(TASK_IDS) == EXPECTED_IDS


def test_unknown_task_error_lists_names():
    with pytest.raises(UnknownTaskError) as e:
        make_task_instance("juggle", 0)
    assert "grasp_lift" in str(e.value)
    with pytest.raises(UnknownTaskError):
        task_success("juggle", [])


def test_instance_deterministic(scene):
    for task in ("drawer", "grasp_lift", "rotate_left"):
        a = make_task_instance(task, 42, scene)
        b = make_task_instance(task, 42, scene)
        assert np.array_equal(a.initial.to_vector(), b.initial.to_vector())
        assert np.array_equal(a.goal.to_vector(), b.goal.to_vector())
        assert a.budget == b.budget


def test_drawer_instance_example(scene):
    for seed in range(10):
        inst = make_task_instance("drawer", seed, scene)
        assert inst.initial.drawer <= 0.1 * scene.drawer_max
        assert inst.goal.drawer >= 0.9 * scene.drawer_max


def test_push_button_instance_example(scene):
    for seed in range(10):
        inst = make_task_instance("push_red_button", seed, scene)
        assert inst.goal.buttons[0] >= scene.press_threshold
        assert not np.array_equal(
            inst.goal.arm_pose, inst.initial.arm_pose
        ), "goal should move the robot to the button"


@pytest.mark.parametrize("task", TASK_IDS)
def test_goal_satisfies_own_predicate(task, scene):
    for seed in range(5):
        inst = make_task_instance(task, seed, scene)
        assert task_success(task, [inst.goal], scene)


@pytest.mark.parametrize("task", TASK_IDS)
def test_initial_does_not_satisfy_predicate(task, scene):
    for seed in range(5):
        inst = make_task_instance(task, seed, scene)
        assert not task_success(task, [inst.initial], scene)


def test_empty_trajectory_is_precondition_violation(scene):
    with pytest.raises(ValueError):
        task_success("drawer", [], scene)


def test_states_valid(scene):
    for task in TASK_IDS:
        inst = make_task_instance(task, 0, scene)
        inst.initial.validate(scene)
        inst.goal.validate(scene)
        assert inst.budget == scene.task_budget_ticks
