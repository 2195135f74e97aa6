"""18-task evaluation harness and experiment sweeps.

`run_eval` scores any policy implementing the begin_episode/act adapter
interface over seeded task instances.  `run_sweep` drives the full
collect → train-bc → clone → merge → train-lfp → eval pipeline over a
grid of points (clone data quantity, random-data quantity, Play-BC
capacity, or clone episode length), caching shared artifacts on disk.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import traceback
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .agents.collect import collect_play
from .agents.random_policy import RandomPolicyStats
from .coverage import build_grid, coverage_curve
from .pipeline.clone import CloneConfig, generate_cloned_play
from .pipeline.policy import PolicyBundle
from .pipeline.rollout import LearnedGoalPolicy
from .pipeline.train import TrainConfig, train_lfp, train_play_bc
from .playdata.dataset import Dataset, load_dataset, merge_datasets
from .playdata.stats import compute_norm_stats
from .sim.scene import SceneConfig
from .sim.simulator import Simulator
from .sim.tasks import TASK_IDS, make_task_instance, task_success

logger = logging.getLogger(__name__)

SWEEP_KINDS = ("data_quantity", "capacity", "clone_length", "random_baseline")


@dataclass(frozen=True)
class EvalReport:
    task_rates: dict[str, float]
    trials_per_task: int
    seed: int
    fingerprint: str

    def __post_init__(self):
        for task, rate in self.task_rates.items():
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"rate for {task} out of [0, 1]: {rate}")

    @property
    def average(self) -> float:
        return float(np.mean(list(self.task_rates.values())))

    @property
    def stderr(self) -> float:
        rates = np.array(list(self.task_rates.values()))
        if len(rates) < 2:
            return 0.0
        return float(rates.std(ddof=1) / math.sqrt(len(rates)))


def _fingerprint(*parts) -> str:
    return hashlib.sha256("|".join(repr(p) for p in parts).encode()).hexdigest()[:16]


def run_eval(
    policy,
    n_trials_per_task: int = 50,
    seed: int = 0,
    scene: SceneConfig | None = None,
    task_ids: tuple[str, ...] = TASK_IDS,
    policy_tag: str = "",
) -> EvalReport:
    """Per-task success rates over seeded instances; deterministic given seed.

    `policy` implements begin_episode(task_id, initial, goal, rng) and
    act(state) -> action; the harness never mutates it across trials beyond
    those calls.
    """
    if n_trials_per_task < 1:
        raise ValueError("n_trials_per_task must be >= 1")
    sc = scene or SceneConfig()
    sim = Simulator(sc)
    rates: dict[str, float] = {}
    for t_idx, task_id in enumerate(task_ids):
        wins = 0
        for trial in range(n_trials_per_task):
            trial_seed = int(
                np.random.SeedSequence(entropy=(seed, t_idx, trial)).generate_state(1)[0]
            )
            inst = make_task_instance(task_id, trial_seed, sc)
            rng = np.random.default_rng(np.random.SeedSequence(entropy=(seed, t_idx, trial, 1)))
            policy.begin_episode(task_id, inst.initial, inst.goal, rng)
            state = sim.reset(initial=inst.initial)
            trajectory = [state]
            for _ in range(inst.budget):
                state = sim.step(policy.act(state))
                trajectory.append(state)
            if task_success(task_id, trajectory, sc):
                wins += 1
        rates[task_id] = wins / n_trials_per_task
    return EvalReport(
        task_rates=rates,
        trials_per_task=n_trials_per_task,
        seed=seed,
        fingerprint=_fingerprint(policy_tag, task_ids, n_trials_per_task, seed),
    )


def write_eval_csv(report: EvalReport, path: str | Path) -> None:
    """Deterministic CSV: no wallclock, fixed row order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["task", "success_rate", "trials", "seed", "fingerprint"])
        for task in sorted(report.task_rates):
            writer.writerow(
                [task, repr(report.task_rates[task]), report.trials_per_task,
                 report.seed, report.fingerprint]
            )
        writer.writerow(
            ["__average__", repr(report.average), report.trials_per_task,
             report.seed, report.fingerprint]
        )


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    grid: tuple
    seeds: tuple[int, ...] = (0, 1, 2)

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}; choose from {SWEEP_KINDS}")
        if not self.grid:
            raise ValueError("sweep grid must be non-empty")
        if not self.seeds:
            raise ValueError("at least one seed is required")


@dataclass
class PipelineConfig:
    """Desk-scale defaults for one full pipeline run."""

    human_minutes: float = 30.0
    clone_minutes: float = 120.0
    clone_episode_minutes: float = 1.0
    bc_train: TrainConfig = field(default_factory=lambda: TrainConfig(seed=0))
    lfp_train: TrainConfig = field(default_factory=lambda: TrainConfig(seed=0))
    clone_temperature: float = 1.0
    trials_per_task: int = 50
    scene: SceneConfig = field(default_factory=SceneConfig)


@dataclass
class SweepRow:
    kind: str
    point: str
    seed: int
    status: str  # ok | failed
    average: float | None = None
    stderr: float | None = None
    unique_bins: int | None = None
    task_rates: dict[str, float] = field(default_factory=dict)
    error: str = ""


def write_sweep_csv(rows: list[SweepRow], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["kind", "point", "seed", "status", "average", "stderr", "unique_bins"]
            + list(TASK_IDS) + ["error"]
        )
        for r in rows:
            writer.writerow(
                [r.kind, r.point, r.seed, r.status,
                 "" if r.average is None else repr(r.average),
                 "" if r.stderr is None else repr(r.stderr),
                 "" if r.unique_bins is None else r.unique_bins]
                + [("" if t not in r.task_rates else repr(r.task_rates[t])) for t in TASK_IDS]
                + [r.error]
            )


def read_sweep_csv(path: str | Path) -> list[SweepRow]:
    rows: list[SweepRow] = []
    with open(path, newline="") as f:
        for rec in csv.DictReader(f):
            rows.append(
                SweepRow(
                    kind=rec["kind"],
                    point=rec["point"],
                    seed=int(rec["seed"]),
                    status=rec["status"],
                    average=float(rec["average"]) if rec["average"] else None,
                    stderr=float(rec["stderr"]) if rec["stderr"] else None,
                    unique_bins=int(rec["unique_bins"]) if rec["unique_bins"] else None,
                    task_rates={
                        t: float(rec[t]) for t in TASK_IDS if rec.get(t)
                    },
                    error=rec.get("error", ""),
                )
            )
    return rows


class _ArtifactCache:
    """Disk-backed cache of pipeline artifacts keyed by content-relevant args."""

    def __init__(self, root: Path):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)

    def dataset(self, key: str, build) -> Dataset:
        path = self.root / key
        if (path / "manifest.txt").exists():
            return load_dataset(path)
        return build(path)

    def policy(self, key: str, build) -> PolicyBundle:
        path = self.root / f"{key}.ckpt"
        if path.exists():
            return PolicyBundle.load(path)
        bundle = build()
        bundle.save(path)
        return bundle


def _run_point(
    cache: _ArtifactCache,
    kind: str,
    point,
    seed: int,
    base: PipelineConfig,
) -> tuple[EvalReport, int]:
    """One grid point × seed: returns (eval report, unique coverage bins)."""
    sc = base.scene
    human = cache.dataset(
        f"human_s{seed}",
        lambda p: collect_play(p, "oracle", base.human_minutes, seed=seed, scene=sc),
    )

    bc_cfg = replace(base.bc_train, seed=seed)
    clone_minutes = base.clone_minutes
    episode_minutes = base.clone_episode_minutes
    aug_kind = "clone"

    if kind == "capacity":
        layers, width = point
        bc_cfg = replace(bc_cfg, layers=layers, width=width)
    elif kind == "data_quantity":
        clone_minutes = float(point)
    elif kind == "clone_length":
        episode_minutes = float(point)
    elif kind == "random_baseline":
        clone_minutes = float(point)
        aug_kind = "random"

    segments: list[tuple[str, Dataset]] = [("human", human)]
    if clone_minutes > 0:
        if aug_kind == "random":
            stats = compute_norm_stats(human)
            aug = cache.dataset(
                f"random_s{seed}_m{clone_minutes:g}",
                lambda p: collect_play(
                    p, "random", clone_minutes, seed=seed + 1000, scene=sc,
                    random_stats=RandomPolicyStats.from_norm_stats(stats),
                ),
            )
        else:
            bc = cache.policy(
                f"bc_s{seed}_l{bc_cfg.layers}_w{bc_cfg.width}",
                lambda: train_play_bc(human, bc_cfg)[0],
            )
            episodes = max(1, round(clone_minutes / episode_minutes))
            clone_cfg = CloneConfig(
                episodes=episodes,
                minutes=episode_minutes,
                temperature=base.clone_temperature,
                seed=seed,
            )
            aug = cache.dataset(
                f"clone_s{seed}_l{bc_cfg.layers}_w{bc_cfg.width}"
                f"_m{clone_minutes:g}_e{episode_minutes:g}",
                lambda p: generate_cloned_play(bc, human, clone_cfg, p, sc),
            )
        segments.append((aug_kind, aug))
        merged = cache.dataset(
            f"merged_{kind}_{_fingerprint(point)}_s{seed}",
            lambda p: merge_datasets(p, [human, aug]),
        )
    else:
        merged = human

    lfp_cfg = replace(base.lfp_train, seed=seed)
    lfp = cache.policy(
        f"lfp_{kind}_{_fingerprint(point, lfp_cfg)}_s{seed}",
        lambda: train_lfp(merged, lfp_cfg)[0],
    )

    report = run_eval(
        LearnedGoalPolicy(lfp),
        n_trials_per_task=base.trials_per_task,
        seed=seed,
        scene=sc,
        policy_tag=f"{kind}:{point}",
    )
    grid = build_grid(human)
    curve = coverage_curve(segments, grid, stride=10_000)
    return report, curve.final_unique()


def run_sweep(
    spec: SweepSpec,
    base: PipelineConfig,
    workdir: str | Path,
    out_csv: str | Path | None = None,
) -> list[SweepRow]:
    """Full pipeline per grid point per seed; failures become failed rows."""
    cache = _ArtifactCache(Path(workdir))
    rows: list[SweepRow] = []
    for point in spec.grid:
        for seed in spec.seeds:
            try:
                report, unique = _run_point(cache, spec.kind, point, seed, base)
                rows.append(
                    SweepRow(
                        kind=spec.kind, point=str(point), seed=seed, status="ok",
                        average=report.average, stderr=report.stderr,
                        unique_bins=unique, task_rates=dict(report.task_rates),
                    )
                )
            except Exception as exc:  # sweep continues past broken points
                logger.error("sweep point %r seed %d failed: %s", point, seed, exc)
                logger.debug("%s", traceback.format_exc())
                rows.append(
                    SweepRow(kind=spec.kind, point=str(point), seed=seed,
                             status="failed", error=f"{type(exc).__name__}: {exc}")
                )
            if out_csv is not None:
                write_sweep_csv(rows, out_csv)
    return rows


def plot_sweep(rows: list[SweepRow], out_svg: str | Path, title: str = "") -> None:
    """Line chart of 18-task average (mean ± stderr across seeds) per point."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ok = [r for r in rows if r.status == "ok" and r.average is not None]
    if not ok:
        raise ValueError("no successful rows to plot")
    points = sorted({r.point for r in ok}, key=lambda p: ok.index(next(r for r in ok if r.point == p)))
    xs = list(range(len(points)))
    means, errs = [], []
    for p in points:
        vals = np.array([r.average for r in ok if r.point == p])
        means.append(vals.mean())
        errs.append(vals.std(ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(xs, means, yerr=errs, marker="o", capsize=3)
    ax.set_xticks(xs)
    ax.set_xticklabels(points, rotation=20)
    ax.set_ylabel("18-task average success")
    ax.set_xlabel("sweep point")
    ax.set_ylim(0, 1)
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    out = Path(out_svg)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg", bbox_inches="tight")
    plt.close(fig)
