"""Command-line orchestration of the play-imitation pipeline.

Each subcommand wraps one pipeline stage and reads/writes only the
documented artifact formats (datasets of .play episodes, binary policy
checkpoints, CSV reports).  Exit codes: 0 success, 2 usage error,
3 missing artifact, 4 schema violation, 5 runtime failure.  Errors print
one machine-parsable line to stderr: ``error <code> <message>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_SCHEMA = 4
EXIT_RUNTIME = 5


def _fail(code: int, message: str) -> int:
    print(f"error {code} {message}", file=sys.stderr)
    return code


def data_root() -> Path:
    return Path(os.environ.get("PLAYCLONE_ROOT", "."))


def _resolve(path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else data_root() / p


def load_config(path: str | Path) -> dict[str, str]:
    """Flat key=value config with section prefixes, e.g. ``train.lr = 0.01``.

    Blank lines and ``#`` comments are ignored; later keys win.
    """
    conf: dict[str, str] = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = line.split("=", 1)
            conf[key.strip()] = value.strip()
    return conf


def apply_config(obj, conf: dict[str, str], prefix: str):
    """Override dataclass fields from ``prefix.field`` config keys."""
    updates = {}
    for f in fields(obj):
        key = f"{prefix}.{f.name}"
        if key not in conf:
            continue
        raw = conf[key]
        current = getattr(obj, f.name)
        if isinstance(current, bool):
            updates[f.name] = raw.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            updates[f.name] = int(raw)
        elif isinstance(current, float) or current is None:
            updates[f.name] = float(raw)
        else:
            updates[f.name] = raw
    return replace(obj, **updates) if updates else obj


def _train_config(args, conf):
    from .pipeline.train import TrainConfig

    cfg = TrainConfig(
        layers=args.layers, width=args.width, mixtures=args.mixtures,
        batch_size=args.batch_size, steps=args.steps, lr=args.lr,
        lr_final=args.lr_final, seed=args.seed,
    )
    return apply_config(cfg, conf, "train")


def _add_train_flags(p):
    p.add_argument("--steps", type=int, default=3000)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--width", type=int, default=128)
    p.add_argument("--mixtures", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--lr-final", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", help="optional training-log CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="playclone",
        description="Collect play, train play policies, and evaluate 18 tasks.",
    )
    parser.add_argument("--config", help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collect", help="collect oracle or random play")
    p.add_argument("--policy", choices=("oracle", "random"), default="oracle")
    p.add_argument("--minutes", type=float, required=True)
    p.add_argument("--episode-minutes", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reference",
                   help="dataset whose action moments drive random collection")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train-bc", help="behavioral-clone play (obs-only policy)")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _add_train_flags(p)

    p = sub.add_parser("clone", help="generate autonomous play with a BC policy")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True, help="source dataset for reset states")
    p.add_argument("--episodes", type=int, default=600)
    p.add_argument("--minutes", type=float, default=1.0, help="per-episode duration")
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("merge", help="combine datasets by manifest reference")
    p.add_argument("--out", required=True)
    p.add_argument("inputs", nargs="+")

    p = sub.add_parser("train-lfp", help="train the goal-conditioned policy")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _add_train_flags(p)

    p = sub.add_parser("eval", help="18-task evaluation of a goal policy")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--temperature", type=float, default=0.3)
    p.add_argument("--out", required=True)

    p = sub.add_parser("coverage", help="unique quantized env-state bins")
    p.add_argument("--reference", required=True, help="dataset defining bin extents")
    p.add_argument("--segments", nargs="*", default=[], help="extra tag=dataset pairs")
    p.add_argument("--stride", type=int, default=1000)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="run an experiment sweep grid")
    p.add_argument("--kind", required=True,
                   choices=("data_quantity", "capacity", "clone_length", "random_baseline"))
    p.add_argument("--grid", nargs="+", required=True,
                   help="points: floats, or LxW pairs for capacity (e.g. 2x128)")
    p.add_argument("--seeds", nargs="+", type=int, default=[0, 1, 2])
    p.add_argument("--workdir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--human-minutes", type=float, default=30.0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--steps", type=int, default=3000)
    p.add_argument("--plot", help="optional SVG path for the mean-success chart")

    p = sub.add_parser("serve", help="run the teleop bridge server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8800)
    p.add_argument("--data-out", default="teleop_data")

    p = sub.add_parser("replay", help="print an episode as text frames")
    p.add_argument("--episode", required=True)
    p.add_argument("--summary", action="store_true")

    p = sub.add_parser("validate", help="check a dataset or episode file")
    p.add_argument("--path", required=True)
    return parser


def _cmd_collect(args, conf) -> int:
    from .agents.collect import collect_play

    random_stats = None
    if args.policy == "random":
        if not args.reference:
            raise ValueError("collect --policy random requires --reference")
        from .agents.random_policy import RandomPolicyStats
        from .playdata.dataset import load_dataset
        from .playdata.stats import compute_norm_stats

        stats = compute_norm_stats(load_dataset(_resolve(args.reference)))
        random_stats = RandomPolicyStats.from_norm_stats(stats)
    ds = collect_play(
        _resolve(args.out), args.policy, args.minutes,
        episode_minutes=args.episode_minutes, seed=args.seed,
        random_stats=random_stats,
    )
    print(f"collected {ds.total_frames} frames in {len(ds)} episodes -> {ds.root}")
    return EXIT_OK


def _cmd_train(args, conf, goal_conditioned: bool) -> int:
    from .pipeline.train import train_lfp, train_play_bc, write_train_log
    from .playdata.dataset import load_dataset

    ds = load_dataset(_resolve(args.data))
    cfg = _train_config(args, conf)
    train = train_lfp if goal_conditioned else train_play_bc
    bundle, log = train(ds, cfg)
    out = _resolve(args.out)
    bundle.save(out, sidecar={"config": repr(cfg), "final_loss": repr(log[-1].loss)})
    if args.log:
        write_train_log(log, _resolve(args.log))
    print(f"trained {cfg.steps} steps, final loss {log[-1].loss:.4f} -> {out}")
    return EXIT_OK


def _cmd_clone(args, conf) -> int:
    from .pipeline.clone import CloneConfig, generate_cloned_play
    from .pipeline.policy import PolicyBundle
    from .playdata.dataset import load_dataset

    bundle = PolicyBundle.load(_resolve(args.checkpoint))
    source = load_dataset(_resolve(args.data))
    cfg = apply_config(
        CloneConfig(episodes=args.episodes, minutes=args.minutes,
                    temperature=args.temperature, seed=args.seed),
        conf, "clone",
    )
    ds = generate_cloned_play(bundle, source, cfg, _resolve(args.out))
    print(f"cloned {ds.total_frames} frames in {len(ds)} episodes -> {ds.root}")
    return EXIT_OK


def _cmd_merge(args, conf) -> int:
    from .playdata.dataset import load_dataset, merge_datasets

    inputs = [load_dataset(_resolve(p)) for p in args.inputs]
    ds = merge_datasets(_resolve(args.out), inputs)
    print(f"merged {ds.total_frames} frames from {len(args.inputs)} datasets -> {ds.root}")
    return EXIT_OK


def _cmd_eval(args, conf) -> int:
    from .benchmark import run_eval, write_eval_csv
    from .pipeline.policy import PolicyBundle
    from .pipeline.rollout import LearnedGoalPolicy

    bundle = PolicyBundle.load(_resolve(args.checkpoint))
    policy = LearnedGoalPolicy(bundle, temperature=args.temperature)
    report = run_eval(policy, n_trials_per_task=args.trials, seed=args.seed,
                      policy_tag=str(args.checkpoint))
    write_eval_csv(report, _resolve(args.out))
    print(f"18-task average {report.average:.3f} ± {report.stderr:.3f} -> {args.out}")
    return EXIT_OK


def _cmd_coverage(args, conf) -> int:
    from .coverage import build_grid, coverage_curve, write_curve_csv
    from .playdata.dataset import load_dataset

    reference = load_dataset(_resolve(args.reference))
    grid = build_grid(reference)
    segments = [("reference", reference)]
    for pair in args.segments:
        if "=" not in pair:
            raise ValueError(f"segment must be tag=path, got {pair!r}")
        tag, path = pair.split("=", 1)
        segments.append((tag, load_dataset(_resolve(path))))
    curve = coverage_curve(segments, grid, stride=args.stride)
    write_curve_csv(curve, _resolve(args.out))
    print(f"{curve.final_unique()} unique bins over "
          f"{curve.points[-1].frames} frames -> {args.out}")
    return EXIT_OK


def _cmd_sweep(args, conf) -> int:
    from .benchmark import PipelineConfig, SweepSpec, plot_sweep, run_sweep
    from .pipeline.train import TrainConfig

    if args.kind == "capacity":
        grid = tuple(tuple(int(v) for v in p.split("x")) for p in args.grid)
    else:
        grid = tuple(float(p) for p in args.grid)
    spec = SweepSpec(kind=args.kind, grid=grid, seeds=tuple(args.seeds))
    base = PipelineConfig(
        human_minutes=args.human_minutes,
        trials_per_task=args.trials,
        bc_train=TrainConfig(steps=args.steps),
        lfp_train=TrainConfig(steps=args.steps),
    )
    rows = run_sweep(spec, base, _resolve(args.workdir), _resolve(args.out))
    failed = sum(1 for r in rows if r.status != "ok")
    if args.plot:
        plot_sweep(rows, _resolve(args.plot), title=args.kind)
    print(f"sweep {args.kind}: {len(rows) - failed}/{len(rows)} points ok -> {args.out}")
    return EXIT_RUNTIME if failed == len(rows) else EXIT_OK


def _cmd_serve(args, conf) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(data_root=_resolve(args.data_out))
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _cmd_replay(args, conf) -> int:
    from .playdata.episode import load_episode

    ep = load_episode(_resolve(args.episode))
    print(f"source={ep.source} frames={len(ep)} hz={ep.hz} "
          f"seed={ep.seed} truncated={ep.truncated}")
    if not args.summary:
        for t in range(len(ep)):
            obs = " ".join(repr(v) for v in ep.obs[t])
            act = " ".join(repr(v) for v in ep.act[t])
            print(f"{t} {obs} {act}")
    return EXIT_OK


def _cmd_validate(args, conf) -> int:
    from .playdata.dataset import validate_dataset
    from .playdata.episode import load_episode

    path = _resolve(args.path)
    if path.is_file():
        ep = load_episode(path)
        print(f"ok episode frames={len(ep)} source={ep.source}")
    else:
        totals = validate_dataset(path)
        counts = " ".join(f"{k}={v}" for k, v in sorted(totals.items()))
        print(f"ok dataset {counts}")
    return EXIT_OK


_COMMANDS = {
    "collect": _cmd_collect,
    "train-bc": lambda a, c: _cmd_train(a, c, goal_conditioned=False),
    "clone": _cmd_clone,
    "merge": _cmd_merge,
    "train-lfp": lambda a, c: _cmd_train(a, c, goal_conditioned=True),
    "eval": _cmd_eval,
    "coverage": _cmd_coverage,
    "sweep": _cmd_sweep,
    "serve": _cmd_serve,
    "replay": _cmd_replay,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    from .playdata.episode import EpisodeFormatError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    conf: dict[str, str] = {}
    try:
        if args.config:
            conf = load_config(args.config)
        return _COMMANDS[args.command](args, conf)
    except FileNotFoundError as exc:
        return _fail(EXIT_MISSING, f"missing artifact: {exc}")
    except EpisodeFormatError as exc:
        return _fail(EXIT_SCHEMA, f"schema violation: {type(exc).__name__}: {exc}")
    except (ValueError, KeyError) as exc:
        return _fail(EXIT_SCHEMA, f"invalid input: {exc}")
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        return _fail(EXIT_RUNTIME, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
