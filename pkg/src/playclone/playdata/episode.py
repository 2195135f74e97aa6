"""Episode schema and the .play on-disk format.

Episodes are newline-delimited text: a header block (key=value), one frame
record per line, and a trailing sha256 checksum over the frame lines. Floats
are written with shortest round-trip precision, so load(save(e)) == e.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..sim.scene import ACT_DIM, OBS_DIM

MAGIC = "#play"
FORMAT_VERSION = 1
SOURCES = ("human", "oracle", "cloned", "random")


class EpisodeFormatError(ValueError):
    """Base class for .play file errors."""


class VersionMismatchError(EpisodeFormatError):
    pass


class TruncatedFileError(EpisodeFormatError):
    pass


class ChecksumError(EpisodeFormatError):
    pass


@dataclass
class Episode:
    obs: np.ndarray  # (n, 19)
    act: np.ndarray  # (n, 8)
    source: str = "oracle"
    seed: int = 0
    created: int = 0
    hz: int = 30
    truncated: bool = False

    def __post_init__(self):
        self.obs = np.asarray(self.obs, dtype=float)
        self.act = np.asarray(self.act, dtype=float)
        if self.obs.ndim != 2 or self.obs.shape[1] != OBS_DIM:
            raise ValueError(f"obs must be (n, {OBS_DIM}), got {self.obs.shape}")
        if self.act.shape != (self.obs.shape[0], ACT_DIM):
            raise ValueError(f"act must be (n, {ACT_DIM}), got {self.act.shape}")
        if self.source not in SOURCES:
            raise ValueError(f"source must be one of {SOURCES}, got {self.source!r}")

    def __len__(self) -> int:
        return self.obs.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Episode)
            and self.source == other.source
            and self.seed == other.seed
            and self.created == other.created
            and self.hz == other.hz
            and self.truncated == other.truncated
            and np.array_equal(self.obs, other.obs)
            and np.array_equal(self.act, other.act)
        )


def _fmt(x: float) -> str:
    return repr(float(x))


def save_episode(episode: Episode, path: str | Path) -> None:
    path = Path(path)
    n = len(episode)
    header = [
        f"{MAGIC} v{FORMAT_VERSION}",
        f"hz={episode.hz}",
        f"obs_dim={OBS_DIM}",
        f"act_dim={ACT_DIM}",
        f"source={episode.source}",
        f"seed={episode.seed}",
        f"created={episode.created}",
        f"truncated={int(episode.truncated)}",
        f"frames={n}",
    ]
    frame_lines = []
    for t in range(n):
        vals = [str(t)] + [_fmt(v) for v in episode.obs[t]] + [_fmt(v) for v in episode.act[t]]
        frame_lines.append(" ".join(vals))
    digest = hashlib.sha256("\n".join(frame_lines).encode()).hexdigest()
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write("\n".join(header) + "\n")
        for line in frame_lines:
            f.write(line + "\n")
        f.write(f"checksum={digest}\n")


def load_episode(path: str | Path) -> Episode:
    path = Path(path)
    with open(path) as f:
        lines = f.read().splitlines()
    if not lines or not lines[0].startswith(MAGIC):
        raise VersionMismatchError(f"{path}: not a .play file")
    version = lines[0].split("v")[-1]
    if version != str(FORMAT_VERSION):
        raise VersionMismatchError(f"{path}: format version {version}, expected {FORMAT_VERSION}")

    header: dict[str, str] = {}
    i = 1
    while i < len(lines) and "=" in lines[i] and not lines[i][0].isdigit():
        key, _, val = lines[i].partition("=")
        header[key] = val
        i += 1
        if key == "frames":
            break
    try:
        n = int(header["frames"])
        hz = int(header["hz"])
        obs_dim = int(header["obs_dim"])
        act_dim = int(header["act_dim"])
    except KeyError as e:
        raise TruncatedFileError(f"{path}: missing header field {e}") from e
    if obs_dim != OBS_DIM or act_dim != ACT_DIM:
        raise EpisodeFormatError(f"{path}: unexpected dims {obs_dim}/{act_dim}")

    frame_lines = lines[i : i + n]
    if len(frame_lines) != n:
        raise TruncatedFileError(f"{path}: expected {n} frames, found {len(frame_lines)}")
    tail = lines[i + n :]
    if not tail or not tail[0].startswith("checksum="):
        raise TruncatedFileError(f"{path}: missing checksum line")
    digest = hashlib.sha256("\n".join(frame_lines).encode()).hexdigest()
    if tail[0].split("=", 1)[1] != digest:
        raise ChecksumError(f"{path}: checksum mismatch")

    obs = np.empty((n, OBS_DIM))
    act = np.empty((n, ACT_DIM))
    for t, line in enumerate(frame_lines):
        parts = line.split(" ")
        if len(parts) != 1 + OBS_DIM + ACT_DIM:
            raise TruncatedFileError(f"{path}: malformed frame line {t}")
        if int(parts[0]) != t:
            raise EpisodeFormatError(f"{path}: non-consecutive tick at line {t}")
        obs[t] = [float(x) for x in parts[1 : 1 + OBS_DIM]]
        act[t] = [float(x) for x in parts[1 + OBS_DIM :]]

    return Episode(
        obs=obs,
        act=act,
        source=header.get("source", "oracle"),
        seed=int(header.get("seed", "0")),
        created=int(header.get("created", "0")),
        hz=hz,
        truncated=bool(int(header.get("truncated", "0"))),
    )
