"""Datasets: a manifest of episode files plus lazy frame access."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .episode import Episode, EpisodeFormatError, load_episode, save_episode

MANIFEST_NAME = "manifest.txt"


class ManifestError(EpisodeFormatError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    path: str  # relative to the manifest directory
    frames: int
    source: str


class Dataset:
    """Immutable view over a finalized dataset directory."""

    def __init__(self, root: str | Path, entries: list[ManifestEntry]):
        self.root = Path(root)
        self.entries = list(entries)
        self._cache: dict[int, Episode] = {}

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total_frames(self) -> int:
        return sum(e.frames for e in self.entries)

    def frames_by_source(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.entries:
            out[e.source] = out.get(e.source, 0) + e.frames
        return out

    def episode_path(self, index: int) -> Path:
        return self.root / self.entries[index].path

    def load(self, index: int, cache: bool = True) -> Episode:
        if index in self._cache:
            return self._cache[index]
        ep = load_episode(self.episode_path(index))
        if len(ep) != self.entries[index].frames:
            raise ManifestError(
                f"{self.entries[index].path}: manifest says {self.entries[index].frames} "
                f"frames, file has {len(ep)}"
            )
        if cache:
            self._cache[index] = ep
        return ep

    def iter_episodes(self, cache: bool = False):
        for i in range(len(self.entries)):
            yield self.load(i, cache=cache)

    def take_episodes(self, n: int, out_dir: str | Path) -> "Dataset":
        """Dataset referencing only the first n episodes (no copies)."""
        return write_manifest_only(out_dir, self, self.entries[:n])


def load_dataset(root: str | Path) -> Dataset:
    root = Path(root)
    manifest = root / MANIFEST_NAME
    if not manifest.exists():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {root}")
    entries = []
    for lineno, line in enumerate(manifest.read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ManifestError(f"{manifest}:{lineno}: expected 3 tab-separated fields")
        entries.append(ManifestEntry(parts[0], int(parts[1]), parts[2]))
    return Dataset(root, entries)


def _write_manifest(root: Path, entries: list[ManifestEntry]) -> None:
    lines = [f"{e.path}\t{e.frames}\t{e.source}" for e in entries]
    (root / MANIFEST_NAME).write_text("\n".join(lines) + ("\n" if lines else ""))


class DatasetWriter:
    """Single-writer builder; the dataset is immutable once finalized."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.entries: list[ManifestEntry] = []
        self._finalized = False

    def add_episode(self, episode: Episode, name: str | None = None) -> Path:
        assert not self._finalized, "writer already finalized"
        name = name or f"episode_{len(self.entries):05d}.play"
        path = self.root / name
        save_episode(episode, path)
        self.entries.append(ManifestEntry(name, len(episode), episode.source))
        return path

    def finalize(self) -> Dataset:
        _write_manifest(self.root, self.entries)
        self._finalized = True
        return Dataset(self.root, self.entries)


def write_manifest_only(
    out_dir: str | Path, source_ds: Dataset, entries: list[ManifestEntry]
) -> Dataset:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rel_entries = []
    for e in entries:
        rel = os.path.relpath(source_ds.root / e.path, out)
        rel_entries.append(ManifestEntry(rel, e.frames, e.source))
    _write_manifest(out, rel_entries)
    return Dataset(out, rel_entries)


def merge_datasets(out_dir: str | Path, datasets: list[Dataset]) -> Dataset:
    """Concatenate manifests (episode files are referenced, not copied).

    Relative episode order is preserved within and across inputs; per-source
    frame totals of the result equal the sum of the inputs'.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for ds in datasets:
        for e in ds.entries:
            rel = os.path.relpath(ds.root / e.path, out)
            if rel in seen:
                raise ManifestError(f"duplicate episode identity in merge: {rel}")
            seen.add(rel)
            entries.append(ManifestEntry(rel, e.frames, e.source))
    _write_manifest(out, entries)
    return Dataset(out, entries)


def validate_dataset(root: str | Path) -> dict[str, int]:
    """Fully load every episode, checking schema, counts and checksums.

    Returns per-source frame totals; raises EpisodeFormatError on violation.
    """
    ds = load_dataset(root)
    for i, entry in enumerate(ds.entries):
        ep = ds.load(i, cache=False)
        if ep.source != entry.source:
            raise ManifestError(f"{entry.path}: source tag mismatch")
    return ds.frames_by_source()
