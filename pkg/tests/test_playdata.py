import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from playclone.playdata import (
    MAX_WINDOW,
    MIN_WINDOW,
    NUM_BINS,
    ChecksumError,
    Dataset,
    DatasetWriter,
    EmptyDatasetError,
    Episode,
    NoEligibleEpisodeError,
    TruncatedFileError,
    VersionMismatchError,
    WindowSampler,
    compute_norm_stats,
    dequantize_action,
    load_dataset,
    load_episode,
    merge_datasets,
    quantize_action,
    save_episode,
    validate_dataset,
)
from playclone.playdata.dataset import ManifestError
from playclone.playdata.stats import load_norm_stats, save_norm_stats


def make_episode(rng, n=100, source="oracle"):
    return Episode(
        obs=rng.normal(size=(n, 19)), act=rng.normal(scale=0.05, size=(n, 8)),
        source=source, seed=3, hz=30,
    )


def test_episode_roundtrip_exact(tmp_path):
    ep = make_episode(np.random.default_rng(0))
    path = tmp_path / "e.play"
    save_episode(ep, path)
    back = load_episode(path)
    assert np.array_equal(back.obs, ep.obs)
    assert np.array_equal(back.act, ep.act)
    assert back == ep


def test_episode_version_mismatch(tmp_path):
    ep = make_episode(np.random.default_rng(1), n=10)
    path = tmp_path / "e.play"
    save_episode(ep, path)
    text = path.read_text().replace("#play v1", "#play v99")
    path.write_text(text)
    with pytest.raises(VersionMismatchError):
        load_episode(path)


def test_episode_truncated(tmp_path):
    ep = make_episode(np.random.default_rng(2), n=10)
    path = tmp_path / "e.play"
    save_episode(ep, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-3]) + "\n")
    with pytest.raises(TruncatedFileError):
        load_episode(path)


def test_episode_checksum(tmp_path):
    ep = make_episode(np.random.default_rng(3), n=10)
    path = tmp_path / "e.play"
    save_episode(ep, path)
    lines = path.read_text().splitlines()
    frame = lines[-2].split(" ")
    frame[1] = "0.5"
    lines[-2] = " ".join(frame)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ChecksumError):
        load_episode(path)


def test_episode_rejects_bad_shapes():
    with pytest.raises(ValueError):
        Episode(obs=np.zeros((5, 18)), act=np.zeros((5, 8)))
    with pytest.raises(ValueError):
        Episode(obs=np.zeros((5, 19)), act=np.zeros((4, 8)))
    with pytest.raises(ValueError):
        Episode(obs=np.zeros((5, 19)), act=np.zeros((5, 8)), source="martian")


def test_dataset_writer_and_loader(tmp_path):
    rng = np.random.default_rng(4)
    w = DatasetWriter(tmp_path / "d")
    eps = [make_episode(rng, n=50 + i) for i in range(3)]
    for ep in eps:
        w.add_episode(ep)
    ds = w.finalize()
    back = load_dataset(tmp_path / "d")
    assert len(back) == 3
    assert back.total_frames == sum(len(e) for e in eps)
    assert np.array_equal(back.load(1).obs, eps[1].obs)
    assert validate_dataset(tmp_path / "d") == {"oracle": back.total_frames}


def test_merge_preserves_order_and_counts(tmp_path):
    rng = np.random.default_rng(5)
    w1 = DatasetWriter(tmp_path / "a")
    w1.add_episode(make_episode(rng, 40, "oracle"))
    d1 = w1.finalize()
    w2 = DatasetWriter(tmp_path / "b")
    w2.add_episode(make_episode(rng, 60, "cloned"))
    d2 = w2.finalize()
    merged = merge_datasets(tmp_path / "m", [d1, d2])
    assert merged.frames_by_source() == {"oracle": 40, "cloned": 60}
    assert [e.source for e in merged.entries] == ["oracle", "cloned"]
    with pytest.raises(ManifestError):
        merge_datasets(tmp_path / "m2", [d1, d1])


def test_missing_dataset_raises_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_dataset(tmp_path / "nope")


def test_norm_stats_values(tmp_path):
    obs = np.tile(np.arange(19.0), (4, 1)) * np.array([[1.0], [2.0], [3.0], [4.0]])
    act = np.tile(np.linspace(-0.1, 0.1, 8), (4, 1)) * np.array([[1.0], [2.0], [3.0], [4.0]])
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(Episode(obs=obs[:2], act=act[:2]))
    w.add_episode(Episode(obs=obs[2:], act=act[2:]))
    stats = compute_norm_stats(w.finalize())
    np.testing.assert_allclose(stats.obs_mean, obs.mean(axis=0))
    np.testing.assert_allclose(stats.obs_std, obs.std(axis=0))
    np.testing.assert_allclose(stats.act_min, act.min(axis=0))
    np.testing.assert_allclose(stats.act_max, act.max(axis=0))


def test_norm_stats_empty_dataset(tmp_path):
    ds = DatasetWriter(tmp_path / "d").finalize()
    with pytest.raises(EmptyDatasetError):
        compute_norm_stats(ds)


def test_norm_stats_file_roundtrip(tmp_path):
    rng = np.random.default_rng(6)
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(make_episode(rng))
    stats = compute_norm_stats(w.finalize())
    save_norm_stats(stats, tmp_path / "s.stats")
    back = load_norm_stats(tmp_path / "s.stats")
    np.testing.assert_array_equal(back.obs_mean, stats.obs_mean)
    np.testing.assert_array_equal(back.act_max, stats.act_max)


def test_quantization_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(make_episode(rng, n=400))
    stats = compute_norm_stats(w.finalize())
    a = rng.normal(scale=0.08, size=(10_000, 8))
    bins = quantize_action(a, stats)
    assert bins.min() >= 0 and bins.max() < NUM_BINS
    back = dequantize_action(bins, stats)
    clamped = np.clip(a, stats.act_min, stats.act_max)
    bin_width = (stats.act_max - stats.act_min) / NUM_BINS
    assert np.all(np.abs(back - clamped) <= bin_width + 1e-12)


def test_quantization_degenerate_dim_maps_to_midpoint(tmp_path):
    rng = np.random.default_rng(8)
    obs = rng.normal(size=(50, 19))
    act = rng.normal(size=(50, 8))
    act[:, 3] = 0.25  # constant dimension
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(Episode(obs=obs, act=act))
    stats = compute_norm_stats(w.finalize())
    with pytest.warns(UserWarning):
        bins = quantize_action(act[:5], stats)
    assert np.all(bins[:, 3] == 128)


def test_window_bounds_and_goal(tmp_path):
    rng = np.random.default_rng(9)
    w = DatasetWriter(tmp_path / "d")
    for n in (40, 64, 200):
        w.add_episode(make_episode(rng, n))
    sampler = WindowSampler(w.finalize())
    for _ in range(500):
        win = sampler.sample(rng)
        assert MIN_WINDOW <= len(win) <= MAX_WINDOW
        assert np.array_equal(win.goal, win.obs[-1])
        assert np.array_equal(win.act.shape, (len(win), 8))


def test_short_episodes_never_sampled(tmp_path):
    rng = np.random.default_rng(10)
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(make_episode(rng, 10))
    w.add_episode(make_episode(rng, 31))
    w.add_episode(make_episode(rng, 64))
    sampler = WindowSampler(w.finalize())
    assert len(sampler.episodes) == 1
    w2 = DatasetWriter(tmp_path / "short")
    w2.add_episode(make_episode(rng, 5))
    with pytest.raises(NoEligibleEpisodeError):
        WindowSampler(w2.finalize())


def test_episode_weights_proportional_to_starts(tmp_path):
    rng = np.random.default_rng(11)
    w = DatasetWriter(tmp_path / "d")
    w.add_episode(make_episode(rng, 32))   # 1 eligible start
    w.add_episode(make_episode(rng, 131))  # 100 eligible starts
    sampler = WindowSampler(w.finalize())
    counts = np.zeros(2)
    for _ in range(3000):
        counts[sampler.sample(rng).episode_index] += 1
    ratio = counts[1] / max(counts[0], 1)
    assert 50 <= ratio <= 200  # expected 100


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 300), seed=st.integers(0, 1000))
def test_episode_roundtrip_property(tmp_path_factory, n, seed):
    rng = np.random.default_rng(seed)
    ep = Episode(
        obs=rng.normal(scale=10.0, size=(n, 19)),
        act=rng.normal(scale=0.1, size=(n, 8)),
        source="random",
        truncated=bool(seed % 2),
    )
    path = tmp_path_factory.mktemp("ep") / "e.play"
    save_episode(ep, path)
    back = load_episode(path)
    assert back == ep
    assert back.truncated == ep.truncated
