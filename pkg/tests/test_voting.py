import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lanehough.edge import BinaryImage
from lanehough.errors import ParameterError
from lanehough.hough import (
    MulCounter,
    VoteStrategy,
    accumulate,
    build_trig_table,
    rho_max_for,
    rho_of,
    vote_bins,
    white_pixels,
)

from conftest import random_binary
from oracles import brute_force_hough

ALL_STRATEGIES = [
    VoteStrategy("symmetric"),
    *(VoteStrategy("angle-partitioned", w) for w in (1, 2, 3, 4, 8)),
    *(VoteStrategy("atomic", w) for w in (1, 2, 3, 4, 8)),
    VoteStrategy("atomic", 3, block=5),
]

binary_arrays = arrays(np.uint8, st.tuples(st.integers(1, 24), st.integers(1, 24)),
                       elements=st.sampled_from([0, 255]))


def test_rho_of_examples():
    t = build_trig_table(180)
    off = 100
    assert all(rho_of(0, 0, k, t, off) == off for k in range(180))
    assert rho_of(10, 4, 0, t, off) == off + 10
    assert rho_of(3, 7, 90, t, off) == off + 7


def test_rho_of_rounds_half_up():
    q = build_trig_table(180, "q15")
    # Q1.15 cos(60) is exactly 16384/32768, so r lands exactly on +-0.5
    assert q.cos[60] == 16384 and q.cos[120] == -16384
    assert rho_of(1, 0, 60, q, 0) == 1   # floor(0.5 + 0.5)
    assert rho_of(1, 0, 120, q, 0) == 0  # floor(-0.5 + 0.5)
    # cos(0) saturates to 32767/32768: x = 10 gives 9.9997 -> 10
    assert rho_of(10, 0, 0, q, 0) == 10


@pytest.mark.parametrize("mode", ["float", "q15"])
def test_rho_range_totality_on_extreme_pixels(mode):
    t = build_trig_table(180, mode)
    for w, h in [(1, 1), (2, 1), (3, 4), (512, 512), (1000, 7)]:
        off = rho_max_for(w, h)
        for x, y in itertools.product((0, w - 1), (0, h - 1)):
            for k in range(180):
                assert 0 <= rho_of(x, y, k, t, off) < 2 * off + 1


def test_all_zero_image():
    acc = accumulate(BinaryImage(np.zeros((9, 9), np.uint8)), build_trig_table())
    assert acc.total_votes == 0
    assert acc.n_rho == 2 * 13 + 1


def test_single_pixel_votes_once_per_angle():
    pixels = np.zeros((10, 10), np.uint8)
    pixels[3, 7] = 255
    acc = accumulate(BinaryImage(pixels), build_trig_table())
    assert acc.total_votes == 180
    assert (acc.counts.sum(axis=1) == 1).all()


def test_horizontal_row_peaks_at_90_degrees():
    pixels = np.zeros((12, 12), np.uint8)
    pixels[5, 2:5] = 255
    acc = accumulate(BinaryImage(pixels), build_trig_table())
    assert acc.counts[90, acc.rho_offset + 5] == 3


@pytest.mark.parametrize("mode", ["float", "q15"])
@pytest.mark.parametrize("shape,density", [((13, 17), 0.3), ((20, 9), 0.1), ((1, 1), 1.0)])
def test_reference_matches_brute_force(mode, shape, density):
    rng = np.random.default_rng(7)
    img = random_binary(rng, *shape, density)
    t = build_trig_table(180, mode)
    acc = accumulate(img, t)
    assert np.array_equal(acc.counts, brute_force_hough(img.pixels, t, acc.rho_offset, acc.n_rho))


@pytest.mark.parametrize("strategy", ALL_STRATEGIES, ids=lambda s: f"{s.name}-{s.workers}-{s.block}")
@pytest.mark.parametrize("mode", ["float", "q15"])
def test_strategies_match_brute_force(strategy, mode):
    rng = np.random.default_rng(99)
    img = random_binary(rng, 21, 18, 0.25)
    t = build_trig_table(180, mode)
    acc = accumulate(img, t, strategy)
    assert np.array_equal(acc.counts, brute_force_hough(img.pixels, t, acc.rho_offset, acc.n_rho))


@settings(max_examples=40, deadline=None)
@given(binary_arrays, st.sampled_from(["float", "q15"]), st.sampled_from([2, 6, 180, 360]),
       st.integers(1, 9), st.integers(1, 8))
def test_strategy_equivalence_property(pixels, mode, n_theta, workers, block):
    img = BinaryImage(pixels)
    t = build_trig_table(n_theta, mode)
    ref = accumulate(img, t)
    assert ref.total_votes == img.white_count * n_theta
    for kind in ("symmetric", "angle-partitioned", "atomic"):
        assert accumulate(img, t, VoteStrategy(kind, workers, block)) == ref


def test_atomic_is_deterministic_across_runs(rng):
    img = random_binary(rng, 48, 48, 0.3)
    t = build_trig_table()
    runs = [accumulate(img, t, VoteStrategy("atomic", w)) for w in (1, 2, 4, 8, 8, 16, 3)]
    assert all(r == runs[0] for r in runs)


@pytest.mark.parametrize("mode", ["float", "q15"])
def test_mirrored_bins_are_exact(mode, rng):
    img = random_binary(rng, 30, 40, 0.2)
    t = build_trig_table(180, mode)
    xs, ys = white_pixels(img)
    off = rho_max_for(40, 30)
    bins = vote_bins(xs, ys, t, off)
    cos, sin = t.cos, t.sin
    for k in range(1, 90):
        p1 = xs * cos[k]
        p2 = ys * sin[k]
        if mode == "q15":
            derived = (p2 - p1 + 16384) // 32768
        else:
            derived = np.floor(p2 - p1 + 0.5).astype(np.int64)
        assert np.array_equal(derived + off, bins[:, 180 - k])


def test_multiplication_budget():
    img = random_binary(np.random.default_rng(3), 16, 16, 0.4)
    n = img.white_count
    t = build_trig_table()
    ref_c, sym_c = MulCounter(), MulCounter()
    accumulate(img, t, counter=ref_c)
    accumulate(img, t, VoteStrategy("symmetric"), counter=sym_c)
    assert ref_c.trig_multiplies == 2 * 180 * n
    assert sym_c.trig_multiplies == 2 * 91 * n


@pytest.mark.parametrize("strategy", ALL_STRATEGIES[1:3], ids=lambda s: s.name)
def test_parallel_strategies_count_like_reference(strategy, rng):
    img = random_binary(rng, 16, 16, 0.4)
    c = MulCounter()
    accumulate(img, build_trig_table(), strategy, counter=c)
    assert c.trig_multiplies == 2 * 180 * img.white_count


def test_bad_inputs():
    with pytest.raises(ParameterError):
        VoteStrategy("warp")
    with pytest.raises(ParameterError):
        VoteStrategy("atomic", workers=0)
    with pytest.raises(ParameterError):
        VoteStrategy("atomic", block=0)
    from lanehough.imgio import GrayImage

    with pytest.raises(ParameterError):
        accumulate(GrayImage([[0, 7]]), build_trig_table())
    with pytest.raises(ParameterError):
        accumulate(BinaryImage([[0]]), "not a table")


def test_large_image_chunks_agree():
    # more white pixels than one vectorised batch
    rng = np.random.default_rng(5)
    img = random_binary(rng, 120, 120, 0.5)
    t = build_trig_table()
    ref = accumulate(img, t)
    assert img.white_count > 4096
    for s in ALL_STRATEGIES[:4]:
        assert accumulate(img, t, s) == ref
