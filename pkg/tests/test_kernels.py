import os
import pathlib
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddred import kernels
from oracles import fraction_det, fraction_rank

small_mats = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(small_mats)
@settings(max_examples=150, deadline=None)
def test_rank_matches_fraction_elimination(rows):
    arr = np.array(rows, dtype=np.int64)
    assert kernels.python_backend.bareiss_rank(arr)[0] == fraction_rank(rows)
    if kernels.compiled_backend is not None:
        assert kernels.compiled_backend.bareiss_rank(arr)[0] == fraction_rank(rows)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
@settings(max_examples=150, deadline=None)
def test_determinant_matches_fraction_elimination(rows):
    arr = np.array(rows, dtype=np.int64)
    for mod in filter(None, (kernels.python_backend, kernels.compiled_backend)):
        assert mod.determinant(arr) == fraction_det(rows)


def test_pivot_rows_are_independent(backend):
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 3, 4]]
    r, piv = backend.bareiss_rank(np.array(rows, dtype=np.int64))
    assert r == 2
    assert fraction_rank([rows[i] for i in piv]) == 2


def test_minor_values_small(backend):
    mat = np.array([[1, 0], [1, 0], [1, -2]], dtype=np.int64)
    assert set(backend.minor_values(mat, 2)) == {0, -2}
    assert set(backend.minor_values(mat, 0)) == {1}


def test_cycle_weights(backend):
    flat = np.array([0, 1, 2, 1, 3], dtype=np.int32)
    offsets = np.array([0, 3, 5], dtype=np.int64)
    w = np.array([1, 10, 100, 1000], dtype=np.int64)
    assert list(backend.cycle_weights(flat, offsets, w)) == [111, 1010]


def test_scan_labelings_first_violation_is_lexicographic(backend):
    # path 0-1-2-3, all blue, unit weights: E_L counts equal-label neighbours
    eu = np.array([0, 1, 2], dtype=np.int32)
    ev = np.array([1, 2, 3], dtype=np.int32)
    red = np.zeros(3, dtype=np.uint8)
    w = np.ones(3, dtype=np.int64)
    first, best, arg = backend.scan_labelings(4, eu, ev, red, w, 1, 0, 0, 16, True)
    assert first == 0b0101  # first even-weight mask with no equal neighbours
    first, best, arg = backend.scan_labelings(4, eu, ev, red, w, 1, 0, 0, 16, False)
    assert first == 0b0101 and best == 0 and arg == 0b0101


def test_backends_agree_on_labeling_scan():
    if kernels.compiled_backend is None:
        pytest.skip("no compiled backend")
    rng = np.random.default_rng(7)
    for _ in range(20):
        nv = 8
        pairs = [(u, v) for u in range(nv) for v in range(u + 1, nv) if rng.random() < 0.4]
        if not pairs:
            continue
        eu = np.array([p[0] for p in pairs], dtype=np.int32)
        ev = np.array([p[1] for p in pairs], dtype=np.int32)
        red = rng.integers(0, 2, len(pairs)).astype(np.uint8)
        w = rng.integers(0, 5, len(pairs)).astype(np.int64)
        thr = int(rng.integers(1, 8))
        args = (nv, eu, ev, red, w, thr, 0, 0, 1 << nv, False)
        assert kernels.python_backend.scan_labelings(*args) == kernels.compiled_backend.scan_labelings(*args)


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree_on_parity_counts(seed):
    if kernels.compiled_backend is None:
        pytest.skip("no compiled backend")
    rng = np.random.default_rng(seed)
    n = 6
    adj = np.array([int(rng.integers(0, 1 << n)) for _ in range(n)], dtype=np.uint64)
    red = adj & np.array([int(rng.integers(0, 1 << n)) for _ in range(n)], dtype=np.uint64)
    assert kernels.python_backend.pm_parity_counts(n, n, adj, red) == \
        kernels.compiled_backend.pm_parity_counts(n, n, adj, red)


def test_overflow_is_detected():
    if kernels.compiled_backend is None:
        pytest.skip("no compiled backend")
    big = np.array([[2 ** 40, 1], [1, 2 ** 40]], dtype=np.int64)
    with pytest.raises(OverflowError):
        kernels.compiled_backend.determinant(np.array([[2 ** 62, 2 ** 62], [2 ** 62, 3]], dtype=np.int64))
    assert kernels.python_backend.determinant(big) == 2 ** 80 - 1


def test_pure_python_fallback_is_selectable():
    env = dict(os.environ, ODDRED_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import oddred; print(oddred.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_benchmark_quick_run():
    if kernels.compiled_backend is None:
        pytest.skip("no compiled backend to compare against")
    script = pathlib.Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--quick", "--repeat", "1"],
                         capture_output=True, text=True, check=True)
    assert "MISMATCH" not in out.stdout and out.stdout.count("x\n") == 5
