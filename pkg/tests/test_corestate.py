import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gcore.corestate import (
    ZeroStateError,
    apply_affine_ladder,
    degree,
    fock,
    new_core,
    normalized,
    overlap,
    stellar_eval,
    support_size,
    vacuum,
)

occs = st.lists(st.integers(0, 3), min_size=2, max_size=2).map(tuple)
amps = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
cores = st.lists(st.tuples(occs, amps), min_size=1, max_size=6).filter(
    lambda t: sum(abs(a) for _, a in t) > 1e-3 and any(abs(a) > 1e-6 for _, a in t)
)


def test_four_mode_example_metadata():
    # degree 6, support 2, stellar coefficient 1/(2 sqrt 6) on z1 z2^2 z3^3
    C = new_core([((1, 2, 3, 0), 1), ((0, 0, 0, 1), 1)])
    assert degree(C) == 6
    assert support_size(C) == 2
    z = np.array([0.3, -0.7j, 1.1, 0.4 + 0.2j])
    expected = z[0] * z[1] ** 2 * z[2] ** 3 / (2 * math.sqrt(6)) + z[3] / math.sqrt(2)
    assert stellar_eval(C, z) == pytest.approx(expected, rel=1e-14)


@given(cores)
def test_new_core_is_canonical(terms):
    try:
        C = new_core(terms)
    except ValueError:
        return  # every amplitude cancelled
    keys = [p for p, _ in C.terms]
    assert keys == sorted(set(keys))
    assert all(c != 0 for _, c in C.terms)
    assert C.norm == pytest.approx(1.0, abs=1e-12)
    assert C.normalized


def test_new_core_sums_duplicates_and_validates():
    C = new_core([((1,), 1), ((1,), 1), ((0,), 0)], normalize=False)
    assert C.as_dict() == {(1,): 2}
    assert not C.normalized
    for bad in ([((1,), 1), ((1, 0), 1)], [((-1,), 1)], [((0,), float("nan"))], [((0,), 0)], []):
        with pytest.raises(ValueError):
            new_core(bad)


def _dense(C, cutoff):
    v = np.zeros((cutoff + 1,) * C.modes, dtype=complex)
    for p, c in C.terms:
        v[p] = c
    return v


@given(cores, st.complex_numbers(max_magnitude=2), st.lists(st.complex_numbers(max_magnitude=2), min_size=2, max_size=2),
       st.lists(st.complex_numbers(max_magnitude=2), min_size=2, max_size=2))
def test_affine_ladder_matches_dense_operators(terms, d, s, t):
    try:
        C = new_core(terms)
    except ValueError:
        return
    cutoff = 6
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)
    eye = np.eye(cutoff + 1)
    ops = [np.kron(a, eye), np.kron(eye, a)]
    M = d * np.eye((cutoff + 1) ** 2)
    for l in range(2):
        M = M + s[l] * ops[l].T + t[l] * ops[l]
    expected = (M @ _dense(C, cutoff).ravel()).reshape(cutoff + 1, cutoff + 1)
    try:
        out = apply_affine_ladder(C, d, s, t)
    except ZeroStateError:
        assert np.allclose(expected, 0)
        return
    np.testing.assert_allclose(_dense(out, cutoff), expected, atol=1e-12)


def test_subtraction_from_vacuum_is_zero_state():
    with pytest.raises(ZeroStateError):
        apply_affine_ladder(vacuum(2), 0, [0, 0], [1, 0])


def test_overlap_and_normalization():
    C1 = new_core([((1, 0), 1), ((0, 1), 1j)])
    assert overlap(C1, C1) == pytest.approx(1)
    assert overlap(C1, fock((1, 0))) == pytest.approx(1 / math.sqrt(2))
    raw = new_core([((2,), 3)], normalize=False)
    assert normalized(raw).amplitude((2,)) == pytest.approx(1)


def test_stellar_eval_orthogonality():
    # the stellar polynomial of |n> is z^n / sqrt(n!)
    for n in range(5):
        assert stellar_eval(fock((n,)), [1.3]) == pytest.approx(1.3**n / math.sqrt(math.factorial(n)))


def test_degree_of_products():
    for p in itertools.product(range(3), repeat=3):
        assert degree(fock(p)) == sum(p)
