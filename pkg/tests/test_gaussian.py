import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import complexes, gates
from gcore.gaussian import (
    Gate,
    GaussianUnitary,
    QForm,
    compose,
    dagger,
    from_gate,
    from_gates,
    heterodyne_pullback,
    identity,
    permutation,
    q_function,
    validate_symplectic,
)
from gcore.oracle import _apply, _ladder, truncated_gate


@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), st.lists(gates(m), max_size=6))))
def test_gate_products_are_bogoliubov(case):
    m, gs = case
    G = from_gates(gs, m)
    assert validate_symplectic(G.S, 1e-9)


@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.just(m), st.lists(gates(m), min_size=1, max_size=5))))
def test_dagger_inverts(case):
    m, gs = case
    G = from_gates(gs, m)
    assert compose(dagger(G), G).allclose(identity(m), 1e-9)
    assert compose(G, dagger(G)).allclose(identity(m), 1e-9)


@given(st.integers(2, 3).flatmap(lambda m: st.tuples(*(st.lists(gates(m), min_size=1, max_size=3) for _ in range(3)), st.just(m))))
def test_compose_is_associative(case):
    a, b, c, m = case
    A, B, C = (from_gates(x, m) for x in (a, b, c))
    assert compose(C, compose(B, A)).allclose(compose(compose(C, B), A), 1e-9)


def test_identity_rejects_zero_modes():
    with pytest.raises(ValueError):
        identity(0)


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("bs", (0, 0), (0.1, 0.0))
    with pytest.raises(ValueError):
        Gate("rot", (0,), (0.1j,))
    with pytest.raises(ValueError):
        Gate("tms", (0, 1), ())
    with pytest.raises(ValueError):
        Gate("nope", (0,), ())
    with pytest.raises(ValueError):
        from_gate(Gate.swap(0, 2), 2)


def test_validate_symplectic_rejects_bad_shapes():
    with pytest.raises(ValueError):
        validate_symplectic(np.eye(3))
    with pytest.raises(ValueError):
        validate_symplectic(np.ones((2, 4)))
    assert not validate_symplectic(2 * np.eye(2))


def test_displacement_heisenberg_action():
    G = from_gate(Gate.disp(0.3 - 0.4j, 0), 1)
    np.testing.assert_allclose(G.d, [0.3 - 0.4j])
    np.testing.assert_allclose(G.S, np.eye(2))


def test_permutation_moves_modes():
    # output mode i carries input mode perm[i]
    G = compose(permutation([2, 0, 1]), from_gate(Gate.disp(1.0, 2), 3))
    np.testing.assert_allclose(G.d, [1.0, 0, 0])


def _mean_after(g: Gate, m: int, state: np.ndarray, cutoff: int) -> np.ndarray:
    amps = _apply(state, truncated_gate(g, cutoff, pad=20), g.modes)
    a = _ladder(cutoff + 1)
    return np.array([np.vdot(amps, _apply(amps, a, [k])) for k in range(m)])


@pytest.mark.parametrize(
    "g",
    [
        Gate.disp(0.3 + 0.2j, 0),
        Gate.rot(0.7, 1),
        Gate.sqz(0.4 * np.exp(0.9j), 0),
        Gate.bs(0.6, 1.1, 0, 1),
        Gate.tms(0.3 * np.exp(-0.5j), 0, 1),
        Gate.swap(0, 1),
    ],
)
def test_conventions_match_truncated_generators(g):
    # mean of the ladder vector after the gate, from the generator, versus S mu~ + d~
    cutoff = 30
    single = np.zeros(cutoff + 1, dtype=complex)
    single[:3] = [1.0, 0.4 + 0.1j, 0.1]
    other = np.zeros(cutoff + 1, dtype=complex)
    other[:2] = [1.0, -0.3j]
    state = np.multiply.outer(single, other)
    state /= np.linalg.norm(state)
    a = _ladder(cutoff + 1)
    mu = np.array([np.vdot(state, _apply(state, a, [k])) for k in range(2)])
    G = from_gate(g, 2)
    expected = (G.S @ np.concatenate([mu, mu.conj()]))[:2] + G.d
    np.testing.assert_allclose(_mean_after(g, 2, state, cutoff), expected, atol=1e-10)


def test_pullback_of_vacuum_identity_is_coherent():
    st_ = heterodyne_pullback(identity(2), [0.5, -0.2j])
    np.testing.assert_allclose(st_.cov, 0.5 * np.eye(4))
    np.testing.assert_allclose(st_.disp, [0.5, -0.2j, 0.5, 0.2j])


def test_q_function_of_coherent_state():
    # Q of |alpha> at beta is exp(-|beta - alpha|^2) / pi
    alpha, beta = 0.4 - 0.1j, -0.2 + 0.3j
    st_ = heterodyne_pullback(dagger(from_gate(Gate.disp(alpha, 0), 1)), [0])
    assert q_function(st_, [beta]) == pytest.approx(math.exp(-abs(beta - alpha) ** 2) / math.pi, rel=1e-12)


@settings(max_examples=6)
@given(complexes(), st.floats(0, 1.0), st.floats(0, 6.3))
def test_q_function_normalizes(beta0, r, theta):
    # Q of a displaced squeezed state integrates to one
    G = compose(from_gate(Gate.disp(beta0, 0), 1), from_gate(Gate.sqz(r * np.exp(1j * theta), 0), 1))
    st_ = heterodyne_pullback(dagger(G), [0])
    h = 0.2
    t = np.arange(-9, 9, h)
    total = sum(q_function(st_, [beta0 + x + 1j * y]) for x in t for y in t) * h * h
    assert total == pytest.approx(1.0, abs=1e-6)


def test_qform_rejects_non_hermitian():
    with pytest.raises(np.linalg.LinAlgError):
        QForm.of(np.array([[0.5, 1.0], [0.0, 0.5]]))


def test_unitary_is_read_only():
    G = identity(1)
    with pytest.raises(ValueError):
        G.S[0, 0] = 2
    with pytest.raises(ValueError):
        GaussianUnitary(np.eye(3), np.zeros(1))
