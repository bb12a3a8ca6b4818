import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyosc import (
    RecurrenceCoefficients,
    boson_chain,
    build_nonsymmetric_oscillator,
    build_symmetric_oscillator,
    commutator,
    expected_truncated_spectrum,
    ladder_commutator_defect,
    spectrum,
)
from conftest import random_truncated_chain

b_values = st.lists(st.floats(0.3, 2.0), min_size=1, max_size=7)


def test_boson_hamiltonian_is_odd_integers():
    # X^2 + P^2 with b_k = sqrt((k+1)/2) gives the diagonal 2n + 1 exactly
    # on the interior; the level above the cut is missing from the top slot.
    ops = build_symmetric_oscillator(boson_chain(5), dim=5)
    H = ops.hamiltonian
    assert np.max(np.abs(H - np.diag(H.diagonal()))) < 1e-14
    assert np.allclose(H.diagonal().real[:4], [1.0, 3.0, 5.0, 7.0])
    assert H.diagonal().real[4] == pytest.approx(2.0 * 4 / 2.0)  # 2 b_3^2


def test_truncated_chain_infers_dimension():
    ch = RecurrenceCoefficients(b=[1.0, 1.5, 0.0])
    ops = build_symmetric_oscillator(ch)
    assert ops.dim == 3


def test_ladder_matrix_elements(rng):
    ch = random_truncated_chain(rng)
    ops = build_symmetric_oscillator(ch)
    n = ops.dim
    for k in range(n - 1):
        assert ops.raise_[k + 1, k] == pytest.approx(np.sqrt(2.0) * ch.b[k])
        assert ops.lower[k, k + 1] == pytest.approx(np.sqrt(2.0) * ch.b[k])
    # nothing anywhere else
    assert np.max(np.abs(ops.raise_ - np.diag(ops.raise_.diagonal(-1), -1))) < 1e-14


def test_hamiltonian_from_ladders(rng):
    # H = raise lower + lower raise (the symmetrized product) reproduces
    # X^2 + P^2 for zero-diagonal chains.
    ch = random_truncated_chain(rng)
    ops = build_symmetric_oscillator(ch)
    H2 = ops.raise_ @ ops.lower + ops.lower @ ops.raise_
    assert np.max(np.abs(H2 - ops.hamiltonian)) < 1e-12


@given(b_values)
def test_commutator_defect_prediction(bs):
    n = len(bs)
    b = np.zeros(n + 1)
    b[:n] = bs
    ops = build_symmetric_oscillator(RecurrenceCoefficients(b=b))
    got, pred = ladder_commutator_defect(ops)
    assert np.max(np.abs(got - pred)) < 1e-12


def test_split_construction_matches_symmetric(rng):
    ch = random_truncated_chain(rng)
    sym = build_symmetric_oscillator(ch)
    non = build_nonsymmetric_oscillator(ch)
    for name in ("position", "momentum", "hamiltonian", "lower", "raise_"):
        assert np.array_equal(getattr(sym, name), getattr(non, name)), name


def test_spectrum_matches_prediction(rng):
    for _ in range(5):
        ch = random_truncated_chain(rng)
        ops = build_symmetric_oscillator(ch)
        vals, vecs = spectrum(ops)
        want = expected_truncated_spectrum(ch)
        assert np.max(np.abs(vals - want)) < 1e-10
        # vectors actually diagonalize H with the paired values
        H = ops.hamiltonian
        for k in range(ops.dim):
            r = H @ vecs[:, k] - vals[k] * vecs[:, k]
            assert np.max(np.abs(r)) < 1e-9


def test_spectrum_pairing_handles_degenerate_levels():
    # b = (c, c, 0) has lambda_0 = lambda_2 = 2c^2: the assignment must give
    # each number state its own copy instead of the same eigenvalue twice
    # from a greedy argmax.
    ch = RecurrenceCoefficients(b=[1.3, 1.3, 0.0])
    ops = build_symmetric_oscillator(ch)
    vals, _ = spectrum(ops)
    want = expected_truncated_spectrum(ch)
    assert np.allclose(np.sort(vals), np.sort(want), atol=1e-12)
    assert np.allclose(vals, want, atol=1e-12)


def test_expected_spectrum_open_chain_uses_window_only():
    ch = boson_chain(9)
    want = expected_truncated_spectrum(ch, dim=4)
    # levels 2(b_{k-1}^2 + b_k^2) = 2k+1 internally, top misses b_3^2
    assert np.allclose(want, [1.0, 3.0, 5.0, 2.0 * 3 / 2.0 + 0.0 * 4])


def test_number_operator_and_dim(rng):
    ch = random_truncated_chain(rng)
    ops = build_symmetric_oscillator(ch)
    Nop = ops.number_operator()
    assert Nop.shape == (ops.dim, ops.dim)
    assert np.allclose(np.diag(Nop), np.arange(ops.dim))


def test_commutator_helper():
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert np.array_equal(commutator(A, A.T), np.diag([1.0, -1.0]))


def test_dimension_validation():
    ch = RecurrenceCoefficients(b=[1.0, 1.0])
    with pytest.raises(ValueError):
        build_symmetric_oscillator(ch, dim=0)
    with pytest.raises(ValueError):
        build_symmetric_oscillator(ch, dim=9)
