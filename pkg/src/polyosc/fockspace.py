"""Oscillator operators on the (truncated) state space of a recurrence chain.

The chain b_0..b_N (diagonal a optional) defines, on basis |0>..|N>,

    X[n, n+1] = X[n+1, n] = b_n,        X[n, n] = a_n,
    P[n+1, n] = -i b_n,  P[n, n+1] = +i b_n,   P[n, n] = a_n,

a Hamiltonian H = X^2 + P^2 which is exactly diagonal when a == 0, and
ladders a_pm = (X -++ i P)/sqrt(2) with raising entries sqrt(2) b_n.  For a
truncated chain (b_N = 0) the commutator [a_minus, a_plus] picks up a defect
-2 b_{N-1}^2 in the top corner on top of the interior 2(b_n^2 - b_{n-1}^2).

build_nonsymmetric_oscillator starts instead from the self-adjoint
combination M = X - P of a *complex-looking* build and recovers the same two
operators by an entrywise real/imaginary split; it exists as an independent
route to the same algebra and is cross-checked against the direct build.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .polyrec import RecurrenceCoefficients, as_chain


@dataclass
class OscillatorOperators:
    """The operator quadruple (X, P, H, ladders) of one chain."""

    chain: RecurrenceCoefficients
    position: np.ndarray
    momentum: np.ndarray
    hamiltonian: np.ndarray
    lower: np.ndarray
    raise_: np.ndarray

    @property
    def dim(self) -> int:
        return self.position.shape[0]

    def number_operator(self) -> np.ndarray:
        return np.diag(np.arange(self.dim, dtype=float))


def _dim_for(chain: RecurrenceCoefficients) -> int:
    # A truncated chain b_0..b_{N-1}, b_N = 0 acts on N+1 states; an open
    # chain of depth d gives the d+1 dimensional principal block.
    return chain.depth + 1 if not chain.truncated else chain.valid_depth + 1


def build_symmetric_oscillator(chain, dim: int | None = None) -> OscillatorOperators:
    """Direct construction of X, P, H = X^2 + P^2 and ladders from a chain."""
    chain = as_chain(chain)
    n = _dim_for(chain) if dim is None else dim
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if n - 1 > chain.depth:
        raise ValueError("chain of depth %d cannot fill %d states" % (chain.depth, n))
    off = chain.b[: n - 1]
    diag = np.zeros(n)
    if chain.a is not None:
        diag[: min(n, len(chain.a))] = chain.a[: min(n, len(chain.a))]
    X = np.diag(diag).astype(complex) + np.diag(off, 1) + np.diag(off, -1)
    P = np.diag(diag).astype(complex) + 1j * np.diag(off, 1) - 1j * np.diag(off, -1)
    H = X @ X + P @ P
    # with P's sign convention (+ib above, -ib below the diagonal) the
    # combination X + iP wipes the superdiagonal: it raises
    lower = (X - 1j * P) / np.sqrt(2.0)
    raise_ = (X + 1j * P) / np.sqrt(2.0)
    return OscillatorOperators(chain, X, P, H, lower, raise_)


def build_nonsymmetric_oscillator(chain, dim: int | None = None) -> OscillatorOperators:
    """Recover the oscillator from the combined matrix M = X - P.

    M is self-adjoint with zero diagonal; its real part (entrywise) is the
    position operator and -i times the entrywise imaginary part is the
    momentum operator.  Mathematically equal to build_symmetric_oscillator
    for a == 0 chains; kept as a separate code path so the two can be
    compared in tests.
    """
    chain = as_chain(chain)
    if not chain.symmetric:
        raise ValueError("the split construction assumes a zero diagonal")
    n = _dim_for(chain) if dim is None else dim
    off = chain.b[: n - 1]
    M = np.diag(off * (1.0 - 1j), 1) + np.diag(off * (1.0 + 1j), -1)  # X - P
    X = M.real.astype(complex)
    P = -1j * M.imag  # entrywise: recovers +i b above, -i b below the diagonal
    H = X @ X + P @ P
    lower = (X - 1j * P) / np.sqrt(2.0)
    raise_ = (X + 1j * P) / np.sqrt(2.0)
    return OscillatorOperators(chain, X, P, H, lower, raise_)


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def ladder_commutator_defect(ops: OscillatorOperators) -> tuple[np.ndarray, np.ndarray]:
    """[a_minus, a_plus] and its predicted form, for comparison.

    Prediction: diagonal 2(b_n^2 - b_{n-1}^2) for n < dim-1 and
    -2 b_{dim-2}^2 in the last slot (the truncation defect).
    """
    got = commutator(ops.lower, ops.raise_)
    n = ops.dim
    b = np.concatenate(([0.0], ops.chain.b[: n - 1], [0.0]))  # b_{-1}=0, pad
    pred = np.zeros(n)
    for k in range(n - 1):
        pred[k] = 2.0 * (b[k + 1] ** 2 - b[k] ** 2)
    pred[n - 1] = -2.0 * b[n - 1] ** 2
    return got, np.diag(pred).astype(complex)


def spectrum(ops: OscillatorOperators):
    """Eigenvalues of H paired to number states by maximum overlap.

    Returns (paired_values, vectors) with paired_values[n] the eigenvalue
    whose eigenvector has the largest |<n|v>|^2, resolved globally with an
    assignment solve so degenerate pairs (the truncated chains have
    lambda_n = lambda_{N-n} type degeneracies) are handled consistently.
    """
    H = ops.hamiltonian
    vals, vecs = np.linalg.eigh(H)
    overlap = np.abs(vecs) ** 2  # overlap[n, j] = |<n | v_j>|^2
    row, col = linear_sum_assignment(-overlap)
    paired = np.empty_like(vals)
    paired_vecs = np.empty_like(vecs)
    for r, c in zip(row, col):
        paired[r] = vals[c]
        paired_vecs[:, r] = vecs[:, c]
    return paired, paired_vecs


def expected_truncated_spectrum(chain, dim: int | None = None) -> np.ndarray:
    """lambda_n = 2 (b_{n-1}^2 + b_n^2) for the symmetric build.

    Only the coefficients that actually enter the dim-dimensional operator
    (b_0 .. b_{dim-2}) are used; the level above the cut contributes zero,
    which reproduces the truncation value lambda_top = 2 b_{top-1}^2.
    """
    chain = as_chain(chain)
    n = _dim_for(chain) if dim is None else dim
    b = np.zeros(n + 1)
    b[1:n] = chain.b[: n - 1]
    return np.array([2.0 * (b[k] ** 2 + b[k + 1] ** 2) for k in range(n)])
