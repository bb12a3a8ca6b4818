"""Three-term recurrence chains and the polynomial families they generate.

The whole package is driven by a single object: the off-diagonal sequence
b_0, b_1, ... (plus an optional diagonal a_n) of a symmetric Jacobi matrix.
Two polynomial normalizations are used throughout:

* the orthonormal family  psi_n,  with
      x psi_n = b_n psi_{n+1} + a_n psi_n + b_{n-1} psi_{n-1},   psi_0 = 1,
* the monic "tilde" family  psit_n  of the symmetric (a == 0) case, with
      x psit_n = psit_{n+1} + 2 b_{n-1}^2 psit_{n-1},   psit_0 = 1, psit_1 = x.

They are related by a sqrt(2) change of variable,
    psit_n(sqrt(2) x) = fact_idx(sqrt(2) b, n) * psi_n(x),
where fact_idx is the index-factorial below.  Roots are always computed as
Jacobi-matrix eigenvalues, never by polynomial root finding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

_LD = np.longdouble


class ChainError(ValueError):
    """Invalid recurrence data (wrong shape, interior zero, complex entries)."""


@dataclass
class RecurrenceCoefficients:
    """A recurrence chain: off-diagonal b_n and optional diagonal a_n.

    Parameters
    ----------
    b : array_like
        Off-diagonal coefficients b_0 .. b_{depth-1}.  Real, and nonzero
        below the truncation boundary.  A truncated chain ends with b = 0
        entries (e.g. the Krawtchouk chain has b_N = 0).
    a : array_like, optional
        Diagonal coefficients; omitted or all-zero for symmetric measures.
    truncated : bool
        True when the chain closes a finite-dimensional space, i.e. trailing
        zeros in b are structural rather than missing data.
    """

    b: np.ndarray
    a: np.ndarray | None = None
    truncated: bool = False
    label: str = field(default="", compare=False)

    def __post_init__(self):
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float))
        if self.b.ndim != 1:
            raise ChainError("b must be a one-dimensional sequence")
        if self.a is not None:
            self.a = np.atleast_1d(np.asarray(self.a, dtype=float))
            if self.a.shape != self.b.shape:
                raise ChainError(
                    "a and b must have equal length, got %d and %d"
                    % (len(self.a), len(self.b))
                )
        # Zeros are only allowed as a trailing (truncating) block.
        nz = np.nonzero(self.b == 0.0)[0]
        if nz.size:
            first = int(nz[0])
            if np.any(self.b[first:] != 0.0):
                raise ChainError("interior zero in b at index %d" % first)
            self.truncated = True

    @property
    def depth(self) -> int:
        """Length of the stored b sequence."""
        return len(self.b)

    @property
    def valid_depth(self) -> int:
        """Number of leading nonzero b entries (the usable chain length)."""
        nz = np.nonzero(self.b == 0.0)[0]
        return int(nz[0]) if nz.size else len(self.b)

    @property
    def symmetric(self) -> bool:
        return self.a is None or not np.any(self.a)

    def diagonal(self) -> np.ndarray:
        return np.zeros_like(self.b) if self.a is None else self.a

    def __len__(self) -> int:
        return len(self.b)


def as_chain(chain) -> RecurrenceCoefficients:
    """Coerce an array of b values (or a chain) to RecurrenceCoefficients."""
    if isinstance(chain, RecurrenceCoefficients):
        return chain
    return RecurrenceCoefficients(b=np.asarray(chain, dtype=float))


def factorial_on_index(values, n: int) -> float:
    """Product of values[0..n-1]; the empty product (n <= 0) is 1.

    This is the "(c_{n-1})!" convention: factorial_on_index(2*b**2, n)
    is (2b^2_{n-1})! = 2b_0^2 * ... * 2b_{n-1}^2.
    """
    if n <= 0:
        return 1.0
    values = np.asarray(values)
    if n > len(values):
        raise ValueError("index factorial needs %d entries, have %d" % (n, len(values)))
    return float(np.prod(values[:n].astype(_LD)))


def double_factorial_on_index(values, n: int) -> float:
    """Product of every second entry, values[n-1] * values[n-3] * ...; 1 for n <= 0.

    double_factorial_on_index(2*b**2, 2*p) is (2b^2_{2p-2})!! (even indices),
    and with n = 2*p + 1 it is (2b^2_{2p-1})!! (odd indices).
    """
    if n <= 0:
        return 1.0
    values = np.asarray(values)
    if n > len(values):
        raise ValueError("index double factorial needs %d entries" % n)
    return float(np.prod(values[n - 1 :: -2].astype(_LD)))


def eval_orthonormal(chain, n: int, x):
    """Evaluate the orthonormal polynomial psi_n at x by forward recurrence.

    psi_{k+1} = ((x - a_k) psi_k - b_{k-1} psi_{k-1}) / b_k, psi_0 = 1.
    Valid for n <= chain.valid_depth (the division needs b_k != 0).
    Accumulation is done in extended precision; values grow factorially with
    n but only enter downstream formulas through ratios.
    """
    chain = as_chain(chain)
    if n < 0:
        raise ValueError("polynomial degree must be nonnegative")
    if n > chain.valid_depth:
        raise ChainError("chain supports degrees up to %d, got %d" % (chain.valid_depth, n))
    a = chain.diagonal().astype(_LD)
    b = chain.b.astype(_LD)
    x_arr = np.asarray(x, dtype=_LD)
    pkm1 = np.zeros_like(x_arr)
    pk = np.ones_like(x_arr)
    for k in range(n):
        pkp1 = ((x_arr - a[k]) * pk - (b[k - 1] if k > 0 else 0.0) * pkm1) / b[k]
        pkm1, pk = pk, pkp1
    out = np.asarray(pk, dtype=float)
    return out if out.ndim else float(out)


def eval_monic_tilde(chain, n: int, x):
    """Evaluate the monic tilde polynomial psit_n at x (symmetric chains).

    psit_{k+1} = x psit_k - 2 b_{k-1}^2 psit_{k-1}, psit_0 = 1.  Note that
    psit_{n} only uses b_0..b_{n-2}, so it is defined one degree past the
    truncation boundary (that closing polynomial supplies the root set).
    """
    chain = as_chain(chain)
    if not chain.symmetric:
        raise ChainError("the tilde family is defined for symmetric chains (a == 0)")
    if n < 0:
        raise ValueError("polynomial degree must be nonnegative")
    if n > chain.depth + 1:
        raise ChainError("need b_0..b_%d for degree %d" % (n - 2, n))
    tb2 = 2.0 * chain.b.astype(_LD) ** 2
    x_arr = np.asarray(x, dtype=_LD)
    pkm1 = np.zeros_like(x_arr)
    pk = np.ones_like(x_arr)
    for k in range(n):
        pkp1 = x_arr * pk - (tb2[k - 1] if k > 0 else 0.0) * pkm1
        pkm1, pk = pk, pkp1
    out = np.asarray(pk, dtype=float)
    return out if out.ndim else float(out)


def monic_tilde_coefficients(chain, n: int) -> np.ndarray:
    """Monomial coefficient array (ascending powers) of psit_n."""
    chain = as_chain(chain)
    tb2 = 2.0 * chain.b.astype(_LD) ** 2
    ckm1 = np.zeros(1, dtype=_LD)
    ck = np.ones(1, dtype=_LD)
    for k in range(n):
        shifted = np.concatenate(([0.0], ck))
        prev = np.concatenate((ckm1, np.zeros(len(shifted) - len(ckm1), dtype=_LD)))
        ckm1, ck = ck, shifted - (tb2[k - 1] if k > 0 else 0.0) * prev
    return ck.astype(float)


def jacobi_matrix(chain, size: int) -> np.ndarray:
    """Dense symmetric Jacobi matrix of the given size.

    Diagonal a_0..a_{size-1} (zero for symmetric chains), off-diagonal
    b_0..b_{size-2}.  The eigenvalues are the roots of psi_size.
    """
    chain = as_chain(chain)
    if size < 1:
        raise ValueError("size must be >= 1")
    if size - 1 > chain.depth:
        raise ChainError("chain too short for a %dx%d Jacobi matrix" % (size, size))
    diag = np.zeros(size)
    if chain.a is not None:
        diag[: min(size, len(chain.a))] = chain.a[:size]
    off = chain.b[: size - 1]
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


@dataclass
class RootSet:
    """Roots of the degree-`degree` monic tilde polynomial of a chain.

    x is sorted ascending; residuals[k] = |psit_degree(x[k])| and scale is the
    largest monomial-coefficient magnitude of psit_degree, so residual/scale
    is the meaningful relative quantity.
    """

    x: np.ndarray
    residuals: np.ndarray
    degree: int
    scale: float

    def __len__(self) -> int:
        return len(self.x)


def roots(chain, degree: int, residual_tol: float = 1e-8) -> RootSet:
    """All roots of psit_degree, via the Jacobi spectrum (Golub-Welsch route).

    psit_degree(sqrt(2) y) is proportional to the orthonormal psi_degree(y), so
    the roots are sqrt(2) times the eigenvalues of the degree x degree Jacobi
    matrix.  Raises if a computed residual exceeds residual_tol * scale.
    """
    chain = as_chain(chain)
    if not chain.symmetric:
        raise ChainError("root sets are defined through the symmetric tilde family")
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree == 1:
        nodes = np.zeros(1)
    else:
        off = chain.b[: degree - 1]
        nodes = eigh_tridiagonal(np.zeros(degree), off, eigvals_only=True)
    x = np.sqrt(2.0) * np.sort(nodes)
    res = np.abs(eval_monic_tilde(chain, degree, x))
    res = np.atleast_1d(res)
    coeffs = monic_tilde_coefficients(chain, degree)
    scale = float(np.max(np.abs(coeffs)))
    if np.any(res > residual_tol * scale):
        raise ArithmeticError(
            "root residual %.3e exceeds %.1e of coefficient scale %.3e"
            % (float(res.max()), residual_tol, scale)
        )
    return RootSet(x=x, residuals=res, degree=degree, scale=scale)


def _refined_gauss_rule(diag, off, vals):
    """Newton-polish Golub-Welsch nodes in extended precision.

    The float64 eigenvalues are accurate to ~1e-12 absolute, which is not
    enough once high powers of the nodes enter a sum (the error scales with
    the derivative of x^n).  Three Newton sweeps on the monic polynomial
    push the nodes to longdouble accuracy, and the weights are rebuilt from
    the reciprocal kernel diagonal 1 / sum_l psi_l(y_k)^2, which is exact
    for the mu_0 = 1 normalization.
    """
    dg = np.asarray(diag, dtype=np.longdouble)
    b2 = np.asarray(off, dtype=np.longdouble) ** 2
    y = np.asarray(vals, dtype=np.longdouble)
    n = len(dg)
    for _ in range(3):
        pm = np.zeros_like(y)
        pv = np.ones_like(y)
        dm = np.zeros_like(y)
        dv = np.zeros_like(y)
        for k in range(n):
            c = b2[k - 1] if k else np.longdouble(0.0)
            pm, pv, dm, dv = (
                pv,
                (y - dg[k]) * pv - c * pm,
                dv,
                pv + (y - dg[k]) * dv - c * dm,
            )
        y = y - pv / dv
    bb = np.asarray(off, dtype=np.longdouble)
    qm = np.zeros_like(y)
    qv = np.ones_like(y)
    total = np.ones_like(y)
    for k in range(n - 1):
        qn = ((y - dg[k]) * qv - (bb[k - 1] if k else 0.0) * qm) / bb[k]
        qm, qv = qv, qn
        total = total + qv**2
    return y, 1.0 / total


def gauss_quadrature(chain, npoints: int):
    """Gauss nodes and weights for the measure encoded by the chain.

    Nodes are the eigenvalues of the npoints x npoints Jacobi matrix in the
    chain's own (orthonormal) variable (mu_0 = 1 normalization).  Exact for
    polynomials of degree <= 2*npoints - 1.  When every off-diagonal in the
    window is positive the rule is returned Newton-polished in extended
    precision (longdouble arrays); the degenerate fallback keeps the plain
    eigenvector-component weights.
    """
    chain = as_chain(chain)
    if npoints < 1:
        raise ValueError("need at least one quadrature point")
    if npoints == 1:
        a0 = 0.0 if chain.a is None or len(chain.a) == 0 else float(chain.a[0])
        return (
            np.array([a0], dtype=np.longdouble),
            np.array([1.0], dtype=np.longdouble),
        )
    diag = np.zeros(npoints)
    if chain.a is not None:
        diag[: min(npoints, len(chain.a))] = chain.a[:npoints]
    off = chain.b[: npoints - 1]
    if np.all(off > 0):
        vals = eigh_tridiagonal(diag, off, eigvals_only=True)
        return _refined_gauss_rule(diag, off, np.sort(vals))
    vals, vecs = eigh_tridiagonal(diag, off)
    order = np.argsort(vals)
    return vals[order], vecs[0, order] ** 2


def tilde_quadrature(chain, npoints: int):
    """Gauss rule transported to the monic-tilde variable (x = sqrt(2) y)."""
    nodes, weights = gauss_quadrature(chain, npoints)
    return np.sqrt(np.longdouble(2.0)) * nodes, weights
