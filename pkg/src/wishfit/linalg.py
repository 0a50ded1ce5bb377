"""Small dense symmetric/SPD matrix helpers used throughout the package.

All matrices here are real, symmetric, and small (the intended regime is
dimension m <= 8).  The public entry points validate symmetry up to a relative
tolerance, and SPD constructors validate positive definiteness relative to the
largest eigenvalue, so downstream code can assume well-formed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError, NotSymmetricError

__all__ = [
    "SeriesControl",
    "SpdMatrix",
    "sym_eig",
    "spd_sqrt",
    "spd_inv_sqrt",
    "frobenius",
    "trace_product",
    "as_symmetric",
]

#: Relative symmetry tolerance: |A - A'| entries must be <= SYM_TOL * max|A|.
SYM_TOL = 1e-10

#: Relative SPD tolerance: eigenvalues must exceed SPD_TOL * lambda_max.
SPD_TOL = 1e-12


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for matrix-argument series.

    A series is summed by total weight layer k = 0, 1, 2, ...; it stops once
    two consecutive layer contributions are below ``abs_tol`` and below
    ``rel_tol`` times the running partial sum's magnitude, or when the weight
    cap is hit (in which case the evaluator raises, carrying the partial sum).

    Attributes
    ----------
    rel_tol : float
        Relative layer tolerance.
    abs_tol : float
        Absolute layer tolerance.
    max_weight : int
        Largest weight layer that may be added (inclusive).
    hard_cap : int
        Absolute ceiling on ``max_weight``.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_weight: int = 60
    hard_cap: int = 120

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (0 <= self.max_weight <= self.hard_cap):
            raise ValueError("require 0 <= max_weight <= hard_cap")


def as_symmetric(a, *, tol: float = SYM_TOL) -> np.ndarray:
    """Validate symmetry of ``a`` and return a symmetrized read-only copy.

    Raises
    ------
    NotSymmetricError
        If any entry of ``a - a.T`` exceeds ``tol * max(1, max|a|)``.
    """
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {arr.shape}")
    scale = max(1.0, float(np.max(np.abs(arr))) if arr.size else 0.0)
    gap = float(np.max(np.abs(arr - arr.T))) if arr.size else 0.0
    if gap > tol * scale:
        raise NotSymmetricError(
            f"matrix is not symmetric: max asymmetry {gap:.3e} exceeds "
            f"{tol:.1e} * {scale:.3e}"
        )
    out = 0.5 * (arr + arr.T)
    out.flags.writeable = False
    return out


def sym_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues in descending order; eigenvector ``[:, i]`` pairs with
        eigenvalue ``i``; the eigenvector matrix is orthogonal and satisfies
        ``Q diag(w) Q' == A`` to high relative accuracy.
    """
    arr = as_symmetric(a)
    w, q = np.linalg.eigh(arr)
    order = np.argsort(w)[::-1]
    return w[order], q[:, order]


def frobenius(a) -> float:
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(np.asarray(a, dtype=float), "fro"))


def trace_product(a, b) -> float:
    """tr(A B) for symmetric A, B without forming the product."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.sum(a * b.T))


class SpdMatrix:
    """Immutable symmetric positive-definite matrix with a cached eigensystem.

    Construction validates symmetry and positive definiteness (smallest
    eigenvalue must exceed ``SPD_TOL`` times the largest).  The eigensystem is
    computed eagerly once and reused by ``sqrt``/``inv_sqrt``/``inv``/powers.
    """

    __slots__ = ("_a", "_w", "_q")

    def __init__(self, a):
        arr = as_symmetric(a)
        w, q = np.linalg.eigh(arr)
        order = np.argsort(w)[::-1]
        w, q = w[order], q[:, order]
        if w[0] <= 0 or w[-1] <= SPD_TOL * w[0]:
            raise NotPositiveDefiniteError(
                f"matrix is not positive definite: eigenvalues in "
                f"[{w[-1]:.3e}, {w[0]:.3e}]"
            )
        w.flags.writeable = False
        q.flags.writeable = False
        self._a = arr
        self._w = w
        self._q = q

    # -- basic container protocol -------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        """The underlying read-only ndarray."""
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order (read-only)."""
        return self._w

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthogonal eigenvector matrix, columns paired with eigenvalues."""
        return self._q

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self._a.astype(dtype)
        return self._a

    def __repr__(self) -> str:
        return f"SpdMatrix(dim={self.dim}, eigenvalues={self._w.tolist()})"

    # -- derived matrices ---------------------------------------------------------
    def _apply(self, f) -> np.ndarray:
        w = f(self._w)
        out = (self._q * w) @ self._q.T
        out = 0.5 * (out + out.T)
        out.flags.writeable = False
        return out

    def sqrt(self) -> np.ndarray:
        """Symmetric square root A^(1/2)."""
        return self._apply(np.sqrt)

    def inv_sqrt(self) -> np.ndarray:
        """Symmetric inverse square root A^(-1/2)."""
        return self._apply(lambda w: 1.0 / np.sqrt(w))

    def inv(self) -> np.ndarray:
        """Inverse A^(-1) via the cached eigensystem."""
        return self._apply(lambda w: 1.0 / w)

    def logdet(self) -> float:
        """log det(A)."""
        return float(np.sum(np.log(self._w)))

    def trace(self) -> float:
        return float(np.trace(self._a))


def spd_sqrt(a) -> np.ndarray:
    """Symmetric square root of an SPD matrix given as an array."""
    m = a if isinstance(a, SpdMatrix) else SpdMatrix(a)
    return m.sqrt()


def spd_inv_sqrt(a) -> np.ndarray:
    """Symmetric inverse square root of an SPD matrix given as an array."""
    m = a if isinstance(a, SpdMatrix) else SpdMatrix(a)
    return m.inv_sqrt()
