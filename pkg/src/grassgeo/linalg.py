"""Dense complex linear algebra kernels.

All higher modules work with square complex matrices represented as
``numpy.ndarray`` with dtype complex128.  This module provides the shared
kernels: operator norm, Hermitian eigendecomposition, functional calculus,
polar decomposition, matrix exponential and the principal logarithms on
their natural domains.  Everything is a pure function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    BranchCut,
    DomainError,
    InvalidInput,
    NotHermitian,
    NotPositive,
)

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "HermitianEig",
    "as_matrix",
    "herm",
    "op_norm",
    "hermitian_eig",
    "func_calc",
    "polar",
    "expm",
    "log_unitary",
    "log_posdef",
    "sqrt_posdef",
    "svd_range_projection",
    "random_unitary",
    "random_invertible",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical tolerances: ``eq_tol`` for algebraic identities, ``geo_tol``
    for geometric and iterative checks."""

    eq_tol: float = 1e-9
    geo_tol: float = 1e-6

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.geo_tol > 0):
            raise InvalidInput("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


class HermitianEig(NamedTuple):
    """Eigenvalues in ascending order and a unitary matrix of eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a, square: bool = False) -> np.ndarray:
    """Coerce to a finite 2-d complex array, raising :class:`InvalidInput`."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise InvalidInput(f"expected a non-empty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise InvalidInput("matrix has non-finite entries")
    if square and a.shape[0] != a.shape[1]:
        raise InvalidInput(f"expected a square matrix, got shape {a.shape}")
    return a


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a*) / 2."""
    return (a + a.conj().T) / 2


def _is_hermitian(a: np.ndarray, tol: float) -> bool:
    return np.abs(a - a.conj().T).max() <= tol


def op_norm(a) -> float:
    """Operator (spectral) norm: the largest singular value."""
    a = as_matrix(a)
    return float(np.linalg.norm(a, 2))


def op_norm_herm(a: np.ndarray) -> float:
    """Operator norm of a Hermitian matrix via its spectrum."""
    return float(np.abs(np.linalg.eigvalsh(a)).max())


def hermitian_eig(a, tol: Tolerance = DEFAULT_TOL) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Returns eigenvalues ascending and orthonormal eigenvectors such that
    ``V @ diag(w) @ V.conj().T`` reconstructs the input.

    Raises
    ------
    NotHermitian
        If ``a`` deviates from its adjoint by more than ``tol.eq_tol``.
    """
    a = as_matrix(a, square=True)
    if not _is_hermitian(a, tol.eq_tol):
        raise NotHermitian("matrix is not Hermitian within eq_tol")
    w, v = np.linalg.eigh(herm(a))
    return HermitianEig(w, v)


def func_calc(f: Callable[[float], complex], a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix by spectral mapping.

    Computes ``V @ diag(f(w_i)) @ V*``.  The function may be vectorized or a
    plain scalar callable; it must be defined on the whole spectrum.

    Raises
    ------
    DomainError
        If ``f`` raises or returns a non-finite value at an eigenvalue.
    """
    w, v = hermitian_eig(a, tol)
    try:
        fw = np.asarray(f(w))
        if fw.shape != w.shape:
            raise TypeError
    except DomainError:
        raise
    except Exception:
        vals = []
        for x in w:
            try:
                vals.append(f(float(x)))
            except Exception as exc:
                raise DomainError(f"function undefined at eigenvalue {x}") from exc
        fw = np.asarray(vals)
    if not np.all(np.isfinite(np.atleast_1d(fw).astype(complex).view(float))):
        raise DomainError("function returned a non-finite value on the spectrum")
    out = (v * fw) @ v.conj().T
    if np.isrealobj(fw) or np.abs(fw.imag).max() == 0.0:
        out = herm(out)
    return out


def polar(a) -> tuple[np.ndarray, np.ndarray]:
    """Right polar decomposition a = u @ pos with pos = (a* a)^(1/2).

    ``u`` is unitary for square input (exactly the polar unitary when ``a``
    is invertible); ``pos`` is Hermitian positive semidefinite.
    """
    a = as_matrix(a, square=True)
    u_svd, s, vh = np.linalg.svd(a)
    u = u_svd @ vh
    pos = herm(vh.conj().T @ (s[:, None] * vh))
    return u, pos


def expm(a) -> np.ndarray:
    """Matrix exponential.

    Hermitian and anti-Hermitian arguments go through the spectral
    decomposition; anything else falls back to the general Pade routine.
    """
    a = as_matrix(a, square=True)
    scale = max(1.0, np.abs(a).max())
    dev = 1e-13 * scale
    if np.abs(a - a.conj().T).max() <= dev:
        w, v = np.linalg.eigh(herm(a))
        return herm((v * np.exp(w)) @ v.conj().T)
    if np.abs(a + a.conj().T).max() <= dev:
        # a = i h with h Hermitian; exp(a) is unitary
        w, v = np.linalg.eigh(herm(-1j * a))
        return (v * np.exp(1j * w)) @ v.conj().T
    return scipy.linalg.expm(a)


def log_unitary(u, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal logarithm of a unitary matrix.

    The result is anti-Hermitian with spectrum in the open interval
    (-i pi, i pi).  Inputs with an eigenvalue within ``eq_tol`` of -1 are
    rejected rather than nudged off the branch cut.

    Raises
    ------
    InvalidInput
        If ``u`` is not unitary within ``eq_tol``.
    BranchCut
        If some eigenvalue lies within ``eq_tol`` of -1.
    """
    u = as_matrix(u, square=True)
    n = u.shape[0]
    if np.abs(u.conj().T @ u - np.eye(n)).max() > tol.eq_tol:
        raise InvalidInput("matrix is not unitary within eq_tol")
    t, q = scipy.linalg.schur(u, output="complex")
    lam = np.diag(t).copy()
    # a unitary matrix is normal, so the Schur form is diagonal up to rounding
    if np.abs(t - np.diag(lam)).max() > 1e3 * tol.eq_tol:
        raise InvalidInput("Schur form is not diagonal; input is far from normal")
    if np.abs(lam + 1.0).min() <= tol.eq_tol:
        raise BranchCut("eigenvalue within eq_tol of -1; principal log undefined")
    lam /= np.abs(lam)
    out = (q * np.log(lam)) @ q.conj().T
    return (out - out.conj().T) / 2


def log_posdef(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Principal logarithm of a positive definite Hermitian matrix."""
    w, v = hermitian_eig(a, tol)
    if w.min() <= tol.eq_tol:
        raise NotPositive("matrix is not positive definite within eq_tol")
    return herm((v * np.log(w)) @ v.conj().T)


def sqrt_posdef(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Positive square root of a positive definite Hermitian matrix."""
    w, v = hermitian_eig(a, tol)
    if w.min() <= tol.eq_tol:
        raise NotPositive("matrix is not positive definite within eq_tol")
    return herm((v * np.sqrt(w)) @ v.conj().T)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Square root of a positive semidefinite matrix, clipping rounding noise.

    Unlike :func:`sqrt_posdef` this accepts singular input; it is meant for
    corner elements such as compressions that vanish on a complement.
    """
    w, v = np.linalg.eigh(herm(a))
    w = np.clip(w, 0.0, None)
    return herm((v * np.sqrt(w)) @ v.conj().T)


def svd_range_projection(a, rtol: float = 1e-11) -> np.ndarray:
    """Orthogonal projection onto the column space of ``a``, via SVD.

    Singular values below ``rtol`` times the largest are treated as zero.
    Used as the independent oracle for range computations.
    """
    a = as_matrix(a)
    u, s, _ = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], a.shape[0]), dtype=complex)
    k = int(np.sum(s > rtol * s[0]))
    uk = u[:, :k]
    return uk @ uk.conj().T


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary matrix (QR of a complex Ginibre draw)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_invertible(
    n: int,
    rng: np.random.Generator,
    smin: float = 0.5,
    smax: float = 2.0,
) -> np.ndarray:
    """Random invertible matrix with singular values in [smin, smax].

    Keeping the condition number bounded makes residual-based assertions
    meaningful at 64-bit precision.
    """
    u = random_unitary(n, rng)
    v = random_unitary(n, rng)
    s = rng.uniform(smin, smax, size=n)
    return (u * s) @ v.conj().T
