"""The projective space of a matrix algebra with a fixed projection.

A point is an equivalence class of full-rank elements ``a`` with ``a = a p``,
two elements being equivalent when they differ by a right factor invertible
in the corner ``pAp``.  Classes are represented canonically by the partial
isometry of the polar decomposition, and compared through their range
projections, which are a complete invariant of the class.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import linalg
from .errors import InvalidInput, NotInLp, NotInvertible, ResidualError
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, herm

__all__ = [
    "Projection",
    "PartialIsometry",
    "ProjectivePoint",
    "in_lp",
    "classify",
    "class_equal",
    "point_from_projection",
    "unitary_extension",
    "random_projection",
    "random_point_near",
    "corner_compress",
    "corner_min_sv",
    "corner_inverse",
]


class Projection:
    """A Hermitian idempotent matrix.

    The rank is read off the trace, which must be within ``eq_tol`` of an
    integer; rank equality is the equivalence invariant in a matrix algebra.
    """

    def __init__(self, mat, tol: Tolerance = DEFAULT_TOL, _basis: np.ndarray | None = None):
        mat = as_matrix(mat, square=True)
        if np.abs(mat - mat.conj().T).max() > tol.eq_tol:
            raise InvalidInput("projection is not Hermitian within eq_tol")
        if np.abs(mat @ mat - mat).max() > tol.eq_tol:
            raise InvalidInput("projection is not idempotent within eq_tol")
        tr = np.trace(mat)
        if abs(tr.imag) > tol.eq_tol or abs(tr.real - round(tr.real)) > tol.eq_tol:
            raise InvalidInput("trace of a projection must be within eq_tol of an integer")
        self.mat = mat
        self.rank = int(round(tr.real))
        if _basis is not None:
            self.__dict__["range_basis"] = _basis

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def _eigvecs(self) -> np.ndarray:
        _, v = np.linalg.eigh(herm(self.mat))
        return v

    @cached_property
    def range_basis(self) -> np.ndarray:
        """Orthonormal basis of the range, as an (n, rank) column matrix."""
        return self._eigvecs[:, self.dim - self.rank:]

    @cached_property
    def null_basis(self) -> np.ndarray:
        """Orthonormal basis of the kernel, as an (n, n - rank) column matrix."""
        return self._eigvecs[:, : self.dim - self.rank]

    def complement(self, tol: Tolerance = DEFAULT_TOL) -> "Projection":
        return Projection(np.eye(self.dim, dtype=complex) - self.mat, tol)

    def __repr__(self):
        return f"Projection(dim={self.dim}, rank={self.rank})"


class PartialIsometry:
    """An element ``v`` with ``v = v p`` and ``v* v = p`` for the context ``p``."""

    def __init__(self, mat, context: Projection, tol: Tolerance = DEFAULT_TOL):
        mat = as_matrix(mat, square=True)
        if mat.shape != context.mat.shape:
            raise InvalidInput("partial isometry and context dimensions differ")
        if np.abs(mat @ context.mat - mat).max() > tol.eq_tol:
            raise InvalidInput("partial isometry does not satisfy v = v p")
        if np.abs(mat.conj().T @ mat - context.mat).max() > tol.eq_tol:
            raise InvalidInput("partial isometry does not satisfy v* v = p")
        self.mat = mat
        self.context = context

    def __repr__(self):
        return f"PartialIsometry(dim={self.mat.shape[0]}, rank={self.context.rank})"


class ProjectivePoint:
    """A point of the projective space: canonical representative plus range.

    ``range`` equals ``rep @ rep*`` and determines the class completely.
    """

    def __init__(self, rep: PartialIsometry, range_: Projection, tol: Tolerance = DEFAULT_TOL):
        if np.abs(rep.mat @ rep.mat.conj().T - range_.mat).max() > tol.eq_tol:
            raise InvalidInput("range does not match rep @ rep*")
        if range_.rank != rep.context.rank:
            raise InvalidInput("range rank differs from the context rank")
        self.rep = rep
        self.range = range_

    @property
    def context(self) -> Projection:
        return self.rep.context

    def __repr__(self):
        return f"ProjectivePoint(dim={self.rep.mat.shape[0]}, rank={self.range.rank})"


def corner_compress(a: np.ndarray, p: Projection) -> np.ndarray:
    """Compression of ``a`` to the range of ``p``, in the range eigenbasis."""
    b = p.range_basis
    return b.conj().T @ a @ b


def corner_min_sv(a: np.ndarray, p: Projection) -> float:
    """Smallest singular value of the compression of ``a`` to ran(p).

    Invertibility in the corner algebra ``pAp`` is decided uniformly by this
    one number.  Vacuously +inf when ``p`` has rank zero.
    """
    if p.rank == 0:
        return np.inf
    c = corner_compress(a, p)
    return float(np.linalg.svd(c, compute_uv=False).min())


def corner_inverse(a: np.ndarray, p: Projection, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Inverse of ``a`` within the corner algebra ``pAp``, as a full matrix.

    The compression is inverted on ran(p) and re-embedded, which avoids the
    tolerance ambiguities of a pseudo-inverse.
    """
    if p.rank == 0:
        return np.zeros_like(p.mat)
    b = p.range_basis
    c = b.conj().T @ a @ b
    if np.linalg.svd(c, compute_uv=False).min() <= tol.eq_tol:
        raise NotInvertible("compression to ran(p) is singular within eq_tol")
    return b @ np.linalg.inv(c) @ b.conj().T


def in_lp(a, p: Projection, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``a`` represents a point: ``a = a p`` and a*a invertible in pAp."""
    a = as_matrix(a, square=True)
    if a.shape != p.mat.shape:
        raise InvalidInput("element and projection dimensions differ")
    if np.abs(a @ p.mat - a).max() > tol.eq_tol:
        return False
    if p.rank == 0:
        return True
    c = corner_compress(a.conj().T @ a, p)
    return float(np.linalg.eigvalsh(herm(c)).min()) > tol.eq_tol


def classify(a, p: Projection, tol: Tolerance = DEFAULT_TOL) -> ProjectivePoint:
    """Canonical representative of the class of ``a``.

    The representative is the polar-part partial isometry ``a |a|^(-1)`` with
    the inverse taken in the corner ``pAp``; the range projection is attached
    as the complete invariant of the class.  An element that is already a
    partial isometry is returned unchanged.

    Raises
    ------
    NotInLp
        If ``a`` does not satisfy the membership test :func:`in_lp`.
    """
    a = as_matrix(a, square=True)
    if not in_lp(a, p, tol):
        raise NotInLp("element is not equivalent to any partial isometry over p")
    if p.rank == 0:
        zero = np.zeros_like(p.mat)
        return ProjectivePoint(PartialIsometry(zero, p, tol), Projection(zero, tol), tol)
    if np.abs(a.conj().T @ a - p.mat).max() <= tol.eq_tol:
        rep = a
    else:
        b = p.range_basis
        c = herm(b.conj().T @ (a.conj().T @ a) @ b)
        w, v = np.linalg.eigh(c)
        inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
        rep = a @ b @ inv_sqrt @ b.conj().T
    cols = rep @ p.range_basis
    rng = Projection(cols @ cols.conj().T, tol, _basis=cols)
    return ProjectivePoint(PartialIsometry(rep, p, tol), rng, tol)


def class_equal(m: ProjectivePoint, n: ProjectivePoint, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Class equality, decided on range projections."""
    if m.range.mat.shape != n.range.mat.shape:
        raise InvalidInput("points live in different ambient dimensions")
    return np.abs(m.range.mat - n.range.mat).max() <= tol.eq_tol


def point_from_projection(q: Projection, p: Projection, tol: Tolerance = DEFAULT_TOL) -> ProjectivePoint:
    """The point whose range is ``q``, for any ``q`` of the same rank as ``p``.

    The representative maps ran(p) isometrically onto ran(q) through the two
    eigenbases; the class does not depend on this choice.
    """
    if q.mat.shape != p.mat.shape:
        raise InvalidInput("projections live in different ambient dimensions")
    if q.rank != p.rank:
        raise InvalidInput("projections have different ranks")
    rep = q.range_basis @ p.range_basis.conj().T
    return ProjectivePoint(PartialIsometry(rep, p, tol), q, tol)


def unitary_extension(g, p: Projection, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """A unitary ``v`` with ``[v p] = [g p]``, for invertible ``g``.

    ran(g p) and ran(g (1-p)) span the whole space, so the polar isometries
    of ``g p`` and ``g (1-p)`` can be completed to a unitary by rotating the
    second range onto the orthogonal complement of the first.

    Raises
    ------
    NotInvertible
        If ``g`` is singular within ``eq_tol`` (relative to its norm).
    """
    g = as_matrix(g, square=True)
    if g.shape != p.mat.shape:
        raise InvalidInput("element and projection dimensions differ")
    s = np.linalg.svd(g, compute_uv=False)
    if s.min() <= tol.eq_tol * s.max():
        raise NotInvertible("matrix is singular within eq_tol")
    n = g.shape[0]
    if p.rank == 0:
        return np.eye(n, dtype=complex)
    if p.rank == n:
        return classify(g, p, tol).rep.mat
    pc = p.complement(tol)
    v1 = classify(g @ p.mat, p, tol).rep.mat
    v2 = classify(g @ pc.mat, pc, tol).rep.mat
    q1 = v1 @ v1.conj().T
    q2p = classify(v2, pc, tol).range
    u = classify((np.eye(n, dtype=complex) - q1) @ q2p.mat, q2p, tol).rep.mat
    v = v1 + u @ v2
    if np.abs(v.conj().T @ v - np.eye(n)).max() > tol.eq_tol:
        raise ResidualError("unitary completion failed its unitarity check")
    return v


def random_projection(n: int, rank: int, seed: int, tol: Tolerance = DEFAULT_TOL) -> Projection:
    """Spectral projection onto the top-``rank`` eigenspace of a seeded
    random Hermitian matrix."""
    if not (isinstance(n, (int, np.integer)) and isinstance(rank, (int, np.integer))):
        raise InvalidInput("dimension and rank must be integers")
    if n < 1 or rank < 0 or rank > n:
        raise InvalidInput(f"rank must lie in [0, {n}]")
    if rank == 0:
        return Projection(np.zeros((n, n), dtype=complex), tol)
    if rank == n:
        return Projection(np.eye(n, dtype=complex), tol)
    rng = np.random.default_rng(seed)
    h = herm(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    _, v = np.linalg.eigh(h)
    b = v[:, n - rank:]
    return Projection(b @ b.conj().T, tol, _basis=b)


def random_offdiag_antiherm(p: Projection, rng: np.random.Generator) -> np.ndarray:
    """Random anti-Hermitian matrix exchanging ran(p) and its complement."""
    n = p.dim
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = (np.eye(n, dtype=complex) - p.mat) @ m @ p.mat
    return x - x.conj().T


def random_point_near(
    p: Projection,
    radius: float,
    seed: int,
    tol: Tolerance = DEFAULT_TOL,
) -> ProjectivePoint:
    """Random point at chordal distance at most ``radius`` from ``[p]``.

    Draws a random tangent direction and scales it so the geodesic endpoint
    lands within the requested chordal radius (the distance is the sine of
    the tangent norm).
    """
    if not (0 < radius < 1):
        raise InvalidInput("radius must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    z = random_offdiag_antiherm(p, rng)
    zn = np.linalg.norm(z, 2)
    if zn == 0.0:
        return classify(p.mat, p, tol)
    theta = np.arcsin(radius) * (1.0 - rng.uniform())
    z *= theta / zn
    return classify(linalg.expm(z) @ p.mat, p, tol)
