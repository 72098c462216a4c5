"""Finite points, the affine chart and Moebius maps.

A point is finite when the compression of its representative to ran(p) is
invertible.  Finite points are exactly the chart image ``x -> [p + x]`` of
the corner ``H_p = (1-p) A p``, and carry the chart metric, the operator
norm distance of chart coordinates.  An invertible ``g`` acts on chart
coordinates as the Moebius map ``b -> (z + w b)(x + y b)^{-1}`` built from
its blocks; the corresponding chart transition between two base projections
has the closed form implemented in :func:`chart_transition`.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    InvalidInput,
    NotFinitePoint,
    NotInvertible,
    OutsideDomain,
)
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, op_norm
from .projective import (
    Projection,
    ProjectivePoint,
    classify,
    corner_compress,
)

__all__ = [
    "HpVector",
    "MoebiusMap",
    "chart",
    "chart_inv",
    "d_chart",
    "moebius_domain",
    "moebius_apply",
    "chart_transition",
    "random_hp_vector",
]


class HpVector:
    """Element of the corner ``H_p = (1-p) A p``: a chart coordinate."""

    def __init__(self, mat, context: Projection, tol: Tolerance = DEFAULT_TOL):
        mat = as_matrix(mat, square=True)
        if mat.shape != context.mat.shape:
            raise InvalidInput("coordinate and context dimensions differ")
        p = context.mat
        if np.abs(p @ mat).max() > tol.eq_tol:
            raise InvalidInput("coordinate has a component in p A")
        if np.abs(mat @ (np.eye(p.shape[0]) - p)).max() > tol.eq_tol:
            raise InvalidInput("coordinate has a component in A (1-p)")
        self.mat = mat
        self.context = context

    @cached_property
    def norm(self) -> float:
        return float(np.linalg.norm(self.mat, 2))

    def __repr__(self):
        return f"HpVector(dim={self.mat.shape[0]}, norm={self.norm:.6g})"


def random_hp_vector(p: Projection, rng: np.random.Generator, norm: float = 1.0) -> HpVector:
    """Random chart coordinate scaled to the requested operator norm."""
    n = p.dim
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    x = (np.eye(n, dtype=complex) - p.mat) @ m @ p.mat
    xn = np.linalg.norm(x, 2)
    if xn == 0.0:
        return HpVector(np.zeros_like(p.mat), p)
    return HpVector(x * (norm / xn), p)


def chart(x: HpVector, tol: Tolerance = DEFAULT_TOL) -> ProjectivePoint:
    """The finite point ``[p + x]`` of a chart coordinate."""
    p = x.context
    return classify(p.mat + x.mat, p, tol)


def chart_inv(m: ProjectivePoint, tol: Tolerance = DEFAULT_TOL) -> HpVector:
    """Chart coordinate of a finite point.

    For a representative with blocks (v1; v2) over ``p`` the coordinate is
    ``v2 v1^{-1}``, independent of the representative.

    Raises
    ------
    NotFinitePoint
        If the compression of the representative to ran(p) is singular
        within eq_tol.
    """
    p = m.context
    v = m.rep.mat
    if p.rank == 0:
        return HpVector(np.zeros_like(p.mat), p, tol)
    b = p.range_basis
    v1 = b.conj().T @ v @ b
    if np.linalg.svd(v1, compute_uv=False).min() <= tol.eq_tol:
        raise NotFinitePoint("point lies outside the affine chart at p")
    pc = np.eye(p.dim, dtype=complex) - p.mat
    x = pc @ v @ b @ np.linalg.inv(v1) @ b.conj().T
    return HpVector(x, p, tol)


def d_chart(m: ProjectivePoint, n: ProjectivePoint, tol: Tolerance = DEFAULT_TOL) -> float:
    """Chart metric: norm distance of the chart coordinates of two finite points."""
    return op_norm(chart_inv(m, tol).mat - chart_inv(n, tol).mat)


class MoebiusMap:
    """The action of an invertible ``g`` on chart coordinates.

    Splitting ``g`` into blocks x = p g p, y = p g (1-p), z = (1-p) g p,
    w = (1-p) g (1-p), the map sends ``b`` to ``(z + w b)(x + y b)^{-1}``
    whenever the inverted factor is invertible in the corner ``pAp``.
    """

    def __init__(self, g, context: Projection, tol: Tolerance = DEFAULT_TOL):
        g = as_matrix(g, square=True)
        if g.shape != context.mat.shape:
            raise InvalidInput("matrix and context dimensions differ")
        s = np.linalg.svd(g, compute_uv=False)
        if s.min() <= tol.eq_tol * s.max():
            raise NotInvertible("Moebius maps require an invertible matrix")
        p = context.mat
        pc = np.eye(g.shape[0], dtype=complex) - p
        self.g = g
        self.context = context
        self.block_pp = p @ g @ p
        self.block_pc = p @ g @ pc
        self.block_cp = pc @ g @ p
        self.block_cc = pc @ g @ pc

    def __repr__(self):
        return f"MoebiusMap(dim={self.g.shape[0]}, rank={self.context.rank})"


def moebius_domain(g: MoebiusMap, b: HpVector, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether ``b`` lies in the domain: x + y b invertible in the corner."""
    p = g.context
    t = g.block_pp + g.block_pc @ b.mat
    if p.rank == 0:
        return True
    c = corner_compress(t, p)
    return float(np.linalg.svd(c, compute_uv=False).min()) > tol.eq_tol


def moebius_apply(g: MoebiusMap, b: HpVector, tol: Tolerance = DEFAULT_TOL) -> HpVector:
    """Evaluate the Moebius map: (z + w b)(x + y b)^{-1}.

    Raises
    ------
    OutsideDomain
        If ``b`` fails the domain test.
    """
    if not moebius_domain(g, b, tol):
        raise OutsideDomain("coordinate lies outside the Moebius domain")
    p = g.context
    t = g.block_pp + g.block_pc @ b.mat
    num = g.block_cp + g.block_cc @ b.mat
    bb = p.range_basis
    t_inv = bb @ np.linalg.inv(bb.conj().T @ t @ bb) @ bb.conj().T
    return HpVector(num @ t_inv, p, tol)


def chart_transition(q: Projection, r: Projection, x: HpVector,
                     tol: Tolerance = DEFAULT_TOL) -> HpVector:
    """Transition of the chart coordinate ``x`` at ``r`` to the chart at ``q``.

    The closed form is ``(1-q)(r + x) q (q (r + x) q)^{-1}``, the inverse
    taken in ``qAq``; it is defined whenever the transported point stays in
    the chart ball at ``q``.

    Raises
    ------
    OutsideDomain
        If the bases are at chordal distance 1 or the compression of
        ``r + x`` to ran(q) is singular within eq_tol.
    """
    if np.abs(x.context.mat - r.mat).max() > tol.eq_tol:
        raise InvalidInput("coordinate does not live in the chart at r")
    if q.mat.shape != r.mat.shape:
        raise InvalidInput("projections live in different ambient dimensions")
    if op_norm(q.mat - r.mat) >= 1.0 - tol.eq_tol:
        raise OutsideDomain("chart bases are at chordal distance 1")
    a = r.mat + x.mat
    b = q.range_basis
    c = b.conj().T @ a @ b
    if np.linalg.svd(c, compute_uv=False).min() <= tol.eq_tol:
        raise OutsideDomain("transported point lies outside the chart at q")
    pc = np.eye(q.dim, dtype=complex) - q.mat
    out = pc @ a @ b @ np.linalg.inv(c) @ b.conj().T
    return HpVector(out, q, tol)
