"""Chordal and spherical metrics, geodesics and projectivities.

The chordal distance between two points is the operator norm distance of
their range projections.  Below chordal distance 1 the rectifiable metric
has the closed form arcsin of the chordal distance, realized by the unique
geodesic ``t -> exp(t z) p exp(-t z)`` with ``z`` anti-Hermitian and
off-diagonal with respect to ``p``.

A tangent ``z`` exchanges ran(p) with its complement, so ``exp(z)`` has the
classical cos/sinc block structure over the smaller of the two subspaces.
The curve machinery below exploits that structure to sample long paths in
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import linalg
from .errors import (
    InvalidCurve,
    InvalidInput,
    InvalidTangent,
    NotInvertible,
    OutOfRange,
    ResidualError,
)
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, herm, op_norm
from .projective import Projection, ProjectivePoint, random_offdiag_antiherm

__all__ = [
    "TangentVector",
    "Curve",
    "d_chordal",
    "d_spherical",
    "geodesic",
    "geodesic_log",
    "curve_length",
    "projectivity",
    "geodesic_curve",
    "perturbed_curve",
    "tangent_path_lengths",
    "random_tangent",
]


class TangentVector:
    """Velocity of a Grassmann geodesic at its base projection.

    Anti-Hermitian and off-diagonal: ``p z p = 0`` and ``(1-p) z (1-p) = 0``,
    equivalently ``p z = z (1-p)``.
    """

    def __init__(self, mat, context: Projection, tol: Tolerance = DEFAULT_TOL):
        mat = as_matrix(mat, square=True)
        if mat.shape != context.mat.shape:
            raise InvalidTangent("tangent and context dimensions differ")
        if np.abs(mat + mat.conj().T).max() > tol.eq_tol:
            raise InvalidTangent("tangent is not anti-Hermitian within eq_tol")
        p = context.mat
        pc = np.eye(p.shape[0], dtype=complex) - p
        if np.abs(p @ mat @ p).max() > tol.eq_tol or np.abs(pc @ mat @ pc).max() > tol.eq_tol:
            raise InvalidTangent("tangent has diagonal blocks exceeding eq_tol")
        self.mat = mat
        self.context = context

    @cached_property
    def norm(self) -> float:
        return float(np.linalg.norm(self.mat, 2))

    def __repr__(self):
        return f"TangentVector(dim={self.mat.shape[0]}, norm={self.norm:.6g})"


@dataclass
class Curve:
    """A projection-valued curve on [0, 1], sampled at a fixed resolution.

    ``sample`` maps a scalar parameter to a :class:`Projection`; samplers
    produced by this module also accept a 1-d array of parameters and then
    return the stacked raw matrices, which :func:`curve_length` uses to
    avoid per-sample Python overhead.
    """

    sample: Callable
    resolution: int = 2000

    def __post_init__(self):
        if self.resolution < 2:
            raise InvalidInput("curve resolution must be at least 2")


def random_tangent(p: Projection, rng: np.random.Generator, norm: float = 1.0) -> TangentVector:
    """Random tangent at ``p`` scaled to the requested operator norm."""
    z = random_offdiag_antiherm(p, rng)
    zn = np.linalg.norm(z, 2)
    if zn == 0.0:
        return TangentVector(np.zeros_like(p.mat), p)
    return TangentVector(z * (norm / zn), p)


def _check_context(m: ProjectivePoint, n: ProjectivePoint, tol: Tolerance):
    if m.range.mat.shape != n.range.mat.shape:
        raise InvalidInput("points live in different ambient dimensions")
    if np.abs(m.context.mat - n.context.mat).max() > tol.eq_tol:
        raise InvalidInput("points have different context projections")


def d_chordal(m: ProjectivePoint, n: ProjectivePoint, tol: Tolerance = DEFAULT_TOL) -> float:
    """Chordal distance: operator norm of the difference of range projections."""
    _check_context(m, n, tol)
    return op_norm(m.range.mat - n.range.mat)


def d_spherical(m: ProjectivePoint, n: ProjectivePoint, tol: Tolerance = DEFAULT_TOL) -> float:
    """Geodesic (spherical) distance arcsin(d_chordal), valid below 1.

    Raises
    ------
    OutOfRange
        If the chordal distance reaches 1 - eq_tol; the closed form is only
        guaranteed below chordal distance 1.
    """
    d = d_chordal(m, n, tol)
    if d >= 1.0 - tol.eq_tol:
        raise OutOfRange("chordal distance reaches 1; arcsin form not applicable")
    return float(np.arcsin(min(d, 1.0)))


def geodesic(p: Projection, z: TangentVector, t: float, tol: Tolerance = DEFAULT_TOL) -> Projection:
    """Point of the geodesic through ``p`` with velocity ``z`` at time ``t``."""
    if np.abs(z.context.mat - p.mat).max() > tol.eq_tol:
        raise InvalidTangent("tangent context differs from the base projection")
    u = linalg.expm(t * z.mat)
    cols = u @ p.range_basis
    return Projection(cols @ cols.conj().T, tol, _basis=cols)


def geodesic_log(p: Projection, q: Projection, tol: Tolerance = DEFAULT_TOL) -> TangentVector:
    """The unique tangent ``z`` with ``exp(z) p exp(-z) = q`` and norm < pi/2.

    The product of the two symmetries ``(2q - 1)(2p - 1)`` equals
    ``exp(2z)`` and is unitary with spectrum avoiding -1 exactly when the
    chordal distance is below 1, so half of its principal logarithm inverts
    the exponential.  The result is checked against its defining equation.

    Raises
    ------
    InvalidInput
        If the ranks differ.
    OutOfRange
        If the chordal distance reaches 1 - eq_tol.
    ResidualError
        If the reconstructed endpoint misses ``q`` by more than geo_tol.
    """
    if p.mat.shape != q.mat.shape:
        raise InvalidInput("projections live in different ambient dimensions")
    if p.rank != q.rank:
        raise InvalidInput("projections have different ranks")
    if op_norm(p.mat - q.mat) >= 1.0 - tol.eq_tol:
        raise OutOfRange("chordal distance reaches 1; no unique short geodesic")
    n = p.mat.shape[0]
    eye = np.eye(n, dtype=complex)
    w = (2 * q.mat - eye) @ (2 * p.mat - eye)
    z = 0.5 * linalg.log_unitary(w, tol)
    zvec = TangentVector(z, p, tol)
    endpoint = geodesic(p, zvec, 1.0, tol)
    if np.abs(endpoint.mat - q.mat).max() > tol.geo_tol:
        raise ResidualError("geodesic log failed to reproduce the endpoint")
    return zvec


def _sample_matrices(curve: Curve, ts: np.ndarray) -> np.ndarray:
    """Evaluate a curve on a parameter grid, tolerating scalar-only samplers."""
    try:
        out = np.asarray(curve.sample(ts))
        if out.ndim == 3 and out.shape[0] == ts.size:
            return out.astype(complex)
    except Exception:
        pass
    mats = []
    for t in ts:
        q = curve.sample(float(t))
        mats.append(q.mat if isinstance(q, Projection) else np.asarray(q, dtype=complex))
    return np.stack(mats)


def curve_length(curve: Curve, tol: Tolerance = DEFAULT_TOL) -> float:
    """Chordal length of a curve on the uniform grid of ``curve.resolution``.

    Sums the chordal distances of consecutive samples, the partial sums that
    define curve length; the value is non-decreasing in the resolution and
    converges to the integral of the speed for C^1 curves.

    Raises
    ------
    InvalidCurve
        If a sample fails the projection invariants within eq_tol.
    """
    if curve.resolution < 2:
        raise InvalidInput("resolution must be at least 2")
    ts = np.linspace(0.0, 1.0, curve.resolution)
    qs = _sample_matrices(curve, ts)
    if not np.all(np.isfinite(qs.view(float))):
        raise InvalidCurve("curve sample has non-finite entries")
    # Frobenius residuals bound the operator-norm residuals from above, so
    # this check is conservative; samples near the tolerance are re-examined
    # with the exact norm.
    herm_res = np.linalg.norm(qs - qs.conj().swapaxes(-1, -2), axis=(-2, -1))
    idem_res = np.linalg.norm(qs @ qs - qs, axis=(-2, -1))
    for res in (herm_res, idem_res):
        bad = np.nonzero(res > tol.eq_tol)[0]
        for i in bad:
            q = qs[i]
            if max(op_norm(q - q.conj().T), op_norm(q @ q - q)) > tol.eq_tol:
                raise InvalidCurve(f"sample {i} violates the projection invariants")
    sym = (qs + qs.conj().swapaxes(-1, -2)) / 2
    diffs = sym[1:] - sym[:-1]
    dists = np.abs(np.linalg.eigvalsh(diffs)).max(axis=-1)
    return float(dists.sum())


def projectivity(g, q: Projection, tol: Tolerance = DEFAULT_TOL) -> Projection:
    """Image of ``q`` under the projectivity of an invertible ``g``.

    Returns the orthogonal projection onto the column space of ``g q``,
    computed from the idempotent ``r = g q g^{-1}`` as
    ``r r* (1 + (r - r*)* (r - r*))^{-1}``; the inverted factor is bounded
    below by 1, so no conditioning assumptions are needed.  For unitary
    ``g`` this reduces to ``g q g*``.
    """
    g = as_matrix(g, square=True)
    if g.shape != q.mat.shape:
        raise InvalidInput("element and projection dimensions differ")
    s = np.linalg.svd(g, compute_uv=False)
    if s.min() <= tol.eq_tol * s.max():
        raise NotInvertible("matrix is singular within eq_tol")
    r = g @ q.mat @ np.linalg.inv(g)
    d = r - r.conj().T
    m = np.eye(g.shape[0], dtype=complex) + d.conj().T @ d
    out = np.linalg.solve(m.conj().T, (r @ r.conj().T).conj().T).conj().T
    return Projection(herm(out), tol)


# ---------------------------------------------------------------------------
# curve factories and the batched length engine
# ---------------------------------------------------------------------------


def _side_blocks(p: Projection):
    """Bases (small, big, flipped) with the small side of minimal dimension.

    exp(z) maps ran(p) and its complement into themselves only jointly; the
    cos/sinc blocks are computed over whichever side is smaller.  When the
    kernel side is used, sampled projections are complements.
    """
    if p.rank <= p.dim - p.rank:
        return p.range_basis, p.null_basis, False
    return p.null_basis, p.range_basis, True


def _cos_sinc_blocks(a: np.ndarray):
    """cos and sinc blocks of exp for stacked off-diagonal generators.

    For ``z`` with block ``a`` (big-by-small), the isometry onto the moved
    small side has top block cos(|a|) and bottom block a sinc(|a|), where
    |a| = (a* a)^(1/2).
    """
    m = a.conj().swapaxes(-1, -2) @ a
    w, v = np.linalg.eigh((m + m.conj().swapaxes(-1, -2)) / 2)
    s = np.sqrt(np.clip(w, 0.0, None))
    vh = v.conj().swapaxes(-1, -2)
    top = (v * np.cos(s)[..., None, :]) @ vh
    sinc = (v * np.sinc(s / np.pi)[..., None, :]) @ vh
    return top, a @ sinc


def _tangent_block(z_mat: np.ndarray, small: np.ndarray, big: np.ndarray) -> np.ndarray:
    return big.conj().T @ z_mat @ small


def _path_sampler(p: Projection, z_mat: np.ndarray, w_mat: np.ndarray | None,
                  tol: Tolerance = DEFAULT_TOL) -> Callable:
    """Sampler for t -> exp(z(t)) p exp(-z(t)), z(t) = t z + t (1-t) w."""
    small, big, flipped = _side_blocks(p)
    n = p.dim
    if small.shape[1] == 0:
        const = p.mat.copy()

        def sampler_const(t):
            ts = np.atleast_1d(np.asarray(t, dtype=float))
            if np.ndim(t) == 0:
                return Projection(const, tol)
            return np.broadcast_to(const, (ts.size, n, n)).copy()

        return sampler_const

    a_z = _tangent_block(z_mat, small, big)
    a_w = None if w_mat is None else _tangent_block(w_mat, small, big)

    def sampler(t):
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        a = ts[:, None, None] * a_z
        if a_w is not None:
            a = a + (ts * (1.0 - ts))[:, None, None] * a_w
        top, bot = _cos_sinc_blocks(a)
        cols = small @ top + big @ bot
        qs = cols @ cols.conj().swapaxes(-1, -2)
        if flipped:
            qs = np.eye(n, dtype=complex) - qs
        if np.ndim(t) == 0:
            basis = None if flipped else cols[0]
            return Projection(qs[0], tol, _basis=basis)
        return qs

    return sampler


def geodesic_curve(p: Projection, z: TangentVector, resolution: int = 2000,
                   tol: Tolerance = DEFAULT_TOL) -> Curve:
    """The geodesic through ``p`` with velocity ``z`` as a sampled curve."""
    return Curve(_path_sampler(p, z.mat, None, tol), resolution)


def perturbed_curve(p: Projection, z: TangentVector, w: TangentVector,
                    resolution: int = 2000, tol: Tolerance = DEFAULT_TOL) -> Curve:
    """The path exp(z(t)) p exp(-z(t)) with z(t) = t z + t (1-t) w.

    Shares the geodesic's endpoints for every perturbation ``w``, which makes
    it the comparison family for minimality checks.
    """
    return Curve(_path_sampler(p, z.mat, w.mat, tol), resolution)


def tangent_path_lengths(p: Projection, z: TangentVector, ws, resolution: int = 2000):
    """Discretized lengths of the geodesic and its perturbed companions.

    Vectorizes the whole family ``z(t) = t z + t (1-t) w`` over all
    perturbations at once; consecutive chordal distances are obtained from
    principal angles, ``d = sqrt(1 - sigma_min(C_j* C_{j+1})^2)``, without
    forming the ambient projections.

    Returns
    -------
    (float, ndarray)
        Length of the geodesic, then one length per perturbation.
    """
    if resolution < 2:
        raise InvalidInput("resolution must be at least 2")
    small, big, _ = _side_blocks(p)
    k = small.shape[1]
    n_paths = len(ws)
    if k == 0:
        return 0.0, np.zeros(n_paths)
    ts = np.linspace(0.0, 1.0, resolution)
    a_z = _tangent_block(z.mat, small, big)
    blocks = [np.zeros_like(a_z)] + [_tangent_block(w.mat, small, big) for w in ws]
    a_ws = np.stack(blocks)
    a = ts[None, :, None, None] * a_z + (ts * (1.0 - ts))[None, :, None, None] * a_ws[:, None]
    flat = a.reshape(-1, *a.shape[2:])
    top, bot = _cos_sinc_blocks(flat)
    top = top.reshape(n_paths + 1, resolution, k, k)
    bot = bot.reshape(n_paths + 1, resolution, big.shape[1], k)
    g = (top[:, :-1].conj().swapaxes(-1, -2) @ top[:, 1:]
         + bot[:, :-1].conj().swapaxes(-1, -2) @ bot[:, 1:])
    gram = g.conj().swapaxes(-1, -2) @ g
    smin2 = np.clip(np.linalg.eigvalsh(gram)[..., 0], 0.0, 1.0)
    lengths = np.sqrt(1.0 - smin2).sum(axis=1)
    return float(lengths[0]), lengths[1:]
