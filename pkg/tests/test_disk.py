import numpy as np
import pytest

from grassgeo import disk as dk
from grassgeo import grassmann as gr
from grassgeo import linalg as la
from grassgeo import moebius as mo
from grassgeo import projective as pj
from grassgeo.errors import InvalidInput, NotEpsUnitary, NotInDisk

from conftest import random_hermitian


def plane_projection():
    return pj.Projection(np.diag([1.0, 0.0]).astype(complex))


def hyperbolic_element(p, r):
    """Cone element whose square root is the hyperbolic rotation by r."""
    x = mo.HpVector(np.array([[0.0, 0.0], [2.0 * r, 0.0]], dtype=complex), p)
    return dk.PositiveEpsUnitary.from_xparam(x)


def commuting_unitary(p, rng):
    b, bc = p.range_basis, p.null_basis
    w = np.zeros_like(p.mat)
    if p.rank:
        w += b @ la.random_unitary(p.rank, rng) @ b.conj().T
    if p.dim - p.rank:
        w += bc @ la.random_unitary(p.dim - p.rank, rng) @ bc.conj().T
    return w


class TestEpsUnitarity:
    def test_identity(self):
        p = pj.random_projection(4, 2, 0)
        assert dk.is_eps_unitary(np.eye(4), p)

    def test_commuting_unitary(self, rng):
        p = pj.random_projection(5, 2, 1)
        assert dk.is_eps_unitary(commuting_unitary(p, rng), p)

    def test_exp_of_anticommuting_hermitian(self, rng):
        p = pj.random_projection(5, 2, 1)
        x = mo.random_hp_vector(p, rng, 0.8)
        u = la.expm(x.mat + x.mat.conj().T)
        assert dk.is_eps_unitary(u, p)

    def test_generic_matrix_fails(self, rng):
        p = pj.random_projection(4, 2, 0)
        assert not dk.is_eps_unitary(la.random_invertible(4, rng), p)

    def test_implies_formula_for_inverse(self, rng):
        p = pj.random_projection(5, 3, 2)
        u = dk.random_eps_unitary(p, rng).mat
        eps = 2 * p.mat - np.eye(5)
        assert np.abs(u @ (eps @ u.conj().T @ eps) - np.eye(5)).max() < 1e-9

    def test_block_conditions(self, rng):
        # an eps-unitary satisfies a*a - b*b = p, d*d - c*c = 1 - p and
        # a*c = b*d for its four blocks over p
        p = pj.random_projection(6, 3, 3)
        u = dk.random_eps_unitary(p, rng).mat
        pm = p.mat
        pc = np.eye(6) - pm
        a, c = pm @ u @ pm, pm @ u @ pc
        b, d = pc @ u @ pm, pc @ u @ pc
        assert np.abs(a.conj().T @ a - b.conj().T @ b - pm).max() < 1e-9
        assert np.abs(d.conj().T @ d - c.conj().T @ c - pc).max() < 1e-9
        assert np.abs(a.conj().T @ c - b.conj().T @ d).max() < 1e-9

    def test_symmetry_object(self):
        p = pj.random_projection(4, 1, 4)
        eps = dk.EpsSymmetry(p)
        assert np.abs(eps.mat @ eps.mat - np.eye(4)).max() < 1e-12
        assert np.abs(eps.mat - eps.mat.conj().T).max() < 1e-12

    def test_wrapper_rejects_generic_matrix(self, rng):
        p = pj.random_projection(4, 2, 0)
        with pytest.raises(NotEpsUnitary):
            dk.EpsUnitary(la.random_invertible(4, rng), p)

    def test_cone_type_rejects_bad_input(self):
        p = plane_projection()
        from grassgeo.errors import NotPositive
        with pytest.raises(NotPositive):
            dk.PositiveEpsUnitary(np.array([[1.0, 1.0], [0.0, 1.0]]), p)
        with pytest.raises(NotPositive):
            dk.PositiveEpsUnitary(np.diag([1.0, -1.0]), p)
        with pytest.raises(NotEpsUnitary):
            dk.PositiveEpsUnitary(np.diag([2.0, 1.0]), p)

    def test_disk_point_requires_matching_preimage(self):
        p = plane_projection()
        lam = hyperbolic_element(p, 0.5)
        other = hyperbolic_element(p, 0.9)
        point = dk.cone_to_disk(lam).point
        with pytest.raises(InvalidInput):
            dk.DiskPoint(point, other)


class TestConeElements:
    def test_scalar_hyperbolic_rotation(self):
        p = plane_projection()
        r = 0.8
        lam = hyperbolic_element(p, r)
        expected_root = np.array([[np.cosh(r), np.sinh(r)], [np.sinh(r), np.cosh(r)]])
        assert np.abs(lam.sqrt - expected_root).max() < 1e-10

    def test_seeded_instance(self):
        p = pj.random_projection(6, 3, 7)
        lam = dk.random_pos_eps_unitary(p, 1.0, 7)
        assert dk.is_eps_unitary(lam.mat, p)
        assert np.linalg.eigvalsh(lam.mat).min() > 0
        assert lam.xparam.norm <= 1.0 + 1e-12

    def test_scale_validation(self):
        p = pj.random_projection(4, 2, 0)
        with pytest.raises(InvalidInput):
            dk.random_pos_eps_unitary(p, 0.0, 1)

    def test_cosh_sinh_blocks(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            lam = dk.random_pos_eps_unitary(p, 1.2, int(rng.integers(2**32)))
            b, bc = p.range_basis, p.null_basis
            xb = bc.conj().T @ lam.xparam.mat @ b
            w, v = np.linalg.eigh(la.herm(xb.conj().T @ xb))
            s = np.sqrt(np.clip(w, 0, None))
            cosh_blk = (v * np.cosh(s)) @ v.conj().T
            assert np.abs(b.conj().T @ lam.mat @ b - cosh_blk).max() < 1e-6

    def test_corner_norm_is_sinh(self, rng):
        # for any eps-unitary the corner norm equals sinh of the positive
        # part's parameter norm (hyperbolic, not trigonometric)
        p = pj.random_projection(5, 2, 8)
        u = dk.random_eps_unitary(p, rng).mat
        absu = dk.PositiveEpsUnitary(la.psd_sqrt(u.conj().T @ u), p)
        pc = np.eye(5) - p.mat
        expected = np.sinh(absu.xparam.norm)
        eps = 2 * p.mat - np.eye(5)
        u_inv = eps @ u.conj().T @ eps
        assert la.op_norm(pc @ u @ p.mat) == pytest.approx(expected, abs=1e-9)
        assert la.op_norm(pc @ u_inv @ p.mat) == pytest.approx(expected, abs=1e-9)
        assert la.op_norm(pc @ u.conj().T @ p.mat) == pytest.approx(expected, abs=1e-9)

    def test_powers_stay_in_cone(self, rng):
        p = pj.random_projection(5, 2, 9)
        lam = dk.random_pos_eps_unitary(p, 1.0, 5)
        eps = 2 * p.mat - np.eye(5)
        for t in (-1.0, 0.5, 2.0, 0.3):
            lt = lam.power(t).mat
            assert np.abs(lt @ eps @ lt - eps).max() < 1e-9

    def test_closure_under_star_inverse_modulus(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            eps = 2 * p.mat - np.eye(n)
            u = dk.random_eps_unitary(p, rng).mat
            v = dk.random_eps_unitary(p, rng).mat
            u_inv = eps @ u.conj().T @ eps
            for w in (u.conj().T, u_inv, la.psd_sqrt(u.conj().T @ u), u @ v):
                assert np.abs(w.conj().T @ eps @ w - eps).max() < 1e-9


class TestDiskCoordinates:
    def test_identity_maps_to_base(self):
        p = pj.random_projection(4, 2, 3)
        lam = dk.PositiveEpsUnitary(np.eye(4, dtype=complex), p)
        m = dk.cone_to_disk(lam)
        assert np.abs(m.point.range.mat - p.mat).max() < 1e-12

    def test_scalar_chart_norm_is_tanh(self):
        p = plane_projection()
        r = 0.9
        m = dk.cone_to_disk(hyperbolic_element(p, r))
        base = dk.base_disk_point(p)
        assert mo.d_chart(m.point, base.point) == pytest.approx(np.tanh(r), abs=1e-10)

    def test_roundtrip(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            lam = dk.random_pos_eps_unitary(p, 1.2, int(rng.integers(2**32)))
            m = dk.cone_to_disk(lam)
            back = dk.disk_to_cone(m)
            assert np.abs(back.mat - lam.mat).max() < 1e-8
            again = dk.cone_to_disk(back)
            assert pj.class_equal(again.point, m.point)

    def test_roundtrip_far_from_center(self):
        # chart norm tanh(2) ~ 0.964; the reconstruction must stay sharp
        p = pj.random_projection(5, 2, 3)
        lam = dk.random_pos_eps_unitary(p, 4.0, 8)
        back = dk.disk_to_cone(dk.cone_to_disk(lam))
        scale = np.linalg.norm(lam.mat, 2)
        assert np.abs(back.mat - lam.mat).max() < 1e-10 * scale

    def test_outside_disk_rejected(self, rng):
        p = pj.random_projection(4, 2, 6)
        x = mo.random_hp_vector(p, rng, 1.5)
        far = mo.chart(x)
        with pytest.raises(NotInDisk):
            dk.disk_to_cone(far)

    def test_non_finite_point_rejected(self):
        p = plane_projection()
        q = pj.Projection(np.diag([0.0, 1.0]).astype(complex))
        m = pj.point_from_projection(q, p)
        with pytest.raises(NotInDisk):
            dk.disk_to_cone(m)


class TestDiskMetrics:
    def test_rho_vanishes_on_diagonal(self):
        p = pj.random_projection(4, 2, 3)
        m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, 1))
        assert dk.rho(m, m) < 1e-12

    def test_scalar_rho_is_sinh(self):
        p = plane_projection()
        r = 0.75
        m = dk.cone_to_disk(hyperbolic_element(p, r))
        base = dk.base_disk_point(p)
        assert dk.rho(m, base) == pytest.approx(np.sinh(r), abs=1e-10)

    def test_rho_at_base_is_sinh_of_half_parameter(self, rng):
        # the square-root representative has parameter xparam / 2
        for seed in range(8):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.4, seed))
            base = dk.base_disk_point(p)
            assert dk.rho(m, base) == pytest.approx(
                np.sinh(m.lam.xparam.norm / 2), abs=1e-9)

    def test_rho_reduction_and_symmetry(self, rng):
        for _ in range(15):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            k = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            r1 = dk.rho(m, k)
            assert r1 == pytest.approx(dk.rho(k, m), abs=1e-10)
            pc = np.eye(n) - p.mat
            alt = la.op_norm(pc @ m.lam.sqrt @ k.lam.inv_sqrt @ p.mat)
            assert r1 == pytest.approx(alt, abs=1e-10)

    def test_scalar_pseudo_chordal_is_tanh(self):
        p = plane_projection()
        r = 0.75
        m = dk.cone_to_disk(hyperbolic_element(p, r))
        base = dk.base_disk_point(p)
        assert dk.d_pseudo_chordal(m, base) == pytest.approx(np.tanh(r), abs=1e-10)

    def test_pseudo_chordal_equals_chart_norm_at_base(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            base = dk.base_disk_point(p)
            assert dk.d_pseudo_chordal(m, base) == pytest.approx(
                mo.d_chart(m.point, base.point), abs=1e-9)

    def test_unit_hyperbolic_non_euclidean_distance(self):
        p = plane_projection()
        m = dk.cone_to_disk(hyperbolic_element(p, 1.0))
        base = dk.base_disk_point(p)
        assert dk.d_pseudo_chordal(m, base) == pytest.approx(np.tanh(1.0), abs=1e-12)
        assert dk.d_non_euclidean(m, base) == pytest.approx(1.0, abs=1e-10)

    def test_scalar_cone_distance(self):
        p = plane_projection()
        r = 0.6
        m = dk.cone_to_disk(hyperbolic_element(p, r))
        base = dk.base_disk_point(p)
        assert dk.d_cone(m, base) == pytest.approx(2.0 * r, abs=1e-10)
        assert dk.d_cone(m, base) == pytest.approx(m.lam.xparam.norm, abs=1e-10)

    def test_twice_non_euclidean_equals_cone_distance(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            k = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            assert 2 * dk.d_non_euclidean(m, k) == pytest.approx(dk.d_cone(m, k), abs=1e-8)


class TestConeGeodesics:
    def test_endpoints(self):
        p = pj.random_projection(5, 2, 4)
        mu = dk.random_pos_eps_unitary(p, 1.0, 1)
        nu = dk.random_pos_eps_unitary(p, 1.0, 2)
        assert np.abs(dk.eps_geodesic(mu, nu, 0.0).mat - nu.mat).max() < 1e-10
        assert np.abs(dk.eps_geodesic(mu, nu, 1.0).mat - mu.mat).max() < 1e-10

    def test_constant_when_equal(self):
        p = pj.random_projection(5, 2, 4)
        mu = dk.random_pos_eps_unitary(p, 1.0, 1)
        assert np.abs(dk.eps_geodesic(mu, mu, 0.4).mat - mu.mat).max() < 1e-10

    def test_stays_in_cone(self):
        p = pj.random_projection(5, 2, 4)
        mu = dk.random_pos_eps_unitary(p, 1.0, 1)
        nu = dk.random_pos_eps_unitary(p, 1.0, 2)
        eps = 2 * p.mat - np.eye(5)
        for t in np.linspace(0, 1, 50):
            gam = dk.eps_geodesic(mu, nu, float(t)).mat
            assert np.abs(gam @ eps @ gam - eps).max() < 1e-9

    def test_midpoint_equidistant(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            mu = dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32)))
            nu = dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32)))
            total = dk.d_cone(mu, nu)
            mid = dk.eps_geodesic(mu, nu, 0.5)
            assert dk.d_cone(mid, mu) == pytest.approx(0.5 * total, abs=1e-8)
            assert dk.d_cone(mid, nu) == pytest.approx(0.5 * total, abs=1e-8)

    def test_distance_linear_along_curve(self, rng):
        p = pj.random_projection(6, 3, 5)
        mu = dk.random_pos_eps_unitary(p, 1.0, 3)
        nu = dk.random_pos_eps_unitary(p, 1.0, 4)
        total = dk.d_cone(mu, nu)
        for t in (0.2, 0.35, 0.8):
            gam = dk.eps_geodesic(mu, nu, t)
            assert dk.d_cone(nu, gam) == pytest.approx(t * total, abs=1e-8)

    def test_discretized_length_matches_distance(self):
        p = pj.random_projection(5, 2, 4)
        mu = dk.random_pos_eps_unitary(p, 1.0, 1)
        nu = dk.random_pos_eps_unitary(p, 1.0, 2)
        samples = dk.eps_geodesic_samples(mu, nu, np.linspace(0, 1, 2000))
        assert dk.cone_polyline_length(samples) == pytest.approx(
            dk.d_cone(mu, nu), abs=1e-4)

    def test_perturbed_paths_not_shorter(self, rng):
        p = pj.random_projection(5, 2, 4)
        mu = dk.random_pos_eps_unitary(p, 1.0, 1)
        nu = dk.random_pos_eps_unitary(p, 1.0, 2)
        dist = dk.d_cone(mu, nu)
        ts = np.linspace(0, 1, 2000)
        eps = 2 * p.mat - np.eye(5)
        for _ in range(5):
            h = random_hermitian(5, rng)
            h *= rng.uniform(0.05, 0.4) / np.linalg.norm(h, 2)
            path = dk.cone_perturbed_path(mu, nu, h, ts)
            assert np.abs(path[0] - nu.mat).max() < 1e-10
            assert np.abs(path[-1] - mu.mat).max() < 1e-10
            residual = np.abs(path @ eps @ path - eps).max()
            assert residual < 1e-8
            assert dk.cone_polyline_length(path) >= dist - 1e-6


class TestDiskAction:
    def test_identity_action(self):
        p = pj.random_projection(4, 2, 2)
        m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, 1))
        out = dk.eps_action(np.eye(4), m)
        assert pj.class_equal(out.point, m.point)

    def test_commuting_unitary_fixes_base(self, rng):
        p = pj.random_projection(5, 2, 3)
        base = dk.base_disk_point(p)
        out = dk.eps_action(commuting_unitary(p, rng), base)
        assert pj.class_equal(out.point, base.point)

    def test_matches_left_multiplication_route(self, rng):
        p = pj.random_projection(5, 2, 3)
        m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, 9))
        u = dk.random_eps_unitary(p, rng)
        moved = dk.eps_action(u, m)
        direct = pj.classify(u.mat @ m.lam.sqrt @ p.mat, p)
        assert pj.class_equal(moved.point, direct)

    def test_group_law(self, rng):
        p = pj.random_projection(5, 2, 3)
        m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 0.8, 9))
        u = dk.random_eps_unitary(p, rng)
        v = dk.random_eps_unitary(p, rng)
        lhs = dk.eps_action(u.mat @ v.mat, m)
        rhs = dk.eps_action(u, dk.eps_action(v, m))
        assert pj.class_equal(lhs.point, rhs.point)
        assert np.abs(lhs.lam.mat - rhs.lam.mat).max() < 1e-8

    def test_metrics_invariant(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            k = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, int(rng.integers(2**32))))
            u = dk.random_eps_unitary(p, rng)
            um, uk = dk.eps_action(u, m), dk.eps_action(u, k)
            for metric in (dk.rho, dk.d_pseudo_chordal, dk.d_non_euclidean, dk.d_cone):
                assert metric(um, uk) == pytest.approx(metric(m, k), abs=1e-8)

    def test_rejects_non_eps_unitary(self, rng):
        p = pj.random_projection(4, 2, 2)
        m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 1.0, 1))
        with pytest.raises(NotEpsUnitary):
            dk.eps_action(la.random_invertible(4, rng), m)


class TestDiskMembership:
    def test_base_point(self):
        p = pj.random_projection(4, 2, 1)
        assert dk.in_disk(pj.classify(p.mat, p))

    def test_small_angle_inside(self, rng):
        p = pj.random_projection(5, 2, 2)
        q = gr.geodesic(p, gr.random_tangent(p, rng, 0.6), 1.0)
        assert dk.in_disk(pj.point_from_projection(q, p))

    def test_large_angle_outside(self, rng):
        p = pj.random_projection(5, 2, 2)
        q = gr.geodesic(p, gr.random_tangent(p, rng, 0.9), 1.0)
        assert not dk.in_disk(pj.point_from_projection(q, p))

    def test_boundary_margin_outside(self, rng):
        p = pj.random_projection(4, 2, 3)
        q = gr.geodesic(p, gr.random_tangent(p, rng, np.pi / 4 + 1e-3), 1.0)
        assert not dk.in_disk(pj.point_from_projection(q, p))

    def test_characterizations_agree(self, rng):
        for _ in range(60):
            n = int(rng.integers(2, 9))
            p = pj.random_projection(n, int(rng.integers(1, n)), int(rng.integers(2**32)))
            inside = bool(rng.uniform() < 0.5)
            theta = (rng.uniform(1e-3, np.pi / 4 - 1e-3) if inside
                     else rng.uniform(np.pi / 4 + 1e-3, np.pi / 2 - 0.01))
            q = gr.geodesic(p, gr.random_tangent(p, rng, theta), 1.0)
            m = pj.point_from_projection(q, p)
            base = pj.classify(p.mat, p)
            by_chart = dk.in_disk(m)
            by_chordal = gr.d_chordal(m, base) < np.sqrt(2) / 2
            by_spherical = gr.d_spherical(m, base) < np.pi / 4
            assert by_chart == by_chordal == by_spherical == inside

    def test_every_cone_image_is_inside(self, rng):
        p = pj.random_projection(5, 2, 11)
        for seed in range(10):
            m = dk.cone_to_disk(dk.random_pos_eps_unitary(p, 2.0, seed))
            assert dk.in_disk(m.point)
