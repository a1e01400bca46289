import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp
from scipy.special import i0

from se2gabor.angular import AngularSignal, angle_grid, harmonic, inner_product, norm, rotate
from se2gabor.se2 import (
    IDENTITY,
    GroupElement,
    algebra_x1,
    algebra_x2,
    compose,
    exp_flow,
    fiducial,
    inverse,
    represent,
    uncertainty_residual,
)

finite = st.floats(-10, 10, allow_nan=False)
angle = st.floats(0, 2 * np.pi, allow_nan=False)


def group_close(a, b, tol=1e-12):
    dq = max(abs(a.q[0] - b.q[0]), abs(a.q[1] - b.q[1]))
    dth = abs(np.mod(a.theta - b.theta + np.pi, 2 * np.pi) - np.pi)
    return dq < tol and dth < tol


class TestGroupLaw:
    def test_identity(self):
        g = GroupElement((1.2, -0.7), 0.9)
        assert group_close(compose(IDENTITY, g), g)
        assert group_close(compose(g, IDENTITY), g)

    def test_inverse(self):
        g = GroupElement((1.2, -0.7), 0.9)
        assert group_close(compose(g, inverse(g)), IDENTITY)
        assert group_close(compose(inverse(g), g), IDENTITY)

    def test_quarter_turn_example(self):
        a = GroupElement((1.0, 0.0), np.pi / 2)
        b = GroupElement((1.0, 0.0), 0.0)
        out = compose(a, b)
        assert out.q[0] == pytest.approx(1.0, abs=1e-15)
        assert out.q[1] == pytest.approx(1.0, abs=1e-15)
        assert out.theta == pytest.approx(np.pi / 2)

    @given(q1=finite, q2=finite, t1=angle, q3=finite, q4=finite, t2=angle,
           q5=finite, q6=finite, t3=angle)
    @settings(max_examples=50, deadline=None)
    def test_associativity(self, q1, q2, t1, q3, q4, t2, q5, q6, t3):
        a = GroupElement((q1, q2), t1)
        b = GroupElement((q3, q4), t2)
        c = GroupElement((q5, q6), t3)
        assert group_close(compose(compose(a, b), c), compose(a, compose(b, c)), tol=1e-11)

    def test_theta_reduced(self):
        assert GroupElement((0, 0), 7.0).theta == pytest.approx(7.0 - 2 * np.pi)


class TestExpFlow:
    def test_zero_time(self):
        g = GroupElement((0.3, 0.4), 1.1)
        assert group_close(exp_flow(g, 0.0, 2.0), g)

    def test_straight_segment(self):
        out = exp_flow(GroupElement((2.0, 3.0), 0.0), 1.0, 0.0)
        assert out.q == pytest.approx((2.0, 4.0))
        assert out.theta == 0.0

    def test_half_turn_against_ode_oracle(self):
        # oracle: integrate qdot = (-sin th, cos th), thdot = k from the origin
        def rhs(_, y):
            return [-np.sin(y[2]), np.cos(y[2]), 1.0]

        sol = solve_ivp(rhs, (0, np.pi), [0.0, 0.0, 0.0], rtol=1e-11, atol=1e-12)
        closed = exp_flow(IDENTITY, np.pi, 1.0)
        assert closed.q[0] == pytest.approx(sol.y[0, -1], abs=1e-8)
        assert closed.q[1] == pytest.approx(sol.y[1, -1], abs=1e-8)
        assert closed.q == pytest.approx((-2.0, 0.0), abs=1e-12)
        assert closed.theta == pytest.approx(np.pi)

    @given(t=st.floats(-3, 3), s=st.floats(-3, 3), k=st.floats(-2, 2))
    @settings(max_examples=40, deadline=None)
    def test_one_parameter_subgroup(self, t, s, k):
        base = GroupElement((0.5, -1.0), 0.7)
        a = exp_flow(exp_flow(base, t, k), s, k)
        b = exp_flow(base, t + s, k)
        assert group_close(a, b, tol=1e-11)

    def test_small_k_continuity(self):
        # k -> 0 limit approaches the straight-line branch
        straight = exp_flow(IDENTITY, 1.0, 0.0)
        bent = exp_flow(IDENTITY, 1.0, 1e-8)
        assert abs(bent.q[0] - straight.q[0]) < 1e-7
        assert abs(bent.q[1] - straight.q[1]) < 1e-7


class TestRepresentation:
    def test_identity(self, rng):
        u = AngularSignal(rng.normal(size=64) + 1j * rng.normal(size=64))
        out = represent(1.0, 0.0, IDENTITY, u)
        assert np.abs(out.values - u.values).max() < 1e-15

    def test_pure_rotation(self, rng):
        u = AngularSignal(rng.normal(size=64))
        g = GroupElement((0.0, 0.0), 0.77)
        out = represent(1.0, 0.0, g, u)
        assert np.abs(out.values - rotate(u, 0.77).values).max() < 1e-14

    def test_homomorphism(self, rng):
        coeffs = rng.normal(size=9) + 1j * rng.normal(size=9)
        phis = angle_grid(128)
        u = AngularSignal(sum(c * np.exp(1j * m * phis)
                              for m, c in zip(range(-4, 5), coeffs)))
        omega = 0.7
        g1 = GroupElement((0.9, -1.4), 1.3)
        g2 = GroupElement((-0.2, 2.1), 2.6)
        lhs = represent(omega, 0.0, g1, represent(omega, 0.0, g2, u))
        rhs = represent(omega, 0.0, compose(g1, g2), u)
        assert np.abs(lhs.values - rhs.values).max() < 1e-10 * np.abs(rhs.values).max()

    def test_unitarity(self, rng):
        coeffs = rng.normal(size=9) + 1j * rng.normal(size=9)
        phis = angle_grid(128)
        u = AngularSignal(sum(c * np.exp(1j * m * phis)
                              for m, c in zip(range(-4, 5), coeffs)))
        g = GroupElement((3.1, -0.4), 0.9)
        assert norm(represent(2.0, 0.0, g, u)) == pytest.approx(norm(u), rel=1e-11)

    def test_rotated_family_parameter(self, rng):
        # phi0 shifts the phase profile, not the rotation action
        u = AngularSignal(rng.normal(size=64))
        g = GroupElement((1.0, 0.0), 0.0)
        phis = angle_grid(64)
        out = represent(2.0, 0.6, g, u)
        expected = np.exp(-2j * np.cos(phis - 0.6)) * u.values
        assert np.abs(out.values - expected).max() < 1e-14


class TestFiducial:
    def test_flat_state(self):
        f = fiducial(0.0, 1.0, 0.0, 64)
        assert np.abs(f.signal.values - (2 * np.pi) ** -0.5).max() < 1e-13

    def test_peak_value_oracle(self):
        # oracle: N = (2 pi I0(2))^{-1/2}, peak N*e at phi = 0
        f = fiducial(1.0, 1.0, 0.0, 128)
        n_oracle = (2 * np.pi * i0(2.0)) ** -0.5
        assert f.signal.values[0].real == pytest.approx(n_oracle * np.e, rel=1e-12)

    @pytest.mark.parametrize("lam_om", [0.5, 1.0, 2.0])
    def test_unit_norm(self, lam_om):
        f = fiducial(lam_om, 2.0, 0.3, 256)
        assert norm(f.signal) == pytest.approx(1.0, abs=1e-10)

    def test_positive_even_peaked(self):
        f = fiducial(1.5, 1.0, np.pi / 3, 96)
        vals = f.signal.values.real
        assert (vals > 0).all()
        peak = np.argmax(vals)
        assert angle_grid(96)[peak] == pytest.approx(np.pi / 3, abs=2 * np.pi / 96)
        # even about phi0: compare symmetric samples
        assert vals[(peak + 5) % 96] == pytest.approx(vals[(peak - 5) % 96], rel=1e-10)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            fiducial(-0.5, 1.0)
        with pytest.raises(ValueError):
            fiducial(1.0, 0.0)


class TestAlgebra:
    def test_x1_on_constant(self):
        u = AngularSignal(np.full(64, 2.0 + 0j))
        out = algebra_x1(3.0, 0.2, u)
        phis = angle_grid(64)
        assert np.abs(out.values - 6j * np.sin(phis - 0.2)).max() < 1e-13

    def test_x2_on_constant(self):
        u = AngularSignal(np.ones(64))
        assert np.abs(algebra_x2(u).values).max() < 1e-14

    def test_flow_derivative_matches_generator(self):
        # centered differences of rep(exp_flow(e, t, 0)) reproduce the
        # translation generator; with this package's sign conventions the
        # derivative equals minus the x1 operator
        omega = 1.7
        phis = angle_grid(128)
        u = AngularSignal(np.exp(np.cos(phis)))
        gen = algebra_x1(omega, 0.0, u).values

        def rep_at(t):
            return represent(omega, 0.0, exp_flow(IDENTITY, t, 0.0), u).values

        gaps = []
        for t in (1e-2, 5e-3):
            deriv = (rep_at(t) - rep_at(-t)) / (2 * t)
            gaps.append(np.abs(deriv + gen).max())
        assert gaps[0] < 1e-3
        # O(t^2): halving t divides the gap by about 4
        assert gaps[0] / gaps[1] == pytest.approx(4.0, abs=0.5)


class TestUncertainty:
    def test_fiducial_residual_small(self):
        assert uncertainty_residual(fiducial(1.0, 1.0, 0.0, 128)) < 1e-8

    def test_constant_signal(self):
        # derivative term vanishes; residual is ||sin|| = sqrt(pi)
        sig = AngularSignal(np.ones(128))
        assert uncertainty_residual(sig, 1.0) == pytest.approx(np.sqrt(np.pi), rel=1e-12)

    def test_rotated_fiducial(self):
        assert uncertainty_residual(fiducial(2.0, 1.0, np.pi / 3, 256)) < 1e-6

    def test_spectral_convergence(self):
        # residual at least halves with each doubling of the grid (far
        # better in practice, until it hits the rounding floor)
        values = [uncertainty_residual(fiducial(6.0, 1.0, 0.0, n))
                  for n in (16, 32, 64)]
        assert values[1] < 0.5 * values[0]
        assert values[2] < 0.5 * values[1]
        assert values[2] < 1e-12

    def test_requires_lam_omega_for_raw_signal(self):
        with pytest.raises(ValueError):
            uncertainty_residual(harmonic(1, 64))
