import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betaplane import (
    GridSpec,
    RealField,
    asymptotic_deficit,
    boundary_mass,
    dispersive_scan,
    fit_decay,
    gauss_kernel,
    heat_propagate,
    kernel_K,
    lp_bank,
    sobolev_norm,
    strichartz_quadrature,
)
from betaplane.analysis import DecayMonitor, branch_windows, is_nonincreasing
from betaplane.errors import AnalysisPreconditionError
from betaplane.evolution import linear_trajectory
from betaplane.initial import gaussian, random_band

T_UNIFORM = np.arange(5.0, 50.0 + 1e-9, 0.5)


class TestFitDecay:
    def test_exact_power_law(self):
        t = np.geomspace(1, 100, 30)
        fit = fit_decay(t, 3 * t**-2.5)
        assert abs(fit.slope + 2.5) <= 1e-10
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(3), abs=1e-10)

    def test_constant(self):
        t = np.linspace(1, 2, 10)
        fit = fit_decay(t, np.full(10, 7.0))
        assert abs(fit.slope) <= 1e-12
        assert fit.r_squared == 1.0

    @given(st.floats(-4, 1), st.floats(1e-3, 1e3))
    def test_recovers_synthetic(self, k, c):
        t = np.geomspace(0.5, 80, 12)
        assert abs(fit_decay(t, c * t**k).slope - k) <= 1e-10

    def test_heat_gaussian_window(self):
        norms = (8 * np.pi * (1 + T_UNIFORM)) ** -0.5
        fit = fit_decay(T_UNIFORM, norms, (5, 50), s=0, a=2, beta=0.0)
        assert -0.50 <= fit.slope <= -0.46
        assert fit.predicted_early == -0.5

    def test_window(self):
        t = np.geomspace(1, 100, 40)
        y = np.where(t < 10, t**-1, 10 * t**-2)
        assert fit_decay(t, y, (12, 100)).slope == pytest.approx(-2, abs=1e-12)

    @pytest.mark.parametrize(
        "t,y,w",
        [
            (np.arange(1, 8.0), np.ones(7), None),
            (np.arange(1, 20.0), -np.ones(19), None),
            (np.arange(1, 20.0), np.ones(19), (5, 5)),
            (np.arange(1, 20.0), np.ones(19), (100, 200)),
        ],
    )
    def test_preconditions(self, t, y, w):
        with pytest.raises(AnalysisPreconditionError):
            fit_decay(t, y, w)

    def test_branch_windows(self):
        w = branch_windows(8.0, 0.01, 50.0)
        assert w["early"] == pytest.approx((0.01, 0.25 / 5))
        assert w["late"] == pytest.approx((1.25, 50.0))
        assert branch_windows(1e-6, 1, 10)["late"] is None


class TestDecayMonitor:
    def test_nondecreasing(self):
        m = DecayMonitor(0, 2, 1.0)
        for t, v in [(1, 3.0), (2, 0.5), (3, 9.0), (4, 1.0)]:
            m.update(t, v)
        # normalization by M(0,2,t) = t^-1/2
        assert m.supremum == pytest.approx([3.0, 3.0, 9 * 3**0.5, 9 * 3**0.5], rel=1e-15)
        with pytest.raises(ValueError):
            m.update(4, 1.0)

    @pytest.mark.parametrize("s", [0.0, 1.0])
    def test_bounded_linear_flow(self, s):
        g = GridSpec(512, 400.0)
        w0 = gaussian(g, 1.0, 2.0, center=(1.0, -0.5))
        ts = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0]
        traj = linear_trajectory(w0, 1.0, ts)
        m = DecayMonitor(s, 2, 1.0)
        at = {t: m.update(t, sobolev_norm(f, s, 2)) for t, f in zip(ts, traj.snapshots)}
        assert math.isfinite(at[50.0])
        assert at[50.0] <= 1.2 * at[5.0]


class TestDeficit:
    def test_exact_kernel(self):
        g = GridSpec(128, 60.0)
        K = kernel_K(g, 7.0, 2.0)
        assert asymptotic_deficit(K * 3.0, 3.0, 7.0, 2.0, 0, 2) <= 1e-13

    def test_bad_time(self):
        with pytest.raises(AnalysisPreconditionError):
            asymptotic_deficit(RealField.zeros(GridSpec(16, 1.0)), 1.0, 0.0, 0.0, 0, 2)

    def test_gaussian_closed_form(self):
        g = GridSpec(256, 200.0)
        G1 = gauss_kernel(g, 1.0)
        vals = []
        for t in (5.0, 10.0, 20.0, 40.0):
            d = asymptotic_deficit(heat_propagate(G1, t), 1.0, 0.0, t, 0, 2)
            exact = math.sqrt(t * (1 / (8 * math.pi * (1 + t)) + 1 / (8 * math.pi * t) - 1 / (2 * math.pi * (1 + 2 * t))))
            assert abs(d - exact) <= 1e-6
            vals.append(d)
        assert vals[1] > vals[3]
        assert is_nonincreasing(vals)

    def test_is_nonincreasing(self):
        assert is_nonincreasing([3, 2, 2, 1])
        assert not is_nonincreasing([3, 2, 2.0000001])
        assert is_nonincreasing([1.0, 1.0 + 1e-12], rtol=1e-9)


class TestStrichartz:
    G = GridSpec(128, 20.0)
    T = np.linspace(0, 4.0, 401)

    def test_zero(self):
        assert strichartz_quadrature(RealField.zeros(self.G), 10.0, 0, 3, 6, self.T).value == 0

    def test_homogeneous(self):
        f = random_band(self.G, seed=1, band=(1, 6))
        a = strichartz_quadrature(f, 10.0, 0, 3, 6, self.T).value
        b = strichartz_quadrature(f * 2.0, 10.0, 0, 3, 6, self.T).value
        assert b == pytest.approx(2 * a, rel=1e-14)

    @pytest.mark.parametrize("lam", [2.0, 4.0])
    @pytest.mark.parametrize("spr", [(0, 3, 6), (0, 3, 4), (0.5, 4, 2)])
    def test_scaling(self, lam, spr):
        s, p, r = spr
        f = random_band(self.G, seed=2, band=(1, 6))
        fs = RealField(GridSpec(128, 20.0 / lam), lam**2 * f.values)
        a = strichartz_quadrature(f, 10.0, s, p, r, self.T)
        b = strichartz_quadrature(fs, lam**3 * 10.0, s, p, r, self.T / lam**2)
        assert b.value / a.value == pytest.approx(lam ** (2 + s - 2 / p - 2 / r), rel=1e-3)
        assert 0 <= a.tail_fraction <= 1

    def test_preconditions(self):
        f = random_band(self.G, seed=1)
        with pytest.raises(AnalysisPreconditionError):
            strichartz_quadrature(f, 0.0, 0, 3, 6, self.T)
        with pytest.raises(AnalysisPreconditionError, match="10 \\|beta\\|"):
            strichartz_quadrature(f, 10.0, 0, 3, 6, np.linspace(0, 1, 11))
        with pytest.raises(AnalysisPreconditionError):
            strichartz_quadrature(f, 10.0, 0, 3, math.inf, self.T)
        with pytest.raises(AnalysisPreconditionError):
            strichartz_quadrature(f, 10.0, 0, 3, 6, self.T[1:])


class TestDispersive:
    G = GridSpec(128, 60.0)

    def _f(self):
        return gauss_kernel(self.G, 1.0)

    def test_finite_and_shape(self):
        scan = dispersive_scan(self._f(), 5.0, [-1, 0, 1], [0.5, 1.0, 2.0], lp_bank(self.G))
        assert scan.ratios.shape == (3, 3)
        assert np.all(np.isfinite(scan.ratios)) and np.all(scan.ratios >= 0)

    def test_homogeneous(self):
        bank = lp_bank(self.G)
        a = dispersive_scan(self._f(), 5.0, [0], [1.0, 3.0], bank).ratios
        b = dispersive_scan(self._f() * 7.5, 5.0, [0], [1.0, 3.0], bank).ratios
        np.testing.assert_allclose(a, b, rtol=1e-13)

    def test_depends_on_beta_t_only(self):
        bank = lp_bank(self.G)
        t = np.array([0.5, 1.0, 3.0, 7.0])
        a = dispersive_scan(self._f(), 5.0, [-1, 0, 1], t, bank).ratios
        b = dispersive_scan(self._f(), 10.0, [-1, 0, 1], t / 2, bank).ratios
        assert np.array_equal(a, b)

    def test_preconditions(self):
        bank = lp_bank(self.G)
        with pytest.raises(AnalysisPreconditionError):
            dispersive_scan(self._f(), 0.0, [0], [1.0], bank)
        with pytest.raises(AnalysisPreconditionError):
            dispersive_scan(self._f(), 1.0, [0], [0.0], bank)
        with pytest.raises(AnalysisPreconditionError, match="vanishes"):
            dispersive_scan(RealField.zeros(self.G), 1.0, [0], [1.0], bank)


class TestBoundaryMass:
    def test_centered_gaussian(self):
        g = GridSpec(256, 40.0)
        assert boundary_mass(gauss_kernel(g, 1.0)).fraction < 1e-10

    def test_constant(self):
        g = GridSpec(512, 10.0)
        bm = boundary_mass(RealField(g, np.ones((512, 512))))
        assert bm.fraction == pytest.approx(0.36, abs=0.01)
        assert not bm.degenerate

    def test_zero(self):
        bm = boundary_mass(RealField.zeros(GridSpec(16, 1.0)))
        assert bm == (0.0, True)
