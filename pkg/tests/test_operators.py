import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from betaplane import (
    GridSpec,
    RealField,
    SemigroupParams,
    biot_savart,
    forward_transform,
    gauss_kernel,
    heat_propagate,
    kernel_K,
    lebesgue_norm,
    nonlinear_term,
    rossby_propagate,
    semigroup_propagate,
)
from betaplane.initial import mean_zero_radial
from betaplane.operators import (
    apply_l1,
    inner_product,
    kernel_K_coefficients,
    kernel_K_self_similar_coefficients,
    semigroup_symbol,
)

from conftest import random_field, smooth_random_field

GRID = GridSpec(256, 40.0)


def rel_l2(a, b):
    return lebesgue_norm(a - b, 2) / lebesgue_norm(b, 2)


class TestParams:
    @pytest.mark.parametrize("beta,t", [(1.0, -0.1), (math.nan, 1.0), (math.inf, 0.0)])
    def test_invalid(self, beta, t):
        with pytest.raises(ValueError):
            SemigroupParams(beta, t)


class TestHeat:
    def test_gaussian_semigroup(self):
        out = heat_propagate(gauss_kernel(GRID, 1.0), 0.5)
        ref = gauss_kernel(GRID, 1.5)
        assert np.abs(out.values - ref.values).max() <= 1e-10 * ref.values.max()

    def test_identity_at_zero(self, rng, grid64):
        f = random_field(grid64, rng)
        assert np.abs(heat_propagate(f, 0.0).values - f.values).max() <= 1e-14

    def test_dissipative(self, rng, grid64):
        f = random_field(grid64, rng, mean_zero=True)
        assert lebesgue_norm(heat_propagate(f, 1e-3), 2) < lebesgue_norm(f, 2)

    def test_mean_preserved(self, rng, grid64):
        f = random_field(grid64, rng)
        c0 = forward_transform(f).zero_mode
        assert heat_propagate(forward_transform(f), 3.0).zero_mode == c0

    def test_negative_time(self, grid64):
        with pytest.raises(ValueError):
            heat_propagate(RealField.zeros(grid64), -1e-9)


class TestRossby:
    def test_beta_zero(self, rng, grid64):
        f = random_field(grid64, rng)
        assert np.abs(rossby_propagate(f, 0.0, 5.0).values - f.values).max() <= 1e-14

    @given(st.floats(-100, 100), st.floats(-10, 10), st.integers(0, 2**31))
    def test_unitary(self, beta, t, seed):
        g = GridSpec(32, 5.0)
        f = random_field(g, np.random.default_rng(seed))
        n0 = lebesgue_norm(f, 2)
        assert abs(lebesgue_norm(rossby_propagate(f, beta, t), 2) - n0) <= 1e-12 * n0

    def test_group_inverse(self, rng, grid64):
        f = random_field(grid64, rng)
        back = rossby_propagate(rossby_propagate(f, 7.0, 1.3), 7.0, -1.3)
        assert np.abs(back.values - f.values).max() <= 1e-12 * np.abs(f.values).max()

    def test_modulus_one(self, grid64):
        from betaplane.operators import rossby_symbol

        m = rossby_symbol(grid64, 3.0, 2.0).values
        assert np.abs(np.abs(m) - 1).max() <= 1e-15
        assert m[0, 0] == 1


class TestSemigroup:
    def test_identity(self, rng, grid64):
        f = random_field(grid64, rng)
        out = semigroup_propagate(f, SemigroupParams(10.0, 0.0))
        assert np.abs(out.values - f.values).max() <= 1e-14

    def test_beta_zero_is_heat(self, rng, grid64):
        f = random_field(grid64, rng)
        a = semigroup_propagate(f, SemigroupParams(0.0, 0.3)).values
        assert np.abs(a - heat_propagate(f, 0.3).values).max() <= 1e-14

    def test_semigroup_law(self, rng, grid64):
        f = random_field(grid64, rng)
        two = semigroup_propagate(semigroup_propagate(f, SemigroupParams(4.0, 1e-3)), SemigroupParams(4.0, 2e-3))
        one = semigroup_propagate(f, SemigroupParams(4.0, 3e-3))
        assert np.abs(two.values - one.values).max() <= 1e-13 * np.abs(one.values).max()

    def test_semigroup_law_unit_times(self, rng):
        # t=1,2,3 on a modest lattice so that the output is not pure roundoff
        g = GridSpec(32, 60.0)
        f = random_field(g, rng)
        two = semigroup_propagate(semigroup_propagate(f, SemigroupParams(2.0, 1.0)), SemigroupParams(2.0, 2.0))
        one = semigroup_propagate(f, SemigroupParams(2.0, 3.0))
        assert np.abs(two.values - one.values).max() <= 1e-13 * np.abs(one.values).max()

    def test_factorisation(self, rng, grid64):
        f = random_field(grid64, rng)
        a = semigroup_propagate(f, SemigroupParams(-3.0, 0.2)).values
        b = heat_propagate(rossby_propagate(f, -3.0, 0.2), 0.2).values
        assert np.abs(a - b).max() <= 1e-13

    def test_commutation(self, rng, grid64):
        f = random_field(grid64, rng)
        a = heat_propagate(rossby_propagate(f, 5.0, 0.7), 0.1).values
        b = rossby_propagate(heat_propagate(f, 0.1), 5.0, 0.7).values
        assert np.abs(a - b).max() <= 1e-13 * np.abs(a).max()

    def test_mass_invariance(self, rng, grid64):
        F = forward_transform(random_field(grid64, rng))
        c0 = F.zero_mode
        for out in (
            heat_propagate(F, 0.4),
            rossby_propagate(F, 9.0, 0.4),
            semigroup_propagate(F, SemigroupParams(9.0, 0.4)),
        ):
            assert abs(out.zero_mode - c0) <= 1e-13 * abs(c0)

    @pytest.mark.parametrize("beta,t", [(1.0, 1.0), (-7.5, 0.3), (250.0, 2.0)])
    def test_scaling_symbol(self, beta, t):
        # frequency 2 xi on (n, L/2) carries the same index as xi on (n, L)
        lam = 2.0
        a = semigroup_symbol(GridSpec(64, 20.0), beta, t).values
        b = semigroup_symbol(GridSpec(64, 20.0 / lam), lam**3 * beta, t / lam**2).values
        assert np.abs(a - b).max() <= 1e-14


class TestBiotSavart:
    def test_zero(self, grid64):
        u = biot_savart(RealField.zeros(grid64))
        assert np.all(u.u1.values == 0) and np.all(u.u2.values == 0)

    def test_single_mode(self):
        g = GridSpec(32, 2 * np.pi)
        f = RealField.from_function(g, lambda x1, x2: np.cos(x1) + 0 * x2)
        u = biot_savart(f)
        F1, F2, W = forward_transform(u.u1), forward_transform(u.u2), forward_transform(f)
        assert np.abs(F1.coefficients).max() <= 1e-12
        assert abs(F2.coefficients[1, 0] - 1j * W.coefficients[1, 0]) <= 1e-12
        x1, _ = g.mesh
        assert np.abs(u.u2.values + np.sin(x1)).max() <= 1e-13

    def test_divergence_free_many(self, rng):
        g = GridSpec(64, 11.0)
        for _ in range(100):
            u = biot_savart(random_field(g, rng))
            scale = np.abs(forward_transform(u.u1).coefficients).max() * g.xi_abs.max()
            assert np.abs(u.divergence()).max() <= 1e-12 * scale

    def test_curl_recovers_minus_omega(self, rng, grid64):
        # with grad^perp = (-d2, d1) the stated multipliers give curl u = -omega
        f = random_field(grid64, rng)
        u = biot_savart(f)
        xi1, xi2 = grid64.odd_wavenumbers
        curl = 1j * xi1 * forward_transform(u.u2).coefficients - 1j * xi2 * forward_transform(u.u1).coefficients
        W = forward_transform(f).coefficients
        keep = (xi1 != 0) | (xi2 != 0)
        # on the Nyquist lines only the even component survives
        keep &= (grid64.index[:, None] != -32) & (grid64.index[None, :] != -32)
        assert np.abs(curl + W)[keep].max() <= 1e-12 * np.abs(W).max()

    def test_radial_is_azimuthal(self):
        w = mean_zero_radial(GRID, width=1.5)
        u = biot_savart(w)
        x1, x2 = GRID.mesh
        radial = x1 * u.u1.values + x2 * u.u2.values
        scale = np.abs(np.hypot(x1, x2) * np.hypot(u.u1.values, u.u2.values)).max()
        assert np.abs(radial).max() <= 1e-10 * scale


class TestNonlinear:
    def test_zero(self, grid64):
        assert np.all(nonlinear_term(RealField.zeros(grid64)).values == 0)

    def test_radial_vanishes(self):
        w = mean_zero_radial(GRID, width=1.5)
        N = nonlinear_term(w)
        u = biot_savart(w)
        scale = np.hypot(u.u1.values, u.u2.values).max() * lebesgue_norm(w, 2) * GRID.xi_abs.max()
        assert lebesgue_norm(N, 2) <= 1e-10 * scale

    @pytest.mark.parametrize("k", [(1, 0), (2, 3), (0, 5)])
    def test_single_mode(self, k):
        g = GridSpec(32, 2 * np.pi)
        f = RealField.from_function(g, lambda x1, x2: np.cos(k[0] * x1 + k[1] * x2))
        assert np.abs(nonlinear_term(f).values).max() <= 1e-13

    def test_zero_mode_and_dealias(self, rng, grid64):
        F = nonlinear_term(forward_transform(random_field(grid64, rng)))
        assert F.coefficients[0, 0] == 0
        k = np.abs(grid64.index)
        high = np.maximum(k[:, None], k[None, :]) > 64 / 3
        assert np.abs(F.coefficients[high]).max() <= 1e-14 * np.abs(F.coefficients).max()

    def test_divergence_form_integral(self, rng, grid64):
        N = nonlinear_term(random_field(grid64, rng))
        assert abs(N.integral()) <= 1e-12


class TestSkewSymmetry:
    @given(st.integers(0, 2**31))
    def test_l1_skew(self, seed):
        g = GridSpec(32, 7.0)
        f = random_field(g, np.random.default_rng(seed), mean_zero=True)
        assert abs(inner_product(apply_l1(f), f)) <= 1e-12 * lebesgue_norm(f, 2) ** 2


class TestKernels:
    def test_gauss_origin(self):
        for t in (0.25, 1.0, 3.0):
            G = gauss_kernel(GRID, t)
            assert G.values[128, 128] == pytest.approx(1 / (4 * np.pi * t), rel=1e-15)

    def test_gauss_mass_and_l2(self):
        G = gauss_kernel(GRID, 2.0)
        assert G.integral() == pytest.approx(1.0, abs=1e-8)
        assert lebesgue_norm(G, 2) == pytest.approx((16 * np.pi) ** -0.5, abs=1e-6)
        assert np.all(G.values > 0)

    def test_gauss_even(self):
        v = gauss_kernel(GRID, 1.0).values[1:, 1:]
        assert np.array_equal(v, v[::-1, ::-1])

    def test_gauss_window_warning(self):
        with pytest.warns(RuntimeWarning, match="does not fit"):
            gauss_kernel(GridSpec(64, 10.0), 1.0)

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_bad_time(self, t):
        with pytest.raises(ValueError):
            gauss_kernel(GRID, t)
        with pytest.raises(ValueError):
            kernel_K(GRID, 1.0, t)

    def test_K_beta_zero_is_gauss(self):
        K = kernel_K(GRID, 0.0, 1.0)
        assert K.values.max() == pytest.approx(1 / (4 * np.pi), abs=1e-6)
        assert np.abs(K.values - gauss_kernel(GRID, 1.0).values).max() <= 1e-12

    def test_K_mass(self):
        assert kernel_K(GRID, 10.0, 2.0).integral() == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("beta,t", [(10.0, 2.0), (1.0, 0.3), (-4.0, 5.0)])
    def test_self_similar_form(self, beta, t):
        a = kernel_K_coefficients(GRID, beta, t)
        b = kernel_K_self_similar_coefficients(GRID, beta, t)
        assert np.abs(a - b).max() <= 1e-12


def test_smooth_random_field_is_bandlimited(rng, grid64):
    F = forward_transform(smooth_random_field(grid64, rng, kmax=3))
    assert np.abs(F.coefficients[grid64.xi_abs / grid64.dxi > 3.5]).max() <= 1e-14 * np.abs(F.coefficients).max()
