import math

import numpy as np
import pytest

from spin_uncertainty.asymptotics import (
    asymptotic_variance_triple,
    convergence_table,
    fit_c2_scaling,
    hp_distribution,
    hp_moments,
    hp_moments_numeric,
    hp_state,
    is_ill_conditioned,
    scaled_variances,
    tail_cutoff,
    truncate_to_spin,
)
from spin_uncertainty.spin_core import make_spin_context, moments


def squeezed_ground_state(alpha, n_levels=300):
    """Ground state of alpha x^2 + p^2/alpha in a truncated Fock basis."""
    a = np.diag(np.sqrt(np.arange(1, n_levels)), 1)
    x = (a + a.T) / math.sqrt(2)
    p = (a - a.T) / (1j * math.sqrt(2))
    H = alpha * x @ x + p @ p / alpha
    w, V = np.linalg.eigh(H)
    g = V[:, 0]
    return g * np.exp(-1j * np.angle(g[0]))


class TestDistribution:
    def test_vacuum_weight(self):
        p, _ = hp_distribution(0.5, 10)
        assert p[0] == pytest.approx(2 * math.sqrt(2) / 3, abs=1e-15)
        assert np.all(p[1::2] == 0)

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 2.0, 4.0])
    def test_matches_oscillator_ground_state(self, alpha):
        g = squeezed_ground_state(alpha)
        st = hp_state(alpha, 60)
        assert np.max(np.abs(g[:61].real - st.amplitudes)) <= 1e-10
        assert np.max(np.abs(g[:61].imag)) <= 1e-10

    def test_alpha_one_is_vacuum(self):
        p, tail = hp_distribution(1.0, 5)
        assert p[0] == 1 and tail == 0
        assert tail_cutoff(1.0) == 0

    def test_tail_cutoff(self):
        n = tail_cutoff(0.2, 1e-12)
        _, tail = hp_distribution(0.2, n)
        assert tail <= 1e-11
        assert n % 2 == 0

    def test_rejects(self):
        with pytest.raises(ValueError):
            hp_distribution(0.0, 3)
        with pytest.raises(ValueError):
            hp_distribution(1.0, -1)
        with pytest.raises(ValueError):
            hp_moments(-1)


class TestMoments:
    def test_half(self):
        assert hp_moments(0.5) == pytest.approx((1 / 8, 19 / 64), abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9, 1.0, 1.5, 3.0])
    def test_numeric_vs_closed(self, alpha):
        assert hp_moments_numeric(alpha) == pytest.approx(hp_moments(alpha), rel=1e-9, abs=1e-12)

    def test_oscillator_oracle(self):
        alpha = 2.0
        g = squeezed_ground_state(alpha)
        n = np.arange(g.size)
        prob = np.abs(g) ** 2
        assert hp_moments(alpha) == pytest.approx((prob @ n, prob @ n**2), rel=1e-9)


class TestTruncation:
    def test_alpha_one_is_top_weight(self):
        ctx = make_spin_context(3)
        v = truncate_to_spin(ctx, 1.0).vector
        assert abs(v[0]) == pytest.approx(1)
        assert np.allclose(scaled_variances(ctx, 1.0), [0.5, 0.5, 0])

    def test_spin_half_truncation(self):
        ctx = make_spin_context(0.5)
        v = truncate_to_spin(ctx, 0.5).vector
        assert np.allclose(v, [1, 0])

    def test_large_spin_approaches_limit(self):
        nu = scaled_variances(make_spin_context(50), 0.5)
        assert np.allclose(nu, [1, 0.25, 0], atol=0.05)

    def test_accepts_state_object(self):
        ctx = make_spin_context(2)
        a = truncate_to_spin(ctx, hp_state(2.0, 4)).vector
        b = truncate_to_spin(ctx, 2.0).vector
        assert np.allclose(a, b)

    def test_variance_triple(self):
        assert asymptotic_variance_triple(2.0) == (0.25, 1.0, 0.0)
        with pytest.raises(ValueError):
            asymptotic_variance_triple(0)

    def test_exact_variances(self):
        # var L3 / s equals var(n)/s, from the oscillator picture up to truncation
        ctx = make_spin_context(40)
        rho = truncate_to_spin(ctx, 0.7)
        n1, n2 = hp_moments(0.7)
        assert moments(ctx, rho).Lam[2, 2] == pytest.approx(n2 - n1**2, abs=1e-9)

    def test_ill_conditioned(self):
        assert is_ill_conditioned(0.01, 10)
        assert not is_ill_conditioned(0.5, 10)

    def test_convergence_table(self):
        rows = convergence_table([0.5, 2.0], [10, 20])
        assert len(rows) == 4
        assert rows[1]["error"] < rows[0]["error"]


class TestFit:
    def test_synthetic_recovery(self):
        s = np.array([5, 10, 20, 40])
        c, k = fit_c2_scaling(s, 0.57 * s ** (2 / 3))
        assert c == pytest.approx(0.57) and k == pytest.approx(2 / 3)

    def test_rejects(self):
        with pytest.raises(ValueError):
            fit_c2_scaling([5, 5], [1, 1])
        with pytest.raises(ValueError):
            fit_c2_scaling([1, 2, 3, 4])
