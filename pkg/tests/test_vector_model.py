import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from spin_uncertainty.spin_core import (
    QuantumState,
    eigenstate,
    make_spin_context,
    random_states,
)
from spin_uncertainty.vector_model import (
    ClassicalMoments,
    characteristic_function,
    imaginary_extension_modulus,
    latitude_measure_moments,
    moment_feasible,
    quantum_moments,
    third_moment_gap,
)


def classical_cubic(theta):
    """<(e.x)^3> on the latitude circle x3 = 1/2 of radius sqrt(3)/2, closed form."""
    b = math.cos(theta) / 2
    a = math.sin(theta) / math.sqrt(2)
    return b**3 + 1.5 * b * a * a


class TestFeasibility:
    def test_random_states(self, ctx):
        for v in random_states(ctx, 200, seed=31):
            cm = quantum_moments(ctx, QuantumState(vector=v))
            assert cm.r**2 == pytest.approx(float(ctx.casimir))
            assert moment_feasible(cm)

    def test_pole_point_mass(self):
        r = 2.0
        cm = ClassicalMoments(m=[0, 0, r], M=np.diag([0, 0, r * r]), r=r)
        assert moment_feasible(cm)

    def test_isotropic_interior_infeasible_when_mean_too_large(self):
        r = 1.0
        cm = ClassicalMoments(m=[0, 0, 0.9], M=np.eye(3) * r * r / 3, r=r)
        assert not moment_feasible(cm)

    def test_trace_mismatch(self):
        cm = ClassicalMoments(m=[0, 0, 0], M=np.eye(3) * 0.5, r=1.0)
        assert not moment_feasible(cm)

    def test_uniform_sphere(self):
        cm = ClassicalMoments(m=[0, 0, 0], M=np.eye(3) / 3, r=1.0)
        assert moment_feasible(cm)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            ClassicalMoments(m=[0, 0, 0], M=[[1, 1, 0], [0, 1, 0], [0, 0, 1]], r=1.0)


class TestLatitude:
    @pytest.mark.parametrize("two_s", range(1, 11))
    def test_matches_eigenstates(self, two_s):
        s = two_s / 2
        c = make_spin_context(s)
        for i in range(c.d):
            m = s - i
            q = quantum_moments(c, eigenstate(c, m))
            cl = latitude_measure_moments(s, m)
            assert np.max(np.abs(q.m - cl.m)) <= 1e-10
            assert np.max(np.abs(q.M - cl.M)) <= 1e-10

    def test_rejects_non_weight(self):
        with pytest.raises(ValueError):
            latitude_measure_moments(1, 0.3)
        with pytest.raises(ValueError):
            latitude_measure_moments(1, 2)


class TestThirdMoment:
    @pytest.mark.parametrize("theta", [math.pi / 4, math.pi / 3, 0.1, 1.5])
    def test_against_closed_form(self, theta):
        e = [math.sin(theta), 0, math.cos(theta)]
        q, c = third_moment_gap(e)
        assert q == pytest.approx(math.cos(theta) / 8, abs=1e-14)
        assert c == pytest.approx(classical_cubic(theta), abs=1e-14)
        assert c > q

    def test_quarter_pi_values(self):
        q, c = third_moment_gap(np.array([1, 0, 1]) / math.sqrt(2))
        assert q == pytest.approx(math.sqrt(2) / 16, abs=1e-15)
        assert c - q > 0

    def test_azimuth_invariant(self):
        a = third_moment_gap(np.array([1, 0, 1]) / math.sqrt(2))
        b = third_moment_gap(np.array([0, 1, 1]) / math.sqrt(2))
        assert np.allclose(a, b)

    @pytest.mark.parametrize("e", [[0, 0, 1], [1, 0, 0], [0.6, 0, -0.8]])
    def test_rejects(self, e):
        with pytest.raises(ValueError):
            third_moment_gap(e)


class TestCharacteristicFunction:
    def test_zero(self, ctx):
        rho = QuantumState(vector=random_states(ctx, 1, seed=32)[0])
        assert characteristic_function(ctx, rho, [0, 0, 0]) == pytest.approx(1)

    def test_mixed_spin_half(self):
        c = make_spin_context(0.5)
        rho = QuantumState(matrix=np.eye(2) / 2)
        k = np.array([0.3, -1.2, 2.0])
        assert characteristic_function(c, rho, k) == pytest.approx(math.cos(np.linalg.norm(k) / 2))

    def test_eigenstate_phase(self, ctx):
        for i in range(ctx.d):
            m = float(ctx.s) - i
            val = characteristic_function(ctx, eigenstate(ctx, m), [0, 0, 0.7])
            assert val == pytest.approx(np.exp(0.7j * m))

    def test_conjugate_symmetry(self, ctx):
        rho = QuantumState(vector=random_states(ctx, 1, seed=33)[0])
        k = np.array([0.4, 0.1, -0.9])
        assert characteristic_function(ctx, rho, -k) == pytest.approx(np.conj(characteristic_function(ctx, rho, k)))

    def test_rotation_covariance(self, ctx):
        rho = QuantumState(vector=random_states(ctx, 1, seed=34)[0])
        R = Rotation.from_rotvec([0.3, -0.5, 0.8]).as_matrix()
        # U with U^dag (k.L) U = (R^T k).L built from the generator of R
        axis_angle = Rotation.from_matrix(R).as_rotvec()
        w, V = np.linalg.eigh(ctx.component(axis_angle))
        U = (V * np.exp(-1j * w)) @ V.conj().T
        rotated = rho.transformed(U)
        k = np.array([0.2, 1.1, -0.4])
        lhs = characteristic_function(ctx, rotated, k)
        rhs = characteristic_function(ctx, rho, R.T @ k)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_imaginary_extension_bound(self, ctx):
        s = float(ctx.s)
        for v in random_states(ctx, 20, seed=35):
            rho = QuantumState(vector=v)
            for kappa in (-2.0, 0.5, 3.0):
                val = imaginary_extension_modulus(ctx, rho, 0, kappa)
                assert val <= math.exp(s * abs(kappa)) * (1 + 1e-12)

    def test_imaginary_extension_saturated_by_eigenstate(self, ctx):
        val = imaginary_extension_modulus(ctx, eigenstate(ctx, ctx.s), 2, 1.3)
        assert val == pytest.approx(math.exp(1.3 * float(ctx.s)))
