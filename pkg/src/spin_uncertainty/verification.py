"""Invariant suite run by ``spin-uncertainty verify``.

Each check is a pure function of the ``quick`` flag returning ``(ok, detail)``.
Checks are looked up by name so they can be dispatched to worker processes.
"""
from __future__ import annotations

import math

import numpy as np

from .asymptotics import hp_moments, hp_moments_numeric
from .constants import DEFAULT_SEED, PSD_TOL, VERIFY_TOL
from .entropic import entropy_pair, mu_bound
from .measurement import (
    I_closed,
    I_quadrature,
    brute_force_optimum,
    calibration_error,
    metric_vs_calibration_check,
    optimal_measurement,
    optimal_spec,
    separating_gap,
)
from .prep_region import c2_bound, power_mean_bound, vnorm_p
from .robertson import generalized_robertson_eigen, principal_frame, schrodinger_matrix
from .spin_core import (
    MomentData,
    QuantumState,
    casimir_residual,
    coherent_state,
    commutator_residual,
    make_spin_context,
    moments_batch,
    random_states,
)
from .vector_model import moment_feasible, quantum_moments

__all__ = ["CHECKS", "run_check"]


def _spins(max_two_s: int) -> list[float]:
    return [k / 2 for k in range(1, max_two_s + 1)]


def _n_states(quick: bool) -> int:
    return 1000 if quick else 10000


def check_algebra(quick: bool):
    spins = _spins(6) + ([] if quick else [50])
    worst = max(max(commutator_residual(c), casimir_residual(c))
                for c in map(make_spin_context, spins))
    return worst <= 1e-12 * max(1, max(spins)), f"max residual {worst:.3g}"


def check_sum_bound(quick: bool):
    worst = math.inf
    for s in _spins(6):
        ctx = make_spin_context(s)
        _, Lam = moments_batch(ctx, random_states(ctx, _n_states(quick), DEFAULT_SEED))
        worst = min(worst, float((np.trace(Lam, axis1=1, axis2=2) - s).min()))
    return worst >= -VERIFY_TOL, f"min tr(Lam) - s = {worst:.3g}"


def check_c2_exact(quick: bool):
    c = math.cos(math.pi / 9)
    targets = {0.5: 0.25, 1: 0.4375, 1.5: 9 / 4 + c * c - math.sqrt(4 * c * c + 2 * c + 1)}
    err = max(abs(c2_bound(make_spin_context(s)) - t) for s, t in targets.items())
    return err <= 1e-9, f"max error {err:.3g}"


def check_power_means(quick: bool):
    err, gap = 0.0, math.inf
    n = 50 if quick else 1000
    for s in (0.5, 1, 2.5, 5):
        ctx = make_spin_context(s)
        coh = coherent_state(ctx, (0, 0, 1))
        for p in (1, 2, 5, math.inf):
            err = max(err, abs(vnorm_p(ctx, coh, p) - power_mean_bound(p, s)))
        for v in random_states(ctx, n, DEFAULT_SEED):
            rho = QuantumState(vector=v)
            gap = min(gap, vnorm_p(ctx, rho, 2) - power_mean_bound(2, s))
    return err <= 1e-7 and gap >= -1e-7, f"coherent error {err:.3g}, min random gap {gap:.3g}"


def check_robertson(quick: bool):
    worst_slack, worst_eig = math.inf, math.inf
    for s in _spins(4 if quick else 8):
        ctx = make_spin_context(s)
        lam, Lam = moments_batch(ctx, random_states(ctx, _n_states(quick), DEFAULT_SEED))
        for l, L in zip(lam, Lam):
            frame_lam, mu = principal_frame(MomentData(l, L))
            mu = np.clip(mu, 0, None)
            worst_slack = min(worst_slack, generalized_robertson_eigen(mu, s)[0])
            worst_eig = min(worst_eig, float(np.linalg.eigvalsh(schrodinger_matrix(frame_lam, mu)).min()))
    ok = worst_slack >= -PSD_TOL and worst_eig >= -PSD_TOL
    return ok, f"min eigen-form slack {worst_slack:.3g}, min moment-matrix eigenvalue {worst_eig:.3g}"


def check_vector_model(quick: bool):
    n = 200 if quick else 1000
    bad = 0
    for s in _spins(6):
        ctx = make_spin_context(s)
        bad += sum(not moment_feasible(quantum_moments(ctx, QuantumState(vector=v)))
                   for v in random_states(ctx, n, DEFAULT_SEED))
    return bad == 0, f"{bad} infeasible moment sets"


def check_entropy_bound(quick: bool):
    worst = math.inf
    n = 200 if quick else 10000
    for s in _spins(4 if quick else 8):
        ctx = make_spin_context(s)
        bound = mu_bound(s)
        for v in random_states(ctx, n, DEFAULT_SEED):
            pair = entropy_pair(ctx, QuantumState(vector=v))
            worst = min(worst, pair.total - bound)
    return worst >= -1e-9, f"min entropy-sum slack {worst:.3g}"


def check_oscillator_moments(quick: bool):
    err = 0.0
    for alpha in (0.25, 0.5, 2.0, 4.0):
        closed = np.array(hp_moments(alpha))
        err = max(err, float(np.abs(np.array(hp_moments_numeric(alpha)) - closed).max() / max(1, closed.max())))
    return err <= 1e-8, f"max relative error {err:.3g}"


def check_calibration_integral(quick: bool):
    err = 0.0
    for s in _spins(6 if quick else 12):
        ms = [s - k for k in range(int(2 * s) + 1)]
        for r in sorted({0.1, 0.5, 1.0, s / 2, s, 1.5 * s, 2 * s}):
            for n in ms:
                for m in ms:
                    err = max(err, abs(I_closed(s, r, n, m) - I_quadrature(s, r, n, m)))
    return err <= 1e-9, f"max |closed - quadrature| {err:.3g}"


def check_optimal_measurement(quick: bool):
    err, wrong_n, spread = 0.0, 0, 0.0
    for s in _spins(6 if quick else 12):
        r, n, val = brute_force_optimum(s)
        opt = optimal_measurement(s)
        err = max(err, abs(val - opt.delta_min_squared))
        wrong_n += n != s
        if s > 1:
            per_m, _ = calibration_error(make_spin_context(s), optimal_spec(s))
            spread = max(spread, max(per_m) - min(per_m))
    ok = err <= 1e-6 and wrong_n == 0 and spread <= 1e-9
    return ok, f"value error {err:.3g}, wrong n {wrong_n}, profile spread {spread:.3g}"


def check_separating_line(quick: bool):
    worst = math.inf
    for s in _spins(8 if quick else 24)[2:]:
        ctx = make_spin_context(s)
        for n in ctx.m_values:
            for r in np.linspace(0, 2 * s, 401)[1:]:
                worst = min(worst, separating_gap(s, n, r))
    return worst >= -1e-12, f"min gap {worst:.3g}"


def check_metric_error(quick: bool):
    eig_err, excess = 0.0, -math.inf
    for s in (0.5, 1, 1.5, 2, 3) if quick else _spins(8):
        ctx = make_spin_context(s)
        states = [QuantumState(vector=v) for v in random_states(ctx, 10 if quick else 50, DEFAULT_SEED)]
        rep = metric_vs_calibration_check(ctx, optimal_spec(s), states)
        eig_err = max(eig_err, rep["eigenstate_error"])
        excess = max(excess, rep["max_excess"])
    return eig_err <= 1e-6 and excess <= 2e-3, f"eigenstate error {eig_err:.3g}, max excess {excess:.3g}"


CHECKS = {
    "algebra": check_algebra,
    "sum_bound": check_sum_bound,
    "c2_exact": check_c2_exact,
    "power_means": check_power_means,
    "robertson_eigen": check_robertson,
    "vector_model": check_vector_model,
    "entropy_bound": check_entropy_bound,
    "oscillator_moments": check_oscillator_moments,
    "calibration_integral": check_calibration_integral,
    "optimal_measurement": check_optimal_measurement,
    "separating_line": check_separating_line,
    "metric_error": check_metric_error,
}


def run_check(name: str, quick: bool) -> tuple[str, bool, str]:
    """Run one named check, turning exceptions into failures."""
    try:
        ok, detail = CHECKS[name](quick)
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        return name, False, f"{type(exc).__name__}: {exc}"
    return name, bool(ok), detail
