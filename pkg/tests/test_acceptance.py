"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line (printed in the pytest terminal
summary, or directly when this file is run as a script).
"""
import time

import numpy as np
import pytest

from _trajectories import random_slow
from twolevel.adiabatic import estimate
from twolevel.evolution import amplitude_table, build_propagator, parametrized_trajectory, transition_amplitude_formula, transition_amplitude_general
from twolevel.hamiltonian import HamiltonianTrajectory, eigenframe_at
from twolevel.linalg import unitarity_defect
from twolevel.oracle import IntegratorConfig, compare_trajectories, integrate
from twolevel.parametrization import from_slow_params, parametrize
from twolevel.scenarios import (
    ScenarioSpec,
    no_transition_ladder,
    sine_phibar,
    sine_scenario,
    synthesize_no_transition,
    trivial_family,
    verify_no_transition,
)

pytestmark = pytest.mark.slow

RESULTS = []


def record(name, ok, detail):
    RESULTS.append((name, f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"))
    return ok


def test_c1_oracle_equivalence():
    rows, ok = [], True
    for nT in (10, 20, 100):
        start = time.perf_counter()
        spec = ScenarioSpec.from_product(nT)
        b = sine_scenario(spec)
        o = integrate(b.hamiltonian, cfg=spec.integrator_config(), samples=b.t)
        rep = compare_trajectories(b.propagator, o)
        elapsed = time.perf_counter() - start
        ok &= rep.max_frob <= 1e-6 and elapsed < 10
        rows.append(f"nu0T={nT} sup|dU|={rep.max_frob:.1e} ({elapsed:.1f}s)")
    assert record("1 oracle equivalence", ok, ", ".join(rows))


def test_c2_closed_form_phibar():
    worst = 0.0
    for nT in (10, 20, 100):
        spec = ScenarioSpec.from_product(nT)
        b = sine_scenario(spec)
        worst = max(worst, float(np.max(np.abs(b.state.phibar - sine_phibar(spec, b.t)))))
    assert record("2 closed-form phibar", worst <= 1e-8, f"max deviation {worst:.1e} (tol 1e-8)")


def test_c3_amplitude_identity():
    worst = 0.0
    b = sine_scenario(ScenarioSpec.from_product(10))
    worst = float(np.max(np.abs(b.amplitude - b.amplitude_matrix_element)))
    rng = np.random.default_rng(8)
    for _ in range(20):
        s, T = random_slow(rng)
        h, state = from_slow_params(s, np.linspace(0, T, 4096))
        frames = eigenframe_at(h, state.t)
        formula = transition_amplitude_formula(state, frames.theta, frames.theta[0])
        direct = transition_amplitude_general(parametrized_trajectory(state), frames, frames[0])
        worst = max(worst, float(np.max(np.abs(formula - direct))))
    assert record("3 amplitude identity", worst <= 1e-10, f"sine + 20 random, max |diff| {worst:.1e} (tol 1e-10)")


def test_c4_unitarity_completeness():
    u_worst = c_worst = 0.0
    bundles = [sine_scenario(ScenarioSpec.from_product(n)) for n in (10, 20, 100)]
    for b in bundles:
        u_worst = max(u_worst, float(np.max(unitarity_defect(b.propagator.u))))
        table = amplitude_table(b.propagator.u, b.frames, b.frames[0])
        for frm in "+-":
            total = np.abs(table[(frm, "+")]) ** 2 + np.abs(table[(frm, "-")]) ** 2
            c_worst = max(c_worst, float(np.max(np.abs(total - 1))))
    ok = u_worst <= 1e-10 and c_worst <= 1e-12
    assert record("4 unitarity/completeness", ok, f"||U+U - I|| {u_worst:.1e}, |sum - 1| {c_worst:.1e}")


def test_c5_adiabatic_suppression():
    ladder = np.array([10, 20, 40, 80, 160], dtype=float)
    amps, p100 = [], None
    for nT in ladder:
        b = sine_scenario(ScenarioSpec.from_product(nT))
        amps.append(float(np.max(np.abs(b.amplitude))))
    p100 = float(np.max(sine_scenario(ScenarioSpec.from_product(100)).probability))
    amps = np.array(amps)
    slope = float(np.polyfit(np.log(ladder), np.log(amps), 1)[0])
    decreasing = bool(np.all(np.diff(amps) < 0))
    ok = decreasing and -1.3 <= slope <= -0.7 and p100 < 1e-3
    assert record("5 adiabatic suppression", ok, f"decreasing={decreasing}, slope {slope:.3f}, max P(100) {p100:.1e}")


def _post(e):
    return (e.t > 0.1 * e.t[-1]) & ~e.in_transient


def test_c6a_relative_error_at_100():
    e = estimate(sine_scenario(ScenarioSpec.from_product(100)))
    post = e.t > 0.1 * e.t[-1]
    rel = np.abs(e.amp_exact - e.amp_approx)[post] / np.abs(e.amp_exact[post])
    worst = float(np.nanmax(rel))
    n_bad = int(np.sum(~(rel <= 0.3)))
    detail = f"pointwise max rel err {worst:.3f} (tol 0.3), {n_bad}/{rel.size} samples over"
    assert record("6a approximation, relative", n_bad == 0, detail)


def test_c6b_error_suppression_160_vs_10():
    e10 = estimate(sine_scenario(ScenarioSpec.from_product(10)))
    e160 = estimate(sine_scenario(ScenarioSpec.from_product(160)))
    both = _post(e10) & _post(e160)
    err10 = float(np.max(e10.error()[both]))
    err160 = float(np.max(e160.error()[both]))
    ratio = err160 / err10
    assert record("6b approximation, 160 vs 10", ratio <= 0.2, f"error ratio {ratio:.3f} (tol 0.2)")


def test_c7_no_transition():
    g = np.linspace(0, 40, 4001)
    triv = verify_no_transition(synthesize_no_transition(trivial_family(0.6, T=40.0), g).hamiltonian, g)
    rows = no_transition_ladder(0.6, 0.2, [50.0, 100.0, 200.0])
    amps = [rep.max_amplitude for _, _, rep in rows]
    ratios = [b / a for a, b in zip(amps, amps[1:])]
    zres = max(syn.zeta_residual for _, syn, _ in rows)
    ok = triv.max_amplitude <= 1e-8 and all(abs(r - 0.5) <= 0.15 for r in ratios) and zres <= 1e-6
    detail = f"trivial {triv.max_amplitude:.1e}, ratios {', '.join(f'{r:.3f}' for r in ratios)}, zeta residual {zres:.1e}"
    assert record("7 no-transition synthesis", ok, detail)


def test_c8_commuting_control():
    g = np.linspace(0, 20, 4096)
    h, state = parametrize(0.8, lambda t: np.zeros(np.shape(t)), g)
    frames = eigenframe_at(h, g)
    formula = transition_amplitude_formula(state, frames.theta, frames.theta[0])
    direct = transition_amplitude_general(build_propagator(state), frames, frames[0])
    const = HamiltonianTrajectory(0.0, 0.8)
    o = integrate(const, cfg=IntegratorConfig(step=0.02), samples=g)
    oracle = transition_amplitude_general(o, eigenframe_at(const, g), eigenframe_at(const, 0.0))
    worst = float(max(np.max(np.abs(formula)), np.max(np.abs(direct)), np.max(np.abs(oracle))))
    assert record("8 commuting control", worst <= 1e-12, f"max |<-|U|+>| {worst:.1e} (tol 1e-12)")


def test_c9_integrator_order():
    b = sine_scenario(ScenarioSpec.from_product(10))
    g = np.linspace(0, b.spec.T, 11)
    ref = integrate(b.hamiltonian, cfg=IntegratorConfig(step=0.01, tol=None), samples=g)
    errs = []
    for step in (0.2, 0.1):
        r = integrate(b.hamiltonian, cfg=IntegratorConfig(step=step, tol=None), samples=g)
        errs.append(float(np.max(compare_trajectories(r, ref).frob)))
    factor = errs[0] / errs[1]
    assert record("9 integrator order", 8 <= factor <= 32, f"halving factor {factor:.2f} (range [8, 32])")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
