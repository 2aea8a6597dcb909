"""Acceptance suite: one test per shipped criterion, each printing a
pass/fail line (run with ``pytest -s tests/test_acceptance.py`` to see them).
Tolerances here are contractual; do not loosen.
"""

import math
from pathlib import Path

import numpy as np
import pytest

from atomlaser import (
    ConstantSweep,
    FockBasis,
    IntegrationConfig,
    LinearChirp,
    ModelParams,
    ThermoLimitSpec,
    coherent_product_vector,
    evolve_product_state,
    fidelity_to_product,
    fock_state_vector,
    integrate_transfer_matrix,
    kerr_breakdown_scan,
    lz_transfer,
    mandel_q,
    propagate,
    quadrature_variance,
    reduced_purity,
    suggested_cutoff,
    transfer_matrix,
    untrapped_population_bogoliubov,
    untrapped_population_exact,
)
from atomlaser.cli import main
from atomlaser.dynamics import bogoliubov_convergence_scan

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"


def constant_params(omega_a, omega_r, omega, n_c):
    return ModelParams(omega_a=omega_a, omega_r=omega_r,
                       sweep=ConstantSweep(omega), n_c_initial=n_c)


def report(tag, ok, detail):
    line = f"{tag} {'PASS' if ok else 'FAIL'}: {detail}"
    print(line)
    assert ok, line


def test_a1_rabi_population_formula():
    # omega_r=0.1, delta=1, N=100: half-period value 4, full-period zero
    p = constant_params(omega_a=1.0, omega_r=0.1, omega=0.0, n_c=100.0)
    peak = untrapped_population_bogoliubov(p, math.pi)
    trough = untrapped_population_bogoliubov(p, 2.0 * math.pi)
    ok = abs(peak - 4.0) <= 1e-12 and abs(trough) <= 1e-12
    report("A1", ok, f"peak={peak!r} (want 4), full-period={trough:.3e} (want 0)")


def test_a2_factorization_against_oracle():
    basis = FockBasis(40)
    state0 = coherent_product_vector(2.0, 0.0, basis)
    worst = 1.0
    cases = []
    for ratio in (0.0, 1.0, 5.0):
        for omega_r in (0.5, 1.0):
            delta = ratio * omega_r
            p = constant_params(omega_a=delta + 0.7, omega_r=omega_r,
                                omega=0.7, n_c=4.0)
            for t in (0.5, 1.5):
                evolved = propagate(state0, p, t)
                predicted = evolve_product_state(p, t)
                fid = fidelity_to_product(evolved, predicted)
                worst = min(worst, fid)
                cases.append(fid)
    ok = len(cases) == 12 and worst >= 1.0 - 1e-6
    report("A2", ok, f"12 detuning/coupling/time combos, min fidelity={worst:.12f}")


def test_a3_exact_vs_oracle_populations():
    p = constant_params(omega_a=1.5, omega_r=0.5, omega=0.5, n_c=4.0)
    basis = FockBasis(40)
    state0 = coherent_product_vector(2.0, 0.0, basis)
    big_omega = math.hypot(0.5, 0.5)
    worst = 0.0
    for t in np.linspace(0.0, 2.0 * math.pi / big_omega, 50):
        evolved = propagate(state0, p, float(t))
        gap = abs(evolved.mean_occupation(2)
                  - untrapped_population_exact(p, float(t)))
        worst = max(worst, gap)
    ok = worst <= 1e-8
    report("A3", ok, f"max |<n2>_oracle - closed form| = {worst:.3e} over 50 points")


def test_a4_unitarity_and_number_conservation():
    rng = np.random.default_rng(1234)
    worst_defect = 0.0
    for _ in range(1000):
        p = constant_params(omega_a=rng.uniform(0, 5), omega_r=rng.uniform(0, 3),
                            omega=rng.uniform(-5, 5), n_c=1.0)
        m = transfer_matrix(p, rng.uniform(0.0, 20.0))
        worst_defect = max(worst_defect, m.unitarity_defect())

    chirp = ModelParams(
        omega_a=1.0, omega_r=0.2, n_c_initial=4.0,
        sweep=LinearChirp(rate=0.2, t0=10.0, omega_at_t0=1.0))
    traj = integrate_transfer_matrix(chirp, np.linspace(0.0, 20.0, 11),
                                     IntegrationConfig())
    a0 = np.array([1.1 + 0.3j, -0.4 + 0.9j])
    total0 = float(np.sum(np.abs(a0) ** 2))
    worst_rel = max(abs(float(np.sum(np.abs(m.as_array() @ a0) ** 2)) - total0)
                    / total0 for m in traj.values)
    ok = worst_defect <= 1e-10 and worst_rel <= 1e-8
    report("A4", ok, f"max unitarity defect={worst_defect:.3e} over 1000 draws; "
                     f"chirped-amplitude conservation rel err={worst_rel:.3e}")


def test_a5_bogoliubov_convergence():
    scan = bogoliubov_convergence_scan(1.0, 1.0, [1.0, 1e2, 1e4, 1e6],
                                       4.0 * math.pi)
    errs = [e for _, e in scan]
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    ok = decreasing and errs[-1] < 1e-2
    report("A5", ok, "normalized max error "
           + " > ".join(f"{e:.3e}" for e in errs)
           + f"; final < 1e-2: {errs[-1] < 1e-2}")


def test_a6_landau_zener_scaling():
    spec = ThermoLimitSpec(g=1.0, n_c=1.0)
    rates = [0.25, 0.5, 1.0, 2.0, 4.0]
    mags, consts = [], []
    for rate in rates:
        half = 50.0 / math.sqrt(rate)
        amp = lz_transfer(spec, rate, (-half, half))
        mags.append(abs(amp) ** 2)
        consts.append(abs(amp) ** 2 * rate)
    slope = float(np.polyfit(np.log(rates), np.log(mags), 1)[0])
    c_mean = float(np.mean(consts))
    stationary_phase = math.pi / 4.0
    ok = abs(slope + 1.0) <= 0.02
    report("A6", ok,
           f"log-log slope={slope:.6f} (want -1 +- 0.02); quadrature constant "
           f"C={c_mean:.4f} vs stationary-phase estimate {stationary_phase:.4f} "
           f"(ratio {c_mean / stationary_phase:.2f}; discrepancy reported, not asserted)")


def test_a7_coherence_statistics():
    p = constant_params(omega_a=1.5, omega_r=0.5, omega=0.5, n_c=4.0)
    basis = FockBasis(40)
    state0 = coherent_product_vector(2.0, 0.0, basis)
    evolved = propagate(state0, p, 1.3)
    q = mandel_q(evolved, 2)

    variances = []
    for n_c in (1.0, 4.0, 16.0):
        b = FockBasis(suggested_cutoff(n_c))
        v = coherent_product_vector(math.sqrt(n_c), 0.0, b)
        pn = constant_params(omega_a=1.5, omega_r=0.5, omega=0.5, n_c=n_c)
        variances.append(quadrature_variance(propagate(v, pn, 1.3), 2))
    spread = max(variances) - min(variances)
    ok = abs(q) <= 1e-6 and spread <= 1e-6
    report("A7", ok, f"Mandel Q(mode 2)={q:.3e}; quadrature variance spread "
                     f"across N in {{1,4,16}} = {spread:.3e}")


def test_a8_entanglement_for_number_state_input():
    basis = FockBasis(40)
    p = constant_params(omega_a=1.0, omega_r=1.0, omega=1.0, n_c=4.0)
    ev_fock = propagate(fock_state_vector(basis, 2, 0), p, math.pi / 4)
    fock_purity = reduced_purity(ev_fock, 1)

    coherent_dev = 0.0
    for n_c in (1.0, 4.0):
        v = coherent_product_vector(math.sqrt(n_c), 0.0, basis)
        ev = propagate(v, p, math.pi / 4)
        coherent_dev = max(coherent_dev,
                           abs(reduced_purity(ev, 1) - 1.0),
                           abs(reduced_purity(ev, 2) - 1.0))
    ok = fock_purity < 0.999 and coherent_dev <= 1e-6
    report("A8", ok, f"|2,0> purity={fock_purity:.6f} (< 0.999); coherent-input "
                     f"purity deviation={coherent_dev:.3e}")


def test_a9_kerr_breakdown():
    p = constant_params(omega_a=1.0, omega_r=1.0, omega=1.0, n_c=4.0)
    scan = kerr_breakdown_scan(2.0, p, [0.0, 0.05, 0.1, 0.2], math.pi / 4,
                               basis=FockBasis(40))
    fids = [f for _, f in scan]
    ok = fids[0] >= 1.0 - 1e-6 and all(b < a for a, b in zip(fids, fids[1:]))
    report("A9", ok, "best-product fidelity "
           + " > ".join(f"{f:.6f}" for f in fids))


def test_a10_deterministic_csv(tmp_path):
    files = sorted(SCENARIO_DIR.glob("*.json"))
    assert files, "no shipped scenarios found"
    mismatched = []
    for scn in files:
        a = tmp_path / f"a_{scn.stem}"
        b = tmp_path / f"b_{scn.stem}"
        assert main(["run", str(scn), "--out", str(a)]) == 0
        assert main(["run", str(scn), "--out", str(b)]) == 0
        csv_a = (a / f"{scn.stem}.csv").read_bytes()
        csv_b = (b / f"{scn.stem}.csv").read_bytes()
        if csv_a != csv_b:
            mismatched.append(scn.name)
    ok = not mismatched
    report("A10", ok, f"{len(files)} scenarios rerun byte-identical"
                      + (f"; mismatches: {mismatched}" if mismatched else ""))
