"""One test per acceptance criterion, each printing a single PASS/FAIL line
with the measured values before asserting every clause at its stated
tolerance. Run with ``pytest -v tests/test_acceptance.py`` for one status
line per criterion (add ``-s`` to see the measured-value lines for passing
criteria too).

Criteria 1 and 3 encode targets the exact dynamics cannot reach (the
success probability telescopes to the initial target overlap strictly from
above; see the clause messages for the measured values). They are asserted
unmodified and fail."""

import math
import time

import pytest

from peigen import (
    ExactW,
    Fixed,
    FixedStep,
    HarmonicOscillator,
    Hubbard1D,
    Rabi,
    RunConfig,
    TrotterW,
    Variational,
    basis_vector,
    build_model,
    fixed_step_run,
    prepare_eigenstate,
    run,
    thermal_state,
)
from peigen.cli import main
from peigen.models import hubbard_basis_index, hubbard_sector_minimum, rabi_basis_index
from peigen.verify import (
    appendix_a_suite,
    eject_support_suite,
    fig2a_suite,
    fig2b_suite,
    spectral_weight_suite,
    trotter_scaling_suite,
)

HARMONIC_SPEC = HarmonicOscillator(omega=1.0, cutoff=30)
RABI_SPEC = Rabi(omega0=1.2, omega=0.8, g=1.0, cutoff=20)


def _report(num, clauses):
    ok = all(c for c, _ in clauses)
    detail = "; ".join(d for _, d in clauses)
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'} — {detail}")
    failed = [d for c, d in clauses if not c]
    assert not failed, f"criterion {num} failed clauses: {failed}"


def _p_suc_monotone(trace):
    ps = [s.p_suc for s in trace.stages]
    return all(b <= a + 1e-12 for a, b in zip(ps, ps[1:]))


def test_criterion_01_harmonic_fixed_step():
    h = build_model(HARMONIC_SPEC)
    init = thermal_state(HARMONIC_SPEC, nbar=0.5)
    cfg = RunConfig(
        mode=FixedStep(tau=0.3), gamma_policy=Fixed(0.0), epsilon=1e-3, max_stages=150
    )
    t0 = time.monotonic()
    tr = fixed_step_run(init, h, cfg)
    dt = time.monotonic() - t0
    _report(
        1,
        [
            (tr.converged and 16 <= tr.n_stages <= 20, f"stages {tr.n_stages} in 18±2"),
            (tr.final_energy <= 2e-3, f"final energy {tr.final_energy:.6g} ≤ 2e-3"),
            (_p_suc_monotone(tr), "P_suc monotone non-increasing"),
            (0.60 <= tr.p_success <= 0.667, f"P_suc {tr.p_success:.6f} in [0.60, 0.667]"),
            (dt < 1.0, f"runtime {dt:.2f}s < 1s"),
        ],
    )


def test_criterion_02_harmonic_variational():
    h = build_model(HARMONIC_SPEC)
    init = thermal_state(HARMONIC_SPEC, nbar=0.5)
    cfg = RunConfig(mode=Variational(), gamma_policy=Fixed(0.0), epsilon=1e-3, max_stages=20)
    t0 = time.monotonic()
    tr = run(init, h, cfg)
    dt = time.monotonic() - t0
    trials = sum(len(s.trials) for s in tr.stages)
    _report(
        2,
        [
            (tr.converged and 6 <= tr.n_stages <= 10, f"stages {tr.n_stages} in 8±2"),
            (50 <= trials <= 120, f"trial evaluations {trials} in [50, 120]"),
            (tr.final_energy <= 2e-3, f"final energy {tr.final_energy:.6g} ≤ 2e-3"),
            (0.60 <= tr.p_success <= 0.667, f"P_suc {tr.p_success:.6f} in [0.60, 0.667]"),
            (all(0.0 < t <= 1.0 for t in tr.schedule), "each tau_k in (0, 1]"),
            (dt < 5.0, f"runtime {dt:.2f}s < 5s"),
        ],
    )


def test_criterion_03_rabi_variational():
    h = build_model(RABI_SPEC)
    init = basis_vector(40, rabi_basis_index(RABI_SPEC, "down", 0))
    oracle = float(
        build_model(Rabi(omega0=1.2, omega=0.8, g=1.0, cutoff=40)).total.eigensystem()[0][0]
    )
    cfg = RunConfig(
        mode=Variational(), epsilon=0.07, max_stages=20, operator_mode=TrotterW(r=3)
    )
    t0 = time.monotonic()
    tr = run(init, h, cfg)
    dt = time.monotonic() - t0
    err = abs(tr.final_energy - oracle)
    _report(
        3,
        [
            (tr.converged and 3 <= tr.n_stages <= 5, f"stages {tr.n_stages} in 4±1"),
            (err <= 5e-3, f"|E − oracle| = {err:.6g} ≤ 5e-3 (oracle {oracle:.6f})"),
            (0.50 <= tr.p_success <= 0.70, f"P_suc {tr.p_success:.6f} in [0.50, 0.70]"),
            (dt < 30.0, f"runtime {dt:.2f}s < 30s"),
        ],
    )


def test_criterion_04_hubbard_chains():
    t0 = time.monotonic()
    spec2 = Hubbard1D(sites=2, t=1.0, u=2.0)
    h2 = build_model(spec2)
    tr2 = run(
        basis_vector(16, hubbard_basis_index(spec2, "uudd")),
        h2,
        RunConfig(mode=Variational(), epsilon=1e-3, max_stages=20, operator_mode=TrotterW(r=3)),
    )
    oracle2 = 1 - math.sqrt(5)
    spec3 = Hubbard1D(sites=3, t=1.0, u=2.0)
    h3 = build_model(spec3)
    tr3 = run(
        basis_vector(64, hubbard_basis_index(spec3, "dduudd")),
        h3,
        RunConfig(mode=Variational(), epsilon=1e-3, max_stages=20, operator_mode=TrotterW(r=3)),
    )
    oracle3 = hubbard_sector_minimum(h3, 3, 1, 1)
    dt = time.monotonic() - t0
    err2 = abs(tr2.final_energy - oracle2)
    err3 = abs(tr3.final_energy - oracle3)
    _report(
        4,
        [
            (err2 <= 1e-2, f"2-site |E − (1−√5)| = {err2:.3g} ≤ 1e-2"),
            (tr2.converged and tr2.n_stages <= 10, f"2-site stages {tr2.n_stages} ≤ 10"),
            (0.08 <= tr2.p_success <= 0.25, f"2-site P_suc {tr2.p_success:.4f} in [0.08, 0.25]"),
            (tr3.converged and tr3.n_stages <= 10, f"3-site stages {tr3.n_stages} ≤ 10"),
            (err3 <= 1e-2, f"3-site |E − sector min| = {err3:.3g} ≤ 1e-2"),
            (dt < 120.0, f"runtime {dt:.1f}s < 2 min"),
        ],
    )


def test_criterion_05_cooling_inequality_suite():
    rep = appendix_a_suite(n_instances=1000)
    _report(
        5,
        [
            (rep["violations"] == [], f"{rep['instances']} instances, {len(rep['violations'])} violations"),
            (rep["strict_margin_min"] > 0, f"strict margin min {rep['strict_margin_min']:.3g} > 0"),
            (
                rep["eigenstate_max_deviation"] <= 1e-10,
                f"eigenstate equality dev {rep['eigenstate_max_deviation']:.3g} ≤ 1e-10",
            ),
        ],
    )


def test_criterion_06_spectral_weight_update():
    rep = spectral_weight_suite(n_instances=100)
    _report(
        6,
        [
            (
                rep["max_deviation"] <= 1e-10,
                f"100 instances, max coefficient deviation {rep['max_deviation']:.3g} ≤ 1e-10",
            )
        ],
    )


def test_criterion_07_trotter_order():
    rep = trotter_scaling_suite()
    by_model = {c["model"]: c for c in rep["checks"]}
    harmonic = by_model["harmonic"]
    slope_clauses = [
        (
            -2.2 <= by_model[m]["slope"] <= -1.8,
            f"{m} slope {by_model[m]['slope']:.3f} in [−2.2, −1.8]",
        )
        for m in ("rabi", "hubbard-2", "hubbard-3")
    ]
    # a single-term Hamiltonian is Trotter-exact: no slope exists, the error
    # must instead vanish outright
    harmonic_clause = (
        harmonic["exact"] and max(harmonic["errors"]) <= 1e-12,
        f"harmonic single-term exact, max error {max(harmonic['errors']):.3g} ≤ 1e-12",
    )
    h = build_model(RABI_SPEC)
    init = basis_vector(40, rabi_basis_index(RABI_SPEC, "down", 0))
    base = dict(epsilon=1e-3, max_stages=150)
    e_exact = fixed_step_run(
        init, h, RunConfig(mode=FixedStep(tau=0.3), operator_mode=ExactW(), **base)
    ).final_energy
    e_r3 = fixed_step_run(
        init, h, RunConfig(mode=FixedStep(tau=0.3), operator_mode=TrotterW(r=3), **base)
    ).final_energy
    agree = abs(e_r3 - e_exact)
    _report(
        7,
        [harmonic_clause]
        + slope_clauses
        + [(agree <= 5e-3, f"r=3 vs exact final Rabi energy differ {agree:.3g} ≤ 5e-3")],
    )


def test_criterion_08_circuit_identities():
    a = fig2a_suite(n_points=100)
    b = fig2b_suite(phis=(0.1, 0.5, 1.0), cutoff=24)
    a_neg = fig2a_suite(n_points=100, broken=True)
    b_neg = fig2b_suite(phis=(0.1, 0.5, 1.0), cutoff=24, broken=True)
    _report(
        8,
        [
            (a["passed"], f"fig2a 100-point max distance {a['max_distance']:.3g} ≤ 1e-10"),
            (
                b["passed"],
                "fig2b distances "
                + ", ".join(f"φ={k}: {v:.3g}" for k, v in b["distances"].items())
                + " ≤ 1e-8",
            ),
            (not a_neg["passed"] and not b_neg["passed"], "negative controls fail"),
        ],
    )


def test_criterion_09_excited_state_pipeline():
    h = build_model(HARMONIC_SPEC)
    init = thermal_state(HARMONIC_SPEC, nbar=0.5)
    cfg = RunConfig(
        mode=Variational(),
        epsilon=1e-5,
        max_stages=60,
        gamma_policy=Fixed(1.0),
        eject_shifted=True,
    )
    tr = prepare_eigenstate(1, init, h, cfg)
    rep = eject_support_suite(n_instances=100)
    _report(
        9,
        [
            (
                abs(tr.final_energy - 1.0) <= 1e-3,
                f"final energy {tr.final_energy:.6f} = 1 ± 1e-3",
            ),
            (tr.target_fidelity >= 0.999, f"fidelity with |1⟩ {tr.target_fidelity:.6f} ≥ 0.999"),
            (
                tr.p_success <= 2 / 9 + 1e-9,
                f"cumulative P_suc {tr.p_success:.6f} ≤ 2/9 + 1e-9",
            ),
            (
                rep["max_overlap"] <= 1e-12,
                f"eject overlap ≤ {rep['max_overlap']:.3g} over 100 random cases",
            ),
        ],
    )


def test_criterion_10_determinism(tmp_path):
    outs = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        d.mkdir()
        code = main(
            ["run", "--config", "rabi_variational", "--out", str(d), "--seed", "123"]
        )
        assert code == 0
        outs.append(d)
    same_json = (outs[0] / "rabi_variational.json").read_bytes() == (
        outs[1] / "rabi_variational.json"
    ).read_bytes()
    same_csv = (outs[0] / "rabi_variational.csv").read_bytes() == (
        outs[1] / "rabi_variational.csv"
    ).read_bytes()
    _report(
        10,
        [
            (same_json, "trace JSON byte-identical across runs"),
            (same_csv, "trace CSV byte-identical across runs"),
        ],
    )
