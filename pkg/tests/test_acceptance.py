"""Acceptance gate: eight headline checks, one printed line each.

Each test prints `ACCEPTANCE <k> <title>: PASS/FAIL (<measured numbers>)`
directly to the terminal (bypassing capture) and then asserts, so a plain
`pytest` run shows the scoreboard as it goes. Optimizer-dependent targets
are attainability thresholds: the configs pinned here reach them on one
core within each test's stated wall-clock budget.

Criteria 3 and 4 share the Heisenberg minimal-time scans through a
module-level cache, so the Ising comparisons reuse the matched-size
Heisenberg T* instead of recomputing it.
"""

import json
import time

import numpy as np
import pytest

from aqaoa import (
    OptimizerConfig,
    baseline_linear,
    build_schedule,
    cli,
    find_min_time,
    heisenberg_chain,
    hydrogen_molecule,
    ising_chain,
    optimize_annealing,
    single_qubit,
    to_matrix,
)
from aqaoa import propagator as prop
from aqaoa.problems import H2_COEFFICIENTS
from aqaoa.propagator import MIDPOINT, TROTTER, EvolutionSpec, evolve

# chain scans: no restarts, hard evaluation cap, loose simplex tolerance --
# enough to hit every gated threshold (measured), cheap enough for the
# runtime budgets below
CHAIN_CFG = OptimizerConfig(restarts=0, max_evaluations=600,
                            convergence_tolerance=1e-5, seed=0)
# harder ising cells get restarts and a larger shared budget
ISING_CFG = OptimizerConfig(restarts=2, max_evaluations=1800,
                            convergence_tolerance=1e-5, seed=0)
CHAIN_ETOL = 1e-4
HEIS_GRID = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]

_heis_cache = {}


def _heis_t_star(n):
    if n not in _heis_cache:
        _heis_cache[n] = find_min_time(
            heisenberg_chain(n), n, 0.99, HEIS_GRID, CHAIN_CFG,
            energy_tolerance=CHAIN_ETOL,
        )
    return _heis_cache[n]


@pytest.fixture
def report(capsys):
    def _report(k, title, ok, detail):
        with capsys.disabled():
            print(f"ACCEPTANCE {k} {title}: {'PASS' if ok else 'FAIL'} ({detail})",
                  flush=True)
        assert ok, f"criterion {k}: {detail}"
    return _report


def test_criterion_1_single_qubit_two_knots(report):
    t0 = time.perf_counter()
    p = single_qubit()
    cfg = OptimizerConfig(restarts=2, convergence_tolerance=1e-9, seed=0)
    rec = optimize_annealing(p, 2, 4.0, cfg, energy_tolerance=1e-7)
    base4 = baseline_linear(p, 4.0, energy_tolerance=1e-7)
    first = None
    for t in np.arange(1.0, 10.01, 0.5):
        if baseline_linear(p, float(t), energy_tolerance=1e-7).fidelity >= 0.99:
            first = float(t)
            break
    elapsed = time.perf_counter() - t0
    ok = (
        rec.fidelity >= 0.99
        and rec.relative_error <= 0.01
        and base4.fidelity < rec.fidelity
        and first is not None
        and 6.0 <= first <= 10.0
        and elapsed < 60.0
    )
    report(1, "single qubit, m=2 at T=4", ok,
           f"F={rec.fidelity:.6f} eps={rec.relative_error:.2e} "
           f"baseline F(4)={base4.fidelity:.4f} baseline T*={first} "
           f"[{elapsed:.1f}s < 60s]")


def test_criterion_2_hydrogen_molecule(report):
    t0 = time.perf_counter()
    p = hydrogen_molecule()
    cfg2 = OptimizerConfig(restarts=2, max_evaluations=1500,
                           convergence_tolerance=1e-9, seed=0)
    rec2 = optimize_annealing(p, 2, 8.0, cfg2, energy_tolerance=1e-6)
    cfg1 = OptimizerConfig(restarts=2, max_evaluations=800,
                           convergence_tolerance=1e-9, seed=0)
    rec1 = optimize_annealing(p, 1, 10.0, cfg1, energy_tolerance=1e-6)
    elapsed = time.perf_counter() - t0
    ok = rec2.fidelity > 0.99 and rec1.fidelity > 0.95 and elapsed < 300.0
    report(2, "H2, m=2 at T=8 and m=1 at T=10", ok,
           f"F(m=2,T=8)={rec2.fidelity:.6f} F(m=1,T=10)={rec1.fidelity:.6f} "
           f"[{elapsed:.1f}s < 300s]")


def test_criterion_3_heisenberg_minimal_times(report):
    t0 = time.perf_counter()
    stars = {}
    for n in (2, 3, 4, 5, 6):
        t_star, rec = _heis_t_star(n)
        stars[n] = (t_star, None if rec is None else rec.fidelity)
    elapsed = time.perf_counter() - t0
    gated = {n: stars[n][0] for n in (3, 4, 5, 6)}
    ok = (
        all(t is not None and t <= 3.5 for t in gated.values())
        and elapsed < 1200.0
    )
    detail = " ".join(f"n={n}:T*={stars[n][0]}" for n in (2, 3, 4, 5, 6))
    report(3, "Heisenberg chains reach 0.99 by T=3.5", ok,
           f"{detail} [gate n>=3] [{elapsed:.1f}s < 1200s]")


def test_criterion_4_ising_needs_longer(report):
    t0 = time.perf_counter()
    results = {}
    # resume the 1.0-step scan where each size plausibly succeeds (measured:
    # below these the budgets miss 0.99 anyway, and failed cells burn the
    # whole evaluation budget)
    resume = {4: 4.0, 5: 5.0, 6: 6.0}
    for n, cfg in ((4, CHAIN_CFG), (5, ISING_CFG), (6, ISING_CFG)):
        t_h, _ = _heis_t_star(n)
        assert t_h is not None, f"no Heisenberg T* to compare against at n={n}"
        # the grid starts AT the matched Heisenberg T*: that cell failing is
        # what demonstrates the strict inequality
        grid = [t_h] + [float(t) for t in np.arange(resume[n], 10.01, 1.0) if t > t_h]
        t_i, rec = find_min_time(ising_chain(n), n, 0.99, grid, cfg,
                                 energy_tolerance=CHAIN_ETOL)
        results[n] = (t_h, t_i, None if rec is None else rec.fidelity)
    elapsed = time.perf_counter() - t0
    ok = all(
        t_i is not None and t_i <= 10.5 and t_i > t_h
        for (t_h, t_i, _) in results.values()
    )
    detail = " ".join(
        f"n={n}:heis {t_h} -> ising {t_i} (F={f if f is None else round(f, 4)})"
        for n, (t_h, t_i, f) in results.items()
    )
    report(4, "Ising T* exceeds Heisenberg T*, stays <= 10.5", ok,
           f"{detail} [{elapsed:.1f}s]")


def test_criterion_5_integrator_properties(report):
    p = single_qubit()
    sched = build_schedule((0.3,))

    def energy_at(k, mode):
        spec = EvolutionSpec(p.h_i, p.h_f, sched, 3.0, k, mode)
        psi = evolve(spec, p.initial_state)
        return float(np.real(np.vdot(psi, to_matrix(p.h_f) @ psi)))

    e_ref = energy_at(2 ** 18, MIDPOINT)
    mid_ratios, trot_ratios = [], []
    for k in (256, 512, 1024, 2048):
        mid_ratios.append(abs(energy_at(k, MIDPOINT) - e_ref)
                          / abs(energy_at(2 * k, MIDPOINT) - e_ref))
        trot_ratios.append(abs(energy_at(k, TROTTER) - e_ref)
                           / abs(energy_at(2 * k, TROTTER) - e_ref))

    # unitarity before any renormalization, 1e4 random steps
    chain = heisenberg_chain(3)
    h_i, h_f = to_matrix(chain.h_i), to_matrix(chain.h_f)
    rng = np.random.default_rng(77)
    lams = rng.uniform(-0.2, 1.2, size=10_000)
    psi0 = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi0 /= np.linalg.norm(psi0)
    drift_mid = abs(np.linalg.norm(
        prop._apply_exact_steps(h_i, h_f, lams, 0.01, psi0.copy())) - 1.0)
    drift_trot = abs(np.linalg.norm(
        prop._apply_trotter_steps(h_i, h_f, lams, 0.01, psi0.copy())) - 1.0)

    # time-independent case: every mode must match the closed-form propagator
    h = to_matrix(hydrogen_molecule().h_f)
    w, v = np.linalg.eigh(h)
    psi_h = hydrogen_molecule().initial_state
    ref = v @ (np.exp(-1j * 3.0 * w) * (v.conj().T @ psi_h))
    static_err = 0.0
    hsum = hydrogen_molecule().h_f
    for mode in (MIDPOINT, TROTTER):
        spec = EvolutionSpec(hsum, hsum, build_schedule((0.7,)), 3.0, 137, mode)
        out = evolve(spec, psi_h)
        phase = np.vdot(ref, out)
        out = out * np.conj(phase / abs(phase))
        static_err = max(static_err, float(np.linalg.norm(out - ref)))

    ok = (
        all(3.0 <= r <= 5.0 for r in mid_ratios)
        and all(1.7 <= r <= 2.5 for r in trot_ratios)
        and drift_mid <= 1e-10
        and drift_trot <= 1e-10
        and static_err <= 1e-8
    )
    report(5, "integrator orders, unitarity, static limit", ok,
           f"midpoint ratios {[round(r, 2) for r in mid_ratios]} "
           f"trotter {[round(r, 2) for r in trot_ratios]} "
           f"drift {drift_mid:.1e}/{drift_trot:.1e} static {static_err:.1e}")


def test_criterion_6_spline_property_suite(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_interp = worst_c1 = worst_contain = 0.0
    for _ in range(100_000):
        m = int(rng.integers(1, 9))
        s = build_schedule(rng.uniform(-1.0, 2.0, size=m))
        n = m + 1
        vals = s.knot_values
        worst_interp = max(worst_interp,
                           float(np.max(np.abs(s.value(s.knot_positions) - vals))))
        inner = s.knot_positions[1:-1]
        one_sided = np.abs(s.derivative(np.nextafter(inner, 0.0))
                           - s.derivative(np.nextafter(inner, 1.0)))
        worst_c1 = max(worst_c1, float(np.max(one_sided)))
        xs = np.linspace(0.0, 1.0, n * 1000 + 1)
        seg = s.value(xs)[:-1].reshape(n, 1000)
        lo = np.minimum(vals[:-1], vals[1:])[:, None]
        hi = np.maximum(vals[:-1], vals[1:])[:, None]
        worst_contain = max(worst_contain,
                            float(np.max(np.maximum(lo - seg, 0.0))),
                            float(np.max(np.maximum(seg - hi, 0.0))))

    # collinear knots (with the pinned endpoints, that means the identity
    # line) must come back as the line
    worst_line = 0.0
    xs = np.linspace(0.0, 1.0, 4001)
    for m in range(0, 9):
        s = build_schedule(np.arange(1, m + 1) / (m + 1))
        worst_line = max(worst_line, float(np.max(np.abs(s.value(xs) - xs))))
    elapsed = time.perf_counter() - t0

    ok = (
        worst_interp <= 1e-12
        and worst_contain <= 1e-12
        and worst_c1 <= 1e-10
        and worst_line <= 1e-12
    )
    report(6, "spline fuzz, 1e5 knot vectors", ok,
           f"interp {worst_interp:.1e} contain {worst_contain:.1e} "
           f"C1 {worst_c1:.1e} line {worst_line:.1e} [{elapsed:.0f}s]")


def test_criterion_7_ground_energy_oracle(report):
    problems = [single_qubit(), hydrogen_molecule()]
    problems += [ising_chain(n) for n in range(2, 7)]
    problems += [heisenberg_chain(n) for n in range(2, 7)]
    worst = 0.0
    for p in problems:
        # general (non-Hermitian-path) eigensolve as the independent oracle
        independent = float(np.min(np.linalg.eigvals(to_matrix(p.h_f)).real))
        worst = max(worst, abs(p.ground.energy - independent))

    expected_h2 = {"II": 2.8489, "ZI": 0.5678, "IZ": -1.4508,
                   "ZZ": 0.6799, "YY": 0.0791, "XX": 0.0791}
    table_exact = dict(H2_COEFFICIENTS) == expected_h2

    # closed form for both chain families at the default couplings: the
    # all-down product state gives E0 = -(2n - 1)
    chains_ok = all(
        abs(fam(n).ground.energy - (-(2 * n - 1))) < 1e-12
        for fam in (ising_chain, heisenberg_chain) for n in range(2, 7)
    )
    ok = worst <= 1e-10 and table_exact and chains_ok
    report(7, "ground energies vs independent eigensolve", ok,
           f"worst |dE|={worst:.1e} H2 table exact={table_exact} "
           f"chain closed form={chains_ok}")


def test_criterion_8_sweep_determinism(report, tmp_path, capsys):
    cfg = {
        "problem": "ising:3",
        "parameter_counts": [1, 2],
        "T_values": [2.0, 4.0],
        "optimizer": {"restarts": 1, "max_evaluations": 300,
                      "convergence_tolerance": 1e-6},
        "energy_tolerance": 1e-5,
        "seed": 11,
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    outs = []
    for d in ("first", "second"):
        out = tmp_path / d
        rc = cli.main(["sweep", "--config", str(cfg_path), "--out", str(out)])
        assert rc == 0
        outs.append((out / "sweep.csv").read_bytes())
    lines = outs[0].decode().strip().split("\n")
    statuses_ok = all(line.endswith("ok") for line in lines[1:])
    ok = outs[0] == outs[1] and len(lines) == 5 and statuses_ok
    report(8, "sweep CSV is byte-identical across reruns", ok,
           f"{len(outs[0])} bytes, {len(lines) - 1} cells, "
           f"identical={outs[0] == outs[1]}")
