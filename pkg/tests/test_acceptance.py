"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

The lines are echoed in the pytest terminal summary; ``python
tests/test_acceptance.py`` runs the gate without pytest. Sample counts that
the criteria leave open are fixed here, together with the seeds, before any
run.
"""

import math

import numpy as np
import pytest
from scipy import stats

from krylov_circuits.analytics import (
    coverage_probability,
    expected_complexity_haar,
    min_complexity_estimate,
    partial_coverage_distribution,
    partial_coverage_probability,
    saturation_time_bound,
    stirling2,
)
from krylov_circuits.circuits import OperatorHaarTask, RucTask
from krylov_circuits.config import DEFAULT_H_GRID
from krylov_circuits.ensembles import sample_haar_state
from krylov_circuits.errors import EstimationError
from krylov_circuits.gaussian import GaussianTask
from krylov_circuits.krylov import KrylovBasis, extend_and_project, run_state_complexity
from krylov_circuits.parallel import map_realizations, summarize
from krylov_circuits.spins import scan_mbl_transition
from krylov_circuits.statevector import (
    apply_layer,
    apply_two_qubit_gate,
    brickwork_step,
    measure_site,
    neel_state,
    random_layer,
)

from oracles import dense_gate, dense_projector

pytestmark = pytest.mark.slow

SEED = 2024
RUC_SAMPLES = {6: 100, 7: 100, 8: 60, 9: 30}
MONITORED_SAMPLES = 30
MONITORED_P = [round(0.1 * k, 1) for k in range(10)]
SCAN_SAMPLES = 200


@pytest.fixture(scope="module")
def global_haar_d256():
    task = RucTask(8, 1024, SEED, circuit="global")
    return summarize(map_realizations(task, 200))


def test_criterion_01_closed_form_haar_agreement(global_haar_d256, acceptance_report):
    s = global_haar_d256
    t = np.arange(201)
    predicted = np.array([expected_complexity_haar(int(k), 256) for k in t])
    dev = np.abs(s.values[t] - predicted)
    se = s.stderr[t]
    ok = dev <= 3 * se
    worst = int(np.argmax(np.where(se > 0, dev / np.where(se > 0, se, 1), 0)))
    detail = (f"{int(np.sum(~ok))}/201 points outside 3 SE; worst t={worst} "
              f"dev={dev[worst]:.4f} ({dev[worst] / se[worst]:.1f} SE)")
    assert acceptance_report(1, "closed-form Haar agreement", bool(ok.all()), detail)


def test_criterion_02_saturation_value(global_haar_d256, acceptance_report):
    c = global_haar_d256.c_inf
    ok = 0.97 * 128 <= c <= 1.03 * 128
    assert acceptance_report(2, "saturation value", ok, f"C_inf={c:.2f} (band [124.16, 131.84])")


def test_criterion_03_saturation_time_scaling(acceptance_report):
    t_sat = {}
    for n, samples in RUC_SAMPLES.items():
        task = RucTask(n, 4 * 2**n, SEED + n)
        t_sat[n] = summarize(map_realizations(task, samples)).t_sat
    ratios = {n: t_sat[n + 1] / t_sat[n] for n in (6, 7, 8)}
    ok = all(1.6 <= r <= 2.4 for r in ratios.values())
    detail = "t_sat " + str(t_sat) + "; ratios " + ", ".join(f"{n + 1}/{n}={r:.2f}" for n, r in ratios.items())
    assert acceptance_report(3, "saturation-time scaling", ok, detail)


def _chi_square(counts, probs, min_expected=5.0):
    """Pool adjacent bins (from the low end) until every expected count is >= 5."""
    total = counts.sum()
    obs, exp = [], []
    o_acc = e_acc = 0.0
    for o, p in zip(counts, probs):
        o_acc += o
        e_acc += p * total
        if e_acc >= min_expected:
            obs.append(o_acc)
            exp.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc or o_acc:
        obs[-1] += o_acc
        exp[-1] += e_acc
    obs, exp = np.array(obs), np.array(exp)
    return stats.chisquare(obs, exp * obs.sum() / exp.sum())


def test_criterion_04_monitored_coupon_collector(acceptance_report):
    parts, ok = [], True
    for n in (5, 6):
        d = 2**n
        bound = saturation_time_bound(d, 0.1).n
        task = RucTask(n, bound, SEED + 100 + n, p=1.0)
        sizes = np.array([r.basis_sizes[bound] for r in map_realizations(task, 500)], dtype=int)
        complete = float(np.mean(sizes == d))
        # the initial product state is a basis state, so n steps show n + 1 draws
        probs = np.array([partial_coverage_probability(bound + 1, m, d) for m in range(d + 1)])
        counts = np.bincount(sizes, minlength=d + 1)
        pvalue = _chi_square(counts, probs).pvalue
        ok &= complete >= 0.9 and pvalue >= 0.01
        parts.append(f"N={n}: n={bound}, complete {complete:.3f}, chi2 p={pvalue:.3f}")
    assert acceptance_report(4, "monitored p=1 coupon collector", ok, "; ".join(parts))


def test_criterion_05_monitored_threshold_shape(acceptance_report):
    parts, ok = [], True
    for n in (5, 6, 7, 8):
        d = 2**n
        mean_tc = {}
        for k, p in enumerate(MONITORED_P):
            task = RucTask(n, 64 * d, SEED + 1000 * n + k, p=p)
            times = map_realizations(task.completion_time, MONITORED_SAMPLES)
            if any(x is None for x in times):
                mean_tc[p] = math.inf
            else:
                mean_tc[p] = float(np.mean(times))
        ratio = {p: mean_tc[p] / mean_tc[0.0] for p in MONITORED_P}
        flat = all(abs(ratio[p] - 1) <= 0.1 for p in MONITORED_P if p <= 0.3)
        rise = ratio[0.8] >= 1.5 * ratio[0.3]
        ok &= flat and rise
        parts.append(f"N={n}: r(0.3)={ratio[0.3]:.2f} r(0.8)={ratio[0.8]:.2f}")
    detail = "basis-completion time ratios; " + "; ".join(parts)
    assert acceptance_report(5, "monitored threshold shape", ok, detail)


def test_criterion_06_anderson_suppression(acceptance_report):
    def c_inf(n, homogeneous):
        return summarize(map_realizations(GaussianTask(n, 512, SEED + n, homogeneous=homogeneous), 200)).c_inf

    hom, inh100, inh80 = c_inf(100, True), c_inf(100, False), c_inf(80, False)
    change = abs(inh100 - inh80) / inh100
    ok = inh100 < 0.5 * hom and change < 0.1
    detail = f"homogeneous {hom:.1f}, inhomogeneous {inh100:.2f} (N=100) vs {inh80:.2f} (N=80), change {change:.1%}"
    assert acceptance_report(6, "Anderson suppression", ok, detail)


def test_criterion_07_mbl_crossover(acceptance_report):
    parts, ok = [], True
    for n in (6, 7, 8):
        try:
            scan = scan_mbl_transition(n, DEFAULT_H_GRID, None, SCAN_SAMPLES, SEED + n)
            h0 = scan.h0
            ok &= 0.2 <= h0 <= 0.4
            parts.append(f"N={n}: h0={h0:.3f}")
        except EstimationError as exc:
            scan = exc.partial
            ok = False
            ratio = scan.c_inf / scan.c_inf[-1]
            parts.append(f"N={n}: no half crossing, C_inf/C_inf(0.6) in [{ratio.min():.2f}, {ratio.max():.2f}]")
    assert acceptance_report(7, "MBL crossover", ok, "; ".join(parts))


def test_criterion_08_sublinear_combinatorics(acceptance_report):
    ts = 2 ** np.arange(3, 10)
    m_max = np.array([min_complexity_estimate(int(t), 256).m_max for t in ts])
    slope = np.polyfit(np.log(ts), np.log(m_max), 1)[0]
    ok = 0.25 <= slope <= 0.45
    detail = f"m_max={m_max.tolist()} for t={ts.tolist()}; slope {slope:.3f} (band [0.25, 0.45])"
    assert acceptance_report(8, "sublinear combinatorics", ok, detail)


def _orthonormality_ok():
    evolve = RucTask(5, 10_000, SEED, p=0.5).evolver(0)
    basis = KrylovBasis(32, capacity=64)
    psi = neel_state(5)
    worst = 0.0
    for t in range(10_001):
        if t:
            psi = evolve(psi)
        extend_and_project(basis, psi)
        if t % 250 == 0 or t == 10_000:
            k = basis.vectors
            worst = max(worst, np.abs(k.conj() @ k.T - np.eye(len(k))).max())
    return worst < 1e-10, f"orthonormality {worst:.1e}"


def _dense_oracle_ok(rng):
    worst = 0.0
    for n in (2, 3, 4, 5):
        psi = sample_haar_state(1 << n, rng)
        for boundary in ("open", "periodic") if n % 2 == 0 else ("open",):
            even = random_layer(n, "even", rng, boundary=boundary)
            odd = random_layer(n, "odd", rng, boundary=boundary)
            for x, g in even.gates + odd.gates:
                worst = max(worst, np.abs(apply_two_qubit_gate(psi, g, x) - dense_gate(g, x, n) @ psi).max())
            ref = psi
            for x, g in even.gates:
                ref = dense_gate(g, x, n) @ ref
            worst = max(worst, np.abs(apply_layer(psi, even) - ref).max())
            for x, g in odd.gates:
                ref = dense_gate(g, x, n) @ ref
            worst = max(worst, np.abs(brickwork_step(psi, odd, even) - ref).max())
        for site in range(n):
            out, rec = measure_site(psi, site, rng)
            proj = dense_projector(site, 0 if rec.outcome == "+" else 1, n) @ psi
            worst = max(worst, np.abs(out - proj / np.linalg.norm(proj)).max())
    return worst <= 1e-12, f"dense oracle {worst:.1e}"


def _porter_thomas_ok(rng):
    d = 256
    weights = np.concatenate([np.abs(sample_haar_state(d, rng)) ** 2 for _ in range(40)])
    pvalue = stats.kstest(d * weights, "expon").pvalue
    return pvalue >= 0.01, f"Porter-Thomas KS p={pvalue:.3f}"


def _stirling_ok():
    ok = all(stirling2(n, n) == 1 and stirling2(n, 1) == 1 and stirling2(n, n + 1) == 0 for n in range(1, 65))
    ok &= all(stirling2(n + 1, m) == m * stirling2(n, m) + stirling2(n, m - 1)
              for n in range(1, 64) for m in range(1, n + 2))
    ok &= all(sum(math.comb(d, m) * math.factorial(m) * stirling2(n, m) for m in range(d + 1)) == d**n
              for n in range(1, 30) for d in range(1, 12))
    return ok, "Stirling identities exact" if ok else "Stirling identity broken"


def _partition_of_unity_ok():
    worst = 0.0
    for d in (2, 8, 32, 256):
        for n in (1, 5, 40, 300, 2000):
            worst = max(worst, abs(partial_coverage_distribution(n, d).sum() - 1))
            if n <= 300:
                worst = max(worst, abs(sum(partial_coverage_probability(n, m, d) for m in range(d + 1)) - 1))
    return worst <= 1e-10, f"sum P(n,m)-1 {worst:.1e}"


def _worker_determinism_ok():
    task = RucTask(4, 60, SEED, p=0.3)
    a = summarize(map_realizations(task, 8, workers=1))
    b = summarize(map_realizations(task, 8, workers=3))
    same = np.array_equal(a.values, b.values) and np.array_equal(a.stderr, b.stderr)
    return same, "workers 1 vs 3 identical" if same else "workers 1 vs 3 differ"


def test_criterion_09_property_suites(acceptance_report):
    rng = np.random.default_rng(SEED)
    checks = [_orthonormality_ok(), _dense_oracle_ok(rng), _porter_thomas_ok(rng), _stirling_ok(),
              _partition_of_unity_ok(), _worker_determinism_ok()]
    ok = all(c[0] for c in checks)
    assert acceptance_report(9, "property suites", ok, "; ".join(c[1] for c in checks))


def test_criterion_10_operator_complexity(acceptance_report):
    s = summarize(map_realizations(OperatorHaarTask(3, 256, SEED), 200))
    early = np.arange(9)
    slope = np.polyfit(early, s.values[early], 1)[0]
    ok = 0.9 <= slope <= 1.1 and 0.9 * 32 <= s.c_inf <= 1.1 * 32
    detail = f"early slope {slope:.3f}, plateau {s.c_inf:.2f} (band [28.8, 35.2])"
    assert acceptance_report(10, "operator K-complexity", ok, detail)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
