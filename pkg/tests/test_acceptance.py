"""Acceptance gate: the ten headline results at their stated tolerances.

Every test asserts the published target number exactly as stated and
prints one CRITERION line with the measured value.  A few of the
published headline numbers are not reproducible from the exact heralded
state: the published second-moment (EPR) polynomials disagree with the
spectrum they describe, which shifts the EPR threshold, the EPR and
entropy transmittance bounds, and three cells of the implication table.
Those tests still assert the stated targets and fail honestly; the
values they print are the cross-validated ground truth (closed-form
spectrum == sector-exact circuit simulation == dense-operator checks).
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from lqcat.cli import main as cli_main
from lqcat.formulas import (
    closed_spectrum,
    epr_closed,
    fidelity_closed,
    success_probability,
    tmsvs_entropy,
    tmsvs_epr,
    tmsvs_fidelity,
)
from lqcat.model import ENHANCEMENT_GUARD, entropy_of, epr_of, make_params
from lqcat.oracle import catalyze_oracle, cf_fidelity_oracle
from lqcat.regions import implication_table, t_range, threshold

MEASURES = ("entropy", "epr", "fidelity")


@pytest.fixture(scope="module")
def thresholds():
    """r_star and wall time per quantity, shared across criteria."""
    out = {}
    for quantity in MEASURES:
        start = time.monotonic()
        result = threshold(quantity, tol=1e-3)
        out[quantity] = (result.r_star, time.monotonic() - start)
    return out


def test_criterion_01_entropy_threshold(thresholds, criterion):
    r_star, seconds = thresholds["entropy"]
    ok = abs(r_star - 0.785) <= 0.005 and seconds < 60.0
    criterion(1, ok, f"entropy threshold r_star = {r_star:.4f} "
                     f"(target 0.785 +- 0.005), {seconds:.1f} s")
    assert ok


def test_criterion_02_epr_threshold(thresholds, criterion):
    r_star, seconds = thresholds["epr"]
    ok = abs(r_star - 0.585) <= 0.005 and seconds < 60.0
    criterion(2, ok, f"EPR threshold r_star = {r_star:.4f} "
                     f"(target 0.585 +- 0.005), {seconds:.1f} s; the exact "
                     f"spectrum puts the threshold here, the published "
                     f"second-moment polynomials do not reproduce it")
    assert ok


def _printed_fidelity_threshold() -> float:
    """Threshold the published fidelity polynomial would give."""
    T = np.arange(1e-3, 1.0, 1e-3)

    def exists(r: float) -> bool:
        base = tmsvs_fidelity(r)
        best = max(
            fidelity_closed(make_params(r, t, t), check=False).value - base
            for t in T
        )
        return best > ENHANCEMENT_GUARD

    lo, hi = 0.01, 2.0
    if not exists(lo):
        return math.nan
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_criterion_03_fidelity_threshold(thresholds, criterion):
    r_star, seconds = thresholds["fidelity"]
    printed = _printed_fidelity_threshold()
    ok = abs(r_star - 0.60) <= 0.02
    criterion(3, ok, f"fidelity threshold r_star = {r_star:.4f} by CF "
                     f"quadrature (target 0.60 +- 0.02, governs), "
                     f"{r_star if math.isnan(printed) else printed:.4f} "
                     f"from the published polynomial; {seconds:.1f} s")
    assert ok


def _overall_t_bounds(quantity: str, r_star: float):
    """(inf lower, sup upper) endpoint of the enhancing T intervals over r."""
    lowers, uppers = [], []
    r_scan = np.concatenate(([0.005, 0.01],
                             np.arange(0.02, r_star - 1e-6, 0.02)))
    for r in r_scan:
        intervals = t_range(quantity, float(r), tol=1e-3)
        if not intervals:
            continue
        lowers.append(min(lo for lo, _ in intervals))
        uppers.append((max(hi for _, hi in intervals), float(r)))
    hi_best, r_best = max(uppers)

    def neg_upper(r: float) -> float:
        intervals = t_range(quantity, float(r), tol=1e-3)
        return -max((hi for _, hi in intervals), default=0.0)

    res = minimize_scalar(
        neg_upper, bounds=(max(r_best - 0.02, 1e-3), min(r_best + 0.02, r_star)),
        method="bounded", options={"xatol": 1e-3},
    )
    return min(lowers), max(hi_best, -float(res.fun))


def test_criterion_04_symmetric_t_bounds(thresholds, criterion):
    targets = {"entropy": 0.25, "epr": 0.3, "fidelity": 0.27}
    parts = []
    ok = True
    for quantity, target in targets.items():
        low, high = _overall_t_bounds(quantity, thresholds[quantity][0])
        part_ok = abs(high - target) <= 0.01 and low <= 0.01
        ok = ok and part_ok
        parts.append(f"{quantity} ({low:.4f}, {high:.4f}) vs (0, {target})"
                     f" {'ok' if part_ok else 'off'}")
    criterion(4, ok, "enhancing T bounds: " + "; ".join(parts))
    assert ok


def test_criterion_05_entropy_interval_at_r02(criterion):
    intervals = t_range("entropy", 0.2, tol=1e-3)
    lo, hi = intervals[0]
    ok = (len(intervals) == 1
          and abs(lo - 0.03) <= 0.01 and abs(hi - 0.23) <= 0.01)
    criterion(5, ok, f"t_range(entropy, r=0.2) = ({lo:.4f}, {hi:.4f}) "
                     f"vs target (0.03, 0.23) +- 0.01")
    assert ok


def test_criterion_06_implication_table(criterion):
    table = implication_table(resolution=400)
    expected = {
        ("entropy", "epr"): False,
        ("entropy", "fidelity"): False,
        ("epr", "entropy"): False,
        ("epr", "fidelity"): False,
        ("fidelity", "entropy"): True,
        ("fidelity", "epr"): False,
    }
    labels = {"entropy": "E", "epr": "EPR", "fidelity": "F"}
    mismatches = []
    for entry in table.entries:
        want = expected[(entry.antecedent, entry.consequent)]
        if entry.holds == want:
            continue
        name = f"{labels[entry.antecedent]}=>{labels[entry.consequent]}"
        if entry.witness is None:
            mismatches.append(f"{name} holds on the whole grid")
        else:
            w = entry.witness
            mismatches.append(
                f"{name} fails at (r={w.r:.3f}, T={w.T:.4f}) with "
                f"dA={w.antecedent_delta:.2e}, dB={w.consequent_delta:.2e}"
            )
    for entry in table.entries:
        if not entry.holds:
            assert entry.witness is not None
    ok = not mismatches
    detail = ("all six cells match the published table" if ok else
              "measured table differs: " + "; ".join(mismatches))
    criterion(6, ok, detail)
    assert ok


def test_criterion_07_limit_identities(criterion):
    worst = {"p_cd": 0.0, "entropy": 0.0, "epr": 0.0, "fidelity": 0.0}
    for r in np.arange(0.05, 1.5001, 0.05):
        params = make_params(float(r), 1.0, 1.0)
        spectrum, _ = closed_spectrum(params)
        worst["p_cd"] = max(worst["p_cd"],
                            abs(success_probability(params) - 1.0))
        worst["entropy"] = max(worst["entropy"],
                               abs(entropy_of(spectrum) - tmsvs_entropy(float(r))))
        worst["epr"] = max(worst["epr"],
                           abs(epr_closed(params) - 2.0 * math.exp(-2.0 * r)))
        worst["fidelity"] = max(
            worst["fidelity"],
            abs(cf_fidelity_oracle(spectrum) - tmsvs_fidelity(float(r))),
        )
    ok = (worst["p_cd"] < 1e-12 and worst["entropy"] < 1e-10
          and worst["epr"] < 1e-10 and worst["fidelity"] < 1e-8)
    criterion(7, ok, "identity-line worst errors: "
              + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def test_criterion_08_oracle_equivalence(criterion):
    grid = (0.1, 0.3, 0.5, 0.7, 0.9)
    max_dw = max_dp = max_depr = 0.0
    for r in grid:
        for T1 in grid:
            for T2 in grid:
                params = make_params(r, T1, T2)
                spec_c, p_c = closed_spectrum(params)
                spec_o, p_o = catalyze_oracle(params)
                n = min(11, len(spec_c.weights), len(spec_o.weights))
                max_dw = max(max_dw, float(np.max(
                    np.abs(spec_c.weights[:n] - spec_o.weights[:n]))))
                max_dp = max(max_dp, abs(p_c - p_o))
                max_depr = max(max_depr,
                               abs(epr_closed(params) - epr_of(spec_o)))
    ok_spectrum = max_dw < 1e-10 and max_dp < 1e-10
    ok_epr = max_depr < 1e-9
    ok = ok_spectrum and ok_epr
    criterion(8, ok, f"closed form vs circuit oracle: max|dw| = {max_dw:.1e}, "
                     f"max|dp_cd| = {max_dp:.1e} "
                     f"({'ok' if ok_spectrum else 'off'}); published EPR "
                     f"polynomial max diff = {max_depr:.1e} vs 1e-9 "
                     f"({'ok' if ok_epr else 'off'})")
    assert ok


def test_criterion_09_degenerate_limits(criterion):
    worst = 0.0
    for r in (0.2, 0.5, 1.0):
        for T2 in (0.0, 0.3, 0.8):
            params = make_params(r, 0.0, T2)
            spectrum, p_cd = closed_spectrum(params)
            expect_p = ((1.0 - 2.0 * T2) ** 2 * math.tanh(r) ** 2
                        / math.cosh(r) ** 2)
            worst = max(
                worst,
                abs(abs(spectrum.weights[1]) - 1.0),
                abs(entropy_of(spectrum)),
                abs(epr_of(spectrum) - 6.0),
                abs(cf_fidelity_oracle(spectrum) - 0.25),
                abs(p_cd - expect_p),
            )
    ok = worst < 1e-12
    criterion(9, ok, f"T1 = 0 twin-Fock limits, worst error {worst:.1e} "
                     f"(tolerance 1e-12)")
    assert ok


def test_criterion_10_determinism(tmp_path, criterion):
    commands = {
        "measure": ["measure", "--r", "0.3", "--t1", "0.2", "--t2", "0.6",
                    "--json"],
        "sweep": ["sweep", "--quantity", "entropy", "--r", "0.1:0.7:4",
                  "--t1", "0.1:0.9:5", "--t2", "0.1:0.9:5"],
        "threshold": ["threshold", "--quantity", "fidelity", "--tol", "0.01"],
        "regions": ["regions", "--resolution", "100"],
        "table": ["table", "--resolution", "100"],
        "verify": ["verify", "--grid", "coarse"],
    }
    stable = []
    ok = True
    for name, argv in commands.items():
        outputs = []
        for run in (1, 2):
            path = tmp_path / f"{name}.{run}"
            code = cli_main(argv + ["-o", str(path)])
            assert code == 0
            outputs.append(path.read_bytes())
        same = outputs[0] == outputs[1]
        ok = ok and same
        stable.append(f"{name} {'stable' if same else 'UNSTABLE'}")
    criterion(10, ok, "byte-identical reruns: " + ", ".join(stable))
    assert ok
