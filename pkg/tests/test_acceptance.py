"""Acceptance criteria 1-9, one PASS/FAIL line each.

    pytest tests/test_acceptance.py -v
    python tests/test_acceptance.py

Criteria 4, 5 and 9 enumerate bridges of height <= 12 to n = 38 and
half-plane walks to n = 26; expect a few minutes on one core.
"""
import math
import time
from fractions import Fraction

import pytest

from compsaw.analysis import (METHODS, AsymptoticModel, combine_estimates, estimate_alpha,
                              estimate_g, estimate_power_exponent, fit_all, fit_mu1,
                              fit_u_dependence, sigma_from_loglog, sigma_from_ratios,
                              synthesize_series)
from compsaw.asymptotics import (LemmaParams, bessel_reference, lemma_quadrature, lemma_sweep,
                                 prediction_exponents)
from compsaw.enumeration import (bridges_by_height, tm_bridges_per_height, tm_strip_walks,
                                 tm_strip_walks_centered, walks_by_max_height)
from compsaw.oracle import (dfs_count_bridges, dfs_count_walks, dfs_max_height_table,
                            irreducible_tally)
from compsaw.partition import CONSTANTS, beta, u_from_weight, weight_by_height
from compsaw.rw_exact import rw_asymptotic, rw_weighted
from compsaw.series import (TwoVarSeries, extend_bridges, irreducible_from_bridges,
                            validity_bound)

TABLE1 = {0.3: -2.92, 0.5: -2.14, 0.7: -1.465}
SIGMA = float(CONSTANTS.sigma)


@pytest.fixture
def say(capsys):
    def _say(num, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
    return _say


def extended(B, w_max):
    """Bridges of every height from the irreducibles of height <= w_max."""
    A = irreducible_from_bridges(B, w_max)
    n = min(validity_bound(w_max), B.degree_valid)
    A = TwoVarSeries({h: A[h].truncate(n) for h in range(1, w_max + 1)})
    return extend_bridges(A, n, w_max)


@pytest.fixture(scope="module")
def bridges_full():
    return extended(bridges_by_height(12, validity_bound(12)), 12)


@pytest.fixture(scope="module")
def walks26():
    return walks_by_max_height(26, 26)


@pytest.mark.slow
def test_criterion_1_oracle_equivalence(say):
    t0 = time.perf_counter()
    bad = []
    for strict in (True, False):
        ref = dfs_count_bridges(14, strict=strict)
        for h in range(1, 7):
            got = list(tm_bridges_per_height(h, 14, strict=strict).coeffs)
            if got != [ref[n, h] for n in range(15)]:
                bad.append(("bridges", strict, h))
    cmax = dfs_max_height_table(14)
    for h in range(7):
        want = [1] + [sum(c for (m, k), c in cmax.entries.items() if m == n and k <= h)
                      for n in range(1, 15)]
        if tm_strip_walks(h, 14) != want:
            bad.append(("strip", h))
        if tm_strip_walks_centered(h, 14) != dfs_count_walks("centered_strip", 14, h=h):
            bad.append(("centered", h))
    if walks_by_max_height(14, 14).entries != cmax.entries:
        bad.append(("max-height table",))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    say(1, ok, f"TM == DFS for n<=14, h<=6 (bridges strict/weak, strips, centered strips, "
               f"max-height table); mismatches={bad}; {dt:.0f}s")
    assert ok


def test_criterion_2_extension_validity(say):
    t0 = time.perf_counter()
    E = extended(bridges_by_height(4, 14), 4)
    ext_ok = E.degree_valid == 14 and E.to_table().totals() == dfs_count_bridges(14).totals()
    A = irreducible_from_bridges(bridges_by_height(12, 12))
    irr_ok = A.to_table("irreducible_bridges").entries == irreducible_tally(12).entries
    dt = time.perf_counter() - t0
    ok = ext_ok and irr_ok and dt < 300
    say(2, ok, f"w_max=4 extension totals == DFS to n=14: {ext_ok}; "
               f"a_(n,h) == classify tally to n=12: {irr_ok}; {dt:.0f}s")
    assert ok


def test_criterion_3_synthetic_roundtrip(say):
    L, g = -2.14, -13 / 28
    a = synthesize_series(AsymptoticModel(float(beta()), L, SIGMA, g), 200)
    errs = {m: abs(fit_mu1(a, method=m).log_mu1 / L - 1) for m in METHODS}
    sig = {"ratios": sigma_from_ratios(a).estimate, "loglog": sigma_from_loglog(a).estimate}
    g_est = estimate_g(a, log_mu1=L).estimate
    ok = (max(errs.values()) < 0.02 and all(abs(s - SIGMA) < 0.01 for s in sig.values())
          and abs(g_est - g) < 0.02)
    worst = max(errs, key=errs.get)
    say(3, ok, f"worst log mu1 rel. error {errs[worst]:.4f} ({worst}); sigma "
               f"{sig['ratios']:.4f}/{sig['loglog']:.4f}; g {g_est:.4f}")
    assert ok


def _table1(E, band):
    rows, ok = [], True
    for t, target in TABLE1.items():
        value, _, dropped = combine_estimates(fit_all(weight_by_height(E, u_from_weight(t))))
        good = value is not None and abs(value - target) <= band
        ok &= good
        rows.append(f"e^-u={t}: {value:.3f} (target {target}+-{band})")
    a = weight_by_height(E, math.log(2))
    sig = (sigma_from_ratios(a).estimate, sigma_from_loglog(a).estimate)
    sig_ok = all(abs(s - SIGMA) <= 0.08 for s in sig)
    rows.append(f"sigma(u=log 2) {sig[0]:.3f}/{sig[1]:.3f} (3/7+-0.08)")
    return ok and sig_ok, rows


@pytest.mark.slow
def test_criterion_4_table1(say, bridges_full):
    ok_full, rows_full = _table1(bridges_full, 0.25)
    t0 = time.perf_counter()
    ok_fast, rows_fast = _table1(extended(bridges_by_height(8, validity_bound(8)), 8), 0.4)
    dt = time.perf_counter() - t0
    ok = ok_full and ok_fast and dt < 900
    say(4, ok, f"w_max=12, n<=38: {'; '.join(rows_full)} | w_max=8, n<=26: "
               f"{'; '.join(rows_fast)}; fast profile {dt:.0f}s")
    # the u-dependence fit is a finding, not a criterion
    recs = [(float(u_from_weight(t)), combine_estimates(
        fit_all(weight_by_height(bridges_full, u_from_weight(t))))[0]) for t in TABLE1]
    c, p = fit_u_dependence(recs)
    say("4 (info)", True, f"log mu1 = -c u^p fit: c={c:.3f}, p={p:.3f} (reference c=2.62, p=4/7)")
    assert ok


@pytest.mark.slow
def test_criterion_5_exponents(say, bridges_full, walks26):
    u = u_from_weight(0.5)
    b, c = weight_by_height(bridges_full, u), weight_by_height(walks26, u)
    L, _, _ = combine_estimates(fit_all(b))
    gb = estimate_g(b, log_mu1=L)
    gs = estimate_g(c, log_mu1=L)
    al = estimate_alpha(c, b)
    targets = ((gb, CONSTANTS.g_bridges), (gs, CONSTANTS.g_saws), (al, CONSTANTS.alpha))
    ok = all(abs(e.estimate - float(t)) <= 0.2 for e, t in targets)
    say(5, ok, f"e^-u=0.5, log mu1={L:.3f}: g_bridges {gb.estimate:.3f} (-13/28), "
               f"g_SAWs {gs.estimate:.3f} (3/16), alpha {al.estimate:.3f} (73/112); band 0.2")
    assert ok


def test_criterion_6_random_walk(say):
    t0 = time.perf_counter()
    e4 = abs(rw_weighted(10 ** 4, 1) / rw_asymptotic(10 ** 4, 1) - 1)
    e6 = abs(rw_weighted(10 ** 6, 1) / rw_asymptotic(10 ** 6, 1) - 1)
    dt = time.perf_counter() - t0
    ok = e6 <= 0.1 and e6 < e4 and dt < 120
    say(6, ok, f"|ratio-1| = {float(e4):.5f} at n=1e4, {float(e6):.5f} at n=1e6; {dt:.1f}s")
    assert ok


def test_criterion_7_lemma(say):
    t0 = time.perf_counter()
    rows, ok = [], True
    for r, a in ((0, 1), (Fraction(-19, 12), Fraction(4, 3)), (Fraction(-115, 48),
                                                              Fraction(4, 3))):
        errs = [abs(float(row[3]) - 1) for row in lemma_sweep(r, a)]
        good = errs[3] < 0.05 and all(x > y for x, y in zip(errs, errs[1:]))
        ok &= good
        rows.append(f"(r={r}, alpha={a}) m=1e7 err {errs[3]:.2e}, monotone {good}")
    bes = abs(lemma_quadrature(LemmaParams(0, 1, 1, 1, 1e4)) / bessel_reference(1e4) - 1)
    dt = time.perf_counter() - t0
    ok = ok and bes < 1e-8 and dt < 60
    say(7, ok, f"{'; '.join(rows)}; Bessel rel. error {float(bes):.1e}; {dt:.1f}s")
    assert ok


def test_criterion_8_exponent_algebra(say):
    t = prediction_exponents()
    checks = {
        "n^3/16": t["saws"]["n_power"] == Fraction(3, 16),
        "n^-13/28": t["bridges"]["n_power"] == Fraction(-13, 28),
        "n^-11/7": t["polygons"]["n_power"] == Fraction(-11, 7),
        "u^5/16": t["saws"]["u_power"] == Fraction(5, 16),
        "u^-1/28": t["bridges"]["u_power"] == Fraction(-1, 28),
        "u^4/7": t["stretched"]["u_power"] == Fraction(4, 7),
        "lambda1": (t["stretched"]["lambda1"] == {7: 1, 3: Fraction(-3, 7), 4: Fraction(-4, 7)}
                    and t["stretched"]["beta1_power"] == Fraction(3, 7)),
    }
    ok = all(checks.values())
    say(8, ok, ", ".join(f"{k} {'ok' if v else 'WRONG'}" for k, v in checks.items()))
    assert ok


@pytest.mark.slow
def test_criterion_9_power_laws(say, bridges_full, walks26):
    half = estimate_power_exponent(weight_by_height(walks26, 0))
    brid = estimate_power_exponent(weight_by_height(bridges_full, 0))
    ok = (abs(half.estimate - float(CONSTANTS.gamma_half)) <= 0.12
          and abs(brid.estimate - float(CONSTANTS.gamma_bridges)) <= 0.12)
    say(9, ok, f"half-plane {half.estimate:.3f} +- {half.band:.3f} (-3/64), bridges "
               f"{brid.estimate:.3f} +- {brid.band:.3f} (-7/16); band 0.12")
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
