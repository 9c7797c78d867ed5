"""Acceptance suite: one test per acceptance criterion, each printing a
pass/fail line (run with ``pytest -s tests/test_acceptance.py`` to see them).

Three clauses are marked strict-xfail because they are numerically
unattainable as stated; each carries a self-contained reason, and each has
a companion test demonstrating the corrected form:

* criterion 2 as stated (41 moments, 1e-6 density match): the Nevanlinna
  series terms decay geometrically like (a q)^k = 0.72^k, so 21 terms
  floor the density error near 1e-1; reaching 1e-6 takes ~65+ terms
  (demonstrated by the sufficient-truncation companion).
* criterion 3's second clause (det residual shrinking with N): the
  truncated quadruple is a product of SL(2) transfer matrices, so
  A D - B C = 1 holds exactly at *every* truncation; residuals are pure
  rounding noise (~1e-152 at 512 bits) with no N-trend to observe.
* criterion 5's literal bound sup nu_rho <= c(a) rho / LB for rho < 1:
  nu_0.01(0.2) ~ 52 exceeds c(a)*0.01/LB ~ 5.3; the corrected bound
  carries max(rho, 1/rho) and holds for every row.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

from mpentropy import (DivergenceSuspected, ascarlitz, entropy, hamburger)
from mpentropy.diagnostics import (REFERENCE_TABLE, density_moment,
                                   family_entropy)

TABLE_TOL = 2e-4


def _report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}  {detail}")


@pytest.fixture(scope="module")
def table_results(params, m2_m4):
    start = time.monotonic()
    results = {rho: family_entropy(params, rho, tol=1e-6,
                                   m2=m2_m4[0], m4=m2_m4[1])
               for rho, _ in REFERENCE_TABLE}
    return results, time.monotonic() - start


def _pipeline_vs_closed_form(params, quad, t_fracs, n_points):
    """Max relative deviation of the quadruple density from the closed
    form over [-1, 6], for several points on the half-circle; B and D are
    evaluated once per x and shared across the t values."""
    al = ascarlitz.alpha(params)
    points = [ascarlitz.halfcircle_point(params, al * mp.mpf(f)) for f in t_fracs]
    xs = np.linspace(-1.0, 6.0, n_points)
    closed = {float(hp.rho): ascarlitz.density_nu(params, float(hp.rho), xs)
              for hp in points}
    worst = 0.0
    with mp.workprec(quad.precision_bits):
        for i, x in enumerate(xs):
            _, B, _, D = quad.evaluate(mp.mpf(float(x)))
            for hp in points:
                h = (hp.t * B - D) ** 2 + hp.gamma ** 2 * B ** 2
                f = float(hp.gamma / mp.pi / h)
                ref = closed[float(hp.rho)][i]
                worst = max(worst, abs(f - ref) / ref)
    return worst


class TestCriterion1:
    def test_entropy_table_reproduction(self, table_results):
        results, elapsed = table_results
        worst = max(abs(results[rho].value - ref) for rho, ref in REFERENCE_TABLE)
        ok = worst <= TABLE_TOL and elapsed < 30.0
        _report("criterion 1: entropy table within 2e-4",
                ok, f"worst |dH|={worst:.2e}, {elapsed:.1f}s")
        assert worst <= TABLE_TOL
        assert elapsed < 30.0


class TestCriterion2:
    @pytest.mark.xfail(
        strict=True,
        reason="unattainable as stated: 41 moments support only 21 series "
               "terms and the terms decay like (aq)^k = 0.72^k, flooring the "
               "density error near 1e-1; 1e-6 needs ~65+ terms (see the "
               "sufficient-truncation companion test)")
    def test_equivalence_as_stated(self, params, rec20):
        quad = hamburger.build_quadruple(rec20, 40)  # capped at 21 terms
        worst = _pipeline_vs_closed_form(params, quad, ("0.2", "0.5", "0.8"), 200)
        _report("criterion 2 (as stated): 512 bits, moments m_0..m_40, N=40",
                worst <= 1e-6, f"max rel err={worst:.2e} (21 effective terms)")
        assert worst <= 1e-6

    def test_equivalence_at_sufficient_truncation(self, params, quad70):
        worst = _pipeline_vs_closed_form(params, quad70, ("0.2", "0.5", "0.8"), 200)
        _report("criterion 2 (sufficient truncation): 512 bits, 71 terms",
                worst <= 1e-6, f"max rel err={worst:.2e}")
        assert worst <= 1e-6


class TestCriterion3:
    def _residual(self, quad):
        with mp.workprec(quad.precision_bits):
            worst = mp.mpf(0)
            for x in (-0.5, 0.0, 1.0, 3.0):
                A, B, C, D = quad.evaluate(mp.mpf(x))
                worst = max(worst, abs(A * D - B * C - 1))
            return worst

    def test_determinant_identity_bound(self, quad40):
        res = self._residual(quad40)
        ok = res <= 1e-8
        _report("criterion 3a: |AD-BC-1| <= 1e-8 at N=40", ok,
                f"residual={mp.nstr(res, 3)}")
        assert ok

    @pytest.mark.xfail(
        strict=True,
        reason="premise false: AD-BC = 1 exactly at every truncation (the "
               "partial sums form an SL(2) transfer-matrix product), so both "
               "residuals are rounding noise ~1e-152 and the N=40 one is "
               "slightly larger, not smaller")
    def test_residual_shrinks_with_order(self, quad20, quad40):
        r20 = self._residual(quad20)
        r40 = self._residual(quad40)
        _report("criterion 3b: residual(N=40) < residual(N=20)", r40 < r20,
                f"res40={mp.nstr(r40, 3)}, res20={mp.nstr(r20, 3)}")
        assert r40 < r20


class TestCriterion4:
    def test_moment_agreement_across_solutions(self, params):
        mk = ascarlitz.mu_K(params, tol=1e-60)
        mf = ascarlitz.mu_F(params, tol=1e-60)
        ref = [ascarlitz.moments_of_discrete(mk, k, rel_tol=1e-12)
               for k in range(19)]
        worst = 0.0
        for k in range(11):
            other = ascarlitz.moments_of_discrete(mf, k, rel_tol=1e-12)
            worst = max(worst, float(abs(other - ref[k]) / max(1, abs(ref[k]))))
        for rho in (0.5, 1.0, 2.0):
            for k in range(11):
                val, _ = density_moment(params, rho, k, ref)
                worst = max(worst,
                            abs(val - float(ref[k])) / max(1.0, abs(float(ref[k]))))
        ok = worst <= 1e-8
        _report("criterion 4: moment agreement (k<=10, rho in {0.5,1,2})",
                ok, f"worst rel err={worst:.2e}")
        assert ok


class TestCriterion5:
    def test_lower_bound_on_proof_grid(self, params):
        log_min, arg = ascarlitz.scan_phi_lower_bound(params, n_shells=40,
                                                      per_interval=64)
        lb = float(ascarlitz.lower_bound_LB(params))
        ok = log_min >= math.log(lb) > -math.inf
        _report("criterion 5a: min phi over proof grid >= LB > 0", ok,
                f"min log phi={log_min:.4f}, log LB={math.log(lb):.4f} at x={arg:.3g}")
        assert ok

    @pytest.mark.xfail(
        strict=True,
        reason="the stated bound sup nu_rho <= c(a) rho/LB fails for rho < 1 "
               "(nu_0.01(0.2) ~ 52 vs bound ~ 5.3): the denominator only "
               "dominates min(1, rho^2) LB, so the bound needs max(rho, 1/rho)")
    def test_sup_and_entropy_bounds_as_stated(self, params, table_results):
        results, _ = table_results
        c = float(ascarlitz.c_of_a(params))
        lb = float(ascarlitz.lower_bound_LB(params))
        xs = np.unique(np.concatenate([np.linspace(-12, 12, 4001),
                                       np.geomspace(12, 1e5, 4000) - 1]))
        ok = True
        for rho, _ in REFERENCE_TABLE:
            bound = c * rho / lb
            sup = float(np.max(ascarlitz.density_nu(params, rho, xs)))
            ok &= sup <= bound and results[rho].value >= -math.log(bound)
        _report("criterion 5b (as stated): sup nu_rho <= c rho/LB per row", ok, "")
        assert ok

    def test_sup_and_entropy_bounds_corrected(self, params, table_results):
        results, _ = table_results
        xs = np.unique(np.concatenate([np.linspace(-12, 12, 4001),
                                       np.geomspace(12, 1e5, 4000) - 1]))
        worst_h = math.inf
        for rho, _ in REFERENCE_TABLE:
            bound = ascarlitz.density_sup_bound(params, rho)
            sup = float(np.max(ascarlitz.density_nu(params, rho, xs)))
            assert sup <= bound
            assert results[rho].value >= -math.log(bound)
            worst_h = min(worst_h, results[rho].value + math.log(bound))
        _report("criterion 5c (corrected): sup nu_rho <= c max(rho,1/rho)/LB "
                "and H >= -log of it", True, f"smallest margin={worst_h:.3f} nats")


class TestCriterion6:
    def test_gaussian_entropy(self):
        def pdf(x):
            return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2) / math.sqrt(2 * math.pi)

        r = entropy.entropy_of_density(pdf, m2=1.0, m4=3.0,
                                       cfg=entropy.QuadratureConfig(tol=1e-11))
        err = abs(r.value - 0.5 * math.log(2 * math.pi * math.e))
        ok = err <= 1e-10
        _report("criterion 6a: Gaussian entropy = ln(2 pi e)/2", ok, f"err={err:.2e}")
        assert ok

    def test_scale_law(self, params, m2_m4):
        lam = 2.0
        base = family_entropy(params, 1.0, tol=1e-8, m2=m2_m4[0], m4=m2_m4[1])
        logden = ascarlitz.log_denominator(params, 1.0)
        c1 = float(ascarlitz.c_of_a(params))

        def scaled(x):
            return lam * c1 * np.exp(-logden(lam * np.asarray(x, dtype=float)))

        cfg = entropy.QuadratureConfig(
            tol=1e-8, breakpoints=tuple(b / lam for b in
                                        ascarlitz.shell_breakpoints(params, 65536.0)))
        r = entropy.entropy_of_density(scaled, m2=m2_m4[0] / lam ** 2,
                                       m4=m2_m4[1] / lam ** 4, cfg=cfg)
        err = abs(r.value - (base.value - math.log(lam)))
        ok = err <= 1e-6
        _report("criterion 6b: scale law H[2 f(2x)] = H[f] - log 2", ok,
                f"err={err:.2e}")
        assert ok


class TestCriterion7:
    def test_continuity_along_half_circle(self, params, m2_m4):
        al = float(ascarlitz.alpha(params))
        tol = 1e-6
        coarse_t = [al * i / 18 for i in range(1, 18)]          # 17 points
        fine_t = []
        for u, v in zip(coarse_t[:-1], coarse_t[1:]):           # 33 points
            fine_t.extend([u, 0.5 * (u + v)])
        fine_t.append(coarse_t[-1])

        cfg = entropy.QuadratureConfig(
            tol=tol, breakpoints=tuple(ascarlitz.shell_breakpoints(params, 65536.0)))
        c_a = float(ascarlitz.c_of_a(params))

        def provider(point):
            hp = ascarlitz.halfcircle_point(params, point.t)
            logden = ascarlitz.log_denominator(params, float(hp.rho))
            shift = math.log(point.gamma / (math.pi * c_a * float(hp.rho)))
            return lambda x: shift + logden(x)

        def pickpoint(t):
            hp = ascarlitz.halfcircle_point(params, t)
            return hamburger.PickPoint(t=float(hp.t), gamma=float(hp.gamma))

        scan = entropy.continuity_scan([pickpoint(t) for t in fine_t], provider,
                                       m2=m2_m4[0], m4=m2_m4[1], cfg=cfg)
        fine = {t: r.value for t, r in zip(fine_t, scan)}
        coarse = [fine[t] for t in coarse_t]
        values = [fine[t] for t in fine_t]
        assert all(math.isfinite(v) for v in values)

        incr = [abs(b - a) for a, b in zip(coarse, coarse[1:])]
        worst_ratio = 0.0
        for i in range(len(coarse) - 1):
            mid = fine[0.5 * (coarse_t[i] + coarse_t[i + 1])]
            dev = abs(mid - 0.5 * (coarse[i] + coarse[i + 1]))
            local = max(incr[max(i - 1, 0):min(i + 2, len(incr))])
            allowance = 4.0 * local + 8.0 * tol
            worst_ratio = max(worst_ratio, dev / allowance)
            assert dev < allowance, f"jump near t={coarse_t[i]:.4f}"
        _report("criterion 7: finite, continuity-consistent H on 17/33-point paths",
                True, f"worst deviation at {100 * worst_ratio:.1f}% of allowance")


class TestCriterion8:
    def test_determinate_moments_rejected(self, gaussian_moments):
        rec = hamburger.recurrence_from_moments(
            hamburger.MomentSequence(gaussian_moments, 512), 20)
        with pytest.raises(DivergenceSuspected):
            hamburger.build_quadruple(rec, 20)
        _report("criterion 8: Gaussian (determinate) moments rejected", True,
                "DivergenceSuspected raised before any quadruple is produced")
