"""Entropy quadrature: classical closed forms, the two integration routes,
window certification, and the adaptive panel integrator itself."""

import math

import numpy as np
import pytest

from mpentropy import (PickPoint, QuadratureConfig, WindowExhausted, ascarlitz,
                       entropy)
from mpentropy.diagnostics import REFERENCE_TABLE, family_entropy

GAUSS_H = 0.5 * math.log(2 * math.pi * math.e)


def gauss_pdf(x):
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2) / math.sqrt(2 * math.pi)


def make_nu(params, rho):
    logden = ascarlitz.log_denominator(params, rho)
    c_rho = float(ascarlitz.c_of_a(params)) * rho

    def nu(x):
        return c_rho * np.exp(-logden(x))

    return nu


def family_cfg(params, tol):
    return QuadratureConfig(
        tol=tol, breakpoints=tuple(ascarlitz.shell_breakpoints(params, 65536.0)))


class TestAdaptiveIntegral:
    def test_sine(self):
        val, err, nodes = entropy.adaptive_integral(np.sin, 0.0, math.pi, 1e-12)
        assert abs(val - 2.0) < 1e-12
        assert nodes > 0

    def test_narrow_bump_found_by_geometric_seeding(self):
        # a 1e-3-wide bump far from any seed must still be resolved
        width = 1e-3

        def bump(x):
            return np.exp(-((np.asarray(x) - 3.7) / width) ** 2)

        val, err, _ = entropy.adaptive_integral(bump, -20.0, 100.0, 1e-12)
        assert val == pytest.approx(math.sqrt(math.pi) * width, rel=1e-8)

    def test_breakpoints_honored(self):
        def kink(x):
            x = np.asarray(x, dtype=float)
            return np.where(x < 1.0, x, 0.0)

        val, _, _ = entropy.adaptive_integral(kink, 0.0, 2.0, 1e-13,
                                              breakpoints=(1.0,))
        assert abs(val - 0.5) < 1e-13


class TestClassicalDensities:
    def test_gaussian(self):
        r = entropy.entropy_of_density(gauss_pdf, m2=1.0, m4=3.0,
                                       cfg=QuadratureConfig(tol=1e-11))
        assert abs(r.value - GAUSS_H) < 1e-10
        assert r.tail_estimate <= 1e-11

    def test_uniform(self):
        def uniform_pdf(x):
            x = np.asarray(x, dtype=float)
            return np.where((x >= 0.0) & (x <= 1.0), 1.0, 0.0)

        r = entropy.entropy_of_density(uniform_pdf, m2=1 / 3, m4=0.2,
                                       cfg=QuadratureConfig(tol=1e-11))
        assert abs(r.value) < 1e-10

    def test_without_fourth_moment(self):
        # m2-only tail bounds need a much larger window but still certify
        r = entropy.entropy_of_density(gauss_pdf, m2=1.0,
                                       cfg=QuadratureConfig(tol=1e-4))
        assert abs(r.value - GAUSS_H) < 1e-4
        assert r.window > 8


class TestFamilyEntropy:
    def test_reference_table(self, params, m2_m4):
        for rho, ref in REFERENCE_TABLE:
            r = family_entropy(params, rho, tol=1e-6, m2=m2_m4[0], m4=m2_m4[1])
            assert abs(r.value - ref) <= 2e-4, f"rho={rho}"

    def test_printed_digits_are_truncations(self, params, m2_m4):
        # the reference digits truncate |H|: recompute tightly and chop
        for rho, ref in REFERENCE_TABLE:
            r = family_entropy(params, rho, tol=1e-8, m2=m2_m4[0], m4=m2_m4[1])
            chopped = math.copysign(math.floor(abs(r.value) * 1e4) / 1e4, r.value)
            assert chopped == pytest.approx(ref, abs=1e-12), f"rho={rho}"

    def test_route_agreement(self, params, m2_m4):
        tol = 1e-6
        for rho, _ in REFERENCE_TABLE:
            fam = family_entropy(params, rho, tol=tol, m2=m2_m4[0], m4=m2_m4[1])
            direct = entropy.entropy_of_density(
                make_nu(params, rho), m2=m2_m4[0], m4=m2_m4[1],
                cfg=family_cfg(params, tol))
            assert abs(fam.value - direct.value) <= 2 * tol, f"rho={rho}"

    def test_scale_law(self, params, m2_m4):
        lam = 2.0
        base = family_entropy(params, 1.0, tol=1e-8, m2=m2_m4[0], m4=m2_m4[1])
        nu = make_nu(params, 1.0)

        def scaled(x):
            return lam * nu(lam * np.asarray(x, dtype=float))

        cfg = QuadratureConfig(
            tol=1e-8,
            breakpoints=tuple(b / lam for b in
                              ascarlitz.shell_breakpoints(params, 65536.0)))
        r = entropy.entropy_of_density(scaled, m2=m2_m4[0] / lam ** 2,
                                       m4=m2_m4[1] / lam ** 4, cfg=cfg)
        assert abs(r.value - (base.value - math.log(lam))) < 1e-6

    def test_entropy_bounded_below_by_sup_bound(self, params, m2_m4):
        for rho, _ in REFERENCE_TABLE:
            r = family_entropy(params, rho, tol=1e-6, m2=m2_m4[0], m4=m2_m4[1])
            assert r.value >= -math.log(ascarlitz.density_sup_bound(params, rho))

    def test_window_monotonicity(self, params, m2_m4):
        # tightening the tolerance enlarges the window; the value moves by
        # no more than the previously reported tail estimate
        loose = family_entropy(params, 1.0, tol=1e-4, m2=m2_m4[0], m4=m2_m4[1])
        tight = family_entropy(params, 1.0, tol=1e-9, m2=m2_m4[0], m4=m2_m4[1])
        assert tight.window >= loose.window
        assert abs(tight.value - loose.value) <= loose.tail_estimate

    def test_result_invariants(self, params, m2_m4):
        r = family_entropy(params, 0.5, tol=1e-6, m2=m2_m4[0], m4=m2_m4[1])
        assert math.isfinite(r.value)
        assert r.tail_estimate <= 1e-6
        assert r.nodes_used > 0
        assert r.window >= 8.0

    def test_window_exhausted(self, params, m2_m4):
        logden = ascarlitz.log_denominator(params, 1.0)
        shift = -math.log(float(ascarlitz.c_of_a(params)) * math.pi)
        hp = ascarlitz.halfcircle_from_rho(params, 1.0)
        point = PickPoint(t=float(hp.t), gamma=float(hp.gamma))
        cfg = QuadratureConfig(tol=1e-10, max_window=8.0)
        with pytest.raises(WindowExhausted):
            entropy.entropy_of_family(lambda x: shift + logden(x), point,
                                      m2=m2_m4[0], m4=m2_m4[1], cfg=cfg)


class TestContinuityScan:
    def test_single_point_path(self, params, m2_m4):
        hp = ascarlitz.halfcircle_from_rho(params, 1.0)
        point = PickPoint(t=float(hp.t), gamma=float(hp.gamma))
        shift = float(np.log(float(hp.gamma) /
                             (math.pi * float(ascarlitz.c_of_a(params)) * float(hp.rho))))
        logden = ascarlitz.log_denominator(params, float(hp.rho))
        results = entropy.continuity_scan(
            [point], lambda p: (lambda x: shift + logden(x)),
            m2=m2_m4[0], m4=m2_m4[1], cfg=family_cfg(params, 1e-6))
        assert len(results) == 1
        assert math.isfinite(results[0].value)

    def test_lower_half_plane_rejected(self):
        with pytest.raises(ValueError):
            PickPoint(t=0.1, gamma=0.0)
