#!/usr/bin/env python3
"""The general pipeline against the closed form, and how truncation bites.

From moments alone (computed here from the Krein-type discrete solution)
the pipeline builds orthonormal polynomials via Hankel factorization, the
four entire functions A, B, C, D, and the density family.  On the
half-circle the result must reproduce the closed-form densities; the
error is governed by the geometric decay of the series coefficients
p_k(0)^2 + q_k(0)^2 ~ (a q)^k, i.e. roughly 0.72^k at these parameters,
so every ~7 extra terms buy one decimal digit.

A D - B C = 1, by contrast, holds *exactly* at every truncation order
(the partial sums form a product of SL(2) transfer matrices), so the
determinant residual shows the rounding floor, never the truncation.
"""

import mpmath as mp
import numpy as np

from mpentropy import (DivergenceSuspected, MomentSequence, PickPoint, QParams,
                       alpha, build_quadruple, density_f, density_nu,
                       halfcircle_point, moment_values, recurrence_from_moments)

params = QParams("0.6", "1.2")
hp = halfcircle_point(params, alpha(params) / 2)
point = PickPoint(t=float(hp.t), gamma=float(hp.gamma))
xs = np.linspace(-1.0, 6.0, 80)
closed = density_nu(params, float(hp.rho), xs)

print("building moments m_0..m_140 from the discrete solution (512 bits)...")
values = moment_values(params, 140, precision_bits=512)
rec = recurrence_from_moments(MomentSequence(values, 512), 70)

print(f"\n{'terms':>6}  {'max rel density err':>20}  {'|AD-BC-1| at x=3':>18}")
for terms in (11, 21, 31, 41, 51, 61, 71):
    quad = build_quadruple(rec, terms)
    worst = max(abs(float(density_f(quad, point, float(x))) - ref) / ref
                for x, ref in zip(xs, closed))
    with mp.workprec(512):
        A, B, C, D = quad.evaluate(mp.mpf(3))
        det_res = float(abs(A * D - B * C - 1))
    print(f"{terms:6d}  {worst:20.3e}  {det_res:18.3e}")

print("\nfeeding Gaussian moments (a determinate problem) instead:")
gauss = [1, 0]
for k in range(1, 21):
    gauss.append(gauss[-2] * (2 * k - 1))
    gauss.append(0)
rec_g = recurrence_from_moments(MomentSequence(gauss[:41], 256), 20)
try:
    build_quadruple(rec_g, 20)
except DivergenceSuspected as exc:
    print(f"  rejected as expected: {exc}")
