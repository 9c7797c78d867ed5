"""Verification suites driven by the command-line ``verify`` command.

Each suite returns a list of row dicts
    {label, value, tolerance, residual, pass}
covering the invariants of one module: q-product identities, measure
normalization and moment agreement, determinant identity and
closed-form equivalence of the function pipeline, and the entropy
regression table.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from . import ascarlitz, entropy, hamburger, qseries
from .errors import DivergenceSuspected

# Reference entropy values for the family at (q, a) = (0.6, 1.2): printed
# digits are truncations of the exact values, so each is accurate to 1e-4.
REFERENCE_TABLE = (
    (0.01, -2.1184),
    (0.2, 0.5216),
    (0.5, 0.9714),
    (1.0, 1.0617),
    (2.0, 0.9100),
    (5.0, 0.4000),
    (10.0, -0.1393),
)
REFERENCE_TABLE_PARAMS = (0.6, 1.2)

GAUSSIAN_ENTROPY = 0.5 * math.log(2 * math.pi * math.e)


def _row(label, value, tolerance=None, residual=None):
    ok = True
    if residual is not None and tolerance is not None:
        ok = residual <= tolerance
    return {
        "label": label,
        "value": float(value),
        "tolerance": float(tolerance) if tolerance is not None else None,
        "residual": float(residual) if residual is not None else None,
        "pass": bool(ok),
    }


# ---------------------------------------------------------------------------
# qseries
# ---------------------------------------------------------------------------

def qseries_suite(params: ascarlitz.QParams):
    q = params.q
    rows = []
    for z, n in ((0.7, 0), (0.7, 5), (-2.5, 8)):
        res = qseries.qpoch_split_identity_check(z, q, n, tol=1e-14)
        rows.append(_row(f"split identity z={z} n={n}", res, 1e-13, res))

    # shift consistency: (z;q)_inf = (1-z)(zq;q)_inf
    for z in (0.3, 0.8, -1.5):
        with mp.workdps(qseries.WORKING_DPS):
            whole = qseries.qpoch_infinite(z, q, 1e-20).value
            shifted = (1 - mp.mpf(z)) * qseries.qpoch_infinite(mp.mpf(z) * q, q, 1e-20).value
            res = float(abs(shifted - whole) / abs(whole))
        rows.append(_row(f"shift identity z={z}", res, 1e-19, res))

    # Euler pentagonal-number series as an independent oracle for (q;q)_inf
    with mp.workdps(qseries.WORKING_DPS + 10):
        series = mp.fsum((-1) ** k * q ** (k * (3 * k - 1) // 2)
                         for k in range(-40, 41))
        prod = qseries.qpoch_infinite(q, q, 1e-25).value
        res = float(abs(series - prod) / series)
    rows.append(_row("pentagonal-series cross-check", res, 1e-24, res))

    # monotonicity in z on (0, 1)
    vals = [qseries.qpoch_infinite(z, q, 1e-20).value for z in (0.2, 0.5, 0.9)]
    viol = max(0.0, float(vals[1] - vals[0]), float(vals[2] - vals[1]))
    rows.append(_row("monotone decreasing in z", viol, 0.0, viol))
    return rows


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def density_moment(params: ascarlitz.QParams, rho, k: int, ref_moments,
                   rel_tol: float = 1e-9):
    """int x^k nu_rho dx by adaptive panels over an expanding window; the
    window stops when the moment-based tail bound (using the higher
    reference moments) is below rel_tol of the reference scale."""
    scale = abs(float(ref_moments[k])) + 1.0
    dens = ascarlitz.log_denominator(params, rho)
    c_rho = float(ascarlitz.c_of_a(params)) * float(rho)

    def g(x):
        x = np.asarray(x, dtype=float)
        return x ** k * c_rho * np.exp(-dens(x))

    X = 64.0
    while True:
        # tail: int_{|x|>X} |x|^k f <= (m_{k+j} + 1)/X^j
        tail = min(float(abs(ref_moments[k + j]) + 1) / X ** j
                   for j in (2, 4, 6, 8) if k + j < len(ref_moments))
        if tail <= 0.2 * rel_tol * scale or X >= 2 ** 20:
            break
        X *= 2
    bp = tuple(ascarlitz.shell_breakpoints(params, X))
    val, err, _ = entropy.adaptive_integral(g, -X, X, 0.2 * rel_tol * scale,
                                            breakpoints=bp)
    return val, tail + err


def measures_suite(params: ascarlitz.QParams):
    rows = []
    mk = ascarlitz.mu_K(params, tol=1e-20)
    res = float(abs(mp.fsum(mk.weights) - 1))
    rows.append(_row("mu_K weights sum to 1", res, 2e-20, res))

    mf = None
    if params.regime is ascarlitz.Regime.INDETERMINATE_STIELTJES:
        mf = ascarlitz.mu_F(params, tol=1e-20)
        res = float(abs(mp.fsum(mf.weights) - 1))
        rows.append(_row("mu_F weights sum to 1", res, 2e-20, res))

    # deeper truncations so moments up to k=18 certify at 1e-12 relative
    mk_deep = ascarlitz.mu_K(params, tol=1e-60)
    moments_k = [ascarlitz.moments_of_discrete(mk_deep, k, rel_tol=1e-12)
                 for k in range(19)]
    if mf is not None:
        mf_deep = ascarlitz.mu_F(params, tol=1e-60)
        worst = 0.0
        for k in range(11):
            other = ascarlitz.moments_of_discrete(mf_deep, k, rel_tol=1e-12)
            worst = max(worst, float(abs(other - moments_k[k])
                                     / max(1, abs(moments_k[k]))))
        rows.append(_row("moment agreement mu_K vs mu_F (k<=10)", worst, 1e-10, worst))

    for rho in (0.5, 1.0, 2.0):
        worst = 0.0
        for k in range(11):
            val, _ = density_moment(params, rho, k, moments_k)
            worst = max(worst, abs(val - float(moments_k[k]))
                        / max(1.0, abs(float(moments_k[k]))))
        rows.append(_row(f"density moments match mu_K (k<=10, rho={rho})",
                         worst, 1e-8, worst))
    return rows


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def pipeline_suite(params: ascarlitz.QParams, precision_bits: int = 512,
                   n_terms: int = 40, equivalence_points: int = 40):
    rows = []
    values = ascarlitz.moment_values(params, 2 * (n_terms - 1), precision_bits)
    mseq = hamburger.MomentSequence(values, precision_bits)
    rec = hamburger.recurrence_from_moments(mseq, n_terms - 1)
    rows.append(_row("recurrence off-diagonal positive",
                     float(min(rec.offdiag)), None, None))
    quad = hamburger.build_quadruple(rec, n_terms)
    rows.append(_row(f"series tail indicator at {quad.terms} terms",
                     quad.tail_indicator, None, None))

    worst = 0.0
    with mp.workprec(precision_bits):
        for x in (-0.5, 0.0, 1.0, 3.0):
            A, B, C, D = quad.evaluate(mp.mpf(x))
            worst = max(worst, float(abs(A * D - B * C - 1)))
    rows.append(_row("determinant identity |AD-BC-1|", worst, 1e-8, worst))

    # closed-form equivalence on the half-circle; the bound reflects the
    # geometric series truncation at `terms` terms (error ~ (aq)^terms,
    # amplified near density peaks)
    hp = ascarlitz.halfcircle_point(params, ascarlitz.alpha(params) / 2)
    point = hamburger.PickPoint(t=float(hp.t), gamma=float(hp.gamma))
    xs = np.linspace(-1.0, 6.0, equivalence_points)
    closed = ascarlitz.density_nu(params, float(hp.rho), xs)
    worst = 0.0
    for x, ref in zip(xs, closed):
        f = float(hamburger.density_f(quad, point, x))
        worst = max(worst, abs(f - ref) / ref)
    trunc_envelope = max(1e-6, 300.0 * float(params.a * params.q) ** quad.terms)
    rows.append(_row(f"half-circle equivalence ({quad.terms} terms)",
                     worst, trunc_envelope, worst))

    # boundedness probe against the closed-form sup bound
    grid = np.concatenate([np.linspace(-10, 10, 41),
                           np.geomspace(10, 100, 16)])
    min_h, _ = hamburger.boundedness_probe(quad, point, grid)
    floor = float(hp.gamma) / (math.pi * ascarlitz.density_sup_bound(params, float(hp.rho)))
    rows.append(_row("boundedness probe min h >= gamma/(pi sup nu)",
                     min_h, 0.0, max(0.0, floor - min_h)))

    # determinate control: Gaussian moments must be rejected
    gauss = [mp.mpf(0)] * 41
    gauss[0] = mp.mpf(1)
    for k in range(1, 21):
        gauss[2 * k] = gauss[2 * k - 2] * (2 * k - 1)
    rec_g = hamburger.recurrence_from_moments(
        hamburger.MomentSequence(gauss, 256), 20)
    try:
        hamburger.build_quadruple(rec_g, 20)
        rejected = 0.0
    except DivergenceSuspected:
        rejected = 1.0
    rows.append(_row("determinate moments rejected", rejected, 0.0,
                     0.0 if rejected else 1.0))
    return rows


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------

def family_entropy(params: ascarlitz.QParams, rho, tol: float = 1e-6,
                   m2=None, m4=None):
    """Entropy of nu_rho through the family route, with shell-seeded panels."""
    if m2 is None or m4 is None:
        mk = ascarlitz.mu_K(params, tol=1e-26)
        m2 = float(ascarlitz.moments_of_discrete(mk, 2))
        m4 = float(ascarlitz.moments_of_discrete(mk, 4))
    hp = ascarlitz.halfcircle_from_rho(params, rho)
    point = hamburger.PickPoint(t=float(hp.t), gamma=float(hp.gamma))
    logden = ascarlitz.log_denominator(params, float(hp.rho))
    shift = float(mp.log(hp.gamma / (mp.pi * ascarlitz.c_of_a(params) * hp.rho)))

    def log_h(x):
        return shift + logden(x)

    cfg = entropy.QuadratureConfig(
        tol=tol, breakpoints=tuple(ascarlitz.shell_breakpoints(params, 65536.0)))
    return entropy.entropy_of_family(log_h, point, m2, m4, cfg)


def entropy_suite(params: ascarlitz.QParams, tol: float = 1e-6):
    rows = []

    def gauss_pdf(x):
        return np.exp(-0.5 * np.asarray(x) ** 2) / math.sqrt(2 * math.pi)

    r = entropy.entropy_of_density(gauss_pdf, m2=1.0, m4=3.0,
                                   cfg=entropy.QuadratureConfig(tol=1e-11))
    res = abs(r.value - GAUSSIAN_ENTROPY)
    rows.append(_row("Gaussian closed form", r.value, 1e-10, res))

    def uniform_pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x >= 0.0) & (x <= 1.0), 1.0, 0.0)

    r = entropy.entropy_of_density(uniform_pdf, m2=1.0 / 3.0, m4=0.2,
                                   cfg=entropy.QuadratureConfig(tol=1e-11))
    rows.append(_row("uniform density", r.value, 1e-10, abs(r.value)))

    mk = ascarlitz.mu_K(params, tol=1e-26)
    m2 = float(ascarlitz.moments_of_discrete(mk, 2))
    m4 = float(ascarlitz.moments_of_discrete(mk, 4))

    # scale law H[lam f(lam .)] = H[f] - log(lam)
    lam = 2.0
    base = family_entropy(params, 1.0, tol=1e-8, m2=m2, m4=m4)
    dens = ascarlitz.log_denominator(params, 1.0)
    c1 = float(ascarlitz.c_of_a(params))

    def scaled(x):
        return lam * c1 * np.exp(-dens(lam * np.asarray(x, dtype=float)))

    cfg = entropy.QuadratureConfig(
        tol=1e-8, breakpoints=tuple(b / lam for b in
                                    ascarlitz.shell_breakpoints(params, 65536.0)))
    r = entropy.entropy_of_density(scaled, m2=m2 / lam ** 2, m4=m4 / lam ** 4, cfg=cfg)
    res = abs(r.value - (base.value - math.log(lam)))
    rows.append(_row("scale law (lambda=2)", r.value, 1e-6, res))

    # route agreement at rho = 1
    def nu1(x):
        return c1 * np.exp(-dens(x))

    cfg = entropy.QuadratureConfig(
        tol=tol, breakpoints=tuple(ascarlitz.shell_breakpoints(params, 65536.0)))
    direct = entropy.entropy_of_density(nu1, m2=m2, m4=m4, cfg=cfg)
    res = abs(direct.value - base.value)
    rows.append(_row("route agreement (rho=1)", direct.value, 2 * tol, res))

    if (float(params.q), float(params.a)) == REFERENCE_TABLE_PARAMS:
        for rho, ref in REFERENCE_TABLE:
            r = family_entropy(params, rho, tol=tol, m2=m2, m4=m4)
            res = abs(r.value - ref)
            rows.append(_row(f"reference entropy rho={rho}", r.value, 2e-4, res))
            bound = -math.log(ascarlitz.density_sup_bound(params, rho))
            viol = max(0.0, bound - r.value)
            rows.append(_row(f"entropy lower bound rho={rho}", r.value, 0.0, viol))
    return rows


SUITES = {
    "qseries": lambda params, **kw: qseries_suite(params),
    "measures": lambda params, **kw: measures_suite(params),
    "pipeline": lambda params, **kw: pipeline_suite(params, **kw),
    "entropy": lambda params, **kw: entropy_suite(params),
}


def run_suite(name: str, params: ascarlitz.QParams, **kwargs):
    if name == "all":
        rows = []
        for key in ("qseries", "measures", "pipeline", "entropy"):
            rows.extend(run_suite(key, params, **kwargs))
        return rows
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name](params, **kwargs)
