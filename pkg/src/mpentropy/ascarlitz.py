"""Closed forms for the Al-Salam-Carlitz moment problem.

For parameters 0 < q < 1 < a < 1/q the moment problem is indeterminate
(even as a Stieltjes problem) and everything needed downstream has a
closed form in q-Pochhammer symbols:

* the analytic density family

      nu_rho(x) = c(a) * rho / ( ((1+x)/a; q)_inf^2 + rho^2 ((1+x); q)_inf^2 ),

  with  c(a) = |a-1| / (pi a) * (q;q)_inf (aq;q)_inf (q/a;q)_inf;

* two discrete solutions mu_K (atoms q^{-n} - 1) and mu_F (atoms
  a q^{-n} - 1), identified with the Krein and Friedrichs solutions;

* the constant alpha = -(sum_n (q;q)_n / a^{n+1})^{-1} < 0, and the
  half-circle t + i gamma(t), gamma(t) = sqrt(-t(t-alpha)), t in
  (alpha, 0), along which the general two-parameter density family
  collapses onto nu_rho via a bijection t <-> rho;

* a positive lower bound LB(a, q) for
  phi(x) = (x;q)_inf^2 + (x/a;q)_inf^2, which makes every density of
  the family bounded.

For q < a < 1 the problem is still an indeterminate Hamburger problem
(determinate as a Stieltjes problem); the densities survive with |a-1|
in c(a), mu_K stays a solution, and mu_F is rejected here because it
acquires a negative mass point.  The boundary a = 1 is rejected by
every operation.

Scalar constants are computed with mpmath at the qseries working
precision; density evaluations are vectorized float64 in log space.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp
import numpy as np

from .errors import AccuracyError, DomainError, RegimeError
from .qseries import WORKING_DPS, qpoch_infinite


class Regime(enum.Enum):
    INDETERMINATE_STIELTJES = "indeterminate-stieltjes"  # 1 < a < 1/q
    DETERMINATE_STIELTJES = "determinate-stieltjes"      # q < a < 1
    BOUNDARY = "boundary"                                # a = 1


@dataclass(frozen=True)
class QParams:
    """Validated (q, a) parameter pair with its regime.

    Accepts int/float/str/mpf for either parameter; pass decimal strings
    ("0.6") when the exact decimal value matters at high precision.
    """

    q: mp.mpf
    a: mp.mpf
    regime: Regime

    def __init__(self, q, a):
        # parse at a precision far above any pipeline's working precision,
        # so decimal strings ("0.6") stay exact for every consumer
        with mp.workprec(4096):
            q = mp.mpf(q)
            a = mp.mpf(a)
        if not 0 < q < 1:
            raise RegimeError(f"q must lie in (0,1), got {q}")
        if not a > 0:
            raise RegimeError(f"a must be positive, got {a}")
        if a * q >= 1:
            raise RegimeError(f"need a < 1/q, got a={a}, 1/q={1/q}")
        if a > 1:
            regime = Regime.INDETERMINATE_STIELTJES
        elif a == 1:
            regime = Regime.BOUNDARY
        elif a > q:
            regime = Regime.DETERMINATE_STIELTJES
        else:
            raise RegimeError(f"a <= q is outside the covered regimes (a={a}, q={q})")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "regime", regime)


@dataclass(frozen=True)
class DiscreteMeasure:
    """Truncated atomic probability measure (atoms strictly increasing).

    ``truncation_tail_bound`` and ``tol`` may be mpf values: generation
    tolerances for high-precision pipelines underflow float64.
    """

    atoms: tuple
    weights: tuple
    truncation_tail_bound: object
    tol: object  # the generation (mass) tolerance

    def __post_init__(self):
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if any(b >= c for b, c in zip(self.atoms, self.atoms[1:])):
            raise ValueError("atoms must be strictly increasing")


@dataclass(frozen=True)
class HalfCirclePoint:
    """Point t + i gamma(t) on the half-circle with diameter [alpha, 0],
    together with the density parameter rho(t) it corresponds to."""

    t: mp.mpf
    gamma: mp.mpf
    rho: mp.mpf


def _require(params: QParams, *regimes: Regime, what: str = "this quantity"):
    if params.regime not in regimes:
        raise RegimeError(
            f"{what} requires regime in {[r.value for r in regimes]}, "
            f"got {params.regime.value} (q={params.q}, a={params.a})"
        )


# ---------------------------------------------------------------------------
# scalar constants
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def alpha(params: QParams, tol: float = 1e-25):
    """alpha = -(sum_{n>=0} (q;q)_n / a^{n+1})^{-1} < 0.

    Requires 1 < a < 1/q.  Terms decrease geometrically (ratio < 1/a);
    the series is truncated when the geometric tail bound drops below
    tol relative to the partial sum.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, what="alpha")
    with mp.workdps(WORKING_DPS + 10):
        q, a = params.q, params.a
        total = mp.mpf(0)
        qn = mp.mpf(1)  # (q;q)_n
        apow = a
        for n in range(100000):
            term = qn / apow
            total += term
            # tail <= term/(a-1) since term ratios are < 1/a
            if term / (a - 1) < tol * total:
                break
            qn *= 1 - q ** (n + 1)
            apow *= a
        return -1 / total


@lru_cache(maxsize=64)
def c_of_a(params: QParams, tol: float = 1e-25):
    """Normalizing constant c(a) = |a-1|/(pi a) (q;q)inf (aq;q)inf (q/a;q)inf.

    Positive in both surviving regimes; the boundary a = 1 degenerates
    (c = 0) and is rejected.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, Regime.DETERMINATE_STIELTJES,
             what="c(a)")
    with mp.workdps(WORKING_DPS + 10):
        q, a = params.q, params.a
        prod = (qpoch_infinite(q, q, tol).value
                * qpoch_infinite(a * q, q, tol).value
                * qpoch_infinite(q / a, q, tol).value)
        return abs(a - 1) / (mp.pi * a) * prod


@lru_cache(maxsize=64)
def _rho_scale(params: QParams):
    """(a-1) (q/a;q)inf / (a (q;q)inf (aq;q)inf), the constant factor of rho(t)."""
    with mp.workdps(WORKING_DPS + 10):
        q, a = params.q, params.a
        return ((a - 1) * qpoch_infinite(q / a, q, 1e-25).value
                / (a * qpoch_infinite(q, q, 1e-25).value
                   * qpoch_infinite(a * q, q, 1e-25).value))


@lru_cache(maxsize=64)
def lower_bound_LB(params: QParams):
    """Positive lower bound for phi(x) = (x;q)inf^2 + (x/a;q)inf^2:

        LB(a,q) = (sqrt(aq);q)inf^2 (q/sqrt(a);q)inf^2
                  * min{ (1/sqrt(a) - 1)^2,  1/(q/sqrt(a);q)inf^2 }.

    Requires 1 < a < 1/q.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, what="LB(a,q)")
    with mp.workdps(WORKING_DPS + 10):
        q, a = params.q, params.a
        ra = mp.sqrt(a)
        p_aq = qpoch_infinite(mp.sqrt(a * q), q, 1e-25).value
        p_qa = qpoch_infinite(q / ra, q, 1e-25).value
        return p_aq ** 2 * p_qa ** 2 * min((1 / ra - 1) ** 2, 1 / p_qa ** 2)


# ---------------------------------------------------------------------------
# densities (vectorized, float64, log space)
# ---------------------------------------------------------------------------

def _log_qpoch_inf_vec(z, q: float, tol: float = 1e-17):
    """log |(z;q)_inf| for an array of real z, truncated so the dropped
    log-tail is below tol.  Exact zero factors give -inf."""
    z = np.asarray(z, dtype=float)
    zmax = float(np.max(np.abs(z), initial=0.0))
    target = tol * (1.0 - q) / 2.0
    if zmax <= target:
        nterms = 1
    else:
        nterms = int(np.ceil(np.log(target / zmax) / np.log(q))) + 1
    factors = 1.0 - z[..., None] * (q ** np.arange(nterms))
    with np.errstate(divide="ignore"):
        return np.sum(np.log(np.abs(factors)), axis=-1)


def log_denominator(params: QParams, rho):
    """Vectorized x -> log( ((1+x)/a;q)inf^2 + rho^2 ((1+x);q)inf^2 ).

    Stays finite for every real x (the two products have no common
    zeros), and never over/underflows: everything is kept in log space.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, Regime.DETERMINATE_STIELTJES,
             what="the density family")
    rho = float(rho)
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    q = float(params.q)
    a = float(params.a)
    log_rho2 = 2.0 * np.log(rho)

    def logden(x):
        y = np.asarray(x, dtype=float) + 1.0
        l1 = _log_qpoch_inf_vec(y / a, q)
        l2 = _log_qpoch_inf_vec(y, q)
        return np.logaddexp(2.0 * l1, 2.0 * l2 + log_rho2)

    return logden


def density_nu(params: QParams, rho, x):
    """Density nu_rho at x (scalar or array); strictly positive and finite."""
    logden = log_denominator(params, rho)
    val = float(c_of_a(params)) * float(rho) * np.exp(-logden(x))
    if np.isscalar(x) or np.asarray(x).shape == ():
        return float(val)
    return val


def phi(params: QParams, x):
    """phi(x) = (x;q)inf^2 + (x/a;q)inf^2 (plain value; overflows double
    precision for |x| beyond ~1e9 at q=0.6 -- use log_phi for scans)."""
    return np.exp(log_phi(params, x))


def log_phi(params: QParams, x):
    """log phi(x), safe for the whole shell scan range."""
    q = float(params.q)
    a = float(params.a)
    x = np.asarray(x, dtype=float)
    l1 = _log_qpoch_inf_vec(x, q)
    l2 = _log_qpoch_inf_vec(x / a, q)
    out = np.logaddexp(2.0 * l1, 2.0 * l2)
    return float(out) if out.shape == () else out


def boundedness_scan_grid(params: QParams, n_shells: int = 40,
                          per_interval: int = 64, linear_points: int = 400):
    """Grid on which phi(x) >= LB(a,q) is verified.

    Mirrors the structure of the lower-bound proof: a linear segment up
    to sqrt(aq), then for each shell n the two q-adic intervals
    [sqrt(a) q^{-n}, sqrt(a/q) q^{-n}] and [sqrt(a/q) q^{1-n}, sqrt(a) q^{-n}],
    sampled with per_interval points each.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, what="the phi scan")
    q = float(params.q)
    a = float(params.a)
    lo_c = np.sqrt(a)          # inner shell constant, in (1, a)
    hi_c = np.sqrt(a / q)      # outer shell constant, in (a, 1/q)
    pieces = [np.linspace(-10.0, q * hi_c, linear_points)]
    for n in range(n_shells + 1):
        scale = q ** (-n)
        pieces.append(np.linspace(lo_c * scale, hi_c * scale, per_interval))
        pieces.append(np.linspace(hi_c * q * scale, lo_c * scale, per_interval))
    return np.unique(np.concatenate(pieces))


def scan_phi_lower_bound(params: QParams, n_shells: int = 40,
                         per_interval: int = 64):
    """Minimum of log phi over the proof grid, with its location."""
    grid = boundedness_scan_grid(params, n_shells, per_interval)
    lp = log_phi(params, grid)
    i = int(np.argmin(lp))
    return float(lp[i]), float(grid[i])


def density_sup_bound(params: QParams, rho) -> float:
    """Upper bound c(a) max(rho, 1/rho) / LB(a,q) for sup nu_rho.

    The denominator of nu_rho dominates min(1, rho^2) phi(1+x), and phi
    is bounded below by LB(a,q); hence the entropy of every family
    member is bounded below by -log of this constant.
    """
    rho = float(rho)
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    return float(c_of_a(params)) * max(rho, 1.0 / rho) / float(lower_bound_LB(params))


def shell_breakpoints(params: QParams, xmax: float):
    """The points q^{-n} - 1 and a q^{-n} - 1 up to xmax: the zeros of the
    two denominator products, natural panel boundaries for quadrature."""
    q = float(params.q)
    a = float(params.a)
    pts = []
    n = 0
    while True:
        p1 = q ** (-n) - 1.0
        p2 = a * q ** (-n) - 1.0
        if p1 > xmax and p2 > xmax:
            break
        pts.extend(p for p in (p1, p2) if p <= xmax)
        n += 1
    return sorted(set(pts))


# ---------------------------------------------------------------------------
# discrete solutions
# ---------------------------------------------------------------------------

def _truncate_measure(weight_seq, atom_seq, ratio_seq, q, tol):
    """Shared truncation loop: stop after 5 consecutive weights below
    tol * q^n, certify the dropped mass by a geometric ratio bound."""
    atoms, weights = [], []
    consecutive = 0
    n = 0
    guard = mp.mpf(tol)
    while True:
        w = weight_seq(n)
        atoms.append(atom_seq(n))
        weights.append(w)
        consecutive = consecutive + 1 if w < guard * mp.mpf(q) ** n else 0
        if consecutive >= 5:
            break
        n += 1
        if n > 100000:
            raise AccuracyError("measure truncation did not terminate")
    r = ratio_seq(n + 1)
    if r >= mp.mpf("0.5"):
        raise AccuracyError("weight ratio not yet dominated; tol too loose")
    tail = weights[-1] * r / (1 - r)
    return DiscreteMeasure(tuple(atoms), tuple(weights), tail, mp.mpf(tol))


def mu_K(params: QParams, tol: float = 1e-20, dps: int | None = None) -> DiscreteMeasure:
    """Krein-type discrete solution: atoms q^{-n} - 1 with weights
    (aq;q)inf a^n q^{n^2} / ((aq;q)_n (q;q)_n).  Valid for q < a < 1/q, a != 1.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, Regime.DETERMINATE_STIELTJES,
             what="mu_K")
    dps = dps or max(WORKING_DPS, int(-mp.log10(mp.mpf(tol))) + 15)
    with mp.workdps(dps):
        q, a = params.q, params.a
        head = qpoch_infinite(a * q, q, tol=mp.mpf(10) ** (-(dps - 8)), dps=dps).value
        state = {"aqn": mp.mpf(1), "qn": mp.mpf(1), "n": -1}

        def weight(n):
            assert n == state["n"] + 1
            if n > 0:
                state["aqn"] *= 1 - a * q ** n
                state["qn"] *= 1 - q ** n
            state["n"] = n
            return head * a ** n * q ** (n * n) / (state["aqn"] * state["qn"])

        def ratio(n):
            return a * q ** (2 * n - 1) / ((1 - a * q ** n) * (1 - q ** n))

        return _truncate_measure(weight, lambda n: q ** (-n) - 1, ratio, q, tol)


def mu_F(params: QParams, tol: float = 1e-20, dps: int | None = None) -> DiscreteMeasure:
    """Friedrichs-type discrete solution: atoms a q^{-n} - 1 with weights
    (q/a;q)inf a^{-n} q^{n^2} / ((q/a;q)_n (q;q)_n).

    Requires 1 < a < 1/q: for q < a < 1 this formula carries a negative
    mass point and is rejected.
    """
    _require(params, Regime.INDETERMINATE_STIELTJES, what="mu_F")
    dps = dps or max(WORKING_DPS, int(-mp.log10(mp.mpf(tol))) + 15)
    with mp.workdps(dps):
        q, a = params.q, params.a
        head = qpoch_infinite(q / a, q, tol=mp.mpf(10) ** (-(dps - 8)), dps=dps).value
        state = {"qan": mp.mpf(1), "qn": mp.mpf(1), "n": -1}

        def weight(n):
            assert n == state["n"] + 1
            if n > 0:
                state["qan"] *= 1 - q ** n / a
                state["qn"] *= 1 - q ** n
            state["n"] = n
            return head * a ** (-n) * q ** (n * n) / (state["qan"] * state["qn"])

        def ratio(n):
            return q ** (2 * n - 1) / (a * (1 - q ** n / a) * (1 - q ** n))

        return _truncate_measure(weight, lambda n: a * q ** (-n) - 1, ratio, q, tol)


def moments_of_discrete(measure: DiscreteMeasure, k: int, rel_tol=1e-15):
    """k-th moment sum w_n atom_n^k of a truncated measure, certified.

    The dropped tail, estimated from the last two retained terms by a
    geometric bound (valid because both the weight ratio and the atom
    ratio are monotone beyond the truncation), must stay below rel_tol
    relative to the moment; AccuracyError otherwise asks for a deeper
    measure.  The certification scale is deliberately independent of the
    measure's mass tolerance: k-th-moment tails shrink with depth much
    more slowly than the mass tail does.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    terms = [w * x ** k for w, x in zip(measure.weights, measure.atoms)]
    total = mp.fsum(terms)
    t_prev, t_last = abs(terms[-2]), abs(terms[-1])
    if t_prev == 0:
        raise AccuracyError("degenerate truncation; regenerate the measure")
    r = t_last / t_prev
    if r >= mp.mpf("0.5"):
        raise AccuracyError(
            f"moment k={k}: term ratio {float(r):.3g} >= 1/2 at the truncation "
            "boundary; regenerate the measure with smaller tol"
        )
    tail = t_last * r / (1 - r)
    if tail > mp.mpf(rel_tol) * max(mp.mpf(1), abs(total)):
        raise AccuracyError(
            f"moment k={k}: certified relative tail {mp.nstr(tail / max(mp.mpf(1), abs(total)), 3)} "
            f"exceeds rel_tol={rel_tol}; regenerate the measure with smaller tol"
        )
    return total


def moment_values(params: QParams, k_max: int, precision_bits: int = 512):
    """Moments m_0..m_{k_max} of the family, computed from mu_K with a
    truncation deep enough that every requested moment is certified to
    the target precision."""
    extra = int(mp.ceil(mp.sqrt((precision_bits * mp.log(2) + 60)
                                / mp.log(1 / params.q))))
    n_stop = k_max // 2 + extra + 5
    q, a = params.q, params.a
    dps = int(precision_bits * 0.302) + 25
    with mp.workdps(dps):
        tol = mp.mpf(q) ** (n_stop * n_stop - n_stop) * mp.mpf(a) ** n_stop
    measure = mu_K(params, tol=tol, dps=dps)
    with mp.workdps(dps):
        rel_tol = mp.mpf(2) ** (-precision_bits - 10)
        # certify the deepest moment: its truncation dominates the others
        moments_of_discrete(measure, k_max, rel_tol=rel_tol)
        powers = [mp.mpf(1)] * len(measure.atoms)
        out = []
        for k in range(k_max + 1):
            if k > 0:
                powers = [p * x for p, x in zip(powers, measure.atoms)]
            out.append(mp.fsum(w * p for w, p in zip(measure.weights, powers)))
        return out


# ---------------------------------------------------------------------------
# half-circle correspondence
# ---------------------------------------------------------------------------

def halfcircle_point(params: QParams, t) -> HalfCirclePoint:
    """Point t + i gamma(t) on the half-circle over (alpha, 0), and the
    rho(t) whose density the general family reproduces there:

        gamma(t) = sqrt(-t (t - alpha)),
        rho(t)   = gamma(t)/(t alpha) * (a-1)(q/a;q)inf / (a (q;q)inf (aq;q)inf),

    using t^2 + gamma^2(t) = t alpha > 0.  rho maps (alpha,0) onto
    (0, inf), increasing toward t -> 0-.
    """
    al = alpha(params)
    with mp.workdps(WORKING_DPS + 10):
        t = mp.mpf(t)
        if not al < t < 0:
            raise DomainError(f"t must lie in (alpha, 0) = ({al}, 0), got {t}")
        gamma = mp.sqrt(-t * (t - al))
        rho = gamma / (t * al) * _rho_scale(params)
        return HalfCirclePoint(t=t, gamma=gamma, rho=rho)


def halfcircle_from_rho(params: QParams, rho) -> HalfCirclePoint:
    """Inverse of the t -> rho(t) bijection, in closed form:
    t = alpha s^2 / (rho^2 alpha^2 + s^2) with s the constant factor of rho(t)."""
    al = alpha(params)
    with mp.workdps(WORKING_DPS + 10):
        rho = mp.mpf(rho)
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho}")
        s = _rho_scale(params)
        t = al * s ** 2 / (rho ** 2 * al ** 2 + s ** 2)
        return halfcircle_point(params, t)
