"""q-Pochhammer symbols with certified truncation error.

Evaluates the finite product

    (z; q)_n = prod_{k=1..n} (1 - z q^{k-1}),      (z; q)_0 = 1,

and the infinite product (z; q)_inf, which converges for 0 < q < 1.
The infinite product is truncated at an index K chosen so that the
remaining log-tail

    sum_{k>=K} |log(1 - z q^k)| <= |z| q^K / ((1 - q)(1 - |z| q^K))

is below the requested tolerance; that analytic remainder is folded
into the reported error bound.

All routines run at a configurable working precision (mpmath), default
about 30 significant digits.  Results carry both the value and the
natural log of its absolute value, so downstream code can stay in log
space when products over- or under-flow double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import NonConvergence

# Default working precision, in significant decimal digits.  Roughly a
# 128-bit mantissa; generous for every closed form used downstream.
WORKING_DPS = 30

# Retries allowed when a tolerance is unreachable: each retry doubles
# the working precision of the failing call.
MAX_PRECISION_DOUBLINGS = 2


@dataclass(frozen=True)
class QPochhammerResult:
    """Value of an infinite q-Pochhammer product with certified error.

    ``log_abs`` is the natural log of ``|value|`` (``-inf`` for an exact
    zero).  ``relative_error_bound`` covers both the analytic truncation
    remainder and the accumulated rounding of ``terms_used`` factors.
    """

    value: mp.mpf
    log_abs: mp.mpf
    relative_error_bound: float
    terms_used: int


def qpoch_finite(z, q, n: int):
    """Finite product (z;q)_n = prod_{k=1..n}(1 - z q^{k-1}).

    Total function: any real z, 0 < q < 1, n >= 0.  Exact product in
    the working precision.
    """
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    with mp.workdps(WORKING_DPS):
        z = mp.mpf(z)
        q = mp.mpf(q)
        if not 0 < q < 1:
            raise ValueError(f"q must lie in (0,1), got {q}")
        prod = mp.mpf(1)
        zq = z
        for _ in range(n):
            prod *= 1 - zq
            zq *= q
        return prod


def qpoch_infinite(z, q, tol: float = 1e-15, dps: int | None = None) -> QPochhammerResult:
    """Infinite product (z;q)_inf with relative error <= tol.

    The product terminates early with an exact 0 only when a factor
    vanishes exactly (z = q^{-k} hit exactly, e.g. z = 1).  Otherwise
    the truncation index K satisfies |z| q^K <= tol (1-q)/2, and the
    geometric log-tail bound is added to ``relative_error_bound``.

    Raises NonConvergence if the tolerance is unreachable even after
    doubling the working precision MAX_PRECISION_DOUBLINGS times.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    dps = dps if dps is not None else WORKING_DPS

    for attempt in range(MAX_PRECISION_DOUBLINGS + 1):
        result = _qpoch_infinite_at(z, q, tol, dps * (2 ** attempt))
        if result is not None:
            return result
    raise NonConvergence(
        f"(z;q)_inf at z={z}: relative tolerance {tol} unreachable at "
        f"{dps * 2 ** MAX_PRECISION_DOUBLINGS} digits"
    )


def _qpoch_infinite_at(z, q, tol, dps):
    """One evaluation attempt at a fixed working precision; None if the
    rounding floor alone exceeds the tolerance budget."""
    with mp.workdps(dps):
        z = mp.mpf(z)
        q = mp.mpf(q)
        if not 0 < q < 1:
            raise ValueError(f"q must lie in (0,1), got {q}")
        if z == 0:
            return QPochhammerResult(mp.mpf(1), mp.mpf(0), 0.0, 0)

        # Truncation index: first K with |z| q^K <= tol (1-q)/2, and small
        # enough that the log-tail bound below is valid (|z| q^K < 1/2).
        target = min(mp.mpf(tol) * (1 - q) / 2, mp.mpf("0.25"))
        k_stop = int(mp.ceil(mp.log(target / abs(z)) / mp.log(q))) if abs(z) > target else 0
        k_stop = max(k_stop, 0)

        prod = mp.mpf(1)
        log_abs = mp.mpf(0)
        zq = z
        for _ in range(k_stop):
            factor = 1 - zq
            if factor == 0:
                return QPochhammerResult(mp.mpf(0), mp.mpf("-inf"), 0.0, k_stop)
            prod *= factor
            log_abs += mp.log(abs(factor))
            zq *= q

        # Analytic remainder: sum_{k>=K} |log(1 - z q^k)|.
        zqk = abs(z) * q ** k_stop
        tail = float(zqk / ((1 - q) * (1 - zqk)))
        rounding = 2.0 * (k_stop + 1) * float(mp.mpf(2) ** (-mp.mp.prec))
        if rounding > tol / 2:
            return None
        bound = tail + rounding
        if bound > tol:
            return None
        return QPochhammerResult(prod, log_abs, bound, k_stop)


def qpoch_split_identity_check(z, q, n: int, tol: float = 1e-14) -> float:
    """Relative residual of (z;q)_n (z q^n; q)_inf = (z;q)_inf.

    Both sides are computed independently; the residual must stay below
    ~10x the tolerance used for the infinite products.
    """
    with mp.workdps(WORKING_DPS):
        z = mp.mpf(z)
        q = mp.mpf(q)
        left = qpoch_finite(z, q, n) * qpoch_infinite(z * q ** n, q, tol).value
        whole = qpoch_infinite(z, q, tol).value
        if whole == 0:
            return float(abs(left))
        return float(abs(left - whole) / abs(whole))
