"""General machinery for indeterminate Hamburger moment problems.

From a normalized moment sequence (m_0 = 1) this module builds, in
configurable arbitrary precision:

* the three-term recurrence of the orthonormal polynomials p_n, via
  triangular (Cholesky) factorization of the Hankel matrix H_n =
  (m_{i+j}): with H = L L^T the recurrence coefficients are

      b_k = L[k][k] / L[k-1][k-1]              (off-diagonal, > 0),
      a_k = L[k+1][k]/L[k][k] - L[k][k-1]/L[k-1][k-1]   (diagonal);

* the second-kind polynomials q_n (same recurrence, q_0 = 0,
  q_1 = 1/b_1);

* the four entire functions of the Nevanlinna parametrization as
  truncated series

      A(z) = z sum q_k(z) q_k(0),      B(z) = -1 + z sum p_k(z) q_k(0),
      C(z) = 1 + z sum q_k(z) p_k(0),  D(z) = z sum p_k(z) p_k(0);

* the analytic density family

      f_{t+ig}(x) = (g/pi) / [ (t B(x) - D(x))^2 + g^2 B(x)^2 ],

  one solution of the moment problem for every point t + ig of the
  upper half-plane, and the matching Stieltjes transform
  -(A phi - C)/(B phi - D) for the constant parameter phi = t + ig.

A note on the truncated determinant identity: the partial sums above
form a product of 2x2 transfer matrices of determinant one, so
A D - B C = 1 holds *exactly* at every truncation order (for whatever
coefficients are used).  The measured residual is therefore a rounding
floor ~2^-precision, not a truncation indicator; series truncation is
monitored through ``tail_indicator`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .errors import DivergenceSuspected, IllConditioned
from .qseries import WORKING_DPS

_REFERENCE_GRID = tuple(np.linspace(-5.0, 5.0, 11))


@dataclass(frozen=True)
class MomentSequence:
    """Normalized moments m_0..m_n at a stated working precision.

    Values may be given as mpf, int, float, or decimal strings; strings
    are converted at ``precision_bits`` so no textual precision is lost.
    Positive-definiteness of the Hankel matrices is not checked here;
    the factorization in ``recurrence_from_moments`` is the check.
    """

    values: tuple
    precision_bits: int = 512

    def __init__(self, values, precision_bits: int = 512):
        with mp.workprec(precision_bits):
            vals = tuple(mp.mpf(v) for v in values)
        if not vals:
            raise ValueError("need at least m_0")
        if abs(vals[0] - 1) > mp.mpf("1e-12"):
            raise ValueError(f"moment sequences are normalized: m_0 must be 1, got {vals[0]}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "precision_bits", precision_bits)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class JacobiRecurrence:
    """Three-term recurrence  b_{k+1} p_{k+1} = (x - a_k) p_k - b_k p_{k-1}.

    ``diag`` holds a_0..a_{n-1} and ``offdiag`` holds b_1..b_n (strictly
    positive), enough to evaluate p_0..p_n and q_0..q_n.
    """

    diag: tuple
    offdiag: tuple
    precision_bits: int = 512

    def __post_init__(self):
        if len(self.diag) != len(self.offdiag):
            raise ValueError("need as many off-diagonal as diagonal coefficients")
        if any(not b > 0 for b in self.offdiag):
            raise ValueError("off-diagonal coefficients must be strictly positive")

    @property
    def order(self) -> int:
        return len(self.diag)


@dataclass(frozen=True)
class PickPoint:
    """Point t + i gamma in the open upper half-plane, selecting one
    density of the analytic family."""

    t: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


def recurrence_from_moments(m: MomentSequence, n: int) -> JacobiRecurrence:
    """Recurrence coefficients of the orthonormal polynomials p_0..p_n.

    Needs moments m_0..m_{2n}.  Raises IllConditioned when the Cholesky
    factorization of the Hankel matrix meets a non-positive pivot
    (precision too low, or the sequence is not strictly positive
    definite); callers should retry with more precision bits.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if len(m) < 2 * n + 1:
        raise ValueError(f"need m_0..m_{2*n} (got {len(m)} moments)")
    with mp.workprec(m.precision_bits):
        size = n + 1
        L = [[mp.mpf(0)] * size for _ in range(size)]
        for i in range(size):
            for j in range(i + 1):
                s = m.values[i + j] - mp.fsum(L[i][k] * L[j][k] for k in range(j))
                if i == j:
                    if not s > 0:
                        raise IllConditioned(
                            f"non-positive Hankel pivot at order {i} "
                            f"({m.precision_bits} bits); raise precision_bits"
                        )
                    L[i][i] = mp.sqrt(s)
                else:
                    L[i][j] = s / L[j][j]
        diag, off = [], []
        for k in range(n):
            sub_k = L[k][k - 1] / L[k - 1][k - 1] if k >= 1 else mp.mpf(0)
            diag.append(L[k + 1][k] / L[k][k] - sub_k)
            off.append(L[k + 1][k + 1] / L[k][k])
        return JacobiRecurrence(tuple(diag), tuple(off), m.precision_bits)


def recurrence_with_stabilization(moment_provider, n: int,
                                  initial_bits: int = 512,
                                  target_rel: float = 1e-25,
                                  max_doublings: int = 4) -> JacobiRecurrence:
    """Double the working precision until the recurrence coefficients
    stabilize to ``target_rel``; ``moment_provider(bits)`` must return
    the raw moment values recomputed (or re-parsed) at that precision."""
    bits = initial_bits
    prev = None
    for _ in range(max_doublings + 1):
        try:
            rec = recurrence_from_moments(
                MomentSequence(moment_provider(bits), bits), n)
        except IllConditioned:
            bits *= 2
            continue
        if prev is not None:
            drift = max(abs((x - y) / y) for x, y in
                        zip(prev.offdiag, rec.offdiag))
            if drift <= target_rel:
                return rec
        prev = rec
        bits *= 2
    if prev is None:
        raise IllConditioned(f"no positive-definite factorization up to {bits} bits")
    return prev


def _eval_pair(rec: JacobiRecurrence, z, count: int):
    """First- and second-kind values p_0..p_{count-1}, q_0..q_{count-1};
    z may be real or complex (same recurrence, complex arithmetic)."""
    diag, off = rec.diag, rec.offdiag
    p = [mp.mpf(1)]
    q = [mp.mpf(0)]
    if count > 1:
        p.append((z - diag[0]) / off[0])
        q.append(1 / off[0])
    for k in range(1, count - 1):
        p.append(((z - diag[k]) * p[k] - off[k - 1] * p[k - 1]) / off[k])
        q.append(((z - diag[k]) * q[k] - off[k - 1] * q[k - 1]) / off[k])
    return p, q


def eval_first_kind(rec: JacobiRecurrence, x):
    """Orthonormal polynomial values p_0(x)..p_n(x) (p_0 = 1)."""
    with mp.workprec(rec.precision_bits):
        return _eval_pair(rec, mp.mpmathify(x), rec.order + 1)[0]


def eval_second_kind(rec: JacobiRecurrence, x):
    """Second-kind values q_0(x)..q_n(x) (q_0 = 0, deg q_n = n-1)."""
    with mp.workprec(rec.precision_bits):
        return _eval_pair(rec, mp.mpmathify(x), rec.order + 1)[1]


def gauss_rule(rec: JacobiRecurrence, order: int):
    """Gauss quadrature nodes and weights of the given order from the
    Jacobi matrix (eigenvalues; squared first eigenvector components)."""
    if not 1 <= order <= rec.order:
        raise ValueError(f"order must be in 1..{rec.order}")
    with mp.workprec(rec.precision_bits):
        J = mp.zeros(order)
        for i in range(order):
            J[i, i] = rec.diag[i]
        for i in range(order - 1):
            J[i, i + 1] = J[i + 1, i] = rec.offdiag[i]
        E, Q = mp.eigsy(J)
        nodes = [E[i] for i in range(order)]
        weights = [Q[0, i] ** 2 for i in range(order)]
        return nodes, weights


@dataclass(frozen=True)
class NevanlinnaQuadruple:
    """Truncated-series evaluators for the entire functions A, B, C, D.

    ``terms`` is the number of series terms actually used (the requested
    truncation order capped by the recurrence length); ``tail_indicator``
    is the largest magnitude of the final retained term over a reference
    grid, the practical monitor of truncation quality.
    """

    recurrence: JacobiRecurrence
    N: int
    terms: int
    pk0: tuple
    qk0: tuple
    tail_indicator: float = field(compare=False)

    @property
    def precision_bits(self) -> int:
        return self.recurrence.precision_bits

    def evaluate(self, z):
        """Values (A(z), B(z), C(z), D(z)); z may be real or complex."""
        with mp.workprec(self.precision_bits):
            z = mp.mpmathify(z)
            p, q = _eval_pair(self.recurrence, z, self.terms)
            K = self.terms
            A = z * mp.fsum(q[k] * self.qk0[k] for k in range(K))
            B = -1 + z * mp.fsum(p[k] * self.qk0[k] for k in range(K))
            C = 1 + z * mp.fsum(q[k] * self.pk0[k] for k in range(K))
            D = z * mp.fsum(p[k] * self.pk0[k] for k in range(K))
            return A, B, C, D


def build_quadruple(rec: JacobiRecurrence, N: int) -> NevanlinnaQuadruple:
    """Truncate the four Nevanlinna series at N terms (capped by the
    recurrence length).

    Construction fails with DivergenceSuspected when the coefficient
    magnitudes p_k(0)^2 + q_k(0)^2 stop decaying over the last quarter
    of the retained range: that is the signature of a determinate
    problem (where the full series diverge), or of insufficient
    precision.
    """
    if N < 1:
        raise ValueError("N must be positive")
    terms = min(N, rec.order + 1)
    with mp.workprec(rec.precision_bits):
        p0, q0 = _eval_pair(rec, mp.mpf(0), terms)
        s = [p0[k] ** 2 + q0[k] ** 2 for k in range(terms)]
        half, three_q = terms // 2, (3 * terms) // 4
        earlier, later = s[half:three_q], s[three_q:terms]
        if earlier and later:
            # block mean levels: for an indeterminate problem the
            # coefficients decay geometrically, so the later quarter sits
            # well below 0.7x the inner quarter even at small truncations;
            # determinate problems decay at most polynomially and stay
            # above it
            if mp.fsum(later) / len(later) >= mp.mpf("0.7") * mp.fsum(earlier) / len(earlier):
                raise DivergenceSuspected(
                    "Nevanlinna coefficients p_k(0)^2 + q_k(0)^2 are not "
                    f"decaying over the last {len(later)} of {terms} terms; "
                    "the moment problem is likely determinate (or the "
                    "precision/truncation too small)"
                )
        tail = 0.0
        k = terms - 1
        for x in _REFERENCE_GRID:
            xm = mp.mpf(x)
            p, q = _eval_pair(rec, xm, terms)
            last = max(abs(xm * q[k] * q0[k]), abs(xm * p[k] * q0[k]),
                       abs(xm * q[k] * p0[k]), abs(xm * p[k] * p0[k]))
            tail = max(tail, float(last))
        return NevanlinnaQuadruple(recurrence=rec, N=N, terms=terms,
                                   pk0=tuple(p0), qk0=tuple(q0),
                                   tail_indicator=tail)


def density_f(quad: NevanlinnaQuadruple, p: PickPoint, x):
    """Density of the family member at x:
    (gamma/pi) / [ (t B(x) - D(x))^2 + gamma^2 B(x)^2 ], strictly positive
    (B and D share no zeros)."""
    with mp.workprec(quad.precision_bits):
        _, B, _, D = quad.evaluate(mp.mpf(x))
        t, g = mp.mpf(p.t), mp.mpf(p.gamma)
        h = (t * B - D) ** 2 + g ** 2 * B ** 2
        return g / mp.pi / h


def stieltjes_transform(quad: NevanlinnaQuadruple, p: PickPoint, z):
    """Stieltjes transform int dmu(x)/(x - z) of the family member:
    -(A phi - C)/(B phi - D) with the constant parameter phi = t + i gamma,
    extended to the lower half-plane by conjugation symmetry."""
    with mp.workprec(quad.precision_bits):
        z = mp.mpmathify(z)
        if mp.im(z) == 0:
            raise ValueError("z must lie off the real axis")
        phi = mp.mpc(p.t, p.gamma)
        if mp.im(z) < 0:
            phi = mp.conj(phi)
        A, B, C, D = quad.evaluate(z)
        return -(A * phi - C) / (B * phi - D)


def boundedness_probe(quad: NevanlinnaQuadruple, p: PickPoint, grid):
    """Minimum over the grid of h(x) = (t B - D)^2 + gamma^2 B^2 and its
    argmin.  h bounded away from 0 on ever-larger grids witnesses a
    bounded family; h -> 0 along a sequence forces both B and D -> 0
    there, making every family member unbounded at once."""
    grid = list(grid)
    if not grid:
        raise ValueError("grid must not be empty")
    with mp.workprec(quad.precision_bits):
        t, g = mp.mpf(p.t), mp.mpf(p.gamma)
        best, arg = mp.inf, None
        for x in grid:
            _, B, _, D = quad.evaluate(mp.mpf(x))
            h = (t * B - D) ** 2 + g ** 2 * B ** 2
            if h < best:
                best, arg = h, x
        return float(best), float(arg)


def quadruple_log_h(quad: NevanlinnaQuadruple, p: PickPoint):
    """Vectorized x -> log h(x) with the recurrence downshifted to float64.

    Used only at the entropy-integration stage, where tolerances are
    ~1e-6 and the float64 recurrence (relative error ~1e-11 for the
    problem sizes here) is far below them; reference-precision paths
    (density_f, evaluate) are unaffected.
    """
    diag = np.array([float(v) for v in quad.recurrence.diag])
    off = np.array([float(v) for v in quad.recurrence.offdiag])
    pk0 = np.array([float(v) for v in quad.pk0])
    qk0 = np.array([float(v) for v in quad.qk0])
    K = quad.terms
    t, g = p.t, p.gamma

    def log_h(x):
        x = np.asarray(x, dtype=float)
        p_prev = np.ones_like(x)
        B = np.full_like(x, qk0[0] * 1.0)   # sum p_k(x) q_k(0), k < K
        D = np.full_like(x, pk0[0] * 1.0)   # sum p_k(x) p_k(0), k < K
        if K > 1:
            p_cur = (x - diag[0]) / off[0]
            B += p_cur * qk0[1]
            D += p_cur * pk0[1]
            for k in range(1, K - 1):
                p_prev, p_cur = p_cur, ((x - diag[k]) * p_cur - off[k - 1] * p_prev) / off[k]
                B += p_cur * qk0[k + 1]
                D += p_cur * pk0[k + 1]
        B = -1.0 + x * B
        D = x * D
        return np.log((t * B - D) ** 2 + (g * B) ** 2)

    return log_h
