"""Log-space Sudler products and their renormalization machinery.

Everything here works with f(x) = |2 sin(pi x)|.  Products of f-values are
kept in log space throughout (they overflow linear floats almost
immediately), wrapped in LogNumber.  The module provides:

  * direct prefix products P_N(alpha) and shifted products P_N(alpha, x),
  * the digit-wise product form of P_N over an Ostrowski representation,
    together with the shift corrections eps_l,
  * shifted cotangent sums and the weighted cotangent sum V_l,
  * an exact closed form for P_{q_l}(alpha, x/q_l) as a ratio product over
    the integer grid n/q_l,
  * the coupling bound between q_l ||q_m alpha|| and its first-digit-dropped
    counterpart.

Sign conventions follow the convergent tables of `cfrac`: theta_l =
q_l alpha - p_l alternates sign, theta_l = (-1)^l dist_l with
dist_l = |theta_l|.  All identities below are stated with dist_l, which makes
them valid verbatim at l = 0 even when a_1 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np

from sudlerlab.cfrac import CFExpansion, ConvergentTable, OstrowskiRep, convergents
from sudlerlab.errors import (
    EnumerationCapError,
    PoleError,
    PrecondError,
    ZeroFactorError,
)

__all__ = [
    "LogNumber",
    "EpsilonVector",
    "log_f",
    "sudler_prefix_logs",
    "sudler_prefix_logmags",
    "shifted_sudler",
    "kubert_rhs",
    "epsilon_vector",
    "epsilon_vector_primed",
    "product_form_eval",
    "product_form_logs",
    "cotangent_sum",
    "cotangent_V",
    "explicit_formula_eval",
    "ql_diff_check",
]

LOG2 = math.log(2.0)

# poles / zero factors of f at floating arguments are decided at this distance
POLE_GUARD = 1e-13

# product_form_logs refuses to materialize more values than this
DEFAULT_ENUM_CAP = 1 << 21

# exact values of log f on the small torus rationals that tests pin down
_EXACT_LOGF = {
    Fraction(1, 2): LOG2,
    Fraction(1, 6): 0.0,
    Fraction(5, 6): 0.0,
}


@dataclass(frozen=True)
class LogNumber:
    """A nonnegative real stored as the natural log of its magnitude.

    The zero element carries is_zero=True and log_mag=-inf.  Multiplication
    adds logs; sums go through a sorted log-sum-exp so that the result does
    not depend on operand order.
    """

    log_mag: float
    is_zero: bool = False

    @classmethod
    def from_value(cls, v: float) -> "LogNumber":
        if v < 0:
            raise PrecondError(f"LogNumber represents nonnegative reals, got {v}")
        if v == 0:
            return _LOG_ZERO
        return cls(math.log(v))

    @property
    def value(self) -> float:
        """Linear-scale value; may overflow to inf for large log_mag."""
        if self.is_zero:
            return 0.0
        try:
            return math.exp(self.log_mag)
        except OverflowError:
            return math.inf

    def __mul__(self, other: "LogNumber") -> "LogNumber":
        if self.is_zero or other.is_zero:
            return _LOG_ZERO
        return LogNumber(self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogNumber") -> "LogNumber":
        if other.is_zero:
            raise ZeroDivisionError("division by the zero LogNumber")
        if self.is_zero:
            return _LOG_ZERO
        return LogNumber(self.log_mag - other.log_mag)

    def __pow__(self, k: int) -> "LogNumber":
        if self.is_zero:
            return _LOG_ZERO if k > 0 else LogNumber(0.0)
        return LogNumber(k * self.log_mag)

    @classmethod
    def sum(cls, terms: Iterable["LogNumber"]) -> "LogNumber":
        """Sorted log-sum-exp; permutation invariant by construction."""
        mags = sorted(t.log_mag for t in terms if not t.is_zero)
        if not mags:
            return _LOG_ZERO
        top = mags[-1]
        # descending order feeds fsum the large terms first
        s = math.fsum(math.exp(m - top) for m in reversed(mags))
        return cls(top + math.log(s))

    def __repr__(self) -> str:
        return "LogNumber(zero)" if self.is_zero else f"LogNumber({self.log_mag!r})"


_LOG_ZERO = LogNumber(-math.inf, is_zero=True)
_LOG_ONE = LogNumber(0.0)


def _is_exact(x) -> bool:
    return isinstance(x, (int, _RationalABC))


def log_f(x) -> LogNumber:
    """log f(x) = log|2 sin(pi x)| as a LogNumber.

    Exact rational input decides integrality (the zero of f) exactly and pins
    the classical special values f(1/2) = 2, f(1/6) = f(5/6) = 1.  Floating
    input within POLE_GUARD of an integer is flattened to the zero element
    rather than returning a spuriously huge negative log.
    """
    if _is_exact(x):
        t = Fraction(x) % 1
        if t == 0:
            return _LOG_ZERO
        exact = _EXACT_LOGF.get(t)
        if exact is not None:
            return LogNumber(exact)
        tm = min(t, 1 - t)
        return LogNumber(math.log(2.0 * math.sin(math.pi * float(tm))))
    t = float(x) % 1.0
    tm = min(t, 1.0 - t)
    if tm < POLE_GUARD:
        return _LOG_ZERO
    return LogNumber(math.log(2.0 * math.sin(math.pi * tm)))


def sudler_prefix_logmags(r: Fraction, N_max: int) -> np.ndarray:
    """Raw float array of log P_N(r) for N = 0..N_max, rational r = p/q.

    Entry 0 is the empty product.  Requires N_max < q so that no factor
    vanishes.  This is the fast path behind sudler_prefix_logs; sweeps use it
    directly.
    """
    r = Fraction(r)
    q = r.denominator
    if not 0 <= N_max < q:
        raise PrecondError(
            f"need 0 <= N_max < den(r); got N_max={N_max}, den={q}"
            " (the factor at n = den vanishes)"
        )
    p = r.numerator % q
    out = np.empty(N_max + 1)
    out[0] = 0.0
    if N_max == 0:
        return out
    if q <= (1 << 31):
        res = (np.arange(1, N_max + 1, dtype=np.int64) * p) % q
        rm = np.minimum(res, q - res)
        np.cumsum(np.log(2.0 * np.sin(np.pi * (rm / q))), out=out[1:])
    else:
        # bigint fallback, incremental residues
        acc, rnum = 0.0, 0
        for n in range(1, N_max + 1):
            rnum += p
            if rnum >= q:
                rnum -= q
            tm = min(rnum, q - rnum)
            acc += math.log(2.0 * math.sin(math.pi * (tm / q)))
            out[n] = acc
    return out


def sudler_prefix_logs(r: Fraction, N_max: int) -> list[LogNumber]:
    """P_N(r) for N = 0..N_max as LogNumbers, rational r, N_max < den(r)."""
    return [LogNumber(v) for v in sudler_prefix_logmags(r, N_max)]


def _resolve_alpha(alpha):
    """Accept Fraction/int, float, or an expansion (via a deep truncation)."""
    if isinstance(alpha, CFExpansion):
        if alpha.is_finite:
            return alpha.value()
        return convergents(alpha, 32).alpha_exact
    if isinstance(alpha, ConvergentTable):
        return alpha.alpha_exact
    return Fraction(alpha) if _is_exact(alpha) else float(alpha)


def shifted_sudler(alpha, x, N: int) -> LogNumber:
    """P_N(alpha, x) = prod_{n=1..N} |2 sin(pi (n alpha + x))| in log space.

    Exact rational alpha and x run over exact residues mod 1; an exactly
    vanishing factor raises ZeroFactorError carrying the offending index n.
    Floating inputs use the POLE_GUARD cutoff instead.
    """
    if N < 0:
        raise PrecondError(f"N must be >= 0, got {N}")
    if N == 0:
        return _LOG_ONE
    alpha = _resolve_alpha(alpha)
    if isinstance(alpha, Fraction) and _is_exact(x):
        xf = Fraction(x)
        den = alpha.denominator * xf.denominator // math.gcd(
            alpha.denominator, xf.denominator
        )
        step = alpha.numerator * (den // alpha.denominator) % den
        rnum = xf.numerator * (den // xf.denominator) % den
        logs = []
        for n in range(1, N + 1):
            rnum += step
            if rnum >= den:
                rnum -= den
            if rnum == 0:
                raise ZeroFactorError(f"factor n={n} vanishes exactly", n=n)
            tm = min(rnum, den - rnum)
            logs.append(math.log(2.0 * math.sin(math.pi * float(Fraction(tm, den)))))
        return LogNumber(math.fsum(logs))
    af, xfl = float(alpha), float(x)
    n = np.arange(1, N + 1, dtype=np.float64)
    t = (n * af + xfl) % 1.0
    tm = np.minimum(t, 1.0 - t)
    bad = np.flatnonzero(tm < POLE_GUARD)
    if bad.size:
        raise ZeroFactorError(f"factor n={int(bad[0]) + 1} within pole guard", n=int(bad[0]) + 1)
    return LogNumber(float(math.fsum(np.log(2.0 * np.sin(np.pi * tm)))))


def kubert_rhs(r, x) -> LogNumber:
    """Right side of the sine multiplication law at level q = den(r).

    For reduced p/q the law reads f(x/q) * P_{q-1}(p/q, x/q) = f(x); the
    numerator p only permutes the factors.  This returns f(x), the exact
    oracle that shifted products at denominator-q arguments must match.
    """
    r = Fraction(r)
    q = r.denominator
    if _is_exact(x) and (Fraction(x) / q) % 1 == 0:
        raise PrecondError(f"x/q = {Fraction(x) / q} is an integer; both sides vanish")
    return log_f(x)


@dataclass(frozen=True)
class EpsilonVector:
    """Shift corrections eps_l of a digit string, one per digit position.

    eps_l = q_l * sum_{m>l} (-1)^(l+m) b_m dist_m, held as exact Fractions.
    Only positions with b_l >= 1 enter the product form, but all are stored.
    """

    eps: tuple

    def __len__(self) -> int:
        return len(self.eps)

    def __getitem__(self, ell: int) -> Fraction:
        return self.eps[ell]

    def as_floats(self) -> np.ndarray:
        return np.array([float(e) for e in self.eps])


def epsilon_vector(rep: OstrowskiRep, table: ConvergentTable) -> EpsilonVector:
    """Exact eps_l for all digit positions of rep, via suffix sums of theta."""
    digits = rep.digits
    K = len(digits)
    tail = Fraction(0)
    eps = [Fraction(0)] * K
    # T_l = sum_{m>l} b_m theta_m; eps_l = (-1)^l q_l T_l
    for ell in range(K - 1, -1, -1):
        eps[ell] = (-1) ** ell * table.q(ell) * tail
        tail += digits[ell] * table.theta(ell)
    return EpsilonVector(tuple(eps))


def epsilon_vector_primed(rep: OstrowskiRep, tail_table: ConvergentTable) -> EpsilonVector:
    """The eps vector seen by the first-digit-dropped expansion.

    Uses the primed convergents q'_l = (tail table row l-1) and the opposite
    sign pairing: eps'_l = q'_l sum_{m>l} (-1)^(l+m-1) b_m dist'_m.  Position
    l = 0 is identically zero (q'_0 = 0).
    """
    digits = rep.digits
    K = len(digits)
    acc = Fraction(0)
    eps = [Fraction(0)] * K
    for ell in range(K - 1, -1, -1):
        if ell >= 1:
            eps[ell] = (-1) ** ell * tail_table.q(ell - 1) * acc
        # theta'_{m} lives at tail-table row m-1
        if ell >= 1:
            acc += digits[ell] * tail_table.theta(ell - 1)
    return EpsilonVector(tuple(eps))


def product_form_eval(rep: OstrowskiRep, table: ConvergentTable | None = None) -> LogNumber:
    """P_N(alpha) assembled from the digit-wise product form.

    P_N = prod_l prod_{b < b_l} P_{q_l}(alpha, (-1)^l (b q_l dist_l + eps_l)/q_l),
    every shift an exact rational.  Must agree with the direct product; the
    all-zero digit string gives the empty product 1.
    """
    if table is None:
        table = rep.table
    eps = epsilon_vector(rep, table)
    alpha = table.alpha_exact
    acc = []
    for ell, b_l in enumerate(rep.digits):
        if b_l == 0:
            continue
        q_l = table.q(ell)
        d_l = table.dist(ell)
        sgn = (-1) ** ell
        for b in range(b_l):
            shift = sgn * (b * q_l * d_l + eps[ell]) / q_l
            acc.append(shifted_sudler(alpha, shift, q_l).log_mag)
    return LogNumber(math.fsum(acc)) if acc else _LOG_ONE


def product_form_logs(table: ConvergentTable, K: int, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """log P_N for every N < q_K at once, assembled level by level.

    Walks the Ostrowski digit tree from the most significant position down.
    At each node one shared sine table of length (digit range) * q_l is
    cumsummed and gathered at multiples of q_l, so the whole array costs
    O(q_K * K) sine evaluations instead of O(q_K^2).

    Arguments are exact integer residues mod the table's reference
    denominator whenever that fits in int64 arithmetic; otherwise a floating
    fallback is used.  Raises EnumerationCapError when q_K exceeds cap.
    """
    qK = table.q(K)
    if qK > cap:
        raise EnumerationCapError(f"q_K = {qK} exceeds cap {cap}")
    alpha = table.alpha_exact
    Q = alpha.denominator
    # int64 headroom: residues stay below Q, products below arange_max * P
    exact = Q < (1 << 31) and qK < (1 << 31) and (2 * qK + 2) * (
        alpha.numerator % Q or 1
    ) < (1 << 62)
    out = np.zeros(qK)
    if K == 0:
        return out

    a_next = [table.partial(ell + 1) for ell in range(K)]
    qs = [table.q(ell) for ell in range(K)]
    # widest digit range ever needed at each level
    width = [a_next[ell] if ell >= 1 else max(a_next[0] - 1, 0) for ell in range(K)]

    if exact:
        P = alpha.numerator % Q
        base = [
            (np.arange(1, width[ell] * qs[ell] + 1, dtype=np.int64) * P) % Q
            for ell in range(K)
        ]
        thetanum = [qs[ell] * alpha.numerator - table.p(ell) * Q for ell in range(K)]
    else:
        af = float(alpha)
        base = [
            (np.arange(1, width[ell] * qs[ell] + 1, dtype=np.float64) * af) % 1.0
            for ell in range(K)
        ]
        thetaf = table.theta_floats()

    def segment_gather(ell: int, t, top: int) -> np.ndarray:
        """Cumulative segment logs at digits 0..top for tail shift t."""
        m = top * qs[ell]
        if exact:
            r = (base[ell][:m] + t) % Q
            rm = np.minimum(r, Q - r)
            logs = np.log(2.0 * np.sin(np.pi * (rm / Q)))
        else:
            u = (base[ell][:m] + t) % 1.0
            um = np.minimum(u, 1.0 - u)
            if np.any(um < POLE_GUARD):
                raise ZeroFactorError(f"segment factor n={int(np.argmin(um)) + 1} within pole guard", n=int(np.argmin(um)) + 1)
            logs = np.log(2.0 * np.sin(np.pi * um))
        c = np.cumsum(logs)
        g = np.empty(top + 1)
        g[0] = 0.0
        g[1:] = c[qs[ell] - 1 :: qs[ell]]
        return g

    def walk(ell: int, t, M: int, acc: float, parent_maxed: bool) -> None:
        if ell < 0:
            out[M] = acc
            return
        top = 0 if parent_maxed else width[ell]
        if top == 0:
            walk(ell - 1, t, M, acc, False)
            return
        g = segment_gather(ell, t, top)
        for b in range(top + 1):
            tb = (t + b * thetanum[ell]) % Q if exact else (t + b * thetaf[ell])
            maxed = ell >= 1 and b == a_next[ell]
            walk(ell - 1, tb, M + b * qs[ell], acc + g[b], maxed)

    walk(K - 1, 0 if exact else 0.0, 0, 0.0, False)
    return out


def cotangent_sum(alpha, x, N: int) -> float:
    """sum_{n=1..N} cot(pi (n alpha + x)) with compensated summation.

    Exact rational inputs detect poles exactly; floats use POLE_GUARD.  The
    offending index travels on the raised PoleError.
    """
    if N < 0:
        raise PrecondError(f"N must be >= 0, got {N}")
    if N == 0:
        return 0.0
    alpha = _resolve_alpha(alpha)
    if isinstance(alpha, Fraction) and _is_exact(x):
        xf = Fraction(x)
        den = alpha.denominator * xf.denominator // math.gcd(
            alpha.denominator, xf.denominator
        )
        step = alpha.numerator * (den // alpha.denominator) % den
        rnum = xf.numerator * (den // xf.denominator) % den
        terms = []
        for n in range(1, N + 1):
            rnum += step
            if rnum >= den:
                rnum -= den
            if rnum == 0:
                raise PoleError(f"cot pole at n={n}", n=n)
            terms.append(1.0 / math.tan(math.pi * float(Fraction(rnum, den))))
        return math.fsum(terms)
    af, xfl = float(alpha), float(x)
    n = np.arange(1, N + 1, dtype=np.float64)
    t = (n * af + xfl) % 1.0
    tm = np.minimum(t, 1.0 - t)
    bad = np.flatnonzero(tm < POLE_GUARD)
    if bad.size:
        raise PoleError(f"cot pole at n={int(bad[0]) + 1}", n=int(bad[0]) + 1)
    return math.fsum(1.0 / np.tan(np.pi * t))


def cotangent_V(ell: int, x: float, table: ConvergentTable) -> float:
    """The distance-weighted cotangent sum V_l(x), decreasing on (-1, 1).

    V_l(x) = sum_{n=1}^{q_l - 1} sin(pi n dist_l / q_l)
             * cot(pi (n (-1)^l p_l + x) / q_l).

    The cotangent arguments reduce to (r_n + x)/q_l with r_n the nonzero
    residues of n (-1)^l p_l mod q_l, so for |x| < 1 the sum is pole free.
    """
    if not -1 < x < 1:
        raise PrecondError(f"need |x| < 1, got x={x}")
    q = table.q(ell)
    if q == 1:
        return 0.0
    d = float(table.dist(ell))
    step = ((-1) ** ell * table.p(ell)) % q
    n = np.arange(1, q, dtype=np.int64)
    r = (n * step) % q
    weights = np.sin(np.pi * (n * (d / q)))
    cots = 1.0 / np.tan(np.pi * ((r + x) / q))
    return math.fsum(weights * cots)


def _logf_float(t: float) -> float:
    """log f at a floating argument, reflected into (0, 1/2]."""
    u = t % 1.0
    um = min(u, 1.0 - u)
    if um < POLE_GUARD:
        raise PoleError("argument within pole guard")
    return math.log(2.0 * math.sin(math.pi * um))


def explicit_formula_eval(ell: int, x, table: ConvergentTable) -> LogNumber:
    """Closed form of P_{q_l}(alpha, (-1)^l x / q_l) over the integer grid.

    P = f(dist_l + x/q_l) * (f(z)/f(z/q_l)) *
        prod_{n=1}^{q_l-1} f((n - y_n - z)/q_l) / f((n - z)/q_l),

    with z = x + q_l dist_l / 2 and y_n = ({n q_{l-1}/q_l} - 1/2) q_l dist_l.
    When z/q_l is an integer both f(z) and f(z/q_l) vanish and the ratio is
    replaced by its limit q_l.  Must match shifted_sudler at the same shift.
    """
    q = table.q(ell)
    d = table.dist(ell)
    exact = _is_exact(x)
    xv = Fraction(x) if exact else float(x)
    dv = d if exact else float(d)
    z = xv + q * dv / 2
    first = log_f(dv + xv / q)
    if exact:
        convention = (z / q) % 1 == 0
    else:
        convention = abs(z / q - round(z / q)) < POLE_GUARD
    if convention:
        mid = LogNumber(math.log(q))
    else:
        fz, fzq = log_f(z), log_f(z / q)
        if fzq.is_zero:
            raise PoleError("f(z/q) vanishes outside the z/q integer convention")
        mid = fz / fzq
    if q == 1:
        return first * mid
    qd = float(q * d)
    zf = float(z)
    n = np.arange(1, q, dtype=np.int64)
    res = (n * table.q(ell - 1)) % q
    y = (res / q - 0.5) * qd
    num = ((n - y - zf) / q) % 1.0
    den = ((n - zf) / q) % 1.0
    num_m = np.minimum(num, 1.0 - num)
    den_m = np.minimum(den, 1.0 - den)
    if np.any(num_m < POLE_GUARD):
        raise ZeroFactorError(f"grid numerator n={int(np.argmin(num_m)) + 1} vanishes", n=int(np.argmin(num_m)) + 1)
    if np.any(den_m < POLE_GUARD):
        raise PoleError(f"grid denominator n={int(np.argmin(den_m)) + 1} vanishes", n=int(np.argmin(den_m)) + 1)
    ratio = math.fsum(np.log(np.sin(np.pi * num_m)) - np.log(np.sin(np.pi * den_m)))
    return first * mid * LogNumber(ratio)


def ql_diff_check(ell: int, m: int, table: ConvergentTable, tail_table: ConvergentTable):
    """Coupling of q_l dist_m across dropping the first partial quotient.

    Returns (lhs, bound) as exact Fractions, where
    lhs = |q_l dist_m - q'_l dist'_m| and bound = 2/(q_{l+1} q'_{m+1});
    the contract is lhs <= bound.  Valid for 1 <= l <= m, provided m >= 2,
    or m = 1 with a_2 > 1 (otherwise rejected: q'_1 degenerates).
    """
    if not 1 <= ell <= m:
        raise PrecondError(f"need 1 <= ell <= m, got ell={ell}, m={m}")
    if not (m >= 2 or table.partial(2) > 1):
        raise PrecondError("m = 1 requires a_2 > 1")
    lhs = abs(table.q(ell) * table.dist(m) - tail_table.q(ell - 1) * tail_table.dist(m - 1))
    bound = Fraction(2, table.q(ell + 1) * tail_table.q(m))
    return lhs, bound
