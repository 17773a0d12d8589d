"""Continued fractions, convergents, and Ostrowski numeration.

Conventions used throughout the package:

* expansions are written x = [a0; a1, a2, ...] with a_l >= 1 for l >= 1;
* finite expansions are kept in the canonical shorter form (last quotient > 1),
  which is what the Euclidean algorithm produces;
* convergents p_l/q_l follow q_{l+1} = a_{l+1} q_l + q_{l-1} with the seed
  rows (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (a0, 1);
* theta_l = q_l x - p_l, so sign(theta_l) = (-1)^l and |theta_l| = ||q_l x||
  for l >= 1 (at l = 0 the identity needs a_1 >= 2).

Irrational targets are handled through exact rational truncations: a table of
depth D computes every real quantity from the truncation [a0; a1..a_{D+G}]
with guard depth G, so all stored values are exact rationals of a
well-defined object and the three-term recursions hold exactly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import mpmath

from .errors import PrecondError

Rational = Fraction

DEFAULT_GUARD_DEPTH = 8
MIN_PRECISION_BITS = 128


def _euclid_digits(num: int, den: int) -> tuple[int, list[int]]:
    """Partial quotients of num/den (den > 0) by the Euclidean algorithm."""
    a0 = num // den
    num -= a0 * den
    digits = []
    p, q = den, num
    while q:
        digits.append(p // q)
        p, q = q, p % q
    return a0, digits


class CFExpansion:
    """A continued-fraction expansion, finite or infinite.

    Infinite expansions come in two flavours: eventually periodic (stored as
    a preperiod plus period) and rule-based (a 1-indexed digit function, used
    for the e-2 preset). Instances are immutable.
    """

    def __init__(
        self,
        a0: int,
        digits: Sequence[int] | None = None,
        *,
        preperiod: Sequence[int] | None = None,
        period: Sequence[int] | None = None,
        digit_fn: Callable[[int], int] | None = None,
        name: str | None = None,
    ):
        self.a0 = int(a0)
        self.name = name
        self._digits: tuple[int, ...] | None = None
        self._pre: tuple[int, ...] = ()
        self._period: tuple[int, ...] = ()
        self._fn = digit_fn
        if digit_fn is not None:
            if digits is not None or period is not None:
                raise PrecondError("give exactly one digit source")
        elif period is not None:
            self._pre = tuple(int(d) for d in (preperiod or ()))
            self._period = tuple(int(d) for d in period)
            if not self._period:
                raise PrecondError("empty period")
            if any(d < 1 for d in self._pre + self._period):
                raise PrecondError("partial quotients must be >= 1")
        else:
            self._digits = tuple(int(d) for d in (digits or ()))
            if any(d < 1 for d in self._digits):
                raise PrecondError("partial quotients must be >= 1")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_partial_quotients(
        cls, a0: int, digits: Sequence[int], canonical: bool = False
    ) -> "CFExpansion":
        """Finite expansion from literal digits; optionally canonicalize."""
        digits = list(digits)
        if canonical:
            while digits and digits[-1] == 1:
                digits.pop()
                if digits:
                    digits[-1] += 1
                else:
                    a0 += 1
        return cls(a0, digits)

    @classmethod
    def preset(cls, name: str) -> "CFExpansion":
        try:
            return _PRESETS[name]()
        except KeyError:
            raise PrecondError(f"unknown preset {name!r}") from None

    # -- basic queries --------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self._digits is not None

    @property
    def L(self) -> int | None:
        """Number of partial quotients after a0, or None if infinite."""
        return len(self._digits) if self._digits is not None else None

    def partial(self, ell: int) -> int:
        """a_ell for ell >= 1."""
        if ell < 1:
            raise PrecondError("partial quotients are 1-indexed")
        if self._digits is not None:
            if ell > len(self._digits):
                raise PrecondError(f"expansion has only {len(self._digits)} quotients")
            return self._digits[ell - 1]
        if self._fn is not None:
            a = int(self._fn(ell))
            if a < 1:
                raise PrecondError(f"digit rule produced a_{ell} = {a} < 1")
            return a
        i = ell - 1
        if i < len(self._pre):
            return self._pre[i]
        return self._period[(i - len(self._pre)) % len(self._period)]

    def partials(self, upto: int) -> list[int]:
        return [self.partial(ell) for ell in range(1, upto + 1)]

    def value(self) -> Fraction:
        """Exact value; finite expansions only."""
        if self._digits is None:
            raise PrecondError("value() requires a finite expansion")
        return self.truncation(len(self._digits))

    def truncation(self, depth: int) -> Fraction:
        """Exact value of [a0; a1..a_depth]."""
        x = Fraction(0)
        for a in reversed(self.partials(depth)):
            x = Fraction(1, a + x)
        return self.a0 + x

    def tail(self) -> "CFExpansion":
        """The shifted expansion [0; a2, a3, ...]; requires a0 = 0, L >= 1."""
        if self.a0 != 0:
            raise PrecondError("tail() requires a0 = 0")
        if self._digits is not None:
            if not self._digits:
                raise PrecondError("tail() of an integer")
            return CFExpansion(0, self._digits[1:])
        if self._fn is not None:
            fn = self._fn
            return CFExpansion(0, digit_fn=lambda ell: fn(ell + 1))
        if self._pre:
            return CFExpansion(0, preperiod=self._pre[1:], period=self._period)
        rot = self._period[1:] + self._period[:1]
        return CFExpansion(0, period=rot)

    def __repr__(self) -> str:
        if self._digits is not None:
            body = ",".join(str(d) for d in self._digits)
            return f"[{self.a0};{body}]" if body else f"[{self.a0}]"
        if self._fn is not None:
            head = ",".join(str(d) for d in self.partials(6))
            return f"[{self.a0};{head},...]"
        pre = ",".join(str(d) for d in self._pre)
        per = ",".join(str(d) for d in self._period)
        sep = "," if pre else ""
        return f"[{self.a0};{pre}{sep}({per})*]"


def _e_minus_2_digit(ell: int) -> int:
    # pattern 1, 2, 1, 1, 4, 1, 1, 6, ... : a_l = 2(l+1)/3 when l = 2 mod 3
    return 2 * (ell + 1) // 3 if ell % 3 == 2 else 1


_PRESETS: dict[str, Callable[[], CFExpansion]] = {
    "golden": lambda: CFExpansion(0, period=(1,), name="golden"),
    "sqrt2inv": lambda: CFExpansion(0, preperiod=(1,), period=(2,), name="sqrt2inv"),
    "e-2": lambda: CFExpansion(0, digit_fn=_e_minus_2_digit, name="e-2"),
}

_CF_LITERAL = re.compile(r"^cf:(?P<digits>[\d,]+?)(~period:(?P<period>[\d,]+))?$")


def cf_expand(r: Fraction | int) -> CFExpansion:
    """Canonical expansion of a rational (Euclidean algorithm)."""
    r = Fraction(r)
    a0, digits = _euclid_digits(r.numerator, r.denominator)
    return CFExpansion(a0, digits)


def parse_alpha(text: str) -> CFExpansion:
    """Parse "p/q", an integer, a decimal, "cf:a1,a2,...", "cf:...~period:...",
    or a named preset into an expansion."""
    text = text.strip()
    if text in _PRESETS:
        return CFExpansion.preset(text)
    m = _CF_LITERAL.match(text)
    if m:
        digits = [int(d) for d in m.group("digits").split(",") if d]
        if not digits and not m.group("period"):
            raise PrecondError(f"empty cf literal {text!r}")
        if any(d < 1 for d in digits):
            raise PrecondError("cf literal digits must be >= 1")
        if m.group("period"):
            period = [int(d) for d in m.group("period").split(",") if d]
            if any(d < 1 for d in period):
                raise PrecondError("cf period digits must be >= 1")
            return CFExpansion(0, preperiod=digits, period=period)
        return CFExpansion.from_partial_quotients(0, digits, canonical=True)
    try:
        return cf_expand(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise PrecondError(f"cannot parse {text!r} as a rational or preset") from None


class ConvergentTable:
    """Convergents p_l/q_l, exact theta_l, and digit access for one target.

    Immutable after construction. For an infinite expansion the table is the
    exact table of the truncation at depth + guard; for a finite expansion it
    is exact for the value itself (guard unused) and depth may not exceed L.
    """

    def __init__(self, cf: CFExpansion, depth: int, guard: int = DEFAULT_GUARD_DEPTH):
        if depth < 0:
            raise PrecondError("depth must be >= 0")
        if cf.is_finite and depth > cf.L:
            raise PrecondError(f"depth {depth} exceeds finite length L={cf.L}")
        self.cf = cf
        self.depth = depth
        self.guard = guard if not cf.is_finite else 0

        # the exact reference value: the rational itself, or the truncation
        # at depth + guard for an infinite expansion
        ref_depth = cf.L if cf.is_finite else depth + guard
        digits = cf.partials(ref_depth)
        # rows l = -1 .. ref_depth, stored with offset +1
        p = [1, cf.a0]
        q = [0, 1]
        for a in digits:
            p.append(a * p[-1] + p[-2])
            q.append(a * q[-1] + q[-2])
        self._a = digits
        self._p = p
        self._q = q
        self.alpha_exact = Fraction(p[ref_depth + 1], q[ref_depth + 1])
        self.precision_bits = max(MIN_PRECISION_BITS, 2 * q[ref_depth + 1].bit_length())

        num, den = self.alpha_exact.numerator, self.alpha_exact.denominator
        self._theta = [
            Fraction(q[l + 1] * num - p[l + 1] * den, den) for l in range(-1, depth + 1)
        ]
        self._theta_floats: list[float] | None = None

    # -- row access (ell >= -1 everywhere) ------------------------------------

    def partial(self, ell: int) -> int:
        """a_ell, delegated to the expansion (cached rows preferred)."""
        if 1 <= ell <= len(self._a):
            return self._a[ell - 1]
        return self.cf.partial(ell)

    def p(self, ell: int) -> int:
        if not -1 <= ell <= self.depth:
            raise PrecondError(f"row {ell} outside table")
        return self._p[ell + 1]

    def q(self, ell: int) -> int:
        if not -1 <= ell <= self.depth:
            raise PrecondError(f"row {ell} outside table")
        return self._q[ell + 1]

    def theta(self, ell: int) -> Fraction:
        """q_ell * alpha - p_ell, exact (alpha = truncation for infinite cf)."""
        if not -1 <= ell <= self.depth:
            raise PrecondError(f"row {ell} outside table")
        return self._theta[ell + 1]

    def dist(self, ell: int) -> Fraction:
        """|theta_ell|; equals ||q_ell alpha|| for ell >= 1."""
        return abs(self.theta(ell))

    def theta_mpf(self, ell: int) -> mpmath.mpf:
        """theta_ell rounded to the table's precision budget."""
        t = self.theta(ell)
        with mpmath.workprec(self.precision_bits):
            return mpmath.mpf(t.numerator) / mpmath.mpf(t.denominator)

    def theta_floats(self) -> list[float]:
        """float64 thetas for rows 0..depth (kernel fast path)."""
        if self._theta_floats is None:
            self._theta_floats = [float(t) for t in self._theta[1:]]
        return self._theta_floats

    def __repr__(self) -> str:
        return f"ConvergentTable({self.cf!r}, depth={self.depth})"


def convergents(cf: CFExpansion, upto: int, guard: int = DEFAULT_GUARD_DEPTH) -> ConvergentTable:
    """Build the convergent table for rows 0..upto."""
    return ConvergentTable(cf, upto, guard)


class OstrowskiRep:
    """Digit vector (b_0, ..., b_{K-1}) of N = sum b_l q_l for one table."""

    __slots__ = ("digits", "table", "_value")

    def __init__(self, digits: Sequence[int], table: ConvergentTable):
        self.digits = tuple(int(b) for b in digits)
        self.table = table
        self._validate()
        self._value = sum(b * table.q(l) for l, b in enumerate(self.digits))

    def _validate(self) -> None:
        K = len(self.digits)
        if K > self.table.depth:
            raise PrecondError("digit vector longer than table depth")
        for l, b in enumerate(self.digits):
            if b < 0:
                raise PrecondError(f"negative digit b_{l}")
            amax = self.table.partial(l + 1)
            if l == 0:
                if b > amax - 1:
                    raise PrecondError(f"b_0 = {b} must be < a_1 = {amax}")
            elif b > amax:
                raise PrecondError(f"b_{l} = {b} exceeds a_{l + 1} = {amax}")
            if b > 0 and l + 1 < K:
                up = self.digits[l + 1]
                if l + 2 <= self.table.depth and up == self.table.partial(l + 2):
                    raise PrecondError(
                        f"b_{l} must vanish because b_{l + 1} = a_{l + 2}"
                    )

    def value(self) -> int:
        return self._value

    def digit(self, ell: int) -> int:
        """b_ell, with zeros beyond the stored vector."""
        return self.digits[ell] if 0 <= ell < len(self.digits) else 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, OstrowskiRep)
            and self.digits == other.digits
            and self.table is other.table
        )

    def __hash__(self) -> int:
        return hash((self.digits, id(self.table)))

    def __repr__(self) -> str:
        return f"OstrowskiRep({self.digits})"


def ostrowski_encode(N: int, table: ConvergentTable) -> OstrowskiRep:
    """Greedy digits of N with respect to the table; requires 0 <= N < q_depth."""
    if table.depth < 1:
        raise PrecondError("table depth must be >= 1 to encode")
    if not 0 <= N < table.q(table.depth):
        raise PrecondError(f"N = {N} outside [0, q_{table.depth})")
    digits = [0] * table.depth
    rem = N
    for l in range(table.depth - 1, -1, -1):
        digits[l], rem = divmod(rem, table.q(l))
    return OstrowskiRep(digits, table)


def ostrowski_decode(rep: OstrowskiRep) -> int:
    return rep.value()


def ostrowski_enumerate(table: ConvergentTable, K: int) -> Iterator[OstrowskiRep]:
    """All digit vectors for N = 0, 1, ..., q_K - 1 in increasing order.

    Odometer-style carry: incrementing b_0 and propagating, honouring the rule
    that a digit at its maximum forces the digit below to zero.
    """
    if not 1 <= K <= table.depth:
        raise PrecondError("need 1 <= K <= table depth")
    amax = [table.partial(l + 1) for l in range(K)]
    digits = [0] * K

    def max_for(l: int) -> int:
        if l + 1 < K and digits[l + 1] == amax[l + 1]:
            return 0
        return amax[l] - 1 if l == 0 else amax[l]

    total = table.q(K)
    for _ in range(total):
        yield OstrowskiRep(digits, table)
        l = 0
        digits[0] += 1
        while l < K and digits[l] > max_for(l):
            digits[l] = 0
            l += 1
            if l < K:
                digits[l] += 1
    # odometer must finish exactly at the rollover point
    assert all(d == 0 for d in digits)


def cf_tail(cf: CFExpansion) -> CFExpansion:
    """[0; a2, a3, ...] = fractional part of 1/x for x = [0; a1, a2, ...]."""
    return cf.tail()


def drop_first_digit_map(N: int, table: ConvergentTable, tail_table: ConvergentTable) -> int:
    """Map N = sum b_l q_l to N' = sum_{l>=1} b_l q'_l, with q'_l = p_l.

    The tail table is indexed so that its standard row l-1 carries the primed
    level-l data (q'_l = tail.q(l-1) = p_l). Requires b_1(N) < a_2.
    """
    rep = ostrowski_encode(N, table)
    if table.depth >= 2 and rep.digit(1) >= table.partial(2):
        raise PrecondError("map needs b_1(N) < a_2")
    if tail_table.depth < table.depth - 1:
        raise PrecondError("tail table too shallow")
    for l in range(1, table.depth + 1):
        if l - 1 <= tail_table.depth and tail_table.q(l - 1) != table.p(l):
            raise PrecondError("tail table does not match (q'_l != p_l)")
    return sum(rep.digit(l) * tail_table.q(l - 1) for l in range(1, table.depth))


def interval_Ik(cf: CFExpansion, k: int) -> tuple[Fraction, Fraction]:
    """Endpoints of I_{k+1}: the reals whose expansion starts [0; a1..a_{k+1}].

    Returns (lo, hi) with lo < hi; the endpoints are p_{k+1}/q_{k+1} and
    (p_{k+1} + p_k)/(q_{k+1} + q_k).
    """
    if cf.a0 != 0:
        raise PrecondError("interval_Ik requires a0 = 0")
    t = ConvergentTable(cf, k + 1)
    e1 = Fraction(t.p(k + 1), t.q(k + 1))
    e2 = Fraction(t.p(k + 1) + t.p(k), t.q(k + 1) + t.q(k))
    return (e1, e2) if e1 < e2 else (e2, e1)


def rationals_in_interval(lo: Fraction, hi: Fraction, qmax: int) -> Iterator[Fraction]:
    """Reduced fractions in [lo, hi] with denominator <= qmax, ascending.

    Stern-Brocot descent over the tree on (0/1, 1/1); requires
    0 <= lo < hi <= 1. Subtrees whose span misses [lo, hi] are pruned, so the
    cost is (boundary path) + (emitted points).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not (0 <= lo < hi <= 1):
        raise PrecondError("need 0 <= lo < hi <= 1")
    if qmax < 1:
        raise PrecondError("qmax must be >= 1")
    lon, lod = lo.numerator, lo.denominator
    hin, hid = hi.numerator, hi.denominator
    if lon == 0:
        yield lo
    # in-order traversal, explicit stack; nodes are (a, b, c, d, emit_phase)
    stack = [(0, 1, 1, 1, False)]
    while stack:
        a, b, c, d, emit = stack.pop()
        if emit:
            m_num, m_den = a + c, b + d
            if lon * m_den <= m_num * lod and m_num * hid <= hin * m_den:
                yield Fraction(m_num, m_den)
            continue
        m_num, m_den = a + c, b + d
        if m_den > qmax:
            continue
        # subtree spans the open interval (a/b, c/d)
        if a * hid >= hin * b or c * lod <= lon * d:
            continue
        stack.append((m_num, m_den, c, d, False))
        stack.append((a, b, c, d, True))
        stack.append((a, b, m_num, m_den, False))
    if hin == hid:
        yield hi
