"""Figure-eight colored Jones values and Zagier's modularity defect.

J(p/q) = sum_{N<q} P_N(p/q)^2 is the colored Jones value of the figure-eight
knot at the root of unity exp(2 pi i p/q); it is 1-periodic and even.  The
central object is

    h(x) = log J(x) - log J(1/x),

together with two corrected forms that isolate its bounded part:

    psi(x)  = h(x) - Vol/(2 pi x) + (3/2) log x,
    psi*(x) = h(x) + (Vol/2 pi) (x - 1/x),

where Vol = 2.0298832... is the hyperbolic volume of the knot complement,
computed here as 4 pi times the log-sine integral over (0, 5/6).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from sudlerlab.cfrac import CFExpansion, cf_expand, cf_tail, convergents
from sudlerlab.errors import PrecondError, QuadratureError, ZeroFactorError
from sudlerlab.trig import LogNumber, sudler_prefix_logmags

__all__ = [
    "HValue",
    "vol_41",
    "psi_heuristic",
    "jones_J",
    "h_eval",
    "telescoping_logJ",
    "m_k",
]


def _logsine_smooth(x: float) -> float:
    """log(sin(pi x)/(pi x)), the smooth part left after removing log(2 pi x)."""
    if x == 0.0:
        return 0.0
    return math.log(math.sin(math.pi * x) / (math.pi * x))


@lru_cache(maxsize=None)
def _logsine_integral(t: Fraction) -> float:
    """int_0^t log(2 sin(pi x)) dx for 0 <= t <= 1/2, split at the singularity.

    The log(2 pi x) part integrates in closed form; the remainder is smooth
    and goes to adaptive quadrature at 1e-13 tolerance.
    """
    tf = float(t)
    if tf == 0.0:
        return 0.0
    closed = tf * (math.log(2 * math.pi * tf) - 1.0)
    val, err = quad(_logsine_smooth, 0.0, tf, epsabs=1e-14, epsrel=1e-13, limit=200)
    if err > 5e-13:
        raise QuadratureError(f"log-sine integral error estimate {err} too large")
    return closed + val


def psi_heuristic(y) -> float:
    """Psi(y) = 2 int_0^y log|2 sin(pi x)| dx on [0, 1]; maximal at y = 5/6.

    For y > 1/2 the reflection x -> 1-x folds the second singular endpoint
    back onto the handled one.
    """
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise PrecondError(f"need 0 <= y <= 1, got {y}")
    half = Fraction(1, 2)
    if y <= half:
        return 2.0 * _logsine_integral(y)
    return 2.0 * (2.0 * _logsine_integral(half) - _logsine_integral(1 - y))


@lru_cache(maxsize=1)
def vol_41() -> float:
    """Hyperbolic volume of the figure-eight complement, 4 pi int_0^{5/6} log f.

    Cached; equals 2 pi * psi_heuristic(5/6) by construction, and is
    cross-checked against the Clausen-function closed form in the tests.
    """
    return 2.0 * math.pi * psi_heuristic(Fraction(5, 6))


def _logsumexp_mags(mags: np.ndarray) -> LogNumber:
    """Sorted log-sum-exp of raw log magnitudes, largest terms first."""
    m = np.sort(np.asarray(mags, dtype=np.float64))
    top = float(m[-1])
    s = math.fsum(np.exp(m[::-1] - top))
    return LogNumber(top + math.log(s))


@lru_cache(maxsize=1 << 20)
def _logJ_mag(p: int, q: int) -> float:
    if q == 1:
        return 0.0
    mags = 2.0 * sudler_prefix_logmags(Fraction(p, q), q - 1)
    return _logsumexp_mags(mags).log_mag


def jones_J(r) -> LogNumber:
    """J(r) = sum_{N < den(r)} P_N(r)^2 in log space; 1-periodic, J(int) = 1."""
    r = Fraction(r) % 1
    return LogNumber(_logJ_mag(r.numerator, r.denominator))


@dataclass(frozen=True)
class HValue:
    """Jones values at x and 1/x with the derived h, psi, psi* readings."""

    x: Fraction
    logJ_x: LogNumber
    logJ_inv: LogNumber
    h: float
    psi: float
    psi_star: float


def h_eval(r) -> HValue:
    """h(r) = log J(r) - log J(1/r) plus corrected forms; r != 0.

    Negative arguments fold to |r| (J is even, hence so is h).  The
    reciprocal is reduced exactly over the integers, never through a float.
    """
    r = Fraction(r)
    if r == 0:
        raise PrecondError("h is undefined at 0")
    t = abs(r)
    logJ_x = jones_J(t)
    logJ_inv = jones_J(1 / t)
    h = logJ_x.log_mag - logJ_inv.log_mag
    x = float(t)
    vol = vol_41()
    psi = h - vol / (2 * math.pi * x) + 1.5 * math.log(x)
    psi_star = h + vol / (2 * math.pi) * (x - 1 / x)
    return HValue(x=t, logJ_x=logJ_x, logJ_inv=logJ_inv, h=h, psi=psi, psi_star=psi_star)


def telescoping_logJ(r) -> tuple[float, float]:
    """Both sides of the telescoping identity for log J at a reduced p/q.

    lhs = log J(pbar/q) with pbar the inverse of p mod q; rhs accumulates
    h(q_{l-1}/q_l) over the convergent denominators of p/q.  The chain
    telescopes because {q_l / q_{l-1}} = q_{l-2}/q_{l-1} exactly.
    """
    r = Fraction(r)
    p, q = r.numerator, r.denominator
    if not 0 < p < q:
        raise PrecondError(f"need 0 < p < q, got {r}")
    pbar = pow(p, -1, q)
    lhs = jones_J(Fraction(pbar, q)).log_mag
    cf = cf_expand(r)
    t = convergents(cf, cf.L)
    rhs = math.fsum(
        h_eval(Fraction(t.q(ell - 1), t.q(ell))).h for ell in range(1, cf.L + 1)
    )
    return lhs, rhs


def _shifted_J_logmag(p: int, q: int, shift: Fraction) -> float:
    """log of sum_{N<q} P_N(p/q, shift)^2 with exact residue arithmetic."""
    if q == 1:
        return 0.0
    den = q * shift.denominator // math.gcd(q, shift.denominator)
    step = (den // q) * (p % q) % den
    off = shift.numerator * (den // shift.denominator) % den
    n = np.arange(1, q, dtype=np.int64)
    res = (n * step + off) % den
    if np.any(res == 0):
        bad = int(np.flatnonzero(res == 0)[0]) + 1
        raise ZeroFactorError(f"shifted factor n={bad} vanishes", n=bad)
    rm = np.minimum(res, den - res)
    prefix = np.empty(q)
    prefix[0] = 0.0
    np.cumsum(np.log(2.0 * np.sin(np.pi * (rm / den))), out=prefix[1:])
    return _logsumexp_mags(2.0 * prefix).log_mag


def m_k(cf: CFExpansion, k: int) -> float:
    """M_k: log ratio of 5/6-shifted Jones-type sums at level k.

    Numerator runs over the convergent p_k/q_k with shift (-1)^k (5/6)/q_k,
    denominator over the first-digit-dropped convergent with the opposite
    sign.  Depends only on the first k partial quotients.
    """
    if k < 1:
        raise PrecondError(f"need k >= 1, got {k}")
    t = convergents(cf, k)
    tail = convergents(cf_tail(cf), max(k - 1, 0))
    num = _shifted_J_logmag(t.p(k), t.q(k), Fraction((-1) ** k * 5, 6 * t.q(k)))
    qp = tail.q(k - 1)
    den = _shifted_J_logmag(tail.p(k - 1), qp, Fraction((-1) ** (k - 1) * 5, 6 * qp))
    return num - den
