"""Verification harness for the inequality and factorization claims.

Every check evaluates its left-hand side by the direct oracle path (plain
prefix products of |2 sin|, exact rational shifts), never through the
approximation being tested, and compares against the stated envelope with a
frozen empirical constant from sudlerlab.frozen.  Single-case checks return a
CheckReport; suite drivers sweep deterministic corpora and emit per-case rows
for the CSV report (check_id, case_id, lhs, rhs, margin, passed).

Margins are oriented so that margin >= 0 means the case passes; merged
reports take the worst (minimum) margin and the largest fitted constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from sudlerlab import frozen
from sudlerlab.cfrac import (
    CFExpansion,
    ConvergentTable,
    OstrowskiRep,
    cf_tail,
    convergents,
    interval_Ik,
    ostrowski_encode,
    rationals_in_interval,
)
from sudlerlab.errors import EnumerationCapError, PrecondError
from sudlerlab.jones import h_eval, vol_41, _shifted_J_logmag
from sudlerlab.trig import (
    cotangent_sum,
    cotangent_V,
    epsilon_vector,
    epsilon_vector_primed,
    kubert_rhs,
    log_f,
    product_form_eval,
    product_form_logs,
    shifted_sudler,
    sudler_prefix_logmags,
)

__all__ = [
    "CheckReport",
    "CheckCase",
    "merge_cases",
    "check_local56_i",
    "check_local56_ii",
    "check_concentration",
    "concentration_ratios",
    "concentration_hypothesis_ratio",
    "check_sudler_factor",
    "check_kashaev_factor",
    "xi_k",
    "check_tail",
    "tail_envelope_terms",
    "oscillation",
    "scan_th3",
    "run_suite",
    "SUITES",
    "CONCENTRATION_INSTANCES",
    "KASHAEV_INSTANCES",
]

ENUM_CAP = 10**7
QCAP = 10**4


@dataclass(frozen=True)
class CheckReport:
    """Merged outcome of one named check over one or more cases."""

    check_id: str
    cases_run: int
    worst_margin: float
    fitted_constant: float
    passed: bool


@dataclass(frozen=True)
class CheckCase:
    """One CSV report row; margin >= 0 iff the case passed."""

    check_id: str
    case_id: str
    lhs: float
    rhs: float
    margin: float
    passed: bool


def merge_cases(check_id: str, cases: Iterable[CheckCase], fitted: float) -> CheckReport:
    cases = list(cases)
    worst = min((c.margin for c in cases), default=math.inf)
    return CheckReport(
        check_id=check_id,
        cases_run=len(cases),
        worst_margin=worst,
        fitted_constant=fitted,
        passed=all(c.passed for c in cases),
    )


# -- shared plumbing -------------------------------------------------------------


@lru_cache(maxsize=64)
def _prefix_mags_cached(p: int, q: int) -> np.ndarray:
    mags = sudler_prefix_logmags(Fraction(p, q), q - 1)
    mags.setflags(write=False)
    return mags


def _prefix_mags(table: ConvergentTable) -> np.ndarray:
    """log P_N(alpha) for N = 0 .. q-1 at the table's exact rational alpha."""
    a = table.alpha_exact
    if not table.cf.is_finite or table.depth != table.cf.L:
        raise PrecondError("need the full-depth table of a rational alpha")
    return _prefix_mags_cached(a.numerator, a.denominator)


def _lse_mags(mags: np.ndarray) -> float:
    """log sum exp for raw log magnitudes; -inf on an empty selection."""
    if mags.size == 0:
        return -math.inf
    m = np.sort(mags)
    top = float(m[-1])
    return top + math.log(math.fsum(np.exp(m[::-1] - top)))


def _log_max_partial(table: ConvergentTable, k: int) -> float:
    # convention: log max_{1<=m<=k} a_m = 0 when k = 0
    if k == 0:
        return 0.0
    return math.log(max(table.partial(m) for m in range(1, k + 1)))


def _digit(rep: OstrowskiRep, ell: int) -> int:
    return rep.digit(ell)


def _b_star(a_next: int) -> int:
    return (5 * a_next) // 6


def _case(check_id, case_id, lhs, rhs, ge=True) -> CheckCase:
    margin = (lhs - rhs) if ge else (rhs - lhs)
    return CheckCase(check_id, case_id, float(lhs), float(rhs), float(margin), margin >= 0)


# -- local 5/6-principle ----------------------------------------------------------


def _local56_i_parts(table: ConvergentTable, N: int, k: int):
    L = table.depth
    if not 0 <= k < L:
        raise PrecondError(f"need 0 <= k < L={L}, got k={k}")
    a_next = table.partial(k + 1)
    if a_next < 7:
        raise PrecondError(f"hypothesis a_(k+1) >= 7 fails: {a_next}")
    rep = ostrowski_encode(N, table)
    b_k = _digit(rep, k)
    b_k1 = _digit(rep, k + 1)
    a_k2 = table.partial(k + 2) if k + 2 <= L else None
    if a_k2 is not None and b_k1 >= a_k2:
        raise PrecondError("case (i) needs b_(k+1)(N) < a_(k+2)")
    bstar = _b_star(a_next)
    Nstar = N + (bstar - b_k) * table.q(k)
    mags = _prefix_mags(table)
    lhs = float(mags[Nstar] - mags[N])
    main = 0.2326 * (bstar - b_k) ** 2 / a_next
    err = abs(bstar - b_k) / a_next * (1.0 + _log_max_partial(table, k))
    if b_k <= 1 and a_k2 is not None and b_k1 > 0.99 * a_k2:
        err += math.log(a_k2)
    err += 1.0 / table.q(k) ** 2
    return lhs, main, err


def check_local56_i(table: ConvergentTable, N: int, k: int, C: float | None = None) -> CheckReport:
    """Digit-surgery lower bound, case b_(k+1)(N) < a_(k+2).

    Replacing the k-th Ostrowski digit by its optimum b* = floor((5/6)a_(k+1))
    raises log P_N by at least the Gaussian main term minus the frozen error
    envelope.
    """
    C = frozen.LOCAL56_C if C is None else C
    lhs, main, err = _local56_i_parts(table, N, k)
    margin = lhs - (main - C * err)
    fitted = max(0.0, (main - lhs) / err) if err > 0 else 0.0
    return CheckReport("local56_i", 1, margin, fitted, margin >= 0)


def _local56_ii_parts(table: ConvergentTable, N: int, k: int):
    L = table.depth
    if not 0 <= k < L:
        raise PrecondError(f"need 0 <= k < L={L}, got k={k}")
    a_next = table.partial(k + 1)
    if a_next < 7:
        raise PrecondError(f"hypothesis a_(k+1) >= 7 fails: {a_next}")
    if k + 2 > L:
        raise PrecondError("case (ii) needs the digit b_(k+1) and a_(k+2)")
    rep = ostrowski_encode(N, table)
    a_k2 = table.partial(k + 2)
    if _digit(rep, k + 1) != a_k2:
        raise PrecondError("case (ii) needs b_(k+1)(N) = a_(k+2)")
    bstar = _b_star(a_next)
    Nstar = N + bstar * table.q(k) - table.q(k + 1)
    # the surgery yields a valid expansion: digit k+1 drops by one, digit k
    # rises from its forced 0 to b*
    srep = ostrowski_encode(Nstar, table)
    assert _digit(srep, k + 1) == a_k2 - 1 and _digit(srep, k) == bstar
    mags = _prefix_mags(table)
    lhs = float(mags[Nstar] - mags[N])
    main = 0.1615 * a_next
    err = 1.0 + _log_max_partial(table, k) + math.log(a_k2)
    a_k3 = table.partial(k + 3) if k + 3 <= L else None
    if a_k2 == 1 and a_k3 is not None and _digit(rep, k + 2) > 0.99 * a_k3:
        err += a_k3
    return lhs, main, err


def check_local56_ii(table: ConvergentTable, N: int, k: int, C: float | None = None) -> CheckReport:
    """Digit-surgery lower bound, saturated case b_(k+1)(N) = a_(k+2)."""
    C = frozen.LOCAL56_C if C is None else C
    lhs, main, err = _local56_ii_parts(table, N, k)
    margin = lhs - (main - C * err)
    fitted = max(0.0, (main - lhs) / err)
    return CheckReport("local56_ii", 1, margin, fitted, margin >= 0)


# -- concentration of the squared mass --------------------------------------------


def concentration_hypothesis_ratio(table: ConvergentTable, k: int) -> float:
    """(1 + log max a_m) / sqrt(a_(k+1) log(1 + a_(k+1))), the admissibility ratio."""
    a_next = table.partial(k + 1)
    return (1.0 + _log_max_partial(table, k)) / math.sqrt(
        a_next * math.log(1 + a_next)
    )


def _concentration_parts(table: ConvergentTable, K: int, k: int, A: float):
    L = table.depth
    if not 0 <= k < K <= L:
        raise PrecondError(f"need 0 <= k < K <= L={L}")
    hyp = concentration_hypothesis_ratio(table, k)
    if hyp > A:
        raise PrecondError(f"admissibility ratio {hyp:.4g} exceeds A={A}")
    a_next = table.partial(k + 1)
    qK = table.q(K)
    if qK > ENUM_CAP:
        raise EnumerationCapError(f"q_K = {qK} exceeds enumeration cap {ENUM_CAP}")
    mags = _prefix_mags(table)[:qK]
    bstar = _b_star(a_next)
    thresh = 10.0 * math.sqrt(a_next * math.log(a_next))
    b_k = np.empty(qK, dtype=np.int64)
    head_zero = np.empty(qK, dtype=bool)
    for N in range(qK):
        rep = ostrowski_encode(N, table)
        b_k[N] = _digit(rep, k)
        head_zero[N] = all(_digit(rep, m) == 0 for m in range(k))
    tail_sel = np.abs(b_k - bstar) >= thresh
    out = []
    for label, base in [("all", np.ones(qK, dtype=bool)), ("head_zero", head_zero)]:
        log_total = _lse_mags(2.0 * mags[base])
        log_tail = _lse_mags(2.0 * mags[base & tail_sel])
        out.append((label, log_tail, log_total - 20.0 * math.log(a_next)))
    return out


def check_concentration(table: ConvergentTable, K: int, k: int,
                        A: float | None = None) -> CheckReport:
    """Squared-mass tail bound: digits far from b* carry a negligible share.

    Both the unrestricted sum over N < q_K and the variant restricted to
    b_0 = ... = b_(k-1) = 0 are verified by full enumeration in log space.
    """
    A = frozen.CONCENTRATION_A if A is None else A
    parts = _concentration_parts(table, K, k, A)
    worst = math.inf
    fitted = 0.0
    for _, log_tail, log_allowed in parts:
        worst = min(worst, log_allowed - log_tail)
        fitted = max(fitted, math.exp(log_tail - log_allowed))
    return CheckReport("concentration", 2, worst, fitted, worst >= 0)


def concentration_ratios(table: ConvergentTable, K: int, k: int,
                         A: float | None = None) -> tuple[float, float]:
    """Raw tail/total mass ratios (unrestricted, head-zero restricted)."""
    A = frozen.CONCENTRATION_A if A is None else A
    parts = _concentration_parts(table, K, k, A)
    return tuple(
        math.exp(log_tail - (log_allowed + 20.0 * math.log(table.partial(k + 1))))
        for _, log_tail, log_allowed in parts
    )


# -- two-block factorization of the Sudler product ---------------------------------


def _sudler_factor_parts(table: ConvergentTable, N: int, k: int):
    L = table.depth
    if not 1 <= k < L:
        raise PrecondError(f"need 1 <= k < L={L}")
    a_next = table.partial(k + 1)
    if a_next < 150:
        raise PrecondError(f"hypothesis a_(k+1) >= 150 fails: {a_next}")
    rep = ostrowski_encode(N, table)
    bstar = _b_star(a_next)
    dev = abs(_digit(rep, k) - bstar)
    if dev > a_next / 10:
        raise PrecondError("hypothesis |b_k - b*| <= a_(k+1)/10 fails")
    N1 = sum(rep.digit(m) * table.q(m) for m in range(k))
    N2 = N - N1
    mags = _prefix_mags(table)
    shift = Fraction((-1) ** k * 5, 6 * table.q(k))
    head = shifted_sudler(table.alpha_exact, shift, N1).log_mag
    err = float(mags[N]) - head - float(mags[N2])
    unit = (dev + 1) / a_next * (1.0 + _log_max_partial(table, k))
    return err, unit


def check_sudler_factor(table: ConvergentTable, N: int, k: int,
                        C: float | None = None) -> CheckReport:
    """Split P_N into a 5/6-shifted head block and an unshifted tail block.

    The head depends on the Ostrowski digits below k only, the tail on the
    digits from k up; the multiplicative error must sit inside the frozen
    envelope C (dev+1)/a_(k+1) (1 + log max a_m).
    """
    C = frozen.SUDLER_FACTOR_C if C is None else C
    err, unit = _sudler_factor_parts(table, N, k)
    margin = C * unit - abs(err)
    return CheckReport("sudler_factor", 1, margin, abs(err) / unit, margin >= 0)


# -- factorization of the Jones sum ------------------------------------------------


def xi_k(table: ConvergentTable, k: int) -> float:
    """The admissibility parameter sqrt(log(1+a_(k+1))/a_(k+1)) (1+log max a_m)."""
    a_next = table.partial(k + 1)
    return math.sqrt(math.log(1 + a_next) / a_next) * (1.0 + _log_max_partial(table, k))


def _kashaev_parts(cf: CFExpansion, k: int, K: int, A: float):
    if not cf.is_finite:
        raise PrecondError("need a rational alpha (finite expansion)")
    L = cf.L
    if not 1 <= k < K <= L:
        raise PrecondError(f"need 1 <= k < K <= L={L}")
    table = convergents(cf, L)
    xi = xi_k(table, k)
    if xi > A:
        raise PrecondError(f"hypothesis xi_k = {xi:.4g} <= A = {A} fails")
    qK = table.q(K)
    if qK > ENUM_CAP:
        raise EnumerationCapError(f"q_K = {qK} exceeds enumeration cap {ENUM_CAP}")
    mags = _prefix_mags(table)[:qK]
    lhs = _lse_mags(2.0 * mags)
    head = _shifted_J_logmag(table.p(k), table.q(k),
                             Fraction((-1) ** k * 5, 6 * table.q(k)))
    keep = np.empty(qK, dtype=bool)
    for N in range(qK):
        rep = ostrowski_encode(N, table)
        keep[N] = all(_digit(rep, m) == 0 for m in range(k))
    tail = _lse_mags(2.0 * mags[keep])
    err = abs(lhs - head - tail)
    return err, xi


def check_kashaev_factor(cf: CFExpansion, k: int, K: int,
                         A: float | None = None, C: float | None = None) -> CheckReport:
    """Jones-sum factorization into the level-k 5/6-shifted block and the rest."""
    A = frozen.KASHAEV_FACTOR_A if A is None else A
    C = frozen.KASHAEV_FACTOR_C if C is None else C
    err, xi = _kashaev_parts(cf, k, K, A)
    margin = C * xi - err
    return CheckReport("kashaev_factor", 1, margin, err / xi, margin >= 0)


# -- tail estimate for renormalized blocks -----------------------------------------


def _tail_parts(table: ConvergentTable, tail_table: ConvergentTable,
                rep: OstrowskiRep, ell: int):
    L = table.depth
    if not 1 <= ell < L:
        raise PrecondError(f"need 1 <= ell < L={L}")
    a1 = table.partial(1)
    b_ell = _digit(rep, ell)
    if ell == 1 and table.partial(2) == 1 and b_ell > 0:
        raise PrecondError("level 1 with a_2 = 1 admits only the empty block")
    qp_ell = tail_table.q(ell - 1)
    a_next = table.partial(ell + 1)
    if not (a_next <= qp_ell ** (1 / 100) or b_ell <= 0.99 * a_next):
        raise PrecondError("tail hypothesis (i) fails")
    if ell + 2 <= L:
        a_next2 = table.partial(ell + 2)
        qp_next = tail_table.q(ell)
        if not (a_next2 <= qp_next ** (1 / 100) or _digit(rep, ell + 1) <= 0.99 * a_next2):
            raise PrecondError("tail hypothesis (ii) fails")
    alpha = table.alpha_exact
    alpha_p = tail_table.alpha_exact
    d = table.dist(ell)
    dp = tail_table.dist(ell - 1)
    eps = epsilon_vector(rep, table)[ell]
    eps_p = epsilon_vector_primed(rep, tail_table)[ell]
    sgn = (-1) ** ell
    q_ell = table.q(ell)
    lhs = 0.0
    for b in range(b_ell):
        sh = Fraction(sgn * (b * q_ell * d + eps), q_ell)
        sh_p = Fraction(-sgn * (b * qp_ell * dp + eps_p), qp_ell)
        lhs += shifted_sudler(alpha, sh, q_ell).log_mag
        lhs -= shifted_sudler(alpha_p, sh_p, qp_ell).log_mag
    s = sum(table.partial(m) for m in range(2, ell + 1))
    unit = s**0.75 / qp_ell**0.75 + math.log(a1 + 1) / qp_ell
    return lhs, unit


def check_tail(table: ConvergentTable, tail_table: ConvergentTable,
               rep: OstrowskiRep, ell: int, C: float | None = None) -> CheckReport:
    """Level-ell block of P_N against its first-quotient-dropped counterpart.

    The product over b < b_ell(N) of shifted single-period factors at alpha,
    divided by the same product at alpha' = tail(alpha), must stay within the
    frozen envelope; an empty block (b_ell = 0) gives log ratio 0.
    """
    C = frozen.TAIL_C if C is None else C
    lhs, unit = _tail_parts(table, tail_table, rep, ell)
    margin = C * unit - abs(lhs)
    return CheckReport("tail", 1, margin, abs(lhs) / unit, margin >= 0)


# -- oscillation of h over renormalization intervals -------------------------------


def oscillation(cf: CFExpansion, k: int, qcap: int = QCAP) -> tuple[float, float]:
    """Oscillation of h over I_(k+1) and the theorem-shaped envelope.

    osc is max - min of h over the rationals in the closed interval I_(k+1)
    with denominator at most qcap; the envelope combines xi_k with the tail
    terms at scale q_k/a_1.  Raises when the interval holds no such rational.
    """
    if qcap > QCAP * 10:
        raise EnumerationCapError(f"qcap {qcap} exceeds {QCAP * 10}")
    lo, hi = interval_Ik(cf, k + 1)
    hs = [h_eval(r).h for r in rationals_in_interval(lo, hi, qcap)]
    if not hs:
        raise PrecondError(f"no rationals with denominator <= {qcap} in I_(k+1)")
    osc = max(hs) - min(hs)
    table = convergents(cf, k + 1)
    a1 = table.partial(1)
    s = sum(table.partial(m) for m in range(2, k + 1))
    scale = table.q(k) / a1
    bound = xi_k(table, k) + s**0.75 / scale**0.75 + math.log(a1 + 1) / scale
    return osc, bound


# -- global h model sweep -----------------------------------------------------------


def _th3_sweep(Ncap: int):
    from sudlerlab.dist import farey_enumerate

    vol = vol_41()
    sup_ratio = 0.0
    sup_psi = 0.0
    count = 0
    for r in farey_enumerate(Ncap):
        hv = h_eval(r)
        x = float(r)
        ratio = abs(hv.h - vol / (2 * math.pi * x)) / (1.0 + abs(math.log(x)))
        sup_ratio = max(sup_ratio, ratio)
        sup_psi = max(sup_psi, abs(hv.psi))
        count += 1
    return sup_ratio, sup_psi, count


def scan_th3(Ncap: int, bound: float | None = None) -> CheckReport:
    """Sup of |h - Vol/(2 pi x)| / (1 + |log x|) over the Farey set F_Ncap.

    The sup must stay below the frozen constant; sup |psi| over the same set
    is recorded by the suite driver as boundedness evidence.
    """
    if Ncap < 2:
        raise PrecondError(f"need Ncap >= 2, got {Ncap}")
    bound = frozen.TH3_C if bound is None else bound
    sup_ratio, _, count = _th3_sweep(Ncap)
    return CheckReport("th3", count, bound - sup_ratio, sup_ratio, sup_ratio <= bound)


# -- deterministic corpora ----------------------------------------------------------


def _random_cf(rng, L: int, big_at: int | None = None, big: int = 0,
               small_hi: int = 6, a1_hi: int | None = None) -> CFExpansion:
    """Random finite expansion with small quotients, optionally one large one."""
    digits = [int(rng.integers(1, small_hi + 1)) for _ in range(L)]
    if a1_hi is not None:
        digits[0] = int(rng.integers(1, a1_hi + 1))
    if big_at is not None:
        digits[big_at - 1] = big
    if digits[-1] == 1:
        digits[-1] = 2
    return CFExpansion.from_partial_quotients(0, digits)


def _random_digits(table: ConvergentTable, rng, overrides: dict | None = None) -> list[int]:
    """Random valid Ostrowski digit vector, top digit down, with fixed entries."""
    L = table.depth
    overrides = overrides or {}
    digits = [0] * L
    force_zero = False
    for ell in range(L - 1, -1, -1):
        hi = table.partial(ell + 1)
        if ell == 0:
            hi -= 1
        if force_zero:
            b = 0
        elif ell in overrides:
            b = overrides[ell]
        else:
            b = int(rng.integers(0, hi + 1))
        digits[ell] = b
        force_zero = ell > 0 and b == table.partial(ell + 1)
    return digits


def _decode(table: ConvergentTable, digits: Sequence[int]) -> int:
    return OstrowskiRep(digits, table).value()


def local56_cases(
    seed: int = 0,
    n_random: int = 500,
    qmax: int = 5000,
    fits: list | None = None,
) -> list[CheckCase]:
    """Constructed a_(k+1) = 200/300 sweeps plus a randomized corpus.

    When `fits` is a list it collects the per-case constant that would make
    the inequality exactly tight, which is what the calibration tool reads.
    """
    rng = np.random.default_rng(seed)
    C = frozen.LOCAL56_C
    cases = []

    def case_i(table, N, k, label):
        lhs, main, err = _local56_i_parts(table, N, k)
        if fits is not None and err > 0:
            fits.append(max(0.0, (main - lhs) / err))
        cases.append(_case("local56_i", label, lhs, main - C * err))

    def case_ii(table, N, k, label):
        lhs, main, err = _local56_ii_parts(table, N, k)
        if fits is not None and err > 0:
            fits.append(max(0.0, (main - lhs) / err))
        cases.append(_case("local56_ii", label, lhs, main - C * err))

    # constructed instances: one dominant quotient, full deviation sweep
    for a_big in (200, 300):
        cf = CFExpansion.from_partial_quotients(0, [1, 1, a_big, 1, 2])
        table = convergents(cf, cf.L)
        k = 2
        step = max(1, a_big // 40)
        for b in range(0, a_big, step):
            digits = _random_digits(table, rng, overrides={k: b, k + 1: 0})
            N = _decode(table, digits)
            case_i(table, N, k, f"constructed_a{a_big}_b{b}")
        # saturated case: b_(k+1) = a_(k+2) forces b_k = 0; pin b_(k+2) below
        # its own maximum so the forced zero cannot cascade onto b_(k+1)
        digits = _random_digits(
            table, rng, overrides={k + 1: table.partial(k + 2), k + 2: 0}
        )
        case_ii(table, _decode(table, digits), k, f"constructed_a{a_big}_saturated")

    made = 0
    while made < n_random:
        L = int(rng.integers(3, 6))
        k = int(rng.integers(0, L - 1))
        hi = min(400, max(8, qmax // 4 ** (L - 1)))
        a_big = int(rng.integers(7, hi + 1))
        cf = _random_cf(rng, L, big_at=k + 1, big=a_big, small_hi=3)
        table = convergents(cf, cf.L)
        if table.q(cf.L) > qmax:
            continue
        digits = _random_digits(table, rng)
        N = _decode(table, digits)
        rep = ostrowski_encode(N, table)
        a_k2 = table.partial(k + 2) if k + 2 <= cf.L else None
        if a_k2 is not None and _digit(rep, k + 1) == a_k2:
            case_ii(table, N, k, f"random_{made}")
        else:
            case_i(table, N, k, f"random_{made}")
        made += 1
    return cases


# fixed corpora shared by the suites and the calibration tool
CONCENTRATION_INSTANCES = [
    ("a300_empty_tail", [1, 300, 1, 2], 1),
    ("a2000_tail", [1, 2000, 2], 1),
    ("a1500_mixed", [2, 1500, 1, 3], 1),
]
KASHAEV_INSTANCES = [
    ("a400_full", [2, 400, 2, 3], 1, 4),
    ("a400_window", [2, 400, 2, 3], 1, 2),
    ("a1600_full", [2, 1600, 2, 3], 1, 4),
    ("deep_k2", [2, 3, 900, 2, 2], 2, 5),
]


def concentration_cases() -> list[CheckCase]:
    """Constructed concentration instances, including the empty-tail one."""
    cases = []
    for label, digits, k in CONCENTRATION_INSTANCES:
        cf = CFExpansion.from_partial_quotients(0, digits)
        table = convergents(cf, cf.L)
        for lab2, log_tail, log_allowed in _concentration_parts(
            table, cf.L, k, frozen.CONCENTRATION_A
        ):
            cases.append(
                _case("concentration", f"{label}_{lab2}", log_allowed, log_tail)
            )
    return cases


def factor_cases(seed: int = 0, n_random: int = 200) -> list[CheckCase]:
    """Two-block factorization sweep plus Jones-sum factorization instances."""
    rng = np.random.default_rng(seed)
    cases = []
    made = 0
    while made < n_random:
        L = int(rng.integers(3, 5))
        k = int(rng.integers(1, L))
        hi = min(600, 3 * 10**4 // 5 ** (L - 1))
        a_big = int(rng.integers(150, hi + 1))
        cf = _random_cf(rng, L, big_at=k + 1, big=a_big, small_hi=4)
        table = convergents(cf, cf.L)
        if table.q(cf.L) > 3 * 10**4:
            continue
        bstar = _b_star(a_big)
        dev = int(rng.integers(0, a_big // 10 + 1)) * (1 if rng.random() < 0.5 else -1)
        b_k = min(max(bstar + dev, 0), a_big - 1)
        overrides = {k: b_k}
        if k + 1 < cf.L:
            # keep b_(k+1) off its maximum so the forced-zero rule cannot clear b_k
            overrides[k + 1] = int(rng.integers(0, table.partial(k + 2)))
        digits = _random_digits(table, rng, overrides=overrides)
        N = _decode(table, digits)
        err, unit = _sudler_factor_parts(table, N, k)
        cases.append(_case("sudler_factor", f"random_{made}",
                           frozen.SUDLER_FACTOR_C * unit, abs(err)))
        made += 1
    # a_1 = 2 keeps the head convergent q_1 > 1; with q_1 = 1 the head block
    # is the empty product and the factorization error vanishes identically
    for label, digits, k, K in KASHAEV_INSTANCES:
        cf = CFExpansion.from_partial_quotients(0, digits)
        err, xi = _kashaev_parts(cf, k, K, frozen.KASHAEV_FACTOR_A)
        cases.append(_case("kashaev_factor", label, frozen.KASHAEV_FACTOR_C * xi, err))
    return cases


def tail_cases(seed: int = 0, n_random: int = 150, qmax: int = 5000) -> list[CheckCase]:
    """Random rationals, all admissible levels, plus a large-a_1 instance."""
    from sudlerlab.cfrac import cf_expand

    rng = np.random.default_rng(seed)
    cases = []
    made = 0
    while made < n_random:
        q = int(rng.integers(20, qmax))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        if cf.L < 3:
            continue
        table = convergents(cf, cf.L)
        tail_table = convergents(cf_tail(cf), cf.L - 1)
        N = int(rng.integers(0, table.q(cf.L)))
        rep = ostrowski_encode(N, table)
        used = False
        for ell in range(1, cf.L):
            try:
                lhs, unit = _tail_parts(table, tail_table, rep, ell)
            except PrecondError:
                continue
            cases.append(_case("tail", f"random_{made}_l{ell}",
                               frozen.TAIL_C * unit, abs(lhs)))
            used = True
        made += used
    # large a_1: the log(a_1+1)/q'_ell term carries the envelope at ell = 1;
    # pin b_2 below 0.99 a_3 so the level-2 hypothesis holds
    cf = CFExpansion.from_partial_quotients(0, [40, 2, 3, 2, 2])
    table = convergents(cf, cf.L)
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    digits = _random_digits(
        table, np.random.default_rng(seed + 1), overrides={1: 1, 2: 0}
    )
    rep = ostrowski_encode(_decode(table, digits), table)
    lhs, unit = _tail_parts(table, tail_table, rep, 1)
    cases.append(_case("tail", "large_a1", frozen.TAIL_C * unit, abs(lhs)))
    return cases


def tail_envelope_terms(cf: CFExpansion, rep: OstrowskiRep, ell: int):
    """(|log ratio|, power term, log(a_1+1) term) for envelope comparisons."""
    table = convergents(cf, cf.L)
    tail_table = convergents(cf_tail(cf), cf.L - 1)
    lhs, _ = _tail_parts(table, tail_table, rep, ell)
    qp_ell = tail_table.q(ell - 1)
    s = sum(table.partial(m) for m in range(2, ell + 1))
    return abs(lhs), s**0.75 / qp_ell**0.75, math.log(table.partial(1) + 1) / qp_ell


# -- identity / estimate suites -----------------------------------------------------


def identity_cases(seed: int = 0) -> list[CheckCase]:
    """Exact identities: Kubert, product form, explicit formula, telescoping."""
    from sudlerlab.cfrac import cf_expand
    from sudlerlab.jones import telescoping_logJ
    from sudlerlab.trig import explicit_formula_eval

    rng = np.random.default_rng(seed)
    cases = []
    # Kubert functional equation on random (p/q, x)
    worst = 0.0
    for _ in range(300):
        q = int(rng.integers(2, 200))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        x = Fraction(int(rng.integers(1, 6 * q)), 6 * q)
        if (x / q) % 1 == 0 or x % 1 == 0:
            continue
        try:
            lhs = shifted_sudler(Fraction(p, q), x / q, q - 1).log_mag + \
                log_f(x / q).log_mag
            rhs = kubert_rhs(Fraction(p, q), x).log_mag
        except ArithmeticError:
            continue
        worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    cases.append(_case("kubert", "random_sweep", worst, 1e-12, ge=False))
    # product form vs direct prefix logs
    worst = 0.0
    for i in range(40):
        q = int(rng.integers(5, 300))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        table = convergents(cf, cf.L)
        mags = _prefix_mags(table)
        batch = product_form_logs(table, cf.L)
        err = float(np.max(np.abs(batch - mags) / (1.0 + np.abs(mags))))
        worst = max(worst, err)
        N = int(rng.integers(0, q))
        rep = ostrowski_encode(N, table)
        got = product_form_eval(rep, table).log_mag
        worst = max(worst, abs(got - float(mags[N])) / (1 + abs(float(mags[N]))))
    cases.append(_case("product_form", "random_sweep", worst, 1e-9, ge=False))
    # explicit single-period formula vs direct shifted product
    worst = 0.0
    for _ in range(200):
        q = int(rng.integers(3, 200))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        if cf.L < 2:
            continue
        table = convergents(cf, cf.L)
        ell = int(rng.integers(1, cf.L))
        x = Fraction(int(rng.integers(-100, 101)), 120)
        try:
            got = explicit_formula_eval(ell, x, table).log_mag
            sh = Fraction((-1) ** ell * x, table.q(ell))
            want = shifted_sudler(table.alpha_exact, sh, table.q(ell)).log_mag
        except (ArithmeticError, PrecondError):
            continue
        worst = max(worst, abs(got - want) / (1 + abs(want)))
    cases.append(_case("explicit_formula", "random_sweep", worst, 1e-10, ge=False))
    # telescoping identity, exhaustive small denominators
    worst = 0.0
    for q in range(2, 41):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            lhs, rhs = telescoping_logJ(Fraction(p, q))
            worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
    cases.append(_case("telescoping", "exhaustive_q40", worst, 1e-8, ge=False))
    return cases


def epsilon_cases(seed: int = 0) -> list[CheckCase]:
    """Exact-rational bounds on the epsilon vectors and the q_l difference."""
    from sudlerlab.cfrac import cf_expand
    from sudlerlab.trig import ql_diff_check

    rng = np.random.default_rng(seed)
    cases = []
    worst = math.inf
    worst_ref_lo = math.inf
    worst_ref_hi = math.inf
    for made in range(200):
        q = int(rng.integers(10, 3000))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        table = convergents(cf, cf.L)
        N = int(rng.integers(0, q))
        rep = ostrowski_encode(N, table)
        eps = epsilon_vector(rep, table)
        for ell in range(cf.L):
            if _digit(rep, ell) < 1:
                continue
            e = eps[ell]
            lo = -table.q(ell) * table.dist(ell) + table.q(ell) * table.dist(ell + 1)
            hi = table.q(ell) * table.dist(ell + 1)
            worst = min(worst, float(e - lo), float(hi - e))
            # refined one-sided variants under digit restrictions, exact arithmetic
            if ell + 2 <= cf.L:
                a2 = table.partial(ell + 2)
                delta = 1 - Fraction(_digit(rep, ell + 1), a2)
                if delta > 0:
                    ref_lo = -(1 - delta / 3) * table.q(ell) * table.dist(ell)
                    worst_ref_lo = min(worst_ref_lo, float(e - ref_lo))
            if ell + 3 <= cf.L:
                a3 = table.partial(ell + 3)
                delta = 1 - Fraction(_digit(rep, ell + 2), a3)
                if delta > 0:
                    ref_hi = (1 - delta / 3) * table.q(ell) * table.dist(ell + 1)
                    worst_ref_hi = min(worst_ref_hi, float(ref_hi - e))
    cases.append(_case("epsilon_bounds", "two_sided", worst, 0.0))
    cases.append(_case("epsilon_bounds", "refined_lower", worst_ref_lo, 0.0))
    cases.append(_case("epsilon_bounds", "refined_upper", worst_ref_hi, 0.0))
    # renormalized convergent-distance difference bound
    worst = math.inf
    for _ in range(200):
        q = int(rng.integers(30, 5000))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        if cf.L < 3:
            continue
        table = convergents(cf, cf.L)
        tail_table = convergents(cf_tail(cf), cf.L - 1)
        for ell in range(1, cf.L):
            for m in range(ell, cf.L):
                if m == 1 and table.partial(2) == 1:
                    continue
                lhs, bound = ql_diff_check(ell, m, table, tail_table)
                worst = min(worst, float(bound - lhs))
    cases.append(_case("ql_diff", "random_sweep", worst, 0.0))
    return cases


def cotangent_cases(seed: int = 0) -> list[CheckCase]:
    """Shifted cotangent sums and the V_l kernel against their envelopes."""
    from sudlerlab.cfrac import cf_expand

    rng = np.random.default_rng(seed)
    cases = []
    worst_irr = 0.0
    worst_rat = 0.0
    for _ in range(200):
        q = int(rng.integers(10, 2000))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        table = convergents(cf, cf.L)
        ell = int(rng.integers(1, cf.L + 1))
        N = int(rng.integers(0, table.q(ell)))
        # first form: shift below the true distance ||q_(ell-1) alpha||
        dp = table.dist(ell - 1)
        if ell == 1:
            dp = min(dp, 1 - dp)
        dist_prev = float(dp)
        u = 0.9 * rng.random()
        x = Fraction(u * dist_prev).limit_denominator(10**9)
        if x == 0:
            continue
        try:
            s = cotangent_sum(table.alpha_exact, x, N)
        except ArithmeticError:
            continue
        env = table.q(ell) * (1.0 / (1.0 - float(x) / dist_prev)
                              + _log_max_partial(table, ell))
        worst_irr = max(worst_irr, abs(s) / env)
        # second form: pure rational nodes np_l/q_l with |x| < 1/q_l
        xr = Fraction(int(rng.integers(-90, 91)), 100 * table.q(ell))
        if xr == 0:
            continue
        try:
            s2 = cotangent_sum(Fraction(table.p(ell), table.q(ell)), xr, N)
        except ArithmeticError:
            continue
        env2 = table.q(ell) * (1.0 / (1.0 - table.q(ell) * abs(float(xr)))
                               + _log_max_partial(table, ell))
        worst_rat = max(worst_rat, abs(s2) / env2)
    cases.append(_case("cot_sum", "shifted_form", worst_irr, frozen.COT_SUM_C, ge=False))
    cases.append(_case("cot_sum", "rational_form", worst_rat, frozen.COT_SUM_C, ge=False))
    worst_v = 0.0
    decreasing_ok = True
    for _ in range(100):
        q = int(rng.integers(10, 1500))
        p = int(rng.integers(1, q))
        if math.gcd(p, q) != 1:
            continue
        cf = cf_expand(Fraction(p, q))
        if cf.L < 2:
            continue
        table = convergents(cf, cf.L)
        # full depth is degenerate for rationals: ||q_L alpha|| = 0
        ell = int(rng.integers(1, cf.L))
        xs = np.linspace(-0.95, 0.95, 21)
        vals = [cotangent_V(ell, float(x), table) for x in xs]
        decreasing_ok &= all(a >= b for a, b in zip(vals, vals[1:]))
        qd = float(table.q(ell) * table.dist(ell))
        for x, v in zip(xs, vals):
            env = qd * (1.0 / (1.0 - abs(float(x))) + _log_max_partial(table, ell))
            worst_v = max(worst_v, abs(v) / env)
    cases.append(_case("cot_V", "envelope", worst_v, frozen.VLX_C, ge=False))
    cases.append(_case("cot_V", "decreasing", 1.0 if decreasing_ok else -1.0, 0.0))
    return cases


def continuity_cases(qcap: int = QCAP) -> list[CheckCase]:
    """Oscillation of h over I_(k+1) for the e-2 preset at its large quotients."""
    cf = CFExpansion.preset("e-2")
    cases = []
    oscs = []
    for k, cap in [(4, qcap), (7, qcap), (10, max(qcap, 6 * 10**4))]:
        osc, bound = oscillation(cf, k, cap)
        oscs.append(osc)
        cases.append(_case("continuity", f"e-2_k{k}", osc, frozen.OSC_C * bound, ge=False))
    for i, (osc, nxt) in enumerate(zip(oscs, oscs[1:])):
        cases.append(_case("continuity", f"e-2_drop_{i}", nxt, 0.7 * osc, ge=False))
    return cases


def th3_cases(Ncap: int = 200) -> list[CheckCase]:
    sup_ratio, sup_psi, _ = _th3_sweep(Ncap)
    return [
        _case("th3", f"F{Ncap}_sup", sup_ratio, frozen.TH3_C, ge=False),
        _case("th3", f"F{Ncap}_sup_psi_finite",
              1.0 if math.isfinite(sup_psi) else -1.0, 0.0),
    ]


SUITES = {
    "identities": identity_cases,
    "epsilon": epsilon_cases,
    "cotangent": cotangent_cases,
    "local56": local56_cases,
    "concentration": concentration_cases,
    "factor": factor_cases,
    "tail": tail_cases,
    "continuity": continuity_cases,
    "th3": th3_cases,
}


def run_suite(name: str, **kwargs) -> list[CheckCase]:
    """Run one named check suite and return its CSV-ready case rows."""
    if name not in SUITES:
        raise PrecondError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
