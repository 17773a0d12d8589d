"""Command-line front end: eval, scan, verify, and dist subcommands.

Outputs are deterministic: CSV files carry a header row, '.' decimals and
17 significant digits, and rerunning a command with the same config and
inputs reproduces the bytes exactly.  Exit codes: 0 success, 2 parse or
precondition failure, 3 failed checks, 4 resource-cap or convergence abort.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction

from sudlerlab import cfrac, verify
from sudlerlab.cfrac import CFExpansion, cf_expand
from sudlerlab.dist import (
    EmpiricalDist,
    _default_law,
    _stat_logJ_from_mag,
    _stat_pq_from_sum,
    estimate_D,
    farey_enumerate,
    ks_compare,
    sweep,
)
from sudlerlab.errors import EnumerationCapError, PrecondError, QuadratureError
from sudlerlab.jones import h_eval, vol_41

ENV_CONFIG = "SUDLERLAB_CONFIG"
PRESETS = ("golden", "sqrt2inv", "e-2")


@dataclass(frozen=True)
class Config:
    """Process-wide knobs; flags override the optional key=value file."""

    precision_bits: int = 128
    guard_depth: int = 8
    qcap: int = 10**4
    Ncap: int = 200
    threads: int = 1
    output_path: str | None = None

    def validate(self) -> "Config":
        if self.precision_bits < 64:
            raise PrecondError(f"precision_bits >= 64 required, got {self.precision_bits}")
        if self.qcap < 2 or self.Ncap < 2:
            raise PrecondError("qcap and Ncap must be >= 2")
        if self.guard_depth < 0 or self.threads < 1:
            raise PrecondError("guard_depth >= 0 and threads >= 1 required")
        return self


_INT_KEYS = {"precision_bits", "guard_depth", "qcap", "Ncap", "threads"}


def _config_from_file(path: str) -> dict:
    values: dict = {}
    known = {f.name for f in fields(Config)}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PrecondError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise PrecondError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = int(val) if key in _INT_KEYS else val
    return values


def load_config(args: argparse.Namespace) -> Config:
    """Defaults, then the SUDLERLAB_CONFIG file, then explicit flags."""
    cfg = Config()
    path = os.environ.get(ENV_CONFIG)
    if path:
        cfg = replace(cfg, **_config_from_file(path))
    overrides = {
        name: getattr(args, flag)
        for name, flag in [
            ("precision_bits", "precision_bits"),
            ("guard_depth", "guard_depth"),
            ("qcap", "qcap"),
            ("Ncap", "ncap"),
            ("threads", "threads"),
            ("output_path", "out"),
        ]
        if getattr(args, flag, None) is not None
    }
    cfg = replace(cfg, **overrides).validate()
    # the convergent tables take this as their precision floor
    cfrac.MIN_PRECISION_BITS = max(cfg.precision_bits, 64)
    return cfg


# -- formatting ---------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_csv(path: str | None, header: list[str], rows) -> None:
    out = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if path:
            out.close()


# -- argument parsing ----------------------------------------------------------------


def parse_x(text: str) -> Fraction:
    """A rational in (0,1)-foldable form: 'p/q', a decimal, or 'cf:a1,a2,...'."""
    if text in PRESETS:
        raise PrecondError(
            f"preset {text!r} denotes an irrational; eval needs a rational"
        )
    if text.startswith("cf:"):
        try:
            digits = [int(tok) for tok in text[3:].split(",") if tok.strip()]
        except ValueError as exc:
            raise PrecondError(f"bad cf digits in {text!r}") from exc
        if not digits or any(d < 1 for d in digits):
            raise PrecondError(f"cf digits must be positive integers: {text!r}")
        cf = CFExpansion.from_partial_quotients(0, digits)
        table = cfrac.convergents(cf, cf.L)
        return table.alpha_exact
    try:
        r = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PrecondError(f"cannot parse {text!r} as a rational") from exc
    if r == 0:
        raise PrecondError("h is undefined at 0")
    return r


# -- subcommands ---------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace, cfg: Config) -> int:
    r = parse_x(args.x)
    hv = h_eval(r)
    cf = cf_expand(hv.x)
    digits = ", ".join(str(a) for a in cf.partials(cf.L))
    print(f"x = {hv.x}")
    print(f"q = {hv.x.denominator}")
    print(f"cf = [{cf.a0}; {digits}]")
    print(f"logJ = {_fmt(hv.logJ_x.log_mag)}")
    print(f"h = {_fmt(hv.h)}")
    print(f"psi = {_fmt(hv.psi)}")
    print(f"psi_star = {_fmt(hv.psi_star)}")
    return 0


def cmd_scan(args: argparse.Namespace, cfg: Config) -> int:
    if args.qmax < 2:
        raise PrecondError(f"--qmax must be >= 2, got {args.qmax}")
    if (args.near is None) != (args.radius is None):
        raise PrecondError("--near and --radius go together")
    vol = vol_41()

    def rows():
        for r in farey_enumerate(args.qmax):
            x = float(r)
            if args.near is not None and abs(x - args.near) > args.radius:
                continue
            hv = h_eval(r)
            model = vol / (2.0 * math.pi * x) - 1.5 * math.log(x)
            yield (r.numerator, r.denominator, x, hv.h, hv.psi, model)

    _write_csv(cfg.output_path, ["p", "q", "x", "h", "psi", "h_model"], rows())
    return 0


def cmd_verify(args: argparse.Namespace, cfg: Config) -> int:
    kwargs = {}
    if args.suite == "continuity":
        kwargs["qcap"] = cfg.qcap
    elif args.suite == "th3":
        kwargs["Ncap"] = cfg.Ncap
    cases = verify.run_suite(args.suite, **kwargs)
    _write_csv(
        cfg.output_path,
        ["check_id", "case_id", "lhs", "rhs", "margin", "passed"],
        ((c.check_id, c.case_id, c.lhs, c.rhs, c.margin, c.passed) for c in cases),
    )
    failed = [c for c in cases if not c.passed]
    if failed:
        print(f"suite {args.suite}: {len(failed)}/{len(cases)} cases failed",
              file=sys.stderr)
        return 3
    print(f"suite {args.suite}: {len(cases)} cases passed", file=sys.stderr)
    return 0


def cmd_dist(args: argparse.Namespace, cfg: Config) -> int:
    if args.N < 50:
        raise PrecondError(f"--N must be >= 50, got {args.N}")
    table = sweep(args.N, threads=cfg.threads)
    D = estimate_D(min(args.N, cfg.Ncap))
    stat_logJ = [
        _stat_logJ_from_mag(row["logJ"], args.N, D) for row in table
    ]
    stat_pq = [_stat_pq_from_sum(int(row["sum_a"]), args.N) for row in table]
    _write_csv(
        cfg.output_path,
        ["p", "q", "sum_partial_quotients", "logJ", "stat_logJ", "stat_pq"],
        (
            (int(r["p"]), int(r["q"]), int(r["sum_a"]), float(r["logJ"]), sl, sp)
            for r, sl, sp in zip(table, stat_logJ, stat_pq)
        ),
    )
    law = _default_law()
    values = stat_logJ if args.stat == "logJ" else stat_pq
    emp = EmpiricalDist.from_values(values)
    ks = ks_compare(emp, law)
    print(f"stat = {args.stat}")
    print(f"n = {emp.n}")
    print(f"KS = {_fmt(ks)}")
    if args.stat == "logJ":
        print(f"D = {_fmt(D)}  (estimated over F_{min(args.N, cfg.Ncap)})")
    if args.report:
        ys = emp.samples
        ecdf = [(i + 1) / emp.n for i in range(emp.n)]
        scdf = law.cdf(ys)
        _write_csv(
            args.report,
            ["y", "emp_cdf", "stable_cdf"],
            ((float(y), e, float(s)) for y, e, s in zip(ys, ecdf, scdf)),
        )
    return 0


# -- driver --------------------------------------------------------------------------


def _add_common_flags(ap: argparse.ArgumentParser, subcommand: bool) -> None:
    # registered on the top-level parser and again on every subparser, so
    # they can be given on either side of the subcommand; the subparser
    # copies default to SUPPRESS so they never clobber a prefix value
    kw = {"default": argparse.SUPPRESS} if subcommand else {}
    ap.add_argument("--precision-bits", dest="precision_bits", type=int, **kw)
    ap.add_argument("--guard-depth", dest="guard_depth", type=int, **kw)
    ap.add_argument("--qcap", type=int, **kw)
    ap.add_argument("--ncap", type=int, **kw)
    ap.add_argument("--threads", type=int, **kw)
    ap.add_argument("--out", help="output CSV path (default: stdout)", **kw)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sudlerlab",
        description="Sudler products, figure-eight Jones values, and h(x) checks",
    )
    _add_common_flags(ap, subcommand=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="print one evaluation record")
    _add_common_flags(p, subcommand=True)
    p.add_argument("x", help="rational 'p/q', decimal, or 'cf:a1,a2,...'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="CSV of (p, q, x, h, psi, h_model) over F_qmax")
    _add_common_flags(p, subcommand=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--near", type=float, help="window center")
    p.add_argument("--radius", type=float, help="window half-width")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run one check suite, write the report CSV")
    _add_common_flags(p, subcommand=True)
    p.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dist", help="Farey sweep with normalized statistics")
    _add_common_flags(p, subcommand=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--stat", choices=("logJ", "pq"), default="pq")
    p.add_argument("--report", help="also write (y, emp_cdf, stable_cdf) CSV here")
    p.set_defaults(func=cmd_dist)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        cfg = load_config(args)
        return args.func(args, cfg)
    except PrecondError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EnumerationCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except QuadratureError as exc:
        print(f"quadrature did not converge: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
