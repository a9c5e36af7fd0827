"""Command-line entry point: ``hyperlab <command> ...``.

Exit codes: 0 success, 2 usage error, 3 size cap exceeded, 4 invariant failure.
Data goes to stdout (or ``--output``); progress goes to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass

from . import analytics, elliptic, quaternion
from .report import StatReport, to_csv
from .sieve import CapExceededError

log = logging.getLogger("hyperlab")

EXIT_OK, EXIT_USAGE, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4
DEFAULT_CAP = 10**8


class InvariantError(RuntimeError):
    """A computed result contradicts an identity that must hold exactly."""


@dataclass
class RunConfig:
    command: str
    x: int = 0
    m1: int = 0
    m2: int = 0
    shift: int = 0
    residue: int = 1
    grid: int = 8
    product_cutoff: int = analytics.DEFAULT_CUTOFF
    threads: int = 1
    format: str = "table"
    output_path: str | None = None
    case: str = "E"
    primes: bool = False
    max_freq: int = 3
    cap: int = DEFAULT_CAP


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--output", dest="output_path", default=None, help="write data here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="hard ceiling on x")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress messages")

    p = argparse.ArgumentParser(prog="hyperlab", description="Lattice-point angle experiments.")
    sub = p.add_subparsers(dest="group", required=True)

    ell = sub.add_parser("elliptic", help="SL2(Z) counts and Weyl sums").add_subparsers(dest="action", required=True)
    c = ell.add_parser("count", parents=[common], help="N_E(x) against 6x")
    c.add_argument("--x", type=int, required=True)
    w = ell.add_parser("weyl", parents=[common], help="prime-restricted Weyl sum A(m1, m2, shift, x)")
    w.add_argument("--x", type=int, required=True)
    w.add_argument("--m1", type=int, default=0)
    w.add_argument("--m2", type=int, default=0)
    w.add_argument("--shift", type=int, choices=(0, 2), default=0)

    hyp = sub.add_parser("hyperbolic", help="Gamma(2,5) counts and Weyl sums").add_subparsers(dest="action", required=True)
    c = hyp.add_parser("count", parents=[common], help="sum of S_h(0,0,n) against 10 (log eps)^2/pi^2 x")
    c.add_argument("--x", type=int, required=True)
    w = hyp.add_parser("weyl", parents=[common], help="sum of S_h(n1, n2, p) over primes")
    w.add_argument("--x", type=int, required=True)
    w.add_argument("--m1", type=int, default=0)
    w.add_argument("--m2", type=int, default=0)
    pr = hyp.add_parser("primes", parents=[common], help="psi_h(x) against Cx and pi_h(x) against C li(x)")
    pr.add_argument("--x", type=int, required=True)

    t = sub.add_parser("titchmarsh", parents=[common], help="sum of N2(5n+1) Lambda(n) over n = a mod 8")
    t.add_argument("--x", type=int, required=True)
    t.add_argument("--residue", type=int, choices=(1, 7), required=True)

    e = sub.add_parser("equidist", parents=[common], help="Weyl table and box discrepancy of a torus sample")
    e.add_argument("--case", choices=analytics.CASES, required=True)
    e.add_argument("--x", type=int, required=True)
    e.add_argument("--grid", type=int, default=8)
    e.add_argument("--primes", action="store_true")
    e.add_argument("--max-freq", dest="max_freq", type=int, default=3)

    k = sub.add_parser("constants", parents=[common], help="K, C, C' from truncated Euler products")
    k.add_argument("--cutoff", dest="product_cutoff", type=int, default=analytics.DEFAULT_CUTOFF)
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    command = ns.group if getattr(ns, "action", None) is None else f"{ns.group} {ns.action}"
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(command=command, **fields)


# --------------------------------------------------------------------------
# rendering


def _report_rows(r: StatReport) -> list[tuple[str, object]]:
    d = r.to_dict()
    rows = [
        ("range", f"{d['x_lo']}..{d['x_hi']}"),
        ("mode", d["mode"]),
        ("count", d["count"]),
        ("weighted_sum", d["weighted_sum"]),
        ("complex_sum", complex(d["complex_sum"]["re"], d["complex_sum"]["im"])),
        ("reference_constant", d["reference_constant"]),
        ("reference_value", d["reference_value"]),
        ("ratio", d["ratio"]),
    ]
    rows += [(f"meta.{k}", v) for k, v in sorted(d["metadata"].items())]
    return rows


def _table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


def render_reports(reports: list[StatReport], fmt: str) -> str:
    if fmt == "json":
        return "".join(r.to_json() + "\n" for r in reports)
    if fmt == "csv":
        return to_csv(reports)
    return "\n".join(_table(_report_rows(r)) for r in reports)


def render_record(record: dict, fmt: str, rows: list[dict] | None = None) -> str:
    """Plain key/value record; ``rows`` (same keys per row) become the CSV body if given."""
    if fmt == "json":
        return json.dumps(record) + "\n"
    if fmt == "csv":
        body = rows if rows is not None else [record]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(body[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(body)
        return buf.getvalue()
    flat = [(k, v) for k, v in record.items() if not isinstance(v, (list, dict))]
    return _table(flat)


# --------------------------------------------------------------------------
# commands


def _need_x(cfg: RunConfig, lo: int) -> None:
    if cfg.x < lo:
        raise _Usage(f"--x must be at least {lo}")
    if cfg.x > cfg.cap:
        raise CapExceededError(f"x = {cfg.x} exceeds the cap {cfg.cap}")


class _Usage(ValueError):
    pass


def cmd_elliptic_count(cfg: RunConfig) -> str:
    _need_x(cfg, 3)
    r = elliptic.count_range(cfg.x, threads=cfg.threads)
    return render_reports([r], cfg.format)


def cmd_elliptic_weyl(cfg: RunConfig) -> str:
    _need_x(cfg, 3)
    r = elliptic.prime_weyl_A(cfg.m1, cfg.m2, cfg.shift, cfg.x, threads=cfg.threads)
    if (cfg.m1 % 2 or cfg.m2 % 2) and r.complex_sum != 0:
        raise InvariantError(f"odd-frequency sum is {r.complex_sum}, expected exactly 0")
    return render_reports([r], cfg.format)


def cmd_hyperbolic_count(cfg: RunConfig) -> str:
    _need_x(cfg, 1)
    r = quaternion.count_range_h(cfg.x, threads=cfg.threads)
    return render_reports([r], cfg.format)


def cmd_hyperbolic_weyl(cfg: RunConfig) -> str:
    _need_x(cfg, 2)
    r = quaternion.prime_weyl_B(cfg.m1, cfg.m2, cfg.x, threads=cfg.threads)
    if (cfg.m1 - cfg.m2) % 2 and r.complex_sum != 0:
        raise InvariantError(f"mixed-parity sum is {r.complex_sum}, expected exactly 0")
    return render_reports([r], cfg.format)


def cmd_hyperbolic_primes(cfg: RunConfig) -> str:
    _need_x(cfg, 2)
    psi = quaternion.psi_h(cfg.x, threads=cfg.threads)
    pi = quaternion.pi_h(cfg.x, threads=cfg.threads)
    if psi.count != pi.count:
        raise InvariantError("psi_h and pi_h disagree on the prime count")
    return render_reports([psi, pi], cfg.format)


def cmd_titchmarsh(cfg: RunConfig) -> str:
    _need_x(cfg, 2)
    r = quaternion.titchmarsh_sum(cfg.x, cfg.residue, threads=cfg.threads)
    return render_reports([r], cfg.format)


def cmd_equidist(cfg: RunConfig) -> str:
    _need_x(cfg, 3)
    if cfg.grid < 2:
        raise _Usage("--grid must be at least 2")
    sample = analytics.build_sample(cfg.case, cfg.x, cfg.primes)
    if len(sample) == 0:
        raise _Usage(f"case {cfg.case} has no points up to x = {cfg.x}")
    M = cfg.max_freq
    table = analytics.weyl_table(sample, M)
    if abs(table[M, M] - 1) > 1e-12:
        raise InvariantError("zero-frequency Weyl sum is not 1")
    disc = analytics.box_discrepancy(sample, cfg.grid)
    off = table.copy()
    off[M, M] = 0
    record = {
        "case": cfg.case,
        "x": cfg.x,
        "primes_only": cfg.primes,
        "points": len(sample),
        "total_weight": sample.total_weight,
        "grid": cfg.grid,
        "box_discrepancy": disc,
        "max_freq": M,
        "max_weyl": float(off.max()),
        "weyl": table.tolist(),
    }
    rows = [
        {"case": cfg.case, "x": cfg.x, "m1": m1, "m2": m2, "weyl": float(table[m1 + M, m2 + M]), "box_discrepancy": disc}
        for m1 in range(-M, M + 1)
        for m2 in range(-M, M + 1)
    ]
    return render_record(record, cfg.format, rows)


def cmd_constants(cfg: RunConfig) -> str:
    P = cfg.product_cutoff
    if P < 3:
        raise _Usage("--cutoff must be at least 3")
    if P > cfg.cap:
        raise CapExceededError(f"cutoff {P} exceeds the cap {cfg.cap}")
    e4 = analytics.euler_product("chi4", None, P)
    e8 = analytics.euler_product("chi8", 5, P)
    if e4.tail_bound > 1e-6:
        log.warning("cutoff %d leaves a relative truncation error up to %.1e", P, e4.tail_bound)
    C, Cp = analytics.constant_C(P), analytics.constant_Cprime(P)
    if C != 2 * Cp:
        raise InvariantError(f"C = {C!r} is not 2 C' = {2 * Cp!r}")
    record = {
        "cutoff": P,
        "tail_bound": e4.tail_bound,
        "euler_chi4": e4.value,
        "euler_chi8_without_5": e8.value,
        "K": analytics.elliptic_prime_constant(P),
        "L1_chi8": analytics.L1_chi8(),
        "C": C,
        "C_prime": Cp,
        "C_over_C_prime": C / Cp,
        "hyperbolic_count_constant": 10 * analytics.LOG_EPS**2 / math.pi**2,
    }
    return render_record(record, cfg.format)


COMMANDS = {
    "elliptic count": cmd_elliptic_count,
    "elliptic weyl": cmd_elliptic_weyl,
    "hyperbolic count": cmd_hyperbolic_count,
    "hyperbolic weyl": cmd_hyperbolic_weyl,
    "hyperbolic primes": cmd_hyperbolic_primes,
    "titchmarsh": cmd_titchmarsh,
    "equidist": cmd_equidist,
    "constants": cmd_constants,
}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if ns.quiet else logging.INFO, format="hyperlab: %(message)s", stream=sys.stderr)
    cfg = _config(ns)
    if cfg.threads < 1:
        print("hyperlab: error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    log.info("running %s", cfg.command)
    try:
        text = COMMANDS[cfg.command](cfg)
    except _Usage as exc:
        print(f"hyperlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceededError as exc:
        print(f"hyperlab: error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantError as exc:
        print(f"hyperlab: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    log.info("done in %.2fs", time.perf_counter() - start)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
