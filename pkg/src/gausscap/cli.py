"""
Command-line interface.

    gausscap classify <file>
    gausscap bound <file> --energy E [--oracle-check] [--numeric-force]
    gausscap sweep <file> --from E0 --to E1 --points N [--log2] --out <csv>
    gausscap asymptote <file> --energy E

A channel file is a JSON document with keys ``d`` (2 numbers), ``T`` and
``N`` (2x2 nested arrays, row-major).  Exit codes: 0 success, 2 parse error,
3 channel not completely positive, 4 infeasible energy, 5 I/O error,
6 unsupported class.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from gausscap.capacity import ASYMPTOTE_FORMULAS, asymptote, bound_canonical, check_energy
from gausscap.channel import ChannelClass, GaussianChannel, canonical_reduce, cp_violation
from gausscap.errors import InfeasibleBudgetError, UnsupportedClassError
from gausscap.gaussian_core import TOL_RANK, as_mat2, as_sym2, as_vec2, det2
from gausscap.oracle import OracleConfig, oracle_bound

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CP = 3
EXIT_ENERGY = 4
EXIT_IO = 5
EXIT_UNSUPPORTED = 6

MAX_ASYMMETRY = 1e-12
# distance from a class boundary below which classify prints a warning
WARN_BAND = 1e-6

CSV_HEADER = ["E", "bound_bits", "regime", "s_opt", "asymptote_bits", "gap_bits"]


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    """Fixed 9-decimal rendering without a spurious minus sign on zero."""
    s = f"{x:.9f}"
    return s[1:] if s.startswith("-") and float(s) == 0.0 else s


def _fmt_mat(m: np.ndarray) -> str:
    return "[[" + ", ".join(fmt(v) for v in m[0]) + "], [" + ", ".join(fmt(v) for v in m[1]) + "]]"


def load_channel(path: str) -> GaussianChannel:
    """Read and validate a channel file; raises :class:`CliError` with the exit code."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
        if not isinstance(doc, dict) or not {"d", "T", "N"} <= doc.keys():
            raise ValueError("expected an object with keys d, T, N")
        ch = GaussianChannel(
            as_mat2(doc["T"]), as_sym2(doc["N"], max_asym=MAX_ASYMMETRY), as_vec2(doc["d"])
        )
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse {path}: {exc}") from exc
    msg = cp_violation(ch)
    if msg is not None:
        raise CliError(EXIT_CP, f"channel violates complete positivity: {msg}")
    return ch


def _energy(E: float) -> float:
    try:
        return check_energy(E)
    except InfeasibleBudgetError as exc:
        raise CliError(EXIT_ENERGY, str(exc)) from exc


def _residual_param(cf) -> str:
    if cf.cls is ChannelClass.A2:
        return f" t={fmt(cf.t)}"
    if cf.cls is ChannelClass.B1:
        return f" n={fmt(cf.n)}"
    if cf.cls is ChannelClass.A1:
        return ""
    return f" r={fmt(cf.r)}"


def _boundary_warnings(ch: GaussianChannel, cls: ChannelClass) -> List[str]:
    tau, det_n = det2(ch.T), det2(ch.N)
    t_norm, n_norm = float(np.max(np.abs(ch.T))), float(np.max(np.abs(ch.N)))
    out = []
    if cls is ChannelClass.A1 and t_norm > 0:
        out.append(f"T treated as zero inside tolerance band (max|T| = {t_norm:.3e} <= {TOL_RANK:g})")
    if cls is ChannelClass.A2 and tau != 0:
        out.append(f"det(T) treated as zero inside tolerance band (|tau| = {abs(tau):.3e} <= {TOL_RANK:g})")
    if cls in (ChannelClass.B1, ChannelClass.B2) and tau != 1:
        out.append(f"det(T) treated as one inside tolerance band (|tau - 1| = {abs(tau - 1):.3e} <= {TOL_RANK:g})")
    if cls is ChannelClass.B1 and det_n != 0:
        out.append(f"det(N) treated as zero inside tolerance band (det N = {det_n:.3e})")
    if cls not in (ChannelClass.A1, ChannelClass.A2) and 0 < abs(tau) < WARN_BAND:
        out.append(f"near class boundary tau = 0 (|tau| = {abs(tau):.3e})")
    if cls not in (ChannelClass.B1, ChannelClass.B2) and 0 < abs(tau - 1) < WARN_BAND:
        out.append(f"near class boundary tau = 1 (|tau - 1| = {abs(tau - 1):.3e})")
    if cls is ChannelClass.B2 and n_norm > TOL_RANK and det_n < WARN_BAND:
        out.append(f"near class B1 (det N = {det_n:.3e})")
    return out


def cmd_classify(args) -> List[str]:
    ch = load_channel(args.file)
    cf = canonical_reduce(ch)
    res_t = float(np.max(np.abs(cf.S_B @ ch.T @ cf.S_A - cf.T_c)))
    res_n = float(np.max(np.abs(cf.S_B @ ch.N @ cf.S_B.T - cf.N_c)))
    lines = [
        f"{cf.cls.value} tau={fmt(cf.tau)} nbar={fmt(cf.nbar)}{_residual_param(cf)}",
        f"class: {cf.cls.value}",
        f"tau: {fmt(cf.tau)}",
        f"det_N: {fmt(det2(ch.N))}",
        f"T_c: {_fmt_mat(cf.T_c)}",
        f"N_c: {_fmt_mat(cf.N_c)}",
        f"residual_T: {fmt(res_t)}",
        f"residual_N: {fmt(res_n)}",
        f"tolerance_band: {TOL_RANK:g}",
    ]
    lines += [f"warning: {w}" for w in _boundary_warnings(ch, cf.cls)]
    return lines


def cmd_bound(args) -> List[str]:
    ch = load_channel(args.file)
    E = _energy(args.energy)
    cf = canonical_reduce(ch)
    b = bound_canonical(cf, E, numeric_force=args.numeric_force)
    lines = [
        f"{fmt(b.value)} {b.regime.value}",
        f"class: {cf.cls.value}",
        f"energy: {fmt(E)}",
        f"s_opt: {'' if b.s_opt is None else fmt(b.s_opt)}",
        f"witness_V: {_fmt_mat(b.witness.V)}",
        f"witness_M: {_fmt_mat(b.witness.M)}",
    ]
    if args.oracle_check:
        o = oracle_bound(ch, E, OracleConfig())
        lines.append(f"oracle: {fmt(o.value)}")
        lines.append(f"delta: {fmt(b.value - o.value)}")
    return lines


def sweep_energies(start: float, stop: float, points: int, log2: bool) -> np.ndarray:
    if log2:
        grid = 2.0 ** np.linspace(math.log2(start), math.log2(stop), points)
    else:
        grid = np.linspace(start, stop, points)
    grid[0], grid[-1] = start, stop
    return grid


def _thread_count() -> int:
    raw = os.environ.get("GAUSCAP_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def sweep_rows(ch: GaussianChannel, energies: Sequence[float]) -> List[List[str]]:
    cf = canonical_reduce(ch)

    def row(E: float) -> List[str]:
        b = bound_canonical(cf, E)
        try:
            a = asymptote(cf, E)
            a_str, gap_str = repr(float(a)), repr(abs(b.value - a))
        except UnsupportedClassError:
            a_str = gap_str = ""
        s_str = "" if b.s_opt is None else repr(float(b.s_opt))
        return [repr(float(E)), repr(float(b.value)), b.regime.value, s_str, a_str, gap_str]

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        return list(pool.map(row, energies))


def cmd_sweep(args) -> List[str]:
    ch = load_channel(args.file)
    if not args.start < args.stop:
        raise CliError(EXIT_PARSE, "--from must be smaller than --to")
    if args.points < 2:
        raise CliError(EXIT_PARSE, "--points must be at least 2")
    _energy(args.start)
    energies = sweep_energies(args.start, args.stop, args.points, args.log2)
    rows = sweep_rows(ch, energies)
    try:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {args.out}: {exc.strerror or exc}") from exc
    return [f"wrote {len(rows)} rows to {args.out}"]


def cmd_asymptote(args) -> List[str]:
    ch = load_channel(args.file)
    E = _energy(args.energy)
    cf = canonical_reduce(ch)
    try:
        value = asymptote(cf, E)
    except UnsupportedClassError as exc:
        raise CliError(EXIT_UNSUPPORTED, str(exc)) from exc
    return [
        f"{fmt(value)}",
        f"class: {cf.cls.value}",
        f"formula: {ASYMPTOTE_FORMULAS[cf.cls]}",
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausscap",
        description="Gaussian-encoding capacity bounds for one-mode Gaussian channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="report the equivalence class and canonical parameters")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bound", help="energy-constrained lower bound on the classical capacity")
    p.add_argument("file")
    p.add_argument("--energy", type=float, required=True, help="mean photon-number budget E (>= 1/2)")
    p.add_argument("--oracle-check", action="store_true", help="also run the brute-force oracle")
    p.add_argument("--numeric-force", action="store_true", help="skip the closed-form route")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="tabulate the bound over a range of energies as CSV")
    p.add_argument("file")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--log2", action="store_true", help="space energies uniformly in log2(E)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("asymptote", help="high-energy limit of the bound")
    p.add_argument("file")
    p.add_argument("--energy", type=float, required=True)
    p.set_defaults(func=cmd_asymptote)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lines = args.func(args)
    except CliError as exc:
        print(f"gausscap: error: {exc}", file=sys.stderr)
        return exc.code
    sys.stdout.write("".join(line + "\n" for line in lines))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
