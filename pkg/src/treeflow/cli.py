"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 verification
failure or oracle mismatch.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

from treeflow.certificate import certify, decompose_solution, format_solution, parse_solution, solution_to_json, verify_solution
from treeflow.instance import InstanceError, read_instance
from treeflow.oracle import GenParams, OracleTooLarge, brute_force_value, random_instance
from treeflow.solver import solve

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CHECK = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    """An input file exists but does not parse."""


@dataclass
class CliConfig:
    subcommand: str
    file: Optional[str] = None
    solfile: Optional[str] = None
    format: str = "text"
    certificate: bool = False
    decompose: bool = False
    n: int = 0
    terminals: int = 0
    max_cap: int = 0
    seed: int = 0
    output: Optional[str] = None
    sizes: list[int] = field(default_factory=list)
    oracle_check: int = 0
    threads: int = 1
    repeat: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None
    if not sizes or min(sizes) < 2:
        raise argparse.ArgumentTypeError("sizes must be integers >= 2")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treeflow", description="Maximum integral multiterminal flow on trees.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--certificate", action="store_true", help="append the cut-system")
    p.add_argument("--decompose", action="store_true", help="append the pair decomposition")

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("file")
    p.add_argument("solfile")

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--terminals", type=int, required=True)
    p.add_argument("--max-cap", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")

    p = sub.add_parser("bench", help="time the solver on generated instances")
    p.add_argument("--sizes", type=_sizes, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--oracle-check", type=int, default=0, metavar="N")
    p.add_argument("--threads", type=int, default=1, metavar="T")
    p.add_argument("--repeat", type=int, default=1, metavar="R", help="report the median of R runs")
    return parser


def parse_config(argv: Sequence[str]) -> CliConfig:
    ns = build_parser().parse_args(list(argv))
    cfg = CliConfig(**{k: v for k, v in vars(ns).items() if k in CliConfig.__dataclass_fields__})
    if cfg.subcommand == "gen" and cfg.output is None:
        cfg.output = "-"
    for name in ("threads", "repeat"):
        if getattr(cfg, name) < 1:
            raise UsageError(f"--{name} must be at least 1")
    if cfg.oracle_check < 0:
        raise UsageError("--oracle-check must be nonnegative")
    return cfg


def _load(path: str):
    try:
        return read_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except InstanceError as exc:
        raise InputError(f"{path}: {exc}") from None


def _cmd_solve(cfg: CliConfig, out: TextIO) -> int:
    inst = _load(cfg.file)
    sol = solve(inst)
    cert = certify(sol) if cfg.certificate else None
    dec = decompose_solution(sol) if cfg.decompose else None
    if cfg.format == "json":
        out.write(solution_to_json(sol, cert, dec) + "\n")
    else:
        out.write(format_solution(sol, cert, dec))
    return EXIT_OK


def _cmd_verify(cfg: CliConfig, out: TextIO) -> int:
    inst = _load(cfg.file)
    try:
        with open(cfg.solfile) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.solfile}: {exc.strerror}") from None
    try:
        claimed = parse_solution(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{cfg.solfile}: {exc}") from None
    report = verify_solution(inst, claimed)
    out.write(str(report) + "\n")
    return EXIT_OK if report.passed else EXIT_CHECK


def _cmd_gen(cfg: CliConfig, out: TextIO) -> int:
    if cfg.terminals < 2 or cfg.terminals > cfg.n:
        raise UsageError("--terminals must lie in [2, n]")
    try:
        params = GenParams(cfg.n, max_cap=cfg.max_cap, seed=cfg.seed, terminals=cfg.terminals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = random_instance(params).to_text()
    if cfg.output == "-":
        out.write(text)
    else:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    return EXIT_OK


def _time_solve(n: int, seed: int, repeat: int) -> float:
    inst = random_instance(GenParams(n, seed=seed))
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        solve(inst)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _cmd_bench(cfg: CliConfig, out: TextIO) -> int:
    out.write(f"{'n':>10} {'seconds':>10} {'ns/edge':>10}\n")
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        futures = [pool.submit(_time_solve, n, cfg.seed, cfg.repeat) for n in cfg.sizes]
        for n, fut in zip(cfg.sizes, futures):
            secs = fut.result()
            out.write(f"{n:>10} {secs:>10.4f} {secs / (n - 1) * 1e9:>10.1f}\n")
            out.flush()
    if not cfg.oracle_check:
        return EXIT_OK
    mismatches = skipped = 0
    for i in range(cfg.oracle_check):
        params = GenParams(2 + i % 11, terminal_fraction=0.5, max_cap=4, seed=cfg.seed + i)
        inst = random_instance(params)
        try:
            want, _ = brute_force_value(inst)
        except OracleTooLarge:
            skipped += 1
            continue
        got = solve(inst).alpha
        if got != want:
            mismatches += 1
            out.write(f"oracle mismatch: n={params.n} seed={params.seed} solver={got} oracle={want}\n")
    checked = cfg.oracle_check - skipped
    out.write(f"oracle check: {checked - mismatches}/{checked} agree ({skipped} skipped)\n")
    return EXIT_CHECK if mismatches else EXIT_OK


COMMANDS = {"solve": _cmd_solve, "verify": _cmd_verify, "gen": _cmd_gen, "bench": _cmd_bench}


def cli_main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.subcommand](cfg, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE


def main() -> None:
    sys.exit(cli_main())
