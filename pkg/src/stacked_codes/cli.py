"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 budget exceeded.
Every report starts with the resolved configuration so a run can be repeated.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .distance import DEFAULT_BUDGET, STRATEGIES, TYPES, DistanceQuery, min_weight_logical
from .errors import BudgetExceeded, ProtocolError
from .export import dual_lattice_dot, lattice_ascii, lattice_dot, lattice_svg, layout_svg, write_code_file
from .lattice import build_hex_color_code, check_distance
from .protocol import parse_error_spec, run_stabilizer_protocol, run_statevector_protocol
from .stacked import build_stacked_code
from .statevector import MAX_QUBITS
from .verify import run_verification

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

EXPORT_FORMATS = ("dot", "svg", "ascii", "json")
EXPORT_TARGETS = ("lattice", "dual", "layout")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    d: int
    seed: int | None = None
    w_max: int | None = None
    strategy: str | None = None
    pauli_type: str | None = None
    target: str | None = None
    error: str | None = None
    runs: int | None = None
    t_mode: str | None = None
    budget: int | None = None
    out: str | None = None
    export_format: str | None = None
    report: str = "text"


def _emit(config: RunConfig, body: dict, lines: list[str], stream) -> None:
    if config.report == "json":
        stream.write(json.dumps({"config": asdict(config), **body}, indent=2, default=str) + "\n")
        return
    cfg = " ".join(f"{k}={v}" for k, v in asdict(config).items() if v is not None)
    stream.write(f"# {cfg}\n")
    for line in lines:
        stream.write(line + "\n")


def cmd_build(config: RunConfig, stream) -> int:
    stacked = build_stacked_code(config.d)
    out = config.out or f"code_d{config.d}.json"
    write_code_file(out, stacked.code2d, stacked)
    body = {"path": out, "n": stacked.n2d, "stacked_n": stacked.total_n}
    _emit(config, body, [f"wrote {out}: n={stacked.n2d}, stacked n={stacked.total_n}"], stream)
    return EXIT_OK


def cmd_verify(config: RunConfig, stream) -> int:
    rep = run_verification(config.d, t_mode=config.t_mode, budget=config.budget, seed=config.seed)
    lines = []
    for c in rep.checks:
        line = f"{c.status:4}  {c.name:15} {c.anchor}: {c.detail} ({c.elapsed:.3f}s)"
        if c.witness:
            line += f"\n      witness: {c.witness}"
        lines.append(line)
    lines.append("all checks pass" if rep.ok else "verification FAILED")
    _emit(config, {"ok": rep.ok, "checks": [c.as_dict() for c in rep.checks]}, lines, stream)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_distance(config: RunConfig, stream) -> int:
    if config.target == "2d":
        code = build_hex_color_code(config.d)
    else:
        code = build_stacked_code(config.d)
    q = DistanceQuery(code, config.pauli_type, config.w_max, config.strategy, config.seed, budget=config.budget)
    r = min_weight_logical(q)
    lines = [r.claim + (" (complete)" if r.complete else "")]
    if r.witness is not None:
        lines.append(f"witness: {r.witness}")
    lines.append(f"{r.nodes} nodes, {r.elapsed:.3f}s")
    _emit(config, r.as_dict(), lines, stream)
    return EXIT_OK


def cmd_protocol(config: RunConfig, stream) -> int:
    stacked = build_stacked_code(config.d)
    error = parse_error_spec(config.error, stacked.total_n)
    use_sv = stacked.total_n <= MAX_QUBITS
    results = []
    ok = True
    for i in range(config.runs):
        seed = config.seed + i
        if use_sv:
            r = run_statevector_protocol(stacked, seed, error)
            good = r.restored and r.syndrome_match and r.fidelity >= 1 - 1e-10
        else:
            r = run_stabilizer_protocol(stacked, seed, error)
            good = r.restored and r.syndrome_match
        ok &= good
        results.append(
            {
                "seed": seed,
                "fidelity": r.fidelity,
                "frame": r.frame,
                "gate": r.gate,
                "syndrome_match": r.syndrome_match,
                "restored": r.restored,
                "corrected": r.restored and r.syndrome_match,
                "ok": good,
            }
        )
    engine = "state vector" if use_sv else "stabilizer engine (Pauli errors only)"
    lines = [f"engine: {engine}"]
    for res in results:
        fid = "n/a" if res["fidelity"] is None else f"{res['fidelity']:.12f}"
        lines.append(
            f"seed {res['seed']}: gate {res['gate']}, frame {res['frame']}, fidelity {fid}, "
            f"syndrome {'match' if res['syndrome_match'] else 'MISMATCH'}, "
            f"{'corrected' if res['corrected'] else 'NOT corrected'}"
        )
    _emit(config, {"engine": engine, "ok": ok, "runs": results}, lines, stream)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_export(config: RunConfig, stream) -> int:
    stacked = build_stacked_code(config.d)
    code = stacked.code2d
    fmt, target = config.export_format, config.target
    if fmt == "json":
        text = None
    elif fmt == "dot":
        if target == "layout":
            raise UsageError("the unfolded layout is exported as svg")
        text = lattice_dot(code) if target == "lattice" else dual_lattice_dot(stacked)
    elif fmt == "svg":
        if target == "dual":
            raise UsageError("the dual lattice is exported as dot")
        text = lattice_svg(code) if target == "lattice" else layout_svg(stacked)
    else:
        if target != "lattice":
            raise UsageError("ascii export draws the 2D lattice only")
        text = lattice_ascii(code)
    out = config.out
    if fmt == "json":
        out = out or f"code_d{config.d}.json"
        write_code_file(out, code, stacked)
    elif out:
        Path(out).write_text(text)
    else:
        stream.write(text)
        return EXIT_OK
    _emit(config, {"path": out}, [f"wrote {out}"], stream)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "distance": cmd_distance,
    "protocol": cmd_protocol,
    "export": cmd_export,
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stacked-codes", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, required=True, help="odd code distance >= 3")
    common.add_argument("--report", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="write the code file")
    p.add_argument("--out")

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-mode", choices=("auto", "exhaustive", "structural"), default="auto")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)

    p = sub.add_parser("distance", parents=[common], help="minimum-weight logical search")
    p.add_argument("--wmax", dest="w_max", type=_positive, default=None, help="default d-1")
    p.add_argument("--strategy", choices=STRATEGIES, default="pruned")
    p.add_argument("--type", dest="pauli_type", choices=TYPES, default="any")
    p.add_argument("--target", choices=("stacked", "2d"), default="stacked")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)

    p = sub.add_parser("protocol", parents=[common], help="switch up, apply T, switch down")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--error", help='Pauli error after the rotation, e.g. "Z@3" or "Z@3,X@10"')
    p.add_argument("--runs", type=_positive, default=1)

    p = sub.add_parser("export", parents=[common], help="write DOT, SVG, ASCII or JSON")
    p.add_argument("--format", dest="export_format", choices=EXPORT_FORMATS, default="dot")
    p.add_argument("--target", choices=EXPORT_TARGETS, default="lattice")
    p.add_argument("--out")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    try:
        check_distance(args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    config = RunConfig(**fields)
    if config.command == "distance" and config.w_max is None:
        config.w_max = config.d - 1
    return config


def main(argv: list[str] | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        config = resolve_config(args)
        return COMMANDS[config.command](config, stream)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except ProtocolError as exc:
        sys.stderr.write(f"protocol failure: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_USAGE
