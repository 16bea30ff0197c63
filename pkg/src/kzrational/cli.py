"""Command-line entry point: ``kzrational {build,verify,gate,consistency}``.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .builder import ConstructionError, build_fundamental, rho_plus_fundamental
from .documents import SCHEMA, DocumentError, dumps, parse_solution_document, solution_document
from .linalg import Matrix
from .model import InvalidSystemError, KZSystem, parse_system
from .rational_core import parse_rational
from .verifier import consistency_report, rationality_gate, verify_ode

EXIT_OK, EXIT_FAILED, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input_path: str | None = None
    output_path: str | None = None
    n: int | None = None
    points: list[str] | None = None
    rho: int | None = None
    m1: int | None = None
    m2: int | None = None
    format: str = "json"

    def validate(self):
        if self.command == "build":
            if self.input_path is None and (self.n is None or self.points is None):
                raise UsageError("build needs --n and --points, or --input")
            if self.input_path is not None and (self.n is not None or self.points is not None):
                raise UsageError("give either --input or --n/--points, not both")
        elif self.command == "verify":
            if self.input_path is None:
                raise UsageError("verify needs --input")
        elif self.command == "gate":
            if self.m1 is None or self.m2 is None:
                raise UsageError("gate needs --m1 and --m2")
        elif self.command == "consistency":
            if self.n is None:
                raise UsageError("consistency needs --n")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kzrational",
        description="Exact rational solutions of the KZ system for S_n at rho = +-1.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", dest="output_path", help="write here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")

    b = sub.add_parser("build", help="construct and verify a fundamental solution")
    b.add_argument("--n", type=int)
    b.add_argument("--points", help='comma-separated "p/q" values, e.g. 0,1/2,3')
    b.add_argument("--rho", type=int, default=None, choices=(-1, 1))
    b.add_argument("--input", dest="input_path", help='JSON {"n", "points", "rho"}')
    common(b)

    v = sub.add_parser("verify", help="check a solution document")
    v.add_argument("--input", dest="input_path")
    common(v)

    g = sub.add_parser("gate", help="integrality gate for m1 P_1 + m2 P_2 (n = 3)")
    g.add_argument("--m1", type=int)
    g.add_argument("--m2", type=int)
    common(g)

    c = sub.add_parser("consistency", help="check the transposition commutation relations")
    c.add_argument("--n", type=int)
    common(c)
    return ap


def _config(argv) -> CliConfig:
    args = _parser().parse_args(argv)
    points = None
    if getattr(args, "points", None) is not None:
        points = [p for p in args.points.split(",")]
    return CliConfig(
        command=args.command,
        input_path=getattr(args, "input_path", None),
        output_path=args.output_path,
        n=getattr(args, "n", None),
        points=points,
        rho=getattr(args, "rho", None),
        m1=getattr(args, "m1", None),
        m2=getattr(args, "m2", None),
        format=args.format,
    )


def _emit(text: str, config: CliConfig):
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read_input(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _system(config: CliConfig) -> KZSystem:
    if config.input_path is not None:
        kz = parse_system(_read_input(config.input_path))
        if config.rho is not None:
            kz = kz.with_rho(config.rho)
        return kz
    try:
        points = tuple(parse_rational(p) for p in config.points)
    except ValueError as exc:
        raise InvalidSystemError(str(exc)) from None
    return KZSystem(config.n, points, -1 if config.rho is None else config.rho)


def _matrix_text(m: Matrix) -> str:
    lines = []
    for i in range(m.nrows):
        for j in range(m.ncols):
            lines.append(f"W[{i + 1},{j + 1}] = {m[i, j].to_text()}")
    return "\n".join(lines) + "\n"


def cmd_build(config: CliConfig) -> int:
    kz = _system(config)
    if kz.rho == -1:
        sol = build_fundamental(kz)
        w = sol.matrix()
        doc = solution_document(sol)
    else:
        w = rho_plus_fundamental(kz)
        doc = solution_document(w, kz)
    report = verify_ode(kz, w)
    if not report.ok:
        print("error: constructed solution failed verification; nothing written", file=sys.stderr)
        return EXIT_INTERNAL
    doc["verified"] = True
    if config.format == "json":
        _emit(dumps(doc), config)
    else:
        head = f"fundamental solution, n={kz.n}, rho={kz.rho:+d}, poles at {', '.join(doc['points'])}\n"
        _emit(head + _matrix_text(w), config)
    return EXIT_OK


def cmd_verify(config: CliConfig) -> int:
    text = _read_input(config.input_path)
    kz, w = parse_solution_document(text)
    report = verify_ode(kz, w)
    out = {"schema": SCHEMA, "kind": "verification_report", "ok": report.ok, **report.to_json()}
    if config.format == "json":
        _emit(dumps(out), config)
    else:
        lines = [
            f"ode_residual_zero: {report.ode_residual_zero}",
            f"det_nonzero: {report.det_nonzero}",
            f"pole_orders_ok: {report.pole_orders_ok}",
            f"moments_ok: {report.moments_ok}",
        ]
        for d in report.details:
            lines.append(f"  {d['check']}: {d}")
        _emit("\n".join(lines) + "\n", config)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_gate(config: CliConfig) -> int:
    v = rationality_gate(config.m1, config.m2)
    if config.format == "json":
        _emit(dumps({"schema": SCHEMA, "kind": "gate_verdict", **v.to_json()}), config)
    else:
        _emit(f"m1={v.m1} m2={v.m2} lambda^2={v.lambda_squared}: {v.verdict}\n", config)
    return EXIT_OK


def cmd_consistency(config: CliConfig) -> int:
    if config.n < 3:
        raise InvalidSystemError(f"n must be at least 3 (got {config.n})")
    rep = consistency_report(config.n)
    if config.format == "json":
        _emit(dumps({"schema": SCHEMA, "kind": "consistency_report", **rep}), config)
    else:
        c = rep["checked"]
        _emit(
            f"n={rep['n']}: consistent={rep['consistent']} "
            f"(checked {c['symmetry']} pairs, {c['triple']} triples, {c['disjoint']} quadruples)\n",
            config,
        )
    return EXIT_OK if rep["consistent"] else EXIT_FAILED


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "gate": cmd_gate,
    "consistency": cmd_consistency,
}


def main(argv=None) -> int:
    config = _config(argv)
    try:
        config.validate()
        return COMMANDS[config.command](config)
    except (UsageError, InvalidSystemError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConstructionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
