"""
permadd command line.

Every command builds a :class:`Report`; reports print as sorted, indented
JSON on stdout (or a coloured summary with ``--pretty``) and can be exported
with ``--export``. Logs go to stderr and the runtime log file only.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .errors import ParameterError, PermAddError
from .gf import euler_totient, mult_order
from .group import parse_group
from .ideal import (
    GroupCode,
    has_zero_coordinate_sum,
    ideal_from_T,
    is_even_weight_ideal,
    max_order_support,
    simplex_support,
)
from .multicast import MulticastInstance, build_butterfly, build_combination, solve_over_ideal
from .network import (
    Network,
    NetworkCode,
    code_degree,
    execute,
    solution_counterexample,
)
from .spectral import Decomposition, decompose, k_delta, minimal_ideal_generator, sun_bound

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2


@dataclass
class Report:
    command: dict
    result: dict
    inputs: dict[str, str] = field(default_factory=dict)
    timing: float | None = None
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "result": self.result}
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 6)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------
def parse_support(text: str | Sequence[int]) -> list[int]:
    if not isinstance(text, str):
        return sorted({int(k) for k in text})
    text = text.strip()
    if not text:
        return []
    try:
        return sorted({int(part) for part in text.split(",")})
    except ValueError as e:
        raise ParameterError(f"support must be a comma-separated list of component indices, got {text!r}") from e


def file_digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def load_json(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ParameterError(f"no such file: {path}") from e
    except json.JSONDecodeError as e:
        raise ParameterError(f"{path} is not valid JSON: {e}") from e


def write_json(path: Path, data: Any) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _component_summary(d: Decomposition, k: int) -> dict:
    return {**d.component(k).to_dict(), "idempotent": minimal_ideal_generator(d, k).to_list()}


def _code_summary(code: GroupCode) -> dict:
    ann = code.annihilator
    summary = {
        "support": None if code.support is None else sorted(code.support),
        "dimension": code.dimension,
        "rate": code.rate_label,
        "annihilator_dimension": ann.dimension,
        "annihilator_covering_radius": code.degree_bound,
        "degree": code.degree_bound,
        "zero_coordinate_sum": has_zero_coordinate_sum(code),
        "basis": [code.algebra.field.vector_to_hex(row) for row in code.code.generator],
        "annihilator_basis": [code.algebra.field.vector_to_hex(row) for row in ann.code.generator],
    }
    if code.algebra.q == 2:
        summary["even_weight"] = is_even_weight_ideal(code)
    return summary


# ---------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------
def cmd_decompose(group_spec: str, q: int) -> Report:
    group = parse_group(group_spec)
    d = decompose(group, q)
    result = {
        "group": group.label,
        "q": q,
        "splitting_field": d.splitting.to_dict(),
        "omega": d.splitting.to_hex(d.omega),
        "t": d.t,
        "component_sizes": list(d.sizes),
        "dimensions": list(d.dimensions),
        "components": [_component_summary(d, k) for k in range(1, d.t + 1)],
    }
    return Report({"name": "algebra decompose", "group": group.label, "q": q}, result)


def cmd_analyze(group_spec: str, q: int, support) -> Report:
    group = parse_group(group_spec)
    d = decompose(group, q)
    T = parse_support(support)
    code = ideal_from_T(d, T)
    result = {
        "group": group.label,
        "q": q,
        "representatives": {str(k): str(d.component(k).representative) for k in T},
        **_code_summary(code),
    }
    return Report({"name": "code analyze", "group": group.label, "q": q, "support": T}, result)


# (n, label, support) where support None means the max-order ideal
TABLE_ROWS = (
    (15, "max-order ideal", None),
    (15, "two-class ideal", (2, 3)),
    (15, "simplex ideal", "simplex"),
    (7, "max-order ideal", None),
    (7, "simplex ideal", "simplex"),
)


def table1_rows() -> list[dict]:
    rows = []
    for n, label, spec in TABLE_ROWS:
        d = decompose(parse_group(f"C{n}"), 2)
        if spec is None:
            T = max_order_support(d)
        elif spec == "simplex":
            T = simplex_support(d)
        else:
            T = frozenset(spec)
        code = ideal_from_T(d, T)
        rows.append(
            {
                "n": n,
                "construction": label,
                "support": sorted(T),
                "degree": code.degree_bound,
                "rate": code.rate_label,
                "sinks": min(d.component(k).field_size for k in T),
            }
        )
    return rows


def cmd_table1() -> Report:
    prior = [
        {
            "n": n,
            "delta": 1,
            "k_delta": k_delta(n, 1),
            "l0": mult_order(2, n),
            "phi": euler_totient(n),
            "sinks": sun_bound(n, 1),
        }
        for n in (15, 7)
    ]
    return Report({"name": "table1"}, {"rows": table1_rows(), "prior_bounded_degree": prior})


def _load_network(path: Path) -> Network:
    return Network.from_dict(load_json(path))


def cmd_solve(network_path: Path, group_spec: str, q: int, support, truncate: bool = False, out: Path | None = None) -> Report:
    net = _load_network(network_path)
    instance = MulticastInstance.from_network(net)
    d = decompose(parse_group(group_spec), q)
    T = parse_support(support)
    code = ideal_from_T(d, T)

    solved = solve_over_ideal(instance, code, truncate=truncate)
    verified = solution_counterexample(net, solved) is None
    result = {
        "rate": solved.context.rate_label,
        "degree": code_degree(solved),
        "degree_bound": code.degree_bound,
        "verified": verified,
        "sinks": instance.n_rx,
        "code": solved.to_dict(),
    }
    if out is not None:
        write_json(out, solved.to_dict())
    command = {"name": "solve", "group": d.group.label, "q": q, "support": T, "truncate": truncate}
    return Report(command, result, {"network": file_digest(network_path)}, exit_code=EXIT_OK if verified else EXIT_FALSE)


def cmd_verify(network_path: Path, code_path: Path) -> Report:
    net = _load_network(network_path)
    code = NetworkCode.from_dict(net, load_json(code_path))
    failure = solution_counterexample(net, code)
    result = {
        "verified": failure is None,
        "counterexample": None if failure is None else failure.to_dict(),
        "rate": code.context.rate_label,
    }
    inputs = {"network": file_digest(network_path), "code": file_digest(code_path)}
    return Report({"name": "verify"}, result, inputs, exit_code=EXIT_OK if failure is None else EXIT_FALSE)


def cmd_run(network_path: Path, code_path: Path, messages_path: Path | None = None, seed: int | None = None) -> Report:
    net = _load_network(network_path)
    code = NetworkCode.from_dict(net, load_json(code_path))
    ctx = code.context
    inputs = {"network": file_digest(network_path), "code": file_digest(code_path)}

    if messages_path is not None:
        raw = load_json(messages_path)
        raw = raw.get("messages", raw)
        try:
            messages = {m.id: ctx.message_from_json(raw[m.id]) for m in net.messages}
        except KeyError as e:
            raise ParameterError(f"messages file lacks message {e}") from e
        inputs["messages"] = file_digest(messages_path)
    elif seed is not None:
        rng = np.random.default_rng(seed)
        messages = {m.id: ctx.random_message(rng) for m in net.messages}
    else:
        raise ParameterError("run needs --messages or an explicit --seed")

    trace = execute(net, code, messages)
    result = {
        "messages": {mid: ctx.message_to_json(z) for mid, z in sorted(messages.items())},
        "rate": ctx.rate_label,
        **trace.to_dict(),
    }
    return Report({"name": "run", "seed": seed}, result, inputs)


def cmd_gen(kind: str, N: int | None = None, h: int | None = None, out: Path | None = None) -> Report:
    if kind == "butterfly":
        instance = build_butterfly()
    elif kind == "combination":
        if N is None or h is None:
            raise ParameterError("combination needs --N and --h")
        instance = build_combination(N, h)
    else:
        raise ParameterError(f"unknown generator {kind!r}")
    data = instance.network.to_dict()
    if out is not None:
        write_json(out, data)
    result = {"sinks": instance.n_rx, "messages": instance.h, "network": data}
    return Report({"name": f"gen {kind}", "N": N, "h": h}, result)


# ---------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permadd", description="Permute-and-add network codes from group algebras")
    out = parser.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="machine-readable JSON report (default)")
    out.add_argument("--pretty", action="store_true", help="coloured human-readable summary")
    parser.add_argument("--theme", default="terminal", help="colour theme for --pretty")
    parser.add_argument("--seed", type=int, default=None, help="seed for commands that draw random messages")
    parser.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    parser.add_argument("--export", type=Path, default=None, help="also write the report (.json .csv .txt .html .md)")
    sub = parser.add_subparsers(dest="command", required=True)

    algebra = sub.add_parser("algebra", help="group algebra tools")
    algebra_sub = algebra.add_subparsers(dest="action", required=True)
    dec = algebra_sub.add_parser("decompose", help="spectral decomposition of F_q[G]")
    dec.add_argument("--group", required=True)
    dec.add_argument("--q", type=int, default=2)

    code = sub.add_parser("code", help="group code tools")
    code_sub = code.add_subparsers(dest="action", required=True)
    analyze = code_sub.add_parser("analyze", help="rate, annihilator and degree of an ideal")
    analyze.add_argument("--group", required=True)
    analyze.add_argument("--q", type=int, default=2)
    analyze.add_argument("--support", required=True)

    sub.add_parser("table1", help="recompute the circular-shift comparison table")

    solve = sub.add_parser("solve", help="construct a permute-and-add code for a multicast network")
    solve.add_argument("--network", type=Path, required=True)
    solve.add_argument("--group", required=True)
    solve.add_argument("--q", type=int, default=2)
    solve.add_argument("--support", required=True)
    solve.add_argument("--truncate", action="store_true")
    solve.add_argument("--out", type=Path, default=None, help="write the network code JSON here")

    verify = sub.add_parser("verify", help="check that a network code is a solution")
    verify.add_argument("--network", type=Path, required=True)
    verify.add_argument("--code", type=Path, required=True)

    run = sub.add_parser("run", help="execute a network code on messages")
    run.add_argument("--network", type=Path, required=True)
    run.add_argument("--code", type=Path, required=True)
    run.add_argument("--messages", type=Path, default=None)

    gen = sub.add_parser("gen", help="generate standard networks")
    gen.add_argument("kind", choices=["butterfly", "combination"])
    gen.add_argument("--N", type=int, default=None)
    gen.add_argument("--h", type=int, default=None)
    gen.add_argument("--out", type=Path, default=None)
    return parser


def dispatch(args: argparse.Namespace) -> Report:
    handlers: dict[tuple, Callable[[], Report]] = {
        ("algebra", "decompose"): lambda: cmd_decompose(args.group, args.q),
        ("code", "analyze"): lambda: cmd_analyze(args.group, args.q, args.support),
        ("table1", None): cmd_table1,
        ("solve", None): lambda: cmd_solve(args.network, args.group, args.q, args.support, args.truncate, args.out),
        ("verify", None): lambda: cmd_verify(args.network, args.code),
        ("run", None): lambda: cmd_run(args.network, args.code, args.messages, args.seed),
        ("gen", None): lambda: cmd_gen(args.kind, args.N, args.h, args.out),
    }
    return handlers[(args.command, getattr(args, "action", None))]()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    started = time.perf_counter()
    try:
        report = dispatch(args)
    except PermAddError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"permadd: error: {e}", file=sys.stderr)
        return e.exit_code
    if args.timing:
        report.timing = time.perf_counter() - started

    if args.pretty:
        from .theme_manager import ThemeManager

        print(ThemeManager.render_report(report.to_dict(), args.theme))
    else:
        print(report.to_json())

    if args.export is not None:
        from .export_manager import ExportManager

        ExportManager().export(args.export, report.to_dict())
    return report.exit_code
