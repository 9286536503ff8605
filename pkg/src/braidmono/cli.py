"""Command-line front end.

    braidmono propagate --input TABLE
    braidmono regenerate five-point-case1 --stage 3
    braidmono regenerate kpoint --k 4 --stage 3
    braidmono audit-f222 [--skip 14]
    braidmono verify product|hurwitz|invariance|forget-degree ...

DSL output goes to stdout (or --output); --json switches to a JSON report.
Every emitted factorization is re-parsed and compared factor by factor
before it is written.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .braid import equals, full_twist
from .data import ENV_VAR
from .engine import parse_table, propagate_table
from .factorization import Factorization
from .notation import parse_factorization, render
from .regeneration import RegenError, five_point_first_case, k_point_chain
from . import verify

SCHEMA = verify.SCHEMA

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...]
    output: str | None
    json: bool
    k: int | None = None
    stage: int | None = None
    depth: int = 6
    nodes: int = 100_000

    def __post_init__(self) -> None:
        if self.depth < 0 or self.nodes < 1:
            raise CliError("search budgets must be positive")


# ---------------------------------------------------------------------------
# output


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def round_trip(f: Factorization) -> str:
    """Render f and make sure the text parses back to the same factors."""
    text = render(f)
    g = parse_factorization(text)
    if len(g) != len(f) or any(not equals(a.braid, b.braid) for a, b in zip(f, g)):
        raise CliError("rendered text does not parse back to the same factorization")
    return text


def factorization_report(kind: str, f: Factorization, text: str) -> dict:
    perm = f.permutation()
    return {
        "schema": SCHEMA,
        "kind": kind,
        "strands": f.strands,
        "labels": list(f.labels.names) if f.labels else None,
        "factors": len(f),
        "degree": f.degree,
        "factor_degrees": [x.degree for x in f],
        "permutation_cycles": [list(c) for c in perm.cycles()],
        "dsl": text,
    }


def _write_factorization(kind: str, f: Factorization, cfg: RunConfig) -> int:
    text = round_trip(f)
    _emit(_dump(factorization_report(kind, f, text)) if cfg.json else text, cfg)
    return EXIT_OK


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _input(cfg: RunConfig, i: int = 0, what: str = "--input") -> str:
    if len(cfg.inputs) <= i:
        raise CliError(f"{what} is required")
    return cfg.inputs[i]


# ---------------------------------------------------------------------------
# commands


def cmd_propagate(cfg: RunConfig) -> int:
    f = propagate_table(parse_table(_read(_input(cfg))))
    return _write_factorization("propagate", f, cfg)


def cmd_five_point(cfg: RunConfig) -> int:
    stage = 3 if cfg.stage is None else cfg.stage
    if stage not in (1, 2, 3):
        raise CliError("five-point-case1 has stages 1, 2 and 3")
    f = tuple(five_point_first_case())[stage - 1]
    return _write_factorization("five-point-case1", f, cfg)


def cmd_kpoint(cfg: RunConfig) -> int:
    if cfg.k is None or cfg.k < 2:
        raise CliError("--k must be at least 2")
    stage = cfg.k - 1 if cfg.stage is None else cfg.stage
    if not 0 <= stage <= cfg.k - 1:
        raise CliError(f"--stage must lie in 0..{cfg.k - 1}")
    f = k_point_chain(cfg.k)[stage]
    return _write_factorization("kpoint", f, cfg)


def cmd_audit(cfg: RunConfig, skip: Sequence[int]) -> int:
    directory = cfg.inputs[0] if cfg.inputs else None
    try:
        data = verify.load_f222(directory, skip)
    except verify.FixtureError as e:
        if cfg.json:
            _emit(_dump({"schema": SCHEMA, "kind": "audit", "error": str(e),
                         "missing": list(e.missing), "passed": False}), cfg)
        raise CliError(str(e)) from None
    report = verify.full_audit(data)
    out = report.to_json()
    out["vertex_product"] = verify.vertex_product_check(data, 7).to_json() if 7 in data.local else None
    if cfg.json:
        _emit(_dump(out), cfg)
    else:
        lines = [f"{k}: {v}" for k, v in out["subtotals"].items()]
        lines.append(f"total: {report.total} (expected {report.expected_total})")
        lines.append("forgetting: " + " ".join(f"{k}={v}" for k, v in report.forgetting.items()))
        lines += [f"check {k}: {'pass' if v else 'FAIL'}" for k, v in report.checks.items()]
        _emit("\n".join(lines) + "\n", cfg)
    return EXIT_OK if report.passed else EXIT_FAIL


def _factorization(path: str) -> Factorization:
    return parse_factorization(_read(path), provenance=Path(path).name)


def cmd_verify_product(cfg: RunConfig) -> int:
    f = _factorization(_input(cfg))
    if len(cfg.inputs) > 1:
        expected = _factorization(cfg.inputs[1]).product()
    else:
        expected = full_twist(f.strands)
    res = verify.product_check(f, expected)
    out = {"schema": SCHEMA, "kind": "product", **res.to_json()}
    _emit(_dump(out) if cfg.json else f"equal: {res.equal}\ndegree delta: {res.degree_delta}\n"
          f"permutation equal: {res.permutation_equal}\n", cfg)
    return EXIT_OK if res.equal else EXIT_FAIL


def _search_output(kind: str, res: verify.HurwitzResult, cfg: RunConfig) -> int:
    out = {"schema": SCHEMA, "kind": kind, **res.to_json()}
    _emit(_dump(out) if cfg.json else f"{res.status} (depth {res.depth}, {res.nodes} nodes)\n", cfg)
    return EXIT_OK if res.equivalent else EXIT_FAIL


def cmd_verify_hurwitz(cfg: RunConfig) -> int:
    f = _factorization(_input(cfg))
    g = _factorization(_input(cfg, 1, "a second --input"))
    return _search_output("hurwitz", verify.hurwitz_equiv_bounded(f, g, cfg.depth, cfg.nodes), cfg)


def cmd_verify_invariance(cfg: RunConfig) -> int:
    f = _factorization(_input(cfg))
    h = _factorization(_input(cfg, 1, "a conjugator --input")).product()
    if h.strands != f.strands:
        raise CliError("the conjugator lives on a different fiber")
    return _search_output("invariance", verify.invariance_check(f, h, cfg.depth, cfg.nodes), cfg)


def cmd_verify_forget(cfg: RunConfig, pair: str) -> int:
    f = _factorization(_input(cfg))
    d = verify.forget_degree(f, pair)
    _emit(_dump({"schema": SCHEMA, "kind": "forget-degree", "pair": pair, "degree": d})
          if cfg.json else f"{d}\n", cfg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _common(p: argparse.ArgumentParser, inputs: bool = True) -> None:
    if inputs:
        p.add_argument("--input", action="append", default=[], help="input file (repeatable)")
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--json", action="store_true", help="emit a JSON report")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braidmono", description="Braid monodromy factorizations",
                                 epilog=f"{ENV_VAR} overrides the fixture directory.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", help="factorization of a singularity table")
    _common(p)

    p = sub.add_parser("regenerate", help="regeneration pipelines")
    rsub = p.add_subparsers(dest="pipeline", required=True)
    q = rsub.add_parser("five-point-case1", help="five lines through a point, first case")
    q.add_argument("--stage", type=int)
    _common(q, inputs=False)
    q = rsub.add_parser("kpoint", help="the (k+1)-point chain")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--stage", type=int)
    _common(q, inputs=False)

    p = sub.add_parser("audit-f222", help="degree and forgetting audit of the shipped surface")
    _common(p)
    p.add_argument("--skip", type=int, action="append", default=[], help="leave out a vertex")

    p = sub.add_parser("verify", help="checks on factorizations")
    vsub = p.add_subparsers(dest="check", required=True)
    q = vsub.add_parser("product", help="product against the full twist or a second --input")
    _common(q)
    for name in ("hurwitz", "invariance"):
        q = vsub.add_parser(name, help="bounded Hurwitz search" if name == "hurwitz"
                            else "invariance under the product of a second --input")
        _common(q)
        q.add_argument("--depth", type=int, default=6)
        q.add_argument("--nodes", type=int, default=100_000)
    q = vsub.add_parser("forget-degree", help="degree after forgetting all but a doubled pair")
    _common(q)
    q.add_argument("--pair", required=True)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=tuple(getattr(args, "input", ()) or ()),
            output=args.output,
            json=args.json,
            k=getattr(args, "k", None),
            stage=getattr(args, "stage", None),
            depth=getattr(args, "depth", 6),
            nodes=getattr(args, "nodes", 100_000),
        )
        if args.command == "propagate":
            return cmd_propagate(cfg)
        if args.command == "regenerate":
            return cmd_five_point(cfg) if args.pipeline == "five-point-case1" else cmd_kpoint(cfg)
        if args.command == "audit-f222":
            return cmd_audit(cfg, args.skip)
        check = args.check
        if check == "product":
            return cmd_verify_product(cfg)
        if check == "hurwitz":
            return cmd_verify_hurwitz(cfg)
        if check == "invariance":
            return cmd_verify_invariance(cfg)
        return cmd_verify_forget(cfg, args.pair)
    except (CliError, RegenError, ValueError) as e:
        print(f"braidmono: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
