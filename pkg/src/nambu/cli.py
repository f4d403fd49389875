"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 when an identity fails or
a domain operation is impossible (e.g. not decomposable), 2 for usage and
input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import io
from .battery import default_corpus_dir, run_battery
from .core import BracketStructure, conformal_check, rank_multivector_at
from .exterior import DifferentialForm, MultiVectorField, VectorField
from .identities import (
    EnumerationStrategy,
    NotApplicable,
    WeightsLambda,
    WeightsMu,
    check_casimir_integrability_at,
    check_fahi,
    check_fai,
    check_fi,
    check_gapi,
    check_gpi,
    check_involution_sn,
    check_mgpi,
    check_nested_integrability_at,
    check_pairwise_decomp_identity,
    check_scaled_fai,
    check_weighted_fai,
    check_weighted_gapi,
    check_weighted_gpi,
)
from .poly import Polynomial
from .structures import (
    NotDecomposable,
    cartesian_product,
    decompose_at,
    darboux_multivector,
    is_combed_at,
    mu_constraint_kernel,
    pre_comb_at,
    random_decomposable,
    random_multivector,
)
from .verdict import Verdict

IDENTITIES = ("fi", "fai", "fahi", "wfai", "sfai", "gpi", "gapi", "mgpi", "gapi2", "sn-involution",
              "wgpi", "wgapi", "nested-at", "casimir-at", "conformal")
STRUCTURE_ACTIONS = ("rank", "decompose", "precomb", "product", "mu-kernel", "make-darboux", "random")


class UsageError(Exception):
    """Bad arguments or inputs (exit code 2)."""


class DomainFailure(Exception):
    """A requested construction does not exist for this input (exit code 1)."""


@dataclass
class RunReport:
    """Everything a command did, serializable to JSON."""

    command: str
    structure: Optional[Dict[str, int]] = None
    results: List[Tuple[str, Verdict, float]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)
    exit_code: int = 0

    def add(self, name: str, verdict: Verdict, seconds: float) -> None:
        self.results.append((name, verdict, seconds))
        if not verdict.passed:
            self.exit_code = 1

    def to_json(self) -> dict:
        out = {"command": self.command, "exit_code": self.exit_code}
        if self.structure is not None:
            out["structure"] = self.structure
        if self.results:
            out["results"] = [{"checker": n, "verdict": v.to_json(), "seconds": round(t, 4)}
                              for n, v, t in self.results]
        if self.data:
            out["data"] = self.data
        if self.messages:
            out["messages"] = self.messages
        return out

    def text(self) -> str:
        lines = []
        if self.structure is not None:
            s = self.structure
            lines.append(f"structure: d={s['d']} n={s['n']} terms={s['terms']}")
        for name, v, t in self.results:
            lines.append(v.summary() + f"  [{t:.3f}s]")
            if v.details:
                for k, val in v.details.items():
                    lines.append(f"  {k}: {_show(val)}")
        lines.extend(self.messages)
        return "\n".join(lines)


def _show(v) -> str:
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    return str(v)


def _summary(pi: MultiVectorField) -> Dict[str, int]:
    return {"d": pi.dim, "n": pi.degree, "terms": len(pi)}


# argument helpers


def _load_structure(path: Optional[str]) -> BracketStructure:
    if not path:
        raise UsageError("this command needs --input")
    try:
        return BracketStructure(io.load_multivector(path))
    except FileNotFoundError as exc:
        raise UsageError(f"cannot read {path}") from exc


def _points(args, dim: int) -> List[tuple]:
    return [io.parse_point(p, dim) for p in (args.at or [])]


def _one_point(args, dim: int) -> tuple:
    pts = _points(args, dim)
    if len(pts) != 1:
        raise UsageError("give exactly one --at point")
    return pts[0]


def _poly_list(text: Optional[str], dim: int, what: str) -> List[Polynomial]:
    if not text:
        raise UsageError(f"missing {what}")
    try:
        return [Polynomial.parse(t, dim) for t in text.split(",")]
    except (ValueError, SyntaxError, IndexError) as exc:
        raise UsageError(f"bad {what}: {exc}") from exc


def _strategy(args, dim: int) -> Optional[EnumerationStrategy]:
    if args.strategy is None and args.max_product_degree is None and not args.tuples:
        return None
    mode = args.strategy or ("tuples" if args.tuples else "coords-products")
    tuples = ()
    if mode == "tuples":
        if not args.tuples:
            raise UsageError("--strategy tuples needs --tuples FILE")
        tuples = io.tuples_from_json(io.load_json(args.tuples), dim)
    return EnumerationStrategy(mode, args.max_product_degree or 2, tuples)


def _mu(args, s: BracketStructure, kind: str) -> WeightsMu:
    if not args.mu:
        raise UsageError("this identity needs --mu (a constant or a JSON file)")
    path = Path(args.mu)
    if not path.exists():
        try:
            return WeightsMu.constant(s.n, kind, io.rational_from_json(args.mu), s.dim)
        except io.FormatError as exc:
            raise UsageError(f"--mu is neither a file nor a rational: {args.mu}") from exc
    obj = io.load_json(path)
    table = {}
    for key, val in obj.get("table", {}).items():
        positions = frozenset(int(i) for i in key.split(","))
        table[positions] = io.poly_from_json(val, s.dim)
    return WeightsMu(s.n, kind, table, s.dim)


# commands


def cmd_check(args) -> RunReport:
    name = args.identity
    report = RunReport(f"check {name}")
    if name == "conformal":
        return _cmd_conformal(args, report)
    s = _load_structure(args.input)
    report.structure = _summary(s.pi)
    strategy = _strategy(args, s.dim)
    points = _points(args, s.dim)
    t0 = time.perf_counter()
    if name == "fi":
        v = check_fi(s, strategy)
    elif name == "fai":
        v = check_fai(s, strategy)
    elif name == "fahi":
        v = check_fahi(s, strategy)
    elif name == "wfai":
        weights = _poly_list(args.weights, s.dim, "--weights") if args.weights else None
        lam = WeightsLambda(tuple(weights)) if weights else WeightsLambda.constant([1] * s.n, s.dim)
        v = check_weighted_fai(s, lam, strategy, points)
    elif name == "sfai":
        scale = _poly_list(args.scale, s.dim, "--scale")[0] if args.scale else Polynomial.constant(2, s.dim)
        v = check_scaled_fai(s, scale, strategy)
    elif name == "gpi":
        v = check_gpi(s, strategy)
    elif name == "gapi":
        v = check_gapi(s, strategy)
    elif name == "mgpi":
        v = check_mgpi(s, strategy)
    elif name == "gapi2":
        if len(points) > 1:
            raise UsageError("gapi2 takes at most one --at point")
        v = check_pairwise_decomp_identity(s, points[0] if points else None)
    elif name == "sn-involution":
        v = check_involution_sn(s)
    elif name == "wgpi":
        v = check_weighted_gpi(s, _mu(args, s, "gpi"), strategy, points)
    elif name == "wgapi":
        v = check_weighted_gapi(s, _mu(args, s, "gapi"), strategy, points)
    elif name == "nested-at":
        v = check_nested_integrability_at(s, _one_point(args, s.dim), _poly_list(args.f, s.dim, "--f"),
                                          _poly_list(args.g, s.dim, "--g"))
    elif name == "casimir-at":
        try:
            v = check_casimir_integrability_at(s, _one_point(args, s.dim), _poly_list(args.f, s.dim, "--f"))
        except NotApplicable as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError(f"unknown identity {name!r}")
    report.add(name, v, time.perf_counter() - t0)
    return report


def _cmd_conformal(args, report: RunReport) -> RunReport:
    if not args.input or not args.vector:
        raise UsageError("conformal needs --input FORM.json and --vector FIELD.json")
    omega = io.load_field(args.input)
    x = io.load_field(args.vector)
    if not isinstance(omega, DifferentialForm):
        raise UsageError("--input must hold a differential form")
    if isinstance(x, MultiVectorField) and x.degree == 1:
        x = x.as_vector_field()
    if not isinstance(x, VectorField):
        raise UsageError("--vector must hold a vector field")
    weight = _poly_list(args.weight, omega.dim, "--weight")[0] if args.weight else Polynomial.zero(omega.dim)
    t0 = time.perf_counter()
    report.add("conformal", conformal_check(omega, x, weight), time.perf_counter() - t0)
    return report


def _write_structure(pi: MultiVectorField, args, report: RunReport) -> None:
    report.structure = _summary(pi)
    if args.output:
        io.dump_json(io.field_to_json(pi), args.output)
        report.messages.append(f"wrote {args.output}")
    else:
        report.data["multivector"] = io.field_to_json(pi)
        report.messages.append(str(pi))


def cmd_structure(args) -> RunReport:
    action = args.action
    report = RunReport(f"structure {action}")
    if action == "rank":
        s = _load_structure(args.input)
        report.structure = _summary(s.pi)
        pts = _points(args, s.dim) or [tuple([0] * s.dim)]
        ranks = []
        for p in pts:
            r = rank_multivector_at(s, p)
            ranks.append(r.to_json())
            report.messages.append(f"rank at ({', '.join(map(str, p))}): {r.rank}")
        report.data["ranks"] = ranks
    elif action == "decompose":
        s = _load_structure(args.input)
        report.structure = _summary(s.pi)
        p = _one_point(args, s.dim)
        try:
            factors = decompose_at(s, p)
        except NotDecomposable as exc:
            raise DomainFailure(str(exc)) from exc
        except ValueError as exc:
            raise DomainFailure(str(exc)) from exc
        report.data["factors"] = [[io.rational_to_json(c) for c in f.at(p)] for f in factors]
        for i, f in enumerate(factors, 1):
            report.messages.append(f"X{i} = {f}")
    elif action == "precomb":
        s = _load_structure(args.input)
        report.structure = _summary(s.pi)
        p = _one_point(args, s.dim)
        try:
            change = pre_comb_at(s, p)
        except ValueError as exc:
            raise DomainFailure(str(exc)) from exc
        ok = is_combed_at(s, p, change)
        report.data["change"] = change.to_json()
        report.data["verified"] = ok
        report.messages.append("new coordinates: " + ", ".join(f"u{i} = {u}" for i, u in
                                                              enumerate(change.new_coordinates(), 1)))
        report.messages.append(f"combed at p: {ok}")
        if not ok:
            report.exit_code = 1
    elif action == "product":
        if len(args.files) != 2:
            raise UsageError("product needs two structure files")
        a, b = (_load_structure(f) for f in args.files)
        try:
            prod = cartesian_product(a, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        _write_structure(prod.pi, args, report)
    elif action == "mu-kernel":
        blocks = [int(k) for k in args.blocks.split(",")] if args.blocks else None
        try:
            system, dim, basis = mu_constraint_kernel(args.n, blocks)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        report.data.update({"unknowns": system.labels(), "relations": len(system.equations),
                            "rank": system.rank(), "kernel_dimension": dim,
                            "kernel_basis": [[io.rational_to_json(c) for c in v] for v in basis]})
        report.messages.append(f"{len(system.equations)} relations on {len(system.unknowns)} unknowns")
        report.messages.append(f"kernel dimension {dim}")
    elif action == "make-darboux":
        if args.d is None or args.n is None or args.r is None:
            raise UsageError("make-darboux needs --d, --n and --r")
        try:
            pi = darboux_multivector(args.d, args.n, args.r)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        _write_structure(pi, args, report)
    elif action == "random":
        if args.d is None or args.n is None:
            raise UsageError("random needs --d and --n")
        seed = args.seed if args.seed is not None else 0
        try:
            if args.decomposable:
                pi, _ = random_decomposable(args.d, args.n, args.degree, seed)
            else:
                pi = random_multivector(args.d, args.n, args.degree, seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        _write_structure(pi, args, report)
    else:
        raise UsageError(f"unknown action {action!r}")
    return report


def cmd_battery(args) -> RunReport:
    directory = Path(args.corpus) if args.corpus else default_corpus_dir()
    report = RunReport(f"battery {directory}")
    try:
        result = run_battery(directory, generic=not args.skip_generic)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc
    report.data = result.to_json()
    for r in result.results:
        mark = "ok  " if r.ok else "FAIL"
        report.messages.append(f"{mark} {r.instance} {r.checker} expected={r.expected} observed={r.observed}")
    report.messages.extend(f"warning: {w}" for w in result.warnings)
    report.messages.append(f"{len(result.results)} checks, {len(result.failures)} unmet expectations")
    report.exit_code = result.exit_code
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nambu", description="Exact checks of Nambu bracket identities.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="structure JSON file")
    common.add_argument("-o", "--output", help="write the JSON report (check) or the produced structure")
    common.add_argument("--json", action="store_true", help="print a machine-readable report")
    common.add_argument("--at", action="append", metavar="x1,..,xd", help="rational point (repeatable)")
    common.add_argument("--seed", type=int)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="run one identity checker")
    check.add_argument("identity", choices=IDENTITIES)
    check.add_argument("--strategy", choices=("coords", "coords-repeat", "coords-products", "tuples"))
    check.add_argument("--max-product-degree", type=int)
    check.add_argument("--tuples", help="JSON list of entry tuples for --strategy tuples")
    check.add_argument("--weights", help="comma-separated lambda weights (polynomials)")
    check.add_argument("--mu", help="constant weight or JSON file {\"table\": {\"1,2\": \"1/2\", ...}}")
    check.add_argument("--scale", help="scale polynomial for sfai (default 2)")
    check.add_argument("--f", help="comma-separated polynomials")
    check.add_argument("--g", help="comma-separated polynomials")
    check.add_argument("--vector", help="vector field JSON (conformal)")
    check.add_argument("--weight", help="conformal weight polynomial")
    check.set_defaults(func=cmd_check)

    structure = sub.add_parser("structure", parents=[common], help="constructors and structure theory")
    structure.add_argument("action", choices=STRUCTURE_ACTIONS)
    structure.add_argument("files", nargs="*", help="input files (product)")
    structure.add_argument("--d", type=int)
    structure.add_argument("--n", type=int, default=None)
    structure.add_argument("--r", type=int)
    structure.add_argument("--degree", type=int, default=0, help="coefficient degree for random")
    structure.add_argument("--decomposable", action="store_true")
    structure.add_argument("--blocks", help="comma-separated relation blocks for mu-kernel")
    structure.set_defaults(func=cmd_structure)

    battery = sub.add_parser("battery", parents=[common], help="check a corpus against its manifest")
    battery.add_argument("corpus", nargs="?", help="corpus directory (default: the shipped corpus)")
    battery.add_argument("--skip-generic", action="store_true", help="skip the seeded generic count")
    battery.set_defaults(func=cmd_battery)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "structure" and args.action == "mu-kernel" and args.n is None:
        args.n = 3
    try:
        report = args.func(args)
    except (UsageError, io.FormatError) as exc:
        print(f"nambu: error: {exc}", file=sys.stderr)
        return 2
    except DomainFailure as exc:
        print(f"nambu: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"nambu: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "check" and args.output:
        io.dump_json(report.to_json(), args.output)
    print(json.dumps(report.to_json(), indent=1) if args.json else report.text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
