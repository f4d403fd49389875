"""The shipped instance corpus and the battery that checks it against its manifest.

A corpus directory holds one multivector JSON file per instance plus
``manifest.json``::

    {"instances": {"<name>": {"file": "<name>.json",
                              "description": "...",
                              "expect": {"<checker>": true | false, ...}}},
     "generic_plucker": {"d": 6, "n": 3, "seeds": [0, 100],
                         "point": "origin", "expected_false": k}}

Every expectation follows from a structural fact about the instance
(decomposability, involutivity of the factors, the parity of ``n``), and
``rationale`` records which.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Tuple

from . import io
from .core import BracketStructure
from .exterior import MultiVectorField, VectorField
from .identities import (
    WeightsLambda,
    check_fahi,
    check_fai,
    check_fi,
    check_gapi,
    check_gpi,
    check_involution_sn,
    check_mgpi,
    check_pairwise_decomp_identity,
    check_weighted_fai,
)
from .poly import variables
from .structures import darboux_multivector, det_bracket, plucker_decomposable_at, random_multivector, weinstein_split

MANIFEST = "manifest.json"


def _plucker_origin(s: BracketStructure) -> bool:
    return plucker_decomposable_at(s, [0] * s.dim)


def _wfai_ones(s: BracketStructure) -> bool:
    return check_weighted_fai(s, WeightsLambda.constant([1] * s.n, s.dim)).passed


# checker name -> structure -> passed
CHECKERS: Dict[str, Callable[[BracketStructure], bool]] = {
    "fi": lambda s: check_fi(s).passed,
    "fai": lambda s: check_fai(s).passed,
    "fahi": lambda s: check_fahi(s).passed,
    "gpi": lambda s: check_gpi(s).passed,
    "gapi": lambda s: check_gapi(s).passed,
    "mgpi": lambda s: check_mgpi(s).passed,
    "gapi2": lambda s: check_pairwise_decomp_identity(s).passed,
    "sn-involution": lambda s: check_involution_sn(s).passed,
    "wfai-ones": _wfai_ones,
    "plucker-origin": _plucker_origin,
}

_ALL = ("fi", "fai", "fahi", "gpi", "gapi", "mgpi", "gapi2", "sn-involution", "wfai-ones", "plucker-origin")


def _all(value: bool, **overrides) -> Dict[str, bool]:
    out = {k: value for k in _ALL}
    out.update({k.replace("_", "-"): v for k, v in overrides.items()})
    return out


def corpus_instances() -> Dict[str, Tuple[MultiVectorField, str, Dict[str, bool], str]]:
    """``name -> (multivector, description, expectations, rationale)``."""
    x3, x4, x7 = variables(3), variables(4), variables(7)
    e = lambda j, d, c=1: VectorField.coordinate(j, d, c)
    inst = {}
    inst["darboux_r1_d3"] = (
        darboux_multivector(3, 3, 1), "d1^d2^d3 in dimension 3", _all(True),
        "single Darboux block: decomposable with commuting factors",
    )
    inst["darboux_r1_d4"] = (
        darboux_multivector(4, 3, 1), "d1^d2^d3 in dimension 4", _all(True),
        "single Darboux block: decomposable with commuting factors",
    )
    inst["darboux_r2"] = (
        darboux_multivector(6, 3, 2), "d1^d2^d3 + d4^d5^d6",
        _all(False, fahi=True, sn_involution=True),
        "two Darboux blocks: not decomposable, so the algebraic identity and everything implying it fail; "
        "the hyper-identity holds on Darboux form; odd n makes the involution automatic",
    )
    inst["det_noninvolutive"] = (
        det_bracket([e(1, 4), e(2, 4), e(3, 4) + e(4, 4, x4[0])]), "d1 ^ d2 ^ (d3 + x1 d4)",
        _all(True, fi=False, mgpi=False),
        "decomposable, so every pointwise algebraic identity holds; [d1, d3 + x1 d4] = d4 leaves the factor span, "
        "so the fundamental identity and its nested consequence fail",
    )
    inst["det_involutive"] = (
        det_bracket([e(1, 3, x3[0]), e(2, 3), e(3, 3)]), "x1 d1^d2^d3", _all(True),
        "top-degree multivector: decomposable with an integrable factor span",
    )
    inst["linear_trivector"] = (
        MultiVectorField(4, 3, {(1, 2, 3): x4[3], (1, 2, 4): x4[2]}), "d1 ^ d2 ^ (x4 d3 + x3 d4)", _all(True),
        "decomposable; the factors d1, d2, x4 d3 + x3 d4 commute",
    )
    inst["weinstein_tail"] = (
        weinstein_split(7, 3, 1, MultiVectorField(7, 3, {(5, 6, 7): x7[3]})), "d1^d2^d3 + x4 d5^d6^d7",
        _all(False, fahi=True, sn_involution=True, plucker_origin=True),
        "Darboux block plus a tail vanishing at the origin: decomposable at the origin only, "
        "two blocks wherever x4 != 0; pointwise a rescaled Darboux form, so the hyper-identity holds",
    )
    inst["darboux_n4_d5"] = (
        darboux_multivector(5, 4, 1), "d1^d2^d3^d4 in dimension 5", _all(True),
        "single Darboux block of even degree",
    )
    inst["zero_d3"] = (
        MultiVectorField.zero(3, 3), "the zero trivector", _all(True),
        "every bracket vanishes; the zero multivector counts as decomposable",
    )
    inst["lie_poisson_so3"] = (
        MultiVectorField(3, 2, {(1, 2): x3[2], (2, 3): x3[0], (1, 3): -x3[1]}), "linear Poisson bivector of so(3)",
        _all(True, gapi2=False),
        "Poisson (Jacobi holds for a Lie algebra dual); for bivectors the pairwise contraction "
        "(i_dx1 pi) ^ (i_dx2 pi) equals pi^12 pi, so that test fails on every nonzero bivector",
    )
    inst["symplectic_d4"] = (
        darboux_multivector(4, 2, 2), "d1^d2 + d3^d4", _all(True, gapi2=False, plucker_origin=False),
        "constant symplectic bivector: Poisson, rank 4, not decomposable; the pairwise contraction "
        "test fails as on every nonzero bivector",
    )
    inst["bivector_nonpoisson"] = (
        MultiVectorField(4, 2, {(1, 2): 1, (3, 4): x4[0]}), "d1^d2 + x1 d3^d4",
        _all(False, fai=True, fahi=True, gapi=True, wfai_ones=True, plucker_origin=True),
        "Jacobi fails ({x2, {x3, x4}} = -1); the algebraic identities are trivial for n = 2 and the "
        "algebraic Poisson identity is trivial for even n; rank 4 wherever x1 != 0 but d1^d2 at the origin",
    )
    return inst


def generic_plucker_count(d: int = 6, n: int = 3, seeds: Tuple[int, int] = (0, 100)) -> int:
    """How many seeded generic constant multivectors fail the decomposability test."""
    fails = 0
    for seed in range(*seeds):
        s = BracketStructure(random_multivector(d, n, 0, seed))
        fails += not plucker_decomposable_at(s, [0] * d)
    return fails


def build_corpus(directory, expected_false: int | None = None) -> Path:
    """Write every instance and the manifest; the generic count is recomputed unless given."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"instances": {}}
    for name, (pi, desc, expect, why) in sorted(corpus_instances().items()):
        fname = f"{name}.json"
        io.dump_json(io.field_to_json(pi), out / fname)
        manifest["instances"][name] = {"file": fname, "description": desc, "expect": expect, "rationale": why}
    if expected_false is None:
        expected_false = generic_plucker_count()
    manifest["generic_plucker"] = {"d": 6, "n": 3, "seeds": [0, 100], "point": "origin",
                                   "expected_false": expected_false}
    io.dump_json(manifest, out / MANIFEST)
    return out


def default_corpus_dir() -> Path:
    return Path(str(resources.files("nambu") / "corpus"))


@dataclass(frozen=True)
class BatteryResult:
    instance: str
    checker: str
    expected: bool
    observed: bool
    seconds: float

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_json(self) -> dict:
        return {"instance": self.instance, "checker": self.checker, "expected": self.expected,
                "observed": self.observed, "ok": self.ok, "seconds": round(self.seconds, 4)}


@dataclass
class BatteryReport:
    results: List[BatteryResult] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def failures(self) -> List[BatteryResult]:
        return [r for r in self.results if not r.ok]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def to_json(self) -> dict:
        return {"checks": len(self.results), "failures": len(self.failures), "warnings": self.warnings,
                "results": [r.to_json() for r in self.results], "exit_code": self.exit_code}


def run_battery(directory, generic: bool = True) -> BatteryReport:
    """Run every ``(instance, checker, expected)`` triple; results sorted by instance then checker."""
    directory = Path(directory)
    path = directory / MANIFEST
    if not path.exists():
        raise FileNotFoundError(f"no {MANIFEST} in {directory}")
    manifest = io.load_json(path)
    report = BatteryReport()
    for name in sorted(manifest.get("instances", {})):
        entry = manifest["instances"][name]
        s = BracketStructure(io.load_multivector(directory / entry["file"]))
        for checker in sorted(entry.get("expect", {})):
            if checker not in CHECKERS:
                raise ValueError(f"{name}: unknown checker {checker!r} in manifest")
            t0 = time.perf_counter()
            observed = CHECKERS[checker](s)
            report.results.append(BatteryResult(name, checker, bool(entry["expect"][checker]), observed,
                                                time.perf_counter() - t0))
    gp = manifest.get("generic_plucker")
    if generic and gp:
        t0 = time.perf_counter()
        observed = generic_plucker_count(gp["d"], gp["n"], tuple(gp["seeds"]))
        ok = observed == gp["expected_false"]
        report.results.append(BatteryResult(f"generic_plucker[{observed}/{gp['expected_false']}]", "plucker-count",
                                            True, ok, time.perf_counter() - t0))
    if not report.results:
        report.warnings.append("0 checks: the manifest lists no expectations")
    return report
