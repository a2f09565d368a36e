"""Criteria battery, family declarations and report rendering."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import criteria as crit
from .bits import BitIndex
from .criteria import CriterionResult
from .decompose import (
    SeparableDecomposition,
    VerificationResult,
    mu_decomposition,
    product_decomposition,
    spin_norm_decomposition,
    verify_decomposition,
    werner_decomposition,
)
from .errors import ArgumentError, NotCertifiableError
from .families import (
    DiagonalFamilySpec,
    ProductSpec,
    SharpnessSpec,
    WernerSpec,
    diagonal_family,
    ghz_projector,
    mu_spec,
    mu_state,
    parse_sign,
    product_density,
    sharpness_state,
    sign_str,
    werner,
    werner_threshold,
)
from .linalg import DensityMatrix, proper_subsets

CERTIFIED = "fully-separable (certified)"
WITNESSED = "not-fully-separable (witnessed)"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {CERTIFIED: 0, WITNESSED: 1, INCONCLUSIVE: 2}

FAMILIES = ("ghz", "werner", "diagonal", "sharpness", "mu", "product")

# Peres subsets grow as 2**n; above this only single-qubit cuts run by default.
EXHAUSTIVE_PERES_MAX_N = 6


def fmt(x: float) -> str:
    """17 significant digits; enough to round-trip a double."""
    return format(float(x) + 0.0, ".17g")


def show(x: float) -> str:
    """Shortest round-tripping form, for human-readable text."""
    return repr(float(x) + 0.0)


@dataclass(frozen=True)
class FamilyDeclaration:
    """A named family and its parameters, as recorded in state files."""

    name: str
    params: dict

    def __post_init__(self) -> None:
        if self.name not in FAMILIES:
            raise ArgumentError(f"unknown family {self.name!r}; expected one of {', '.join(FAMILIES)}")

    def _n(self) -> int:
        return int(self.params["n"])

    def werner_spec(self) -> WernerSpec:
        p = self.params
        return WernerSpec.make(self._n(), float(p["s"]), p.get("j"), p.get("sign", "+"))

    def diagonal_spec(self) -> DiagonalFamilySpec:
        return DiagonalFamilySpec(self._n(), self.params["tplus"], self.params["tminus"])

    def sharpness_spec(self) -> SharpnessSpec:
        return SharpnessSpec(self._n(), float(self.params["c"]), float(self.params["d"]))

    def product_spec(self) -> ProductSpec:
        return ProductSpec(tuple(tuple(v) for v in self.params["vectors"]), self.params.get("sign", "+"))

    def build(self) -> DensityMatrix:
        p = self.params
        try:
            if self.name == "ghz":
                j = p.get("j") or "0" * self._n()
                return ghz_projector(j, p.get("sign", "+"))
            if self.name == "werner":
                return werner(self.werner_spec())
            if self.name == "diagonal":
                return diagonal_family(self.diagonal_spec())
            if self.name == "sharpness":
                return sharpness_state(self.sharpness_spec())
            if self.name == "mu":
                return mu_state(self._n(), float(p["s"]), p["uplus"], p["uminus"])
            return product_density(self.product_spec())
        except KeyError as exc:
            raise ArgumentError(f"family {self.name!r} is missing parameter {exc.args[0]!r}") from exc


@dataclass
class FamilyOutcome:
    """Family-specific verdict.

    ``kind`` says how to read a failure: ``"iff"`` and ``"necessary"``
    failures witness entanglement, ``"sufficient"`` failures are inconclusive.
    """

    result: CriterionResult
    kind: str
    certificate: Optional[SeparableDecomposition] = None
    lines: list = field(default_factory=list)


def family_outcome(decl: FamilyDeclaration) -> FamilyOutcome:
    name = decl.name
    if name == "werner":
        spec = decl.werner_spec()
        limit = werner_threshold(spec.n)
        res = crit._result("werner_threshold", limit - spec.s, crit.SUFFICIENT_TOLERANCE, {"threshold": limit})
        lines = [f"threshold 1/(2^{spec.n - 1}+1) = {show(limit)}", f"s = {show(spec.s)}"]
        if abs(spec.s - limit) <= crit.SUFFICIENT_TOLERANCE:
            lines.append("s is at the threshold (boundary case, separable)")
        cert = werner_decomposition(spec) if res.passed else None
        if cert is None:
            lines.append("s exceeds the threshold: not fully separable")
        return FamilyOutcome(res, "iff", cert, lines)
    if name == "product":
        spec = decl.product_spec()
        cert = product_decomposition(spec)
        res = crit._result("product", 0.0, 0.0, {"terms": len(cert)})
        return FamilyOutcome(res, "iff", cert, [f"{len(cert)} equally weighted product terms"])
    if name == "sharpness":
        spec = decl.sharpness_spec()
        res = crit.sharpness_decision(spec)
        w = res.witness
        lines = [
            f"c = {show(spec.c)}, d = {show(spec.d)}",
            "Peres passes on all cuts" if w["peres_all_pass"] else "Peres fails on some cut",
            f"spin 1-norm = {show(w['spin_norm'])} (closed form {show(w['expected_spin_norm'])})",
        ]
        if "angle_trace" in w:
            t = w["angle_trace"]
            lines.append(
                "angle trace: phase constraints satisfied by certificate"
                if t["constraint_holds"]
                else f"angle trace: rho[010,101] = {show(spec.c)} != rho[011,100] = {show(spec.d)}"
            )
        return FamilyOutcome(res, "iff", w["certificate"], lines)
    if name == "mu":
        p = decl.params
        n, s = decl._n(), float(p["s"])
        res = crit.mu_sufficient(n, s, p["uplus"], p["uminus"])
        necessary = crit.diagonal_family_necessary(mu_spec(n, s, p["uplus"], p["uminus"]))
        lines = [f"bound = {show(res.witness['bound'])}", f"s = {show(s)}"]
        cert = None
        try:
            cert = mu_decomposition(n, s, p["uplus"], p["uminus"])
        except NotCertifiableError as exc:
            lines.append(f"no certificate: {exc}")
        if not necessary.passed:
            lines.append("GHZ-diagonal necessary condition fails")
            return FamilyOutcome(necessary, "necessary", None, lines)
        return FamilyOutcome(res, "sufficient", cert, lines)
    if name == "diagonal":
        res = crit.diagonal_family_necessary(decl.diagonal_spec())
        lines = []
        if res.witness.get("depolarization_invariant"):
            lines.append(f"depolarization-invariant: {crit.ASSERTED_NO_CERTIFICATE}")
        return FamilyOutcome(res, "necessary", None, lines)
    rho = decl.build()
    res = crit.antidiagonal_necessary(rho)
    return FamilyOutcome(res, "necessary", None, ["pure GHZ state"])


@dataclass
class AnalysisReport:
    n: int
    peres: dict
    cauchy_schwarz: dict
    antidiagonal: CriterionResult
    spin_norm: float
    spin_norm_result: CriterionResult
    family: Optional[FamilyDeclaration] = None
    family_specific: Optional[FamilyOutcome] = None
    certificate: Optional[SeparableDecomposition] = None
    certificate_check: Optional[VerificationResult] = None
    overall: str = INCONCLUSIVE
    notes: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.overall]

    def necessary_failures(self) -> list[CriterionResult]:
        results = list(self.peres.values()) + list(self.cauchy_schwarz.values()) + [self.antidiagonal]
        return [r for r in results if not r.passed]

    def to_dict(self) -> dict:
        def res(r: CriterionResult) -> dict:
            out = {"verdict": r.verdict, "margin": fmt(r.margin)}
            if r.witness:
                out["witness"] = {
                    k: (fmt(v) if isinstance(v, float) else v)
                    for k, v in r.witness.items()
                    if isinstance(v, (str, int, float, bool, list))
                }
            return out

        d: dict[str, Any] = {
            "version": "qsep/1",
            "kind": "analysis",
            "n": self.n,
            "peres": {",".join(map(str, k)): res(v) for k, v in self.peres.items()},
            "cauchy_schwarz": {str(k): res(v) for k, v in self.cauchy_schwarz.items()},
            "antidiagonal": res(self.antidiagonal),
            "spin_norm": fmt(self.spin_norm),
            "spin_norm_sufficient": res(self.spin_norm_result),
        }
        if self.family is not None:
            d["family"] = {"name": self.family.name}
            if self.family_specific is not None:
                d["family"].update(res(self.family_specific.result))
                d["family"]["kind"] = self.family_specific.kind
                d["family"]["lines"] = list(self.family_specific.lines)
        if self.certificate is not None:
            d["certificate"] = {
                "terms": len(self.certificate),
                "max_deviation": fmt(self.certificate_check.max_deviation),
                "passed": self.certificate_check.passed,
            }
        d["overall"] = self.overall
        d["notes"] = list(self.notes)
        return d

    def render(self) -> str:
        def line(label: str, r: CriterionResult) -> str:
            return f"  {label:<24} {r.verdict:<4}  margin {show(r.margin)}"

        out = [f"qsep/1 analysis  n={self.n}", "necessary conditions:"]
        for k, r in self.peres.items():
            out.append(line("peres {" + ",".join(map(str, k)) + "}", r))
        for k, r in self.cauchy_schwarz.items():
            w = r.witness
            out.append(line(f"cauchy-schwarz cut {k}", r) + f"  at j={w['j']} k={w['k']}")
        w = self.antidiagonal.witness
        out.append(line("antidiagonal", self.antidiagonal) + f"  at j={w['j']} u={w['u']}")
        out.append("sufficient conditions:")
        out.append(f"  spin 1-norm              {show(self.spin_norm)}")
        out.append(line("spin-norm <= 1", self.spin_norm_result))
        if self.family is not None and self.family_specific is not None:
            fo = self.family_specific
            out.append(f"family {self.family.name} ({fo.kind}):")
            out.append(line(fo.result.name, fo.result))
            out.extend(f"  {s}" for s in fo.lines)
        if self.certificate is not None:
            chk = self.certificate_check
            out.append(
                f"certificate: {len(self.certificate)} terms, max deviation {show(chk.max_deviation)}, "
                f"{'verified' if chk.passed else 'REJECTED'}"
            )
        out.extend(f"note: {s}" for s in self.notes)
        out.append(f"overall: {self.overall}")
        return "\n".join(out) + "\n"


def default_subsets(n: int, exhaustive: bool = False) -> list[tuple[int, ...]]:
    if exhaustive or n <= EXHAUSTIVE_PERES_MAX_N:
        return proper_subsets(n)
    return [(q,) for q in range(1, n + 1)]


def analyze(
    rho: DensityMatrix,
    subsets: Optional[Sequence[Sequence[int]]] = None,
    cuts: Optional[Sequence[int]] = None,
    tol: float = crit.PERES_TOLERANCE,
    family: Optional[FamilyDeclaration] = None,
    exhaustive: bool = False,
    jobs: int = 1,
) -> AnalysisReport:
    """Run the full battery and aggregate an overall verdict.

    Certified requires a certificate that reassembles to ``rho`` within
    ``tol``; witnessed requires a failed necessary condition or a negative
    exact family decision; anything else is inconclusive.
    """
    n = rho.n
    if subsets is None:
        subsets = default_subsets(n, exhaustive)
    if cuts is None:
        cuts = range(1, n)
    peres = crit.peres_battery(rho, subsets, tol, jobs)
    cs = {c: crit.cauchy_schwarz_bipartite(rho, c) for c in cuts}
    anti = crit.antidiagonal_necessary(rho)
    sn = crit.spin_norm_sufficient(rho)
    report = AnalysisReport(n, peres, cs, anti, sn.witness["spin_norm"], sn, family)

    witnessed = bool(report.necessary_failures())
    cert = None
    if family is not None:
        built = family.build()
        dev = float(np.max(np.abs(built.mat - rho.mat)))
        if dev > tol:
            raise ArgumentError(f"state differs from its declared {family.name} family by {dev:.3e}")
        fo = family_outcome(family)
        report.family_specific = fo
        cert = fo.certificate
        if not fo.result.passed and fo.kind in ("iff", "necessary"):
            witnessed = True
    if cert is None and sn.passed:
        cert = spin_norm_decomposition(rho)
    if cert is not None:
        report.certificate = cert
        report.certificate_check = verify_decomposition(cert, rho, tol)

    certified = cert is not None and report.certificate_check.passed
    if certified and witnessed:
        report.notes.append("certificate and failed necessary condition disagree")
        report.overall = INCONCLUSIVE
    elif certified:
        report.overall = CERTIFIED
    elif witnessed:
        report.overall = WITNESSED
    else:
        report.overall = INCONCLUSIVE
    if not sn.passed:
        report.notes.append("spin 1-norm exceeds 1: the spin-norm test is silent, not negative")
    return report


def parse_subsets(text: str, n: int) -> list[tuple[int, ...]]:
    """``"1;2,3"`` -> ``[(1,), (2, 3)]``."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(tuple(sorted(int(q) for q in part.split(","))))
        except ValueError as exc:
            raise ArgumentError(f"bad qubit subset {part!r}") from exc
    return out


def describe_family(decl: FamilyDeclaration) -> str:
    p = decl.params
    if decl.name in ("werner", "ghz"):
        j = p.get("j") or "0" * int(p["n"])
        extra = f" s={show(p['s'])}" if "s" in p else ""
        return f"{decl.name} n={p['n']}{extra} sign={sign_str(parse_sign(p.get('sign', '+')))} j={BitIndex.from_str(j)}"
    if decl.name == "sharpness":
        return f"sharpness n={p['n']} c={show(p['c'])} d={show(p['d'])}"
    if decl.name == "product":
        return f"product n={len(p['vectors'])} sign={sign_str(parse_sign(p.get('sign', '+')))}"
    if decl.name == "mu":
        return f"mu n={p['n']} s={show(p['s'])}"
    return f"{decl.name} n={p['n']}"
