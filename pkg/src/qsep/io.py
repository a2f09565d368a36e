"""Reading and writing ``qsep/1`` state, certificate and coefficient files.

Files are JSON with one matrix row, certificate term or table entry per line,
so they diff and audit line by line. Every real number is written with 17
significant digits, which round-trips doubles exactly.
"""

from __future__ import annotations

import json
from typing import Any, Optional

import numpy as np

from .bases import CoefficientTable
from .bits import BitIndex
from .decompose import SeparableDecomposition
from .errors import ArgumentError, ParseError, ValidationError
from .linalg import DensityMatrix
from .report import FamilyDeclaration, fmt

VERSION = "qsep/1"


def _num(x: float) -> str:
    return fmt(x)


def _pair(z: complex) -> str:
    return f"[{_num(z.real)}, {_num(z.imag)}]"


def _triple(v) -> str:
    return "[" + ", ".join(_num(x) for x in v) + "]"


def _family_json(decl: FamilyDeclaration) -> str:
    def clean(v: Any) -> Any:
        if isinstance(v, np.ndarray):
            return [clean(x) for x in v.tolist()]
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if isinstance(v, dict):
            return {str(k): clean(x) for k, x in v.items()}
        if isinstance(v, (float, np.floating)):
            return float(v) + 0.0
        if isinstance(v, (int, np.integer)):
            return int(v)
        return str(v)

    return json.dumps({"name": decl.name, "params": clean(decl.params)}, sort_keys=True)


def dump_state(rho: DensityMatrix, family: Optional[FamilyDeclaration] = None) -> str:
    m = rho.mat
    rows = ["    [" + ", ".join(_pair(z) for z in row) + "]" for row in m]
    head = f'{{"version": "{VERSION}", "kind": "state", "n": {rho.n},\n'
    if family is not None:
        head += f' "family": {_family_json(family)},\n'
    return head + ' "matrix": [\n' + ",\n".join(rows) + "\n ]}\n"


def dump_certificate(dec: SeparableDecomposition) -> str:
    terms = [
        f'    {{"p": {_num(p)}, "bloch": [' + ", ".join(_triple(v) for v in b) + "]}"
        for p, b in zip(dec.weights, dec.bloch)
    ]
    return (
        f'{{"version": "{VERSION}", "kind": "certificate", "n": {dec.n},\n "terms": [\n'
        + ",\n".join(terms)
        + "\n ]}\n"
    )


def dump_coefficients(table: CoefficientTable) -> str:
    n = table.n
    entries = []
    for j in range(1 << n):
        for k in range(1 << n):
            jb, kb = BitIndex.from_int(j, n), BitIndex.from_int(k, n)
            entries.append(f'    {{"j": "{jb}", "k": "{kb}", "value": {_pair(table.values[j, k])}}}')
    return (
        f'{{"version": "{VERSION}", "kind": "coefficients", "basis": "{table.basis}", "n": {n},\n'
        ' "entries": [\n' + ",\n".join(entries) + "\n ]}\n"
    )


def _load(text: str, kind: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}, expected {VERSION!r}")
    if doc.get("kind") != kind:
        raise ParseError(f"expected a {kind} file, got kind {doc.get('kind')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= 16:
        raise ParseError(f"n must be an integer in [1, 16], got {n!r}")
    return doc


def _real(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _complex(x: Any, where: str) -> complex:
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError(f"{where}: expected an [re, im] pair, got {x!r}")
    return complex(_real(x[0], where), _real(x[1], where))


def parse_state(text: str) -> tuple[DensityMatrix, Optional[FamilyDeclaration]]:
    """Parse a state file; invariant violations raise :class:`ValidationError`."""
    doc = _load(text, "state")
    d = 1 << doc["n"]
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != d:
        raise ParseError(f"matrix must have {d} rows")
    m = np.empty((d, d), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"row {r} must have {d} entries")
        for c, z in enumerate(row):
            m[r, c] = _complex(z, f"row {r}, column {c}")
    family = None
    if "family" in doc:
        f = doc["family"]
        if not isinstance(f, dict) or "name" not in f or not isinstance(f.get("params", {}), dict):
            raise ParseError("family must be an object with name and params")
        try:
            family = FamilyDeclaration(str(f["name"]), dict(f.get("params", {})))
        except ArgumentError as exc:
            raise ParseError(str(exc)) from exc
    return DensityMatrix(m), family


def parse_certificate(text: str) -> SeparableDecomposition:
    """Parse a certificate file.

    Only structure is checked here; negative weights or oversized Bloch
    vectors are left for :func:`~qsep.decompose.verify_decomposition`.
    """
    doc = _load(text, "certificate")
    n = doc["n"]
    terms = doc.get("terms")
    if not isinstance(terms, list) or not terms:
        raise ParseError("terms must be a nonempty list")
    weights = np.empty(len(terms))
    bloch = np.empty((len(terms), n, 3))
    for t, term in enumerate(terms):
        if not isinstance(term, dict) or "p" not in term or "bloch" not in term:
            raise ParseError(f"term {t} must have p and bloch")
        weights[t] = _real(term["p"], f"term {t}, p")
        vecs = term["bloch"]
        if not isinstance(vecs, list) or len(vecs) != n:
            raise ParseError(f"term {t}: bloch must hold {n} vectors")
        for r, v in enumerate(vecs):
            if not isinstance(v, list) or len(v) != 3:
                raise ParseError(f"term {t}, qubit {r + 1}: expected a 3-vector")
            bloch[t, r] = [_real(x, f"term {t}, qubit {r + 1}") for x in v]
    return SeparableDecomposition(n, weights, bloch)


def parse_coefficients(text: str) -> CoefficientTable:
    doc = _load(text, "coefficients")
    n = doc["n"]
    basis = doc.get("basis")
    if basis not in ("adjusted", "spin"):
        raise ParseError(f"unknown basis {basis!r}")
    entries = doc.get("entries")
    d = 1 << n
    if not isinstance(entries, list) or len(entries) != d * d:
        raise ParseError(f"entries must list all {d * d} coefficients")
    values = np.empty((d, d), dtype=complex)
    for e, entry in enumerate(entries):
        try:
            j = BitIndex.from_str(entry["j"]).value
            k = BitIndex.from_str(entry["k"]).value
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"entry {e}: bad j/k label") from exc
        if (j, k) != divmod(e, d):
            raise ParseError(f"entry {e}: labels out of row-major order")
        values[j, k] = _complex(entry.get("value"), f"entry {e}")
    return CoefficientTable(n, basis, values)


__all__ = [
    "VERSION",
    "ParseError",
    "ValidationError",
    "dump_state",
    "dump_certificate",
    "dump_coefficients",
    "parse_state",
    "parse_certificate",
    "parse_coefficients",
]
