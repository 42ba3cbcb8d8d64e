"""Semi-Fano catalog records and the building blocks derived from them.

A building block ``Z`` is the blowup of a semi-Fano ``Y`` in the base curve of
an anticanonical pencil.  Its even cohomology is fixed by that of ``Y``:

* ``c1(Z) = pi^*(-K_Y) - zeta``
* ``pi^*(a) . c2(Z) = a . c2(Y) + (-K_Y)^2 . a``
* ``zeta . c2(Z) = (-K_Y)^3``

Cohomology classes on ``H^2(Z)`` are written in the basis
``(pi^* b_1, ..., pi^* b_r, zeta)``.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

from .lattice import IntegerLattice, Vector, as_vector, gd, matvec

log = logging.getLogger(__name__)

FIELDS = ("id", "name", "picard", "basis_labels", "ample_cone", "antiK",
          "c2_pairings", "chi", "b3", "h3_torsion_free", "provenance")


class CatalogError(Exception):
    pass


class ParseError(CatalogError):
    pass


class ValidationError(CatalogError):
    def __init__(self, report: "CatalogReport"):
        self.report = report
        super().__init__("; ".join(f"{f.record}: [{f.rule}] {f.message}" for f in report.failures))


class NonIntegralDegree(ValueError):
    pass


class NotWeakFano(ValueError):
    pass


@dataclass(frozen=True)
class SemiFanoFamily:
    id: str
    name: str
    picard: IntegerLattice
    basis_labels: tuple[str, ...]
    ample_cone: tuple[Vector, ...]
    antiK: Vector
    c2_pairings: Vector
    chi: int
    b3: int
    h3_torsion_free: bool = True
    provenance: str = ""

    @property
    def rank(self) -> int:
        return self.picard.rank

    @property
    def anticanonical_degree(self) -> int:
        return self.picard.norm(self.antiK)

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "picard": self.picard.to_json(),
            "basis_labels": list(self.basis_labels),
            "ample_cone": [list(v) for v in self.ample_cone],
            "antiK": list(self.antiK),
            "c2_pairings": list(self.c2_pairings),
            "chi": self.chi,
            "b3": self.b3,
            "h3_torsion_free": self.h3_torsion_free,
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class BuildingBlock:
    family_id: str
    N: IntegerLattice
    antiK: Vector
    c2Z: Vector  # on (lifted N basis..., zeta)
    chiZ: int
    b3Z: int
    genus: int
    ample_cone: tuple[Vector, ...] = ()
    basis_labels: tuple[str, ...] = ()
    h3_torsion_free: bool = True
    K_rank: int = 1

    @property
    def rank(self) -> int:
        return self.N.rank

    @property
    def c2_on_N(self) -> Vector:
        return self.c2Z[:-1]

    @property
    def c1_c2(self) -> int:
        """``c1(Z) . c2(Z)``; always 24 for a genuine block."""
        return sum(a * c for a, c in zip(self.antiK, self.c2_on_N)) - self.c2Z[-1]

    def c2_functional(self) -> Vector:
        """``c2(Z)`` in the basis ``(lifted N basis, c1(Z))`` of ``H^2(Z)``.

        ``c1(Z)`` spans the kernel of restriction to the K3 fibre, so the
        last coordinate is the only one invisible to the K3 lattice.
        """
        return tuple(self.c2_on_N) + (self.c1_c2,)

    def to_json(self) -> dict[str, Any]:
        return {
            "family_id": self.family_id,
            "N": self.N.to_json(),
            "basis_labels": list(self.basis_labels),
            "antiK": list(self.antiK),
            "c2Z": list(self.c2Z),
            "chiZ": self.chiZ,
            "b3Z": self.b3Z,
            "genus": self.genus,
            "K_rank": self.K_rank,
            "h3_torsion_free": self.h3_torsion_free,
        }


def derive_block(Y: SemiFanoFamily) -> BuildingBlock:
    degree = Y.anticanonical_degree
    if degree <= 0 or degree % 2:
        raise NotWeakFano(f"{Y.id}: (-K)^3 = {degree} is not of the form 2g-2 > 0")
    g = degree // 2 + 1
    KG = matvec(Y.picard.gram, Y.antiK)  # a -> (-K)^2 . a
    c2Z = tuple(c + k for c, k in zip(Y.c2_pairings, KG)) + (degree,)
    return BuildingBlock(
        family_id=Y.id,
        N=Y.picard,
        antiK=Y.antiK,
        c2Z=c2Z,
        chiZ=Y.chi + 2 - 2 * g,
        b3Z=Y.b3 + 2 * g,
        genus=g,
        ample_cone=Y.ample_cone,
        basis_labels=Y.basis_labels,
        h3_torsion_free=Y.h3_torsion_free,
    )


def blowup_rank1(degree: int, index: int, b3_base: int, curve_d: int, curve_g: int, k: int,
                 id: str = "", name: str = "", provenance: str = "") -> SemiFanoFamily:
    """Blowup of a Picard rank 1 Fano ``Y'`` in a smooth curve ``C``.

    ``degree`` is ``(-K_{Y'})^3`` and ``index`` the Fano index ``r``.  The
    result is written in the basis ``(G, H)`` with ``G = kH - E``.
    """
    r = index
    if r <= 0 or 24 % r:
        raise ValueError(f"Fano index {r} does not divide 24")
    if degree <= 0 or degree % (r * r):
        raise NonIntegralDegree(f"(-K)^3 = {degree} is not divisible by r^2 = {r * r}")
    if curve_d <= 0:
        raise NotWeakFano("curve degree must be positive")
    HH = degree // (r * r)
    EH = curve_d
    EE = 2 * curve_g - 2
    GG = k * k * HH - 2 * k * EH + EE
    GH = k * HH - EH
    gram = ((GG, GH), (GH, HH))
    antiK = (1, r - k)  # -K = rH - E = G + (r - k) H
    picard = IntegerLattice(gram, ("G", "H"))
    if picard.norm(antiK) <= 0:
        raise NotWeakFano(f"(-K)^3 = {picard.norm(antiK)} <= 0")
    c2_H = 24 // r + curve_d
    c2_E = r * curve_d
    c2_G = k * c2_H - c2_E
    return SemiFanoFamily(
        id=id,
        name=name,
        picard=picard,
        basis_labels=("G", "H"),
        ample_cone=((1, 0), (0, 1)),
        antiK=antiK,
        c2_pairings=(c2_G, c2_H),
        chi=(4 - b3_base) + 2 - 2 * curve_g,
        b3=b3_base + 2 * curve_g,
        h3_torsion_free=True,
        provenance=provenance,
    )


# ---------------------------------------------------------------------------
# catalog I/O


@dataclass(frozen=True)
class Failure:
    record: str
    rule: str
    message: str


@dataclass
class CatalogReport:
    count: int = 0
    failures: list[Failure] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict[str, Any]:
        return {
            "records": self.count,
            "valid": self.ok,
            "failures": [{"record": f.record, "rule": f.rule, "message": f.message}
                         for f in self.failures],
            "warnings": list(self.warnings),
        }


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_matrix(x) -> bool:
    return isinstance(x, list) and all(isinstance(r, list) and all(_is_int(v) for v in r) for r in x)


def _int_vector(x) -> bool:
    return isinstance(x, list) and all(_is_int(v) for v in x)


def _schema_problems(rec: Any) -> list[str]:
    if not isinstance(rec, dict):
        return ["record is not an object"]
    out = []
    extra = sorted(set(rec) - set(FIELDS))
    missing = [f for f in FIELDS if f not in rec]
    if extra:
        out.append(f"unknown fields {extra}")
    if missing:
        out.append(f"missing fields {missing}")
    if out:
        return out
    checks = {
        "id": isinstance(rec["id"], str) and rec["id"] != "",
        "name": isinstance(rec["name"], str),
        "picard": _int_matrix(rec["picard"]),
        "basis_labels": isinstance(rec["basis_labels"], list)
        and all(isinstance(s, str) for s in rec["basis_labels"]),
        "ample_cone": _int_matrix(rec["ample_cone"]),
        "antiK": _int_vector(rec["antiK"]),
        "c2_pairings": _int_vector(rec["c2_pairings"]),
        "chi": _is_int(rec["chi"]),
        "b3": _is_int(rec["b3"]) and rec["b3"] >= 0,
        "h3_torsion_free": isinstance(rec["h3_torsion_free"], bool),
        "provenance": isinstance(rec["provenance"], str),
    }
    out = [f"field {k!r} has the wrong type" for k, ok in checks.items() if not ok]
    if out:
        return out
    r = len(rec["picard"])
    if any(len(row) != r for row in rec["picard"]):
        out.append("picard Gram is not square")
    for key in ("basis_labels", "antiK", "c2_pairings"):
        if len(rec[key]) != r:
            out.append(f"{key} has length {len(rec[key])}, expected {r}")
    if any(len(v) != r for v in rec["ample_cone"]):
        out.append("ample cone generators have the wrong length")
    if not out and any(rec["picard"][i][j] != rec["picard"][j][i] for i in range(r) for j in range(r)):
        out.append("picard Gram is not symmetric")
    return out


def _family_from_dict(rec: dict) -> SemiFanoFamily:
    return SemiFanoFamily(
        id=rec["id"],
        name=rec["name"],
        picard=IntegerLattice(rec["picard"], tuple(rec["basis_labels"])),
        basis_labels=tuple(rec["basis_labels"]),
        ample_cone=tuple(as_vector(v) for v in rec["ample_cone"]),
        antiK=as_vector(rec["antiK"]),
        c2_pairings=as_vector(rec["c2_pairings"]),
        chi=rec["chi"],
        b3=rec["b3"],
        h3_torsion_free=rec["h3_torsion_free"],
        provenance=rec["provenance"],
    )


def family_problems(Y: SemiFanoFamily) -> list[tuple[str, str]]:
    """Failed invariants of one record as ``(rule, message)`` pairs."""
    out = []
    if gd(Y.antiK) != 1:
        out.append(("antiK primitive", f"gd(-K) = {gd(Y.antiK)}"))
    c1c2 = sum(a * c for a, c in zip(Y.antiK, Y.c2_pairings))
    if c1c2 != 24:
        out.append(("c1·c2 = 24", f"(-K).c2 = {c1c2}"))
    deg = Y.anticanonical_degree
    if deg % 2 or deg < 2:
        out.append(("(-K)^3 = 2g-2, g >= 2", f"(-K)^3 = {deg}"))
    if not Y.picard.is_nondegenerate:
        out.append(("nondegenerate", "(-K)-contracted form on H^2 is degenerate"))
    return out


def validate_catalog(records: Iterable[Any]) -> tuple[list[SemiFanoFamily], CatalogReport]:
    """Check raw records (dicts) or families; return the valid ones and a report."""
    report = CatalogReport()
    good: list[SemiFanoFamily] = []
    seen: set[str] = set()
    for n, rec in enumerate(records):
        report.count += 1
        if isinstance(rec, SemiFanoFamily):
            Y = rec
        else:
            problems = _schema_problems(rec)
            name = rec.get("id", f"#{n}") if isinstance(rec, dict) else f"#{n}"
            if problems:
                report.failures.extend(Failure(str(name), "schema", p) for p in problems)
                continue
            Y = _family_from_dict(rec)
        if Y.id in seen:
            report.failures.append(Failure(Y.id, "unique id", "duplicate id"))
            continue
        seen.add(Y.id)
        probs = family_problems(Y)
        report.failures.extend(Failure(Y.id, rule, msg) for rule, msg in probs)
        if not probs:
            good.append(Y)
    return good, report


def load_catalog(path: str | Path | None = None) -> list[SemiFanoFamily]:
    """Read a JSON catalog; the shipped one when ``path`` is None."""
    if path is None:
        text = resources.files("g2tcs").joinpath("data/catalog.json").read_text()
        where = "<shipped catalog>"
    else:
        text = Path(path).read_text()
        where = str(path)
    if not text.strip():
        warnings.warn(f"{where} is empty; catalog has no records", stacklevel=2)
        return []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    if not isinstance(raw, list):
        raise ParseError(f"{where}: top level must be an array of records")
    good, report = validate_catalog(raw)
    if not report.ok:
        raise ValidationError(report)
    log.debug("loaded %d families from %s", len(good), where)
    return good


def catalog_by_id(families: Sequence[SemiFanoFamily]) -> dict[str, SemiFanoFamily]:
    return {Y.id: Y for Y in families}
