"""Regenerate the reference tableaux from coefficient families and compare.

Targets are written out in closed form (surds evaluated with ``math.sqrt``)
and never go through the construction code.  For the partitioned tables
the harness tries every candidate family at the stated quadrature and
reports which one matches.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Callable

import numpy as np

from . import cscoeff
from .quadrature import make_rule
from .tableau import ButcherTableau, PartitionedTableau, retrieve_prk, retrieve_rk

TOL = 1e-12

R5, R6, R15 = sqrt(5.0), sqrt(6.0), sqrt(15.0)

_GAUSS3_C = [0.5 - R15 / 10, 0.5, 0.5 + R15 / 10]
_GAUSS3_B = [5 / 18, 4 / 9, 5 / 18]
_RL3_C = [0.0, (6 - R6) / 10, (6 + R6) / 10]
_RL3_B = [1 / 9, (16 + R6) / 36, (16 - R6) / 36]
_RR3_C = [(4 - R6) / 10, (4 + R6) / 10, 1.0]
_RR3_B = [(16 - R6) / 36, (16 + R6) / 36, 1 / 9]
_LOB4_C = [0.0, (5 - R5) / 10, (5 + R5) / 10, 1.0]
_LOB4_B = [1 / 12, 5 / 12, 5 / 12, 1 / 12]


def table1(lam: float) -> ButcherTableau:
    a = [
        [5 / 36, 2 / 9 - (2 + lam) * R15 / 45, 5 / 36 - (5 - 2 * lam) * R15 / 90],
        [5 / 36 + (2 + lam) * R15 / 72, 2 / 9, 5 / 36 - (2 + lam) * R15 / 72],
        [5 / 36 + (5 - 2 * lam) * R15 / 90, 2 / 9 + (2 + lam) * R15 / 45, 5 / 36],
    ]
    return ButcherTableau(a, _GAUSS3_B, _GAUSS3_C)


def table2() -> PartitionedTableau:
    c = [(5 - R15) / 10, 0.5, (5 + R15) / 10]
    first = [
        [5 / 36 - R15 / 90, 2 / 9 - 2 * R15 / 45, 5 / 36 - 2 * R15 / 45],
        [5 / 36 + R15 / 24, 2 / 9, 5 / 36 - R15 / 24],
        [5 / 36 + 2 * R15 / 45, 2 / 9 + 2 * R15 / 45, 5 / 36 + R15 / 90],
    ]
    second = [
        [5 / 36 + R15 / 90, 2 / 9 - R15 / 15, 5 / 36 - 2 * R15 / 45],
        [5 / 36 + R15 / 36, 2 / 9, 5 / 36 - R15 / 36],
        [5 / 36 + 2 * R15 / 45, 2 / 9 + R15 / 15, 5 / 36 - R15 / 90],
    ]
    return PartitionedTableau(ButcherTableau(first, _GAUSS3_B, c), ButcherTableau(second, _GAUSS3_B, c))


def table3() -> PartitionedTableau:
    first = [
        [0.0, 0.0, 0.0],
        [19 / 150 - R6 / 225, 1 / 4 + R6 / 72, 67 / 300 - 197 * R6 / 1800],
        [19 / 150 + R6 / 225, 67 / 300 + 197 * R6 / 1800, 1 / 4 - R6 / 72],
    ]
    second = [
        [1 / 9, -1 / 18 + R6 / 72, -1 / 18 - R6 / 72],
        [1 / 9, 7 / 36 + R6 / 72, 53 / 180 - 41 * R6 / 360],
        [1 / 9, 53 / 180 + 41 * R6 / 360, 7 / 36 - R6 / 72],
    ]
    return PartitionedTableau(ButcherTableau(first, _RL3_B, _RL3_C), ButcherTableau(second, _RL3_B, _RL3_C))


def table4() -> PartitionedTableau:
    first = [
        [(14 - R6) / 72, (398 - 147 * R6) / 1800, (-7 - 2 * R6) / 450],
        [(398 + 147 * R6) / 1800, (14 + R6) / 72, (-7 + 2 * R6) / 450],
        [(16 - R6) / 36, (16 + R6) / 36, 1 / 9],
    ]
    second = [
        [1 / 4 - R6 / 72, 3 / 20 - 31 * R6 / 360, 0.0],
        [3 / 20 + 31 * R6 / 360, 1 / 4 + R6 / 72, 0.0],
        [1 / 2 - R6 / 72, 1 / 2 + R6 / 72, 0.0],
    ]
    return PartitionedTableau(ButcherTableau(first, _RR3_B, _RR3_C), ButcherTableau(second, _RR3_B, _RR3_C))


def table5() -> PartitionedTableau:
    first = [
        [0.0, 0.0, 0.0, 0.0],
        [(11 - R5) / 120, (25 + R5) / 120, (25 - 11 * R5) / 120, (-1 - R5) / 120],
        [(11 + R5) / 120, (25 + 11 * R5) / 120, (25 - R5) / 120, (-1 + R5) / 120],
        [1 / 12, 5 / 12, 5 / 12, 1 / 12],
    ]
    second = [
        [1 / 12, (-1 + R5) / 24, (-1 - R5) / 24, 0.0],
        [1 / 12, (25 - R5) / 120, (25 - 11 * R5) / 120, 0.0],
        [1 / 12, (25 + 11 * R5) / 120, (25 + R5) / 120, 0.0],
        [1 / 12, (11 + R5) / 24, (11 - R5) / 24, 0.0],
    ]
    return PartitionedTableau(ButcherTableau(first, _LOB4_B, _LOB4_C), ButcherTableau(second, _LOB4_B, _LOB4_C))


def table6() -> PartitionedTableau:
    c = [(5 - R15) / 10, 0.5, (5 + R15) / 10]
    first = [
        [2 / 9, 2 / 9 - 2 * R15 / 45, 1 / 18 - R15 / 18],
        [5 / 36 + R15 / 36, 2 / 9, 5 / 36 - R15 / 36],
        [1 / 18 + R15 / 18, 2 / 9 + 2 * R15 / 45, 2 / 9],
    ]
    second = [
        [1 / 18, 2 / 9 - 2 * R15 / 45, 2 / 9 - R15 / 18],
        [5 / 36 + R15 / 36, 2 / 9, 5 / 36 - R15 / 36],
        [2 / 9 + R15 / 18, 2 / 9 + 2 * R15 / 45, 1 / 18],
    ]
    return PartitionedTableau(ButcherTableau(first, _GAUSS3_B, c), ButcherTableau(second, _GAUSS3_B, c))


@dataclass(frozen=True)
class TableSpec:
    name: str
    quadrature: str
    points: int
    target: Callable[[], ButcherTableau | PartitionedTableau]
    lam: float | None = None  # set for the single-tableau family


def default_specs() -> list[TableSpec]:
    specs = [TableSpec(f"table1[lambda={lam:g}]", "gauss", 3, lambda lam=lam: table1(lam), lam)
             for lam in (-1.0, 0.0, 1.0)]
    specs += [
        TableSpec("table2", "gauss", 3, table2),
        TableSpec("table3", "radau_left", 3, table3),
        TableSpec("table4", "radau_right", 3, table4),
        TableSpec("table5", "lobatto", 4, table5),
        TableSpec("table6", "gauss", 3, table6),
    ]
    return specs


# candidate partitioned families tried against each pair target
PAIR_CANDIDATES = (("exa2", 2), ("exa2", 3), ("exa3", 1), ("exa3", 2))


def build_pair(family: str, s: int) -> cscoeff.CsPair:
    if family == "exa2":
        return cscoeff.build_symplectic_prk_AB(s)
    if family == "exa3":
        return cscoeff.build_symplectic_prk_sym(s)
    raise ValueError(f"unknown pair family {family!r}")


@dataclass(frozen=True)
class TableCheck:
    name: str
    family: str
    quadrature: str
    max_dev: float
    worst_entry: str
    passed: bool


def _members(t):
    if isinstance(t, PartitionedTableau):
        return (("first", t.first), ("second", t.second))
    return (("", t),)


def compare(got, want) -> tuple[float, str]:
    """Largest entrywise deviation and where it occurs."""
    if type(got) is not type(want) or got.stages != want.stages:
        return float("inf"), "shape"
    worst, where = -1.0, ""
    for (label, g), (_, w) in zip(_members(got), _members(want)):
        for field in ("a", "b", "c"):
            diff = np.abs(getattr(g, field) - getattr(w, field))
            idx = np.unravel_index(int(np.argmax(diff)), diff.shape)
            if diff[idx] > worst:
                worst = float(diff[idx])
                prefix = f"{label}." if label else ""
                where = f"{prefix}{field}[{','.join(str(int(i)) for i in idx)}]"
    return worst, where


def check_table(spec: TableSpec, tol: float = TOL) -> TableCheck:
    rule = make_rule(spec.quadrature, spec.points)
    target = spec.target()
    quad = f"{spec.quadrature}-{spec.points}"
    if spec.lam is not None:
        got = retrieve_rk(cscoeff.build_symplectic_rk(1, spec.lam), rule)
        dev, where = compare(got, target)
        return TableCheck(spec.name, f"exa1(s=1, lambda={spec.lam:g})", quad, dev, where, dev <= tol)
    best = None
    for family, s in PAIR_CANDIDATES:
        dev, where = compare(retrieve_prk(build_pair(family, s), rule), target)
        if best is None or dev < best[0]:
            best = (dev, where, f"{family}(s={s})")
    dev, where, family = best
    return TableCheck(spec.name, family, quad, dev, where, dev <= tol)


def reproduce_tables(specs: list[TableSpec] | None = None, tol: float = TOL) -> list[TableCheck]:
    return [check_table(spec, tol) for spec in (specs if specs is not None else default_specs())]


def corrupted(spec: TableSpec, delta: float = 1e-6) -> TableSpec:
    """Copy of ``spec`` whose target has one perturbed entry (for testing the harness)."""

    def target():
        t = spec.target()
        member = t.first if isinstance(t, PartitionedTableau) else t
        a = member.a.copy()
        a[-1, 0] += delta
        bad = ButcherTableau(a, member.b, member.c)
        return PartitionedTableau(bad, t.second) if isinstance(t, PartitionedTableau) else bad

    return TableSpec(spec.name, spec.quadrature, spec.points, target, spec.lam)


def format_report(checks: list[TableCheck]) -> str:
    lines = []
    for chk in checks:
        status = "PASS" if chk.passed else "FAIL"
        lines.append(f"{status}  {chk.name:<20} {chk.family:<24} {chk.quadrature:<14} "
                     f"max_dev={chk.max_dev:.2e}  worst={chk.worst_entry}")
    n_pass = sum(chk.passed for chk in checks)
    lines.append(f"{n_pass}/{len(checks)} PASS")
    return "\n".join(lines)
