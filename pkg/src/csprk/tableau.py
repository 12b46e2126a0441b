"""Classical Butcher tableaux retrieved from continuous-stage coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .cscoeff import CsCoeff, CsPair
from .quadrature import QuadratureRule


class TableauParseError(ValueError):
    pass


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a, b, c = _frozen(self.a), _frozen(self.b), _frozen(self.c)
        if b.ndim != 1 or c.shape != b.shape or b.size == 0:
            raise ValueError("b and c must be 1-d arrays of equal nonzero length")
        if a.shape != (b.size, b.size):
            raise ValueError(f"a must be {b.size}x{b.size}, got shape {a.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def stages(self) -> int:
        return self.b.size

    def __eq__(self, other):
        if not isinstance(other, ButcherTableau):
            return NotImplemented
        return all(np.array_equal(x, y) for x, y in ((self.a, other.a), (self.b, other.b), (self.c, other.c)))

    def to_dict(self) -> dict:
        return {"c": self.c.tolist(), "b": self.b.tolist(), "a": self.a.tolist()}


@dataclass(frozen=True, eq=False)
class PartitionedTableau:
    """Pair of tableaux sharing ``b`` and ``c``."""

    first: ButcherTableau
    second: ButcherTableau

    def __post_init__(self):
        if not np.array_equal(self.first.b, self.second.b):
            raise ValueError("members of a partitioned tableau must share b")
        if not np.array_equal(self.first.c, self.second.c):
            raise ValueError("members of a partitioned tableau must share c")

    @property
    def b(self) -> np.ndarray:
        return self.first.b

    @property
    def c(self) -> np.ndarray:
        return self.first.c

    @property
    def stages(self) -> int:
        return self.first.stages

    def __eq__(self, other):
        if not isinstance(other, PartitionedTableau):
            return NotImplemented
        return self.first == other.first and self.second == other.second

    def to_dict(self) -> dict:
        return {"first": self.first.to_dict(), "second": self.second.to_dict()}


def retrieve_rk(coeff: CsCoeff, rule: QuadratureRule) -> ButcherTableau:
    """``a_ij = b_j A(c_i, c_j)`` with ``b, c`` taken from the rule."""
    a = coeff.grid(rule.nodes, rule.nodes) * rule.weights[None, :]
    return ButcherTableau(a, rule.weights, rule.nodes)


def retrieve_prk(pair: CsPair, rule: QuadratureRule) -> PartitionedTableau:
    return PartitionedTableau(retrieve_rk(pair.a, rule), retrieve_rk(pair.a_hat, rule))


# -- serialization ---------------------------------------------------------


def to_json(tab: ButcherTableau | PartitionedTableau, indent: int | None = None) -> str:
    # float repr is the shortest round-trip representation
    return json.dumps(tab.to_dict(), indent=indent)


def _vector(data: dict, key: str) -> np.ndarray:
    if key not in data:
        raise TableauParseError(f"missing field {key!r}")
    value = data[key]
    if not isinstance(value, list) or not value or any(
        isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
    ):
        raise TableauParseError(f"{key} must be a non-empty list of numbers")
    return np.array(value, dtype=float)


def _tableau_from_dict(data, where: str = "") -> ButcherTableau:
    if not isinstance(data, dict):
        raise TableauParseError(f"{where or 'tableau'} must be a JSON object")
    prefix = f"{where}." if where else ""
    try:
        c = _vector(data, "c")
        b = _vector(data, "b")
    except TableauParseError as exc:
        raise TableauParseError(prefix + str(exc)) from None
    if "a" not in data:
        raise TableauParseError(f"missing field {prefix}a")
    rows = data["a"]
    if not isinstance(rows, list) or not rows or any(not isinstance(row, list) for row in rows):
        raise TableauParseError(f"{prefix}a must be a list of rows")
    if any(len(row) != len(rows[0]) for row in rows):
        raise TableauParseError(f"{prefix}a is ragged")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for row in rows for v in row):
        raise TableauParseError(f"{prefix}a must contain only numbers")
    a = np.array(rows, dtype=float)
    if a.shape[0] != a.shape[1]:
        raise TableauParseError(f"{prefix}a must be square")
    if b.size != c.size:
        raise TableauParseError(f"{prefix}b and {prefix}c differ in length ({b.size} vs {c.size})")
    if a.shape[0] != b.size:
        raise TableauParseError(f"{prefix}a has {a.shape[0]} rows but b has {b.size} entries")
    return ButcherTableau(a, b, c)


def from_json(text: str) -> ButcherTableau | PartitionedTableau:
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise TableauParseError(f"malformed JSON: {exc}") from None
    if isinstance(data, dict) and ("first" in data or "second" in data):
        if "first" not in data or "second" not in data:
            raise TableauParseError("pair must have both 'first' and 'second'")
        first = _tableau_from_dict(data["first"], "first")
        second = _tableau_from_dict(data["second"], "second")
        try:
            return PartitionedTableau(first, second)
        except ValueError as exc:
            raise TableauParseError(str(exc)) from None
    return _tableau_from_dict(data)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _text_single(tab: ButcherTableau) -> list[str]:
    cells = [[_fmt(ci)] + [_fmt(v) for v in row] for ci, row in zip(tab.c, tab.a)]
    cells.append([""] + [_fmt(v) for v in tab.b])
    widths = [max(len(row[k]) for row in cells) for k in range(len(cells[0]))]
    lines = []
    for n, row in enumerate(cells):
        if n == len(cells) - 1:
            lines.append("-" * widths[0] + "-+-" + "-".join("-" * w for w in widths[1:]))
        body = " ".join(cell.rjust(w) for cell, w in zip(row[1:], widths[1:]))
        lines.append(f"{row[0].rjust(widths[0])} | {body}")
    return lines


def to_text(tab: ButcherTableau | PartitionedTableau) -> str:
    """Human-readable Butcher array (not meant to be parsed)."""
    if isinstance(tab, PartitionedTableau):
        left, right = _text_single(tab.first), _text_single(tab.second)
        width = max(len(line) for line in left)
        return "\n".join(f"{l.ljust(width)}    {r}" for l, r in zip(left, right))
    return "\n".join(_text_single(tab))
