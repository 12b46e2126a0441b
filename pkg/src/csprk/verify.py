"""Simplifying assumptions, symplecticity and order bounds for tableaux."""

from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .tableau import ButcherTableau, PartitionedTableau

PASS_TOL = 1e-10
FAIL_MARGIN = 1e-6
SYMPLECTIC_TOL = 1e-12


class AmbiguousLevelWarning(UserWarning):
    """A condition failed by less than the clean-failure margin."""


@dataclass(frozen=True)
class ConditionReport:
    kind: str
    b_order: int
    c_level: int
    d_level: int
    symplectic: bool
    symplectic_residual: float
    order_lower_bound: int
    residual_max: float

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(asdict(self), indent=indent)


def _sweep(residual, max_level: int, name: str) -> tuple[int, float]:
    """Largest level whose residuals all pass, and the worst passing residual."""
    level, worst = 0, 0.0
    for kappa in range(1, max_level + 1):
        res = residual(kappa)
        if res >= PASS_TOL:
            if res < FAIL_MARGIN:
                warnings.warn(
                    f"{name}({kappa}) fails by only {res:.3g}; level is ambiguous",
                    AmbiguousLevelWarning,
                    stacklevel=3,
                )
            break
        level, worst = kappa, max(worst, res)
    return level, worst


def _b_residual(t: ButcherTableau, kappa: int) -> float:
    return abs(float(t.b @ t.c ** (kappa - 1)) - 1.0 / kappa)


def _c_residual(t: ButcherTableau, kappa: int) -> float:
    return float(np.max(np.abs(t.a @ t.c ** (kappa - 1) - t.c**kappa / kappa)))


def _d_residual(t: ButcherTableau, kappa: int) -> float:
    # multiplied through by b_j, so zero weights are harmless
    lhs = (t.b * t.c ** (kappa - 1)) @ t.a
    return float(np.max(np.abs(lhs - t.b * (1.0 - t.c**kappa) / kappa)))


def check_B(t: ButcherTableau, max_level: int | None = None) -> int:
    """Largest ``p`` with ``sum_i b_i c_i^(k-1) = 1/k`` for all ``k <= p``."""
    if max_level is None:
        max_level = 2 * t.stages + 2
    return _sweep(lambda k: _b_residual(t, k), max_level, "B")[0]


def check_C_discrete(t: ButcherTableau, max_level: int | None = None) -> int:
    """Largest ``k`` with ``sum_j a_ij c_j^(k-1) = c_i^k / k`` for every row.

    Defaults to capping at the tableau's ``B`` level.
    """
    if max_level is None:
        max_level = check_B(t)
    return _sweep(lambda k: _c_residual(t, k), max_level, "C")[0]


def check_D_discrete(t: ButcherTableau, max_level: int | None = None) -> int:
    if max_level is None:
        max_level = check_B(t)
    return _sweep(lambda k: _d_residual(t, k), max_level, "D")[0]


def check_symplectic_rk(t: ButcherTableau) -> tuple[bool, float]:
    """Residual of ``b_i a_ij + b_j a_ji - b_i b_j``."""
    ba = t.b[:, None] * t.a
    res = float(np.max(np.abs(ba + ba.T - np.outer(t.b, t.b))))
    return res < SYMPLECTIC_TOL, res


def check_symplectic_prk(pt: PartitionedTableau) -> tuple[bool, float]:
    """Residual of ``b_i ahat_ij + b_j a_ji - b_i b_j`` (``b`` is shared)."""
    b = pt.b
    res = b[:, None] * pt.second.a + (b[:, None] * pt.first.a).T - np.outer(b, b)
    res = float(np.max(np.abs(res)))
    return res < SYMPLECTIC_TOL, res


def _levels(t: ButcherTableau, cap: int) -> tuple[int, int, float]:
    c_level, c_worst = _sweep(lambda k: _c_residual(t, k), cap, "C")
    d_level, d_worst = _sweep(lambda k: _d_residual(t, k), cap, "D")
    return c_level, d_level, max(c_worst, d_worst)


def report(t: ButcherTableau | PartitionedTableau, rule_order: int | None = None) -> ConditionReport:
    """Levels of B/C/D plus symplecticity and the implied order lower bound.

    ``rule_order`` caps the ``B`` sweep (the quadrature order used for the
    retrieval); without it the tableau's own ``B`` level is used.
    """
    first = t.first if isinstance(t, PartitionedTableau) else t
    b_cap = rule_order if rule_order is not None else 2 * first.stages + 2
    b_order, b_worst = _sweep(lambda k: _b_residual(first, k), b_cap, "B")

    if isinstance(t, PartitionedTableau):
        c1, d1, w1 = _levels(t.first, b_order)
        c2, d2, w2 = _levels(t.second, b_order)
        c_level, d_level = min(c1, c2), min(d1, d2)
        alpha = min(c_level, d_level)
        bound = min(b_order, 2 * alpha + 1)
        symplectic, sres = check_symplectic_prk(t)
        worst = max(b_worst, w1, w2)
        kind = "prk"
    else:
        c_level, d_level, worst = _levels(t, b_order)
        bound = min(b_order, 2 * c_level + 2, c_level + d_level + 1)
        symplectic, sres = check_symplectic_rk(t)
        worst = max(worst, b_worst)
        kind = "rk"
    return ConditionReport(kind, b_order, c_level, d_level, symplectic, sres, bound, worst)
