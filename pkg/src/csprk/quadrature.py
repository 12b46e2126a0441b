"""Gauss, Radau and Lobatto rules on [0, 1].

Nodes come from the eigenvalues of the (modified) Jacobi matrix of the
Legendre weight on [-1, 1] (Golub-Welsch) and are mapped to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .orthopoly import legendre_values

MAX_POINTS = 16
PASS_TOL = 1e-10
FAIL_MARGIN = 1e-8

FAMILIES = ("gauss", "radau_left", "radau_right", "lobatto", "custom")


class UnsupportedSizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    family: str

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be 1-d arrays of equal nonzero length")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, func) -> float:
        return float(self.weights @ np.asarray(func(self.nodes), dtype=float))

    def __repr__(self):
        return f"QuadratureRule(family={self.family!r}, size={self.size}, order={self.order})"


def _jacobi_offdiag(n: int) -> np.ndarray:
    k = np.arange(1, n, dtype=float)
    return k / np.sqrt(4.0 * k * k - 1.0)


def _eig_rule(diag: np.ndarray, off: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    jac = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    x, vecs = np.linalg.eigh(jac)
    # weight of the Legendre measure on [-1, 1] is 2; mapped to [0, 1] it is 1
    w = vecs[0, :] ** 2
    return (x + 1.0) / 2.0, w / w.sum()


def _check_size(r: int, lo: int) -> None:
    if not lo <= r <= MAX_POINTS:
        raise UnsupportedSizeError(f"number of points must lie in [{lo}, {MAX_POINTS}], got {r}")


def _radau_diag_entry(r: int, end: float) -> float:
    # last diagonal entry of the Jacobi matrix that places a node at `end`
    off = _jacobi_offdiag(r)
    sub = np.diag(np.zeros(r - 1)) + np.diag(off[:-1], 1) + np.diag(off[:-1], -1)
    rhs = np.zeros(r - 1)
    rhs[-1] = off[-1] ** 2
    delta = np.linalg.solve(sub - end * np.eye(r - 1), rhs)
    return end + delta[-1]


def gauss_rule(r: int) -> QuadratureRule:
    _check_size(r, 1)
    nodes, weights = _eig_rule(np.zeros(r), _jacobi_offdiag(r))
    # exact symmetry about 1/2
    nodes = 0.5 * (nodes + 1.0 - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights, 2 * r, "gauss")


def radau_left_rule(r: int) -> QuadratureRule:
    _check_size(r, 2)
    diag = np.zeros(r)
    diag[-1] = _radau_diag_entry(r, -1.0)
    nodes, weights = _eig_rule(diag, _jacobi_offdiag(r))
    nodes[0] = 0.0
    return QuadratureRule(nodes, weights, 2 * r - 1, "radau_left")


def radau_right_rule(r: int) -> QuadratureRule:
    left = radau_left_rule(r)
    return QuadratureRule(1.0 - left.nodes[::-1], left.weights[::-1], 2 * r - 1, "radau_right")


def lobatto_rule(r: int) -> QuadratureRule:
    _check_size(r, 2)
    off = _jacobi_offdiag(r)
    diag = np.zeros(r)
    if r == 2:
        # both nodes fixed: the 2x2 matrix is determined directly
        alpha, beta2 = 0.0, 1.0
    else:
        sub = np.diag(np.zeros(r - 1)) + np.diag(off[:-1], 1) + np.diag(off[:-1], -1)
        e = np.zeros(r - 1)
        e[-1] = 1.0
        g = np.linalg.solve(sub + np.eye(r - 1), e)
        h = np.linalg.solve(sub - np.eye(r - 1), e)
        alpha, beta2 = np.linalg.solve(np.array([[1.0, -g[-1]], [1.0, -h[-1]]]), np.array([-1.0, 1.0]))
    diag[-1] = alpha
    off = off.copy()
    off[-1] = np.sqrt(beta2)
    nodes, weights = _eig_rule(diag, off)
    nodes = 0.5 * (nodes + 1.0 - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes[0], nodes[-1] = 0.0, 1.0
    return QuadratureRule(nodes, weights, 2 * r - 2, "lobatto")


def exactness_defects(nodes, weights, n_max: int) -> np.ndarray:
    """``|sum_i b_i P_k(c_i) - int_0^1 P_k|`` for ``k = 0 .. n_max``."""
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    moments = legendre_values(n_max, nodes) @ weights
    moments[0] -= 1.0
    return np.abs(moments)


def certify_order(rule: QuadratureRule) -> int:
    """Largest ``p`` such that polynomials of degree ``< p`` integrate exactly.

    Exactness is tested on the orthonormal shifted Legendre basis, which
    spans the same space as the monomials but keeps the defects O(1) for
    genuinely inexact degrees (monomial defects of high-order rules sink
    below any usable tolerance).
    """
    return _certify(rule.nodes, rule.weights)


def _certify(nodes, weights) -> int:
    defects = exactness_defects(nodes, weights, 2 * len(nodes) + 1)
    failing = np.nonzero(defects >= PASS_TOL)[0]
    return int(failing[0]) if failing.size else len(defects)


def custom_rule(nodes, weights) -> QuadratureRule:
    """Rule from user nodes/weights; the order is certified, not trusted."""
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
        raise ValueError("nodes and weights must be 1-d arrays of equal nonzero length")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("nodes must be strictly increasing")
    if nodes[0] < 0.0 or nodes[-1] > 1.0:
        raise ValueError("nodes must lie in [0, 1]")
    p = _certify(nodes, weights)
    if p == 0:
        raise ValueError("rule does not integrate constants exactly")
    return QuadratureRule(nodes, weights, p, "custom")


_BUILDERS = {
    "gauss": gauss_rule,
    "radau_left": radau_left_rule,
    "radau_right": radau_right_rule,
    "lobatto": lobatto_rule,
}


def make_rule(family: str, r: int) -> QuadratureRule:
    try:
        builder = _BUILDERS[family]
    except KeyError:
        raise ValueError(f"unknown quadrature family {family!r}; choose from {sorted(_BUILDERS)}") from None
    return builder(r)
