"""Continuous-stage coefficient functions ``A(tau, sigma)``.

A coefficient is stored as the matrix ``gamma`` of its expansion

    A(tau, sigma) = sum_ij gamma[i, j] P_i(tau) P_j(sigma)

in the tensor basis of normalized shifted Legendre polynomials.  The
weight function is fixed to ``B(tau) = 1`` and the abscissa to
``C(tau) = tau`` throughout.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

import numpy as np

from .orthopoly import legendre_values, xi
from .quadrature import gauss_rule

CONDITION_TOL = 1e-11
SYMPLECTIC_TOL = 1e-13


class ConstraintError(ValueError):
    """A free coefficient sits where it would break the requested conditions."""


class AbscissaWarning(UserWarning):
    """The conjugate member's abscissa ``int_0^1 Ahat dsigma`` is not ``tau``."""


@dataclass(frozen=True, eq=False)
class CsCoeff:
    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float)
        if gamma.ndim != 2 or gamma.size == 0:
            raise ValueError("gamma must be a non-empty 2-d array")
        if not np.all(np.isfinite(gamma)):
            raise ValueError("gamma must be finite")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)

    @property
    def deg_tau(self) -> int:
        rows = np.nonzero(np.any(self.gamma != 0.0, axis=1))[0]
        return int(rows[-1]) if rows.size else 0

    @property
    def deg_sigma(self) -> int:
        cols = np.nonzero(np.any(self.gamma != 0.0, axis=0))[0]
        return int(cols[-1]) if cols.size else 0

    def __call__(self, tau, sigma):
        return evaluate(self, tau, sigma)

    def __add__(self, other: "CsCoeff") -> "CsCoeff":
        rows = max(self.gamma.shape[0], other.gamma.shape[0])
        cols = max(self.gamma.shape[1], other.gamma.shape[1])
        return CsCoeff(_padded(self.gamma, rows, cols) + _padded(other.gamma, rows, cols))

    def grid(self, tau, sigma) -> np.ndarray:
        """Matrix ``A(tau_i, sigma_j)`` for 1-d node arrays."""
        m, n = self.gamma.shape
        pt = legendre_values(m - 1, np.asarray(tau, dtype=float))
        ps = legendre_values(n - 1, np.asarray(sigma, dtype=float))
        return pt.T @ self.gamma @ ps

    def to_json(self) -> str:
        return json.dumps({"gamma": self.gamma.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "CsCoeff":
        try:
            data = json.loads(text)
            gamma = data["gamma"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ValueError(f"malformed coefficient JSON: {exc}") from None
        if not isinstance(gamma, list) or not gamma or any(
            not isinstance(row, list) or len(row) != len(gamma[0]) for row in gamma
        ):
            raise ValueError("gamma must be a non-empty rectangular matrix")
        return cls(np.array(gamma, dtype=float))

    def __repr__(self):
        return f"CsCoeff(deg_tau={self.deg_tau}, deg_sigma={self.deg_sigma})"


@dataclass(frozen=True)
class CsPair:
    a: CsCoeff
    a_hat: CsCoeff

    def c_hat_is_tau(self) -> bool:
        """Whether ``int_0^1 Ahat(tau, sigma) dsigma == tau`` holds identically."""
        return _c_residual(self.a_hat, 1) < CONDITION_TOL


def _padded(g: np.ndarray, rows: int, cols: int) -> np.ndarray:
    out = np.zeros((rows, cols))
    out[: g.shape[0], : g.shape[1]] = g
    return out


def evaluate(coeff: CsCoeff, tau, sigma):
    """``sum_ij gamma_ij P_i(tau) P_j(sigma)`` with broadcasting over inputs."""
    tau, sigma = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(sigma, dtype=float))
    m, n = coeff.gamma.shape
    pt = legendre_values(m - 1, tau)
    ps = legendre_values(n - 1, sigma)
    out = np.einsum("ij,i...,j...->...", coeff.gamma, pt, ps)
    return out if out.ndim else float(out)


def _core(s: int) -> np.ndarray:
    # skew-symmetric part 1/2 + sum_{k<s} xi_{k+1} (P_{k+1}(t)P_k(s) - P_{k+1}(s)P_k(t))
    g = np.zeros((s + 1, s + 1))
    g[0, 0] = 0.5
    for k in range(s):
        g[k + 1, k] += xi(k + 1)
        g[k, k + 1] -= xi(k + 1)
    return g


def build_general(alpha: int, beta: int, free_gamma: Mapping[tuple[int, int], float] | None = None) -> CsCoeff:
    """Coefficient satisfying the C(alpha) and D(beta) assumptions.

    ``free_gamma`` maps ``(i, j)`` to an arbitrary value and is only allowed
    in the block ``i >= beta, j >= alpha``.
    """
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    free_gamma = dict(free_gamma or {})
    for (i, j) in free_gamma:
        if i < 0 or j < 0:
            raise ConstraintError(f"free index ({i}, {j}) is negative")
        if i < beta or j < alpha:
            raise ConstraintError(
                f"free index ({i}, {j}) violates i >= beta={beta} and j >= alpha={alpha}"
            )
    n1 = max(alpha - 1, beta - 2)
    n2 = max(alpha - 2, beta - 1)
    rows = max([n1 + 2, n2 + 1, 1] + [i + 1 for i, _ in free_gamma])
    cols = max([n1 + 1, n2 + 2, 1] + [j + 1 for _, j in free_gamma])
    g = np.zeros((rows, cols))
    g[0, 0] = 0.5
    for k in range(n1 + 1):
        g[k + 1, k] += xi(k + 1)
    for k in range(n2 + 1):
        g[k, k + 1] -= xi(k + 1)
    for (i, j), value in free_gamma.items():
        g[i, j] += value
    return CsCoeff(g)


def build_symplectic_rk(s: int, lam: float = 0.0) -> CsCoeff:
    """Skew-symmetric family with an optional ``lam``-weighted extra term."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    g = _padded(_core(s), s + 2, s + 2)
    g[s + 1, s] += lam * xi(s + 1)
    g[s, s + 1] -= lam * xi(s + 1)
    return CsCoeff(g)


def build_symplectic_prk_AB(s: int) -> CsPair:
    if s < 2:
        # s = 1 gives Ahat = 1 - sigma whose abscissa is 1/2, not tau
        raise ValueError(f"s must be >= 2, got {s}")
    g = np.zeros((s + 1, s + 1))
    g[0, 0] = 0.5
    for k in range(s):
        g[k + 1, k] += xi(k + 1)
    for k in range(s - 1):
        g[k, k + 1] -= xi(k + 1)
    a = CsCoeff(g)
    return CsPair(a, conjugate(a))


def build_symplectic_prk_sym(s: int) -> CsPair:
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    g = _core(s)
    g[s, s] += 1.0 / (2 * (2 * s + 1))
    a = CsCoeff(g)
    return CsPair(a, conjugate(a))


def conjugate(coeff: CsCoeff) -> CsCoeff:
    """``Ahat(tau, sigma) = 1 - A(sigma, tau)``."""
    g = -coeff.gamma.T.copy()
    g[0, 0] += 1.0
    return CsCoeff(g)


@lru_cache(maxsize=None)
def _moments(n_max: int, k_max: int) -> np.ndarray:
    # M[j, k] = int_0^1 P_j(x) x^k dx, exact by Gauss quadrature
    rule = gauss_rule(min(16, (n_max + k_max) // 2 + 1))
    vals = legendre_values(n_max, rule.nodes)
    powers = rule.nodes[None, :] ** np.arange(k_max + 1)[:, None]
    m = (vals * rule.weights) @ powers.T
    m.setflags(write=False)
    return m


def _c_residual(coeff: CsCoeff, kappa: int) -> float:
    g = coeff.gamma
    size = max(g.shape[0], kappa + 1)
    mom = _moments(max(size, g.shape[1]) - 1, kappa)
    lhs = np.zeros(size)
    lhs[: g.shape[0]] = g @ mom[: g.shape[1], kappa - 1]
    rhs = mom[:size, kappa] / kappa
    return float(np.max(np.abs(lhs - rhs)))


def _d_residual(coeff: CsCoeff, kappa: int) -> float:
    g = coeff.gamma
    size = max(g.shape[1], kappa + 1)
    mom = _moments(max(size, g.shape[0]) - 1, kappa)
    lhs = np.zeros(size)
    lhs[: g.shape[1]] = mom[: g.shape[0], kappa - 1] @ g
    rhs = -mom[:size, kappa] / kappa
    rhs[0] += 1.0 / kappa
    return float(np.max(np.abs(lhs - rhs)))


def check_C(coeff: CsCoeff, max_level: int | None = None) -> int:
    """Largest ``k`` for which ``int A(tau, s) s^(k-1) ds = tau^k / k`` identically."""
    if max_level is None:
        max_level = coeff.deg_tau + 2
    level = 0
    for kappa in range(1, max_level + 1):
        if _c_residual(coeff, kappa) >= CONDITION_TOL:
            break
        level = kappa
    return level


def check_D(coeff: CsCoeff, max_level: int | None = None) -> int:
    """Largest ``k`` for which ``int t^(k-1) A(t, sigma) dt = (1 - sigma^k) / k`` identically."""
    if max_level is None:
        max_level = coeff.deg_sigma + 2
    level = 0
    for kappa in range(1, max_level + 1):
        if _d_residual(coeff, kappa) >= CONDITION_TOL:
            break
        level = kappa
    return level


def _square(g: np.ndarray) -> np.ndarray:
    n = max(g.shape)
    return _padded(g, n, n)


def check_symplectic_cs(coeff: CsCoeff) -> bool:
    """True if the coefficient has the skew-symmetric symplectic form.

    This is a sufficient condition; ``False`` means "not constructed
    symplectic", not "non-symplectic".
    """
    g = _square(coeff.gamma)
    skew = g + g.T
    skew[0, 0] -= 1.0
    return bool(np.max(np.abs(skew)) < SYMPLECTIC_TOL)


def check_symplectic_cs_pair(pair: CsPair) -> bool:
    """True if ``Ahat(tau, sigma) + A(sigma, tau) = 1`` coefficient-wise."""
    n = max(pair.a.gamma.shape + pair.a_hat.gamma.shape)
    g = _padded(pair.a.gamma, n, n)
    gh = _padded(pair.a_hat.gamma, n, n)
    res = gh + g.T
    res[0, 0] -= 1.0
    return bool(np.max(np.abs(res)) < SYMPLECTIC_TOL)


def order_bound_cs(coeff: CsCoeff) -> int:
    """Lower bound ``min(2a + 2, a + b + 1)`` on the order of the csRK method."""
    alpha, beta = check_C(coeff), check_D(coeff)
    return min(2 * alpha + 2, alpha + beta + 1)


def order_bound_cs_pair(pair: CsPair) -> int:
    """Lower bound ``2 min(eta, zeta) + 1`` for a conjugate symplectic pair.

    The bound presumes ``Ahat`` has abscissa ``tau``; when it does not, an
    :class:`AbscissaWarning` is issued and the number is still returned.
    """
    if not pair.c_hat_is_tau():
        warnings.warn(
            "conjugate coefficient does not satisfy int Ahat dsigma = tau; order bound may not apply",
            AbscissaWarning,
            stacklevel=2,
        )
    eta, zeta = check_C(pair.a), check_D(pair.a)
    return 2 * min(eta, zeta) + 1
