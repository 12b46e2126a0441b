"""Normalized shifted Legendre polynomials on [0, 1].

``P_n`` is scaled so that ``int_0^1 P_n(t)^2 dt = 1``; the leading
coefficient is positive.  Monomial coefficients are generated from the
three-term recurrence rather than by differentiating ``x^n (x-1)^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DEGREE = 32


class UnsupportedDegreeError(ValueError):
    pass


@dataclass(frozen=True)
class LegendrePoly:
    """Normalized shifted Legendre polynomial in monomial form.

    ``coefficients[k]`` multiplies ``x**k``.
    """

    degree: int
    coefficients: tuple[float, ...]

    def __call__(self, x):
        return eval_poly(self, x)


def _shifted_monomial_table(n_max: int) -> list[np.ndarray]:
    # (n+1) Pt_{n+1} = (2n+1)(2x-1) Pt_n - n Pt_{n-1}, Pt unnormalized
    table = [np.array([1.0]), np.array([-1.0, 2.0])]
    for n in range(1, n_max):
        prev, cur = table[n - 1], table[n]
        nxt = np.zeros(n + 2)
        nxt[1:] += 2.0 * cur
        nxt[:-1] -= cur
        nxt *= 2 * n + 1
        nxt[: n] -= n * prev
        table.append(nxt / (n + 1))
    return table[: n_max + 1]


@lru_cache(maxsize=None)
def legendre(n: int) -> LegendrePoly:
    """Return ``P_n`` with monomial coefficients (lowest degree first)."""
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    if n > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {n} exceeds the supported cap {MAX_DEGREE}")
    coeffs = _shifted_monomial_table(max(n, 1))[n] * math.sqrt(2 * n + 1)
    return LegendrePoly(n, tuple(float(v) for v in coeffs))


def eval_poly(poly: LegendrePoly, x):
    """Horner evaluation of the stored monomial coefficients."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for coef in reversed(poly.coefficients):
        out = out * x + coef
    return out if out.ndim else float(out)


def legendre_values(n_max: int, x) -> np.ndarray:
    """Values of ``P_0 .. P_n_max`` at ``x`` via the recurrence.

    Returns an array of shape ``(n_max + 1,) + np.shape(x)``.  Unlike the
    monomial form this stays accurate at high degree, so it is what the
    coefficient and quadrature code use internally.
    """
    x = np.asarray(x, dtype=float)
    vals = np.empty((n_max + 1,) + x.shape)
    vals[0] = 1.0
    if n_max >= 1:
        vals[1] = 2.0 * x - 1.0
    for n in range(1, n_max):
        vals[n + 1] = ((2 * n + 1) * (2.0 * x - 1.0) * vals[n] - n * vals[n - 1]) / (n + 1)
    scale = np.sqrt(2.0 * np.arange(n_max + 1) + 1.0)
    return vals * scale.reshape((-1,) + (1,) * x.ndim)


def xi(n: int) -> float:
    """``1 / (2 sqrt(4 n^2 - 1))``, defined for ``n >= 1``."""
    if n < 1:
        raise ValueError(f"xi is defined for n >= 1, got {n}")
    return 1.0 / (2.0 * math.sqrt(4 * n * n - 1))


def integral_from_zero(n: int) -> np.ndarray:
    """Legendre coefficients of ``x -> int_0^x P_n(t) dt``.

    The result has length ``n + 2``; entry ``k`` multiplies ``P_k``.
    """
    if n < 0:
        raise ValueError(f"degree must be nonnegative, got {n}")
    out = np.zeros(n + 2)
    out[n + 1] = xi(n + 1)
    if n == 0:
        out[0] = 0.5
    else:
        out[n - 1] = -xi(n)
    return out


def integral_to_one(n: int) -> np.ndarray:
    """Legendre coefficients of ``x -> int_x^1 P_n(t) dt``."""
    out = -integral_from_zero(n)
    if n == 0:
        out[0] += 1.0
    return out


def series_eval(coef, x):
    """Evaluate ``sum_k coef[k] P_k(x)``."""
    coef = np.asarray(coef, dtype=float)
    vals = legendre_values(len(coef) - 1, x)
    out = np.tensordot(coef, vals, axes=1)
    return out if np.ndim(out) else float(out)
