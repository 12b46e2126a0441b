"""Independent reference computations used to freeze expected values.

Nothing here imports the construction code paths it is used to check.
"""

from fractions import Fraction
from math import comb, factorial, sqrt

import numpy as np


def rodrigues_coefficients(n):
    """Exact monomial coefficients of d^n/dx^n [x^n (x-1)^n] / n!, as Fractions.

    The sqrt(2n+1) normalization is applied by the caller.
    """
    # x^n (x-1)^n = sum_k C(n,k) (-1)^(n-k) x^(n+k)
    prod = {n + k: comb(n, k) * (-1) ** (n - k) for k in range(n + 1)}
    out = [Fraction(0)] * (n + 1)
    for power, coef in prod.items():
        new_power = power - n
        if new_power >= 0:
            out[new_power] += Fraction(coef * factorial(power), factorial(new_power) * factorial(n))
    return out


def gauss_legendre_01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1) / 2, w / 2


def integrate_01(func, n=40):
    x, w = gauss_legendre_01(n)
    return w @ func(x)


def moment_weights(nodes):
    """Weights making the rule exact for polynomials of degree < len(nodes)."""
    nodes = np.asarray(nodes, dtype=float)
    k = np.arange(len(nodes))
    vander = nodes[None, :] ** k[:, None]
    return np.linalg.solve(vander, 1.0 / (k + 1))


def radau_left_nodes(r):
    # roots of P_{r-1} + P_r on [-1, 1], mapped to [0, 1]
    coef = np.zeros(r + 1)
    coef[r - 1] = coef[r] = 1.0
    return np.sort((np.polynomial.legendre.legroots(coef).real + 1) / 2)


def lobatto_nodes(r):
    coef = np.zeros(r)
    coef[r - 1] = 1.0
    interior = np.polynomial.legendre.legroots(np.polynomial.legendre.legder(coef)).real
    return np.concatenate([[0.0], np.sort((interior + 1) / 2), [1.0]])


def collocation_matrix(c):
    """a with sum_j a_ij c_j^(k-1) = c_i^k / k for k = 1..r (condition C(r))."""
    c = np.asarray(c, dtype=float)
    r = len(c)
    k = np.arange(1, r + 1)
    vander = c[None, :] ** (k[:, None] - 1)  # (k, j)
    rhs = c[:, None] ** k[None, :] / k[None, :]  # (i, k)
    return np.linalg.solve(vander, rhs.T).T


def d_condition_matrix(b, c):
    """a with sum_i b_i c_i^(k-1) a_ij = b_j (1 - c_j^k) / k for k = 1..r (condition D(r))."""
    b, c = np.asarray(b, dtype=float), np.asarray(c, dtype=float)
    r = len(c)
    k = np.arange(1, r + 1)
    lhs = (b[None, :] * c[None, :] ** (k[:, None] - 1))  # (k, i)
    rhs = b[None, :] * (1 - c[None, :] ** k[:, None]) / k[:, None]  # (k, j)
    return np.linalg.solve(lhs, rhs)


GAUSS2_C = np.array([0.5 - sqrt(3) / 6, 0.5 + sqrt(3) / 6])
GAUSS2_A = np.array([[0.25, 0.25 - sqrt(3) / 6], [0.25 + sqrt(3) / 6, 0.25]])


def verlet_like_step(p0, q0, h):
    """Lobatto IIIA (p) / IIIB (q) two-stage pair on H = (p^2 + q^2)/2, solved by hand.

    Stages: Q1 = Q2 = q0 + h p0 / 2; p1 = p0 - h Q; q1 = Q + h p1 / 2.
    """
    q_half = q0 + 0.5 * h * p0
    p1 = p0 - h * q_half
    return p1, q_half + 0.5 * h * p1
