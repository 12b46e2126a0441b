"""ODE and Hamiltonian test problems.

States of a Hamiltonian problem are the concatenation ``z = (p, q)`` with
``p' = -grad_q H`` and ``q' = grad_p H``, i.e. ``z' = J grad H`` with the
structure matrix ``J = [[0, -I], [I, 0]]``.  All right-hand sides
broadcast over leading axes so that every stage is evaluated at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class OdeProblem:
    f: Callable  # f(t, z) -> z', vectorized over leading axes
    dim: int
    exact_flow: Optional[Callable] = None  # exact_flow(t, z0) for autonomous problems
    energy: Optional[Callable] = None
    name: str = "ode"
    labels: tuple = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"z{k}" for k in range(self.dim)))


@dataclass(frozen=True)
class HamiltonianProblem:
    dof: int
    hamiltonian: Callable  # H(p, q)
    grad_p: Callable
    grad_q: Callable
    hessian: Optional[np.ndarray] = None  # constant Hessian in (p, q) order when H is quadratic
    exact_flow: Optional[Callable] = None
    initial_state: Optional[np.ndarray] = field(default=None, compare=False)
    name: str = "hamiltonian"

    def __post_init__(self):
        if self.dof < 1:
            raise ValueError("a Hamiltonian problem needs at least one degree of freedom")

    @property
    def dim(self) -> int:
        return 2 * self.dof

    def split(self, z):
        z = np.asarray(z, dtype=float)
        return z[..., : self.dof], z[..., self.dof :]

    def rhs(self, t, z):
        p, q = self.split(z)
        return np.concatenate([-self.grad_q(p, q), self.grad_p(p, q)], axis=-1)

    def energy(self, z):
        p, q = self.split(z)
        return self.hamiltonian(p, q)

    def linear_generator(self) -> np.ndarray:
        """``J @ Hessian`` for quadratic ``H``."""
        if self.hessian is None:
            raise ValueError(f"{self.name}: Hamiltonian is not marked quadratic")
        d = self.dof
        structure = np.block([[np.zeros((d, d)), -np.eye(d)], [np.eye(d), np.zeros((d, d))]])
        return structure @ np.asarray(self.hessian, dtype=float)

    def as_ode(self) -> OdeProblem:
        labels = tuple(f"p{k}" for k in range(self.dof)) + tuple(f"q{k}" for k in range(self.dof))
        return OdeProblem(self.rhs, self.dim, self.exact_flow, self.energy, self.name, labels)


def structure_matrix(dof: int) -> np.ndarray:
    z = np.zeros((dof, dof))
    return np.block([[z, -np.eye(dof)], [np.eye(dof), z]])


def _harmonic_flow(t, z0):
    p0, q0 = z0
    ct, st = np.cos(t), np.sin(t)
    return np.array([p0 * ct - q0 * st, q0 * ct + p0 * st])


def harmonic_oscillator() -> HamiltonianProblem:
    """``H = (p^2 + q^2) / 2``."""
    return HamiltonianProblem(
        dof=1,
        hamiltonian=lambda p, q: 0.5 * (p[..., 0] ** 2 + q[..., 0] ** 2),
        grad_p=lambda p, q: p,
        grad_q=lambda p, q: q,
        hessian=np.eye(2),
        exact_flow=_harmonic_flow,
        initial_state=np.array([1.0, 0.0]),
        name="harmonic",
    )


def pendulum() -> HamiltonianProblem:
    """``H = p^2 / 2 - cos q``."""
    return HamiltonianProblem(
        dof=1,
        hamiltonian=lambda p, q: 0.5 * p[..., 0] ** 2 - np.cos(q[..., 0]),
        grad_p=lambda p, q: p,
        grad_q=lambda p, q: np.sin(q),
        initial_state=np.array([0.0, 1.0]),
        name="pendulum",
    )


def kepler(eccentricity: float = 0.6) -> HamiltonianProblem:
    """``H = |p|^2 / 2 - 1 / |q|`` started at pericentre of an orbit with the given eccentricity."""
    e = eccentricity
    if not 0.0 <= e < 1.0:
        raise ValueError("eccentricity must lie in [0, 1)")

    def grad_q(p, q):
        r = np.sqrt(np.sum(q * q, axis=-1, keepdims=True))
        return q / r**3

    return HamiltonianProblem(
        dof=2,
        hamiltonian=lambda p, q: 0.5 * np.sum(p * p, axis=-1) - 1.0 / np.sqrt(np.sum(q * q, axis=-1)),
        grad_p=lambda p, q: p,
        grad_q=grad_q,
        initial_state=np.array([0.0, np.sqrt((1 + e) / (1 - e)), 1.0 - e, 0.0]),
        name="kepler",
    )


def constant_hamiltonian(dof: int = 1) -> HamiltonianProblem:
    """``H = 0``: every state is an equilibrium."""
    return HamiltonianProblem(
        dof=dof,
        hamiltonian=lambda p, q: np.zeros(np.shape(p)[:-1]),
        grad_p=lambda p, q: np.zeros_like(p),
        grad_q=lambda p, q: np.zeros_like(q),
        hessian=np.zeros((2 * dof, 2 * dof)),
        exact_flow=lambda t, z0: np.asarray(z0, dtype=float).copy(),
        initial_state=np.ones(2 * dof),
        name="constant",
    )


PROBLEMS = {
    "harmonic": harmonic_oscillator,
    "pendulum": pendulum,
    "kepler": kepler,
}


def get_problem(name: str) -> HamiltonianProblem:
    try:
        return PROBLEMS[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
