"""Implicit (partitioned) Runge-Kutta stepping and diagnostics.

A partitioned tableau advances ``p`` with its first member and ``q`` with
its second (``swap=True`` exchanges the roles).  Stage equations are
solved by fixed-point iteration with a simplified-Newton fallback.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .problems import HamiltonianProblem, OdeProblem, structure_matrix
from .quadrature import gauss_rule
from .cscoeff import build_symplectic_rk
from .tableau import ButcherTableau, PartitionedTableau, retrieve_rk

STAGE_TOL = 1e-14
MAX_ITER = 100
FD_STEP = 1e-6

Method = Union[ButcherTableau, PartitionedTableau]
Problem = Union[OdeProblem, HamiltonianProblem]


class StepFailure(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


def _fd_jacobian(f, t, z, step=FD_STEP):
    n = z.size
    jac = np.empty((n, n))
    for k in range(n):
        dz = np.zeros(n)
        dz[k] = step
        jac[:, k] = (f(t, z + dz) - f(t, z - dz)) / (2 * step)
    return jac


class _Scheme:
    """Stage layout shared by RK (one matrix) and PRK (two matrices)."""

    def __init__(self, method: Method, n: int, split: int | None, swap: bool):
        if isinstance(method, PartitionedTableau):
            if split is None:
                raise TypeError("a partitioned tableau needs a Hamiltonian problem")
            a1, a2 = method.first.a, method.second.a
            if swap:
                a1, a2 = a2, a1
        else:
            a1 = a2 = method.a
            split = n
        self.a1, self.a2, self.split = a1, a2, split
        self.b, self.c = method.b, method.c
        self.r, self.n = method.stages, n
        # acts on stage derivatives flattened stage-major
        self.flat = self.stage_generator(np.eye(n))

    def combine(self, K: np.ndarray) -> np.ndarray:
        return (self.flat @ K.ravel()).reshape(K.shape)

    def stage_generator(self, L: np.ndarray) -> np.ndarray:
        """``G`` with ``Z = 1 (x) z0 + h G Z`` for the linear field ``z' = L z``."""
        s1 = np.zeros(self.n)
        s1[: self.split] = 1.0
        return np.kron(self.a1, s1[:, None] * L) + np.kron(self.a2, (1.0 - s1)[:, None] * L)


def _rhs(prob: Problem):
    return prob.rhs if isinstance(prob, HamiltonianProblem) else prob.f


def _solve(scheme: _Scheme, f, t0, z0, h, tol, max_iter, newton):
    times = (t0 + scheme.c * h)[:, None]
    scale = tol * max(1.0, float(np.abs(z0).max()))
    shape = (scheme.r, scheme.n)
    base = np.tile(z0, scheme.r)
    hmat = h * scheme.flat
    Z = base
    prev = np.inf
    diff = np.inf
    for it in range(1, max_iter + 1):
        Z_new = base + hmat @ f(times, Z.reshape(shape)).ravel()
        diff = float(np.abs(Z_new - Z).max())
        Z = Z_new
        if diff <= scale:
            return Z.reshape(shape), it, diff
        # roundoff floor: no further progress possible
        if diff >= prev and diff <= 100 * scale:
            return Z.reshape(shape), it, diff
        prev = diff
    if not newton:
        raise StepFailure(f"fixed-point stage iteration did not converge in {max_iter} iterations", diff)
    return _newton(scheme, f, times, t0, z0, h, scale, max_iter, diff)


def _newton(scheme, f, times, t0, z0, h, scale, max_iter, diff):
    jac = _fd_jacobian(lambda t, z: f(t, z), t0, z0)
    mat = np.eye(scheme.r * scheme.n) - h * scheme.stage_generator(jac)
    Z = np.tile(z0, (scheme.r, 1))
    for it in range(1, max_iter + 1):
        g = Z - z0 - h * scheme.combine(f(times, Z))
        delta = np.linalg.solve(mat, g.ravel()).reshape(Z.shape)
        Z = Z - delta
        diff = float(np.max(np.abs(delta)))
        if diff <= scale:
            return Z, max_iter + it, diff
    raise StepFailure("simplified Newton stage iteration did not converge", diff)


def _step(scheme, f, t0, z0, h, tol, max_iter, newton):
    z0 = np.asarray(z0, dtype=float)
    Z, iters, _ = _solve(scheme, f, t0, z0, h, tol, max_iter, newton)
    K = f((t0 + scheme.c * h)[:, None], Z)
    return z0 + h * (scheme.b @ K), iters


def rk_step(tab: ButcherTableau, prob: Problem, t0: float, z0, h: float, *,
            tol: float = STAGE_TOL, max_iter: int = MAX_ITER, newton: bool = True):
    """One step of the RK method; returns ``(z1, stage_iterations)``."""
    z0 = np.asarray(z0, dtype=float)
    scheme = _Scheme(tab, z0.size, None, False)
    return _step(scheme, _rhs(prob), t0, z0, h, tol, max_iter, newton)


def prk_step(pt: PartitionedTableau, prob: HamiltonianProblem, t0: float, z0, h: float, *,
             swap: bool = False, tol: float = STAGE_TOL, max_iter: int = MAX_ITER, newton: bool = True):
    """One step of the PRK method on the state ``z0 = (p0, q0)``.

    Returns ``(z1, stage_iterations)`` with ``z1 = (p1, q1)``.
    """
    if not isinstance(prob, HamiltonianProblem):
        raise TypeError("prk_step needs a HamiltonianProblem")
    z0 = np.asarray(z0, dtype=float)
    scheme = _Scheme(pt, z0.size, prob.dof, swap)
    return _step(scheme, prob.rhs, t0, z0, h, tol, max_iter, newton)


def _scheme_for(method: Method, prob: Problem, swap: bool) -> _Scheme:
    split = prob.dof if isinstance(prob, HamiltonianProblem) else None
    return _Scheme(method, prob.dim, split, swap)


def step(method: Method, prob: Problem, t0, z0, h, *, swap=False, **kwargs):
    if isinstance(method, PartitionedTableau):
        return prk_step(method, prob, t0, z0, h, swap=swap, **kwargs)
    return rk_step(method, prob, t0, z0, h, **kwargs)


# -- trajectories ------------------------------------------------------------


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    energy: np.ndarray | None
    iterations: np.ndarray
    labels: tuple = ()

    def to_csv(self, fh=None) -> str | None:
        """Write columns ``t, state..., H, iters``; returns the text if no handle given."""
        out = fh if fh is not None else io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        labels = self.labels or tuple(f"z{k}" for k in range(self.states.shape[1]))
        writer.writerow(["t", *labels, "H", "iters"])
        energy = self.energy if self.energy is not None else np.full(len(self.times), np.nan)
        for t, z, e, it in zip(self.times, self.states, energy, self.iterations):
            writer.writerow([repr(float(t)), *(repr(float(v)) for v in z), repr(float(e)), int(it)])
        return out.getvalue() if fh is None else None


def integrate(method: Method, prob: Problem, t0: float, z0, h: float, n_steps: int, *,
              swap: bool = False, tol: float = STAGE_TOL, max_iter: int = MAX_ITER,
              newton: bool = True) -> Trajectory:
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if isinstance(method, PartitionedTableau) and not isinstance(prob, HamiltonianProblem):
        raise TypeError("a partitioned tableau needs a Hamiltonian problem")
    z = np.asarray(z0, dtype=float)
    if z.shape != (prob.dim,):
        raise ValueError(f"initial state must have shape ({prob.dim},), got {z.shape}")
    scheme = _scheme_for(method, prob, swap)
    f = _rhs(prob)
    states = np.empty((n_steps + 1, prob.dim))
    iters = np.zeros(n_steps + 1, dtype=int)
    states[0] = z
    for k in range(n_steps):
        z, iters[k + 1] = _step(scheme, f, t0 + k * h, z, h, tol, max_iter, newton)
        states[k + 1] = z
    times = t0 + h * np.arange(n_steps + 1)
    energy = prob.energy(states) if prob.energy is not None else None
    labels = prob.as_ode().labels if isinstance(prob, HamiltonianProblem) else prob.labels
    return Trajectory(times, states, energy, iters, labels)


# -- diagnostics -----------------------------------------------------------


def reference_method() -> ButcherTableau:
    """Two-stage Gauss method used for reference solutions."""
    return retrieve_rk(build_symplectic_rk(2), gauss_rule(2))


def _steps_for(t_final: float, h: float) -> int:
    n = int(round(t_final / h))
    if n < 1 or abs(n * h - t_final) > 1e-9 * max(1.0, t_final):
        raise ValueError(f"t_final={t_final} is not an integer multiple of h={h}")
    return n


def convergence_errors(method: Method, prob: Problem, z0, t_final: float, h_list, *,
                       swap: bool = False, reference=None) -> np.ndarray:
    """Max-norm errors at ``t_final`` for each step size.

    The reference is the exact flow when the problem has one, otherwise a
    two-stage Gauss run at a step a hundred times smaller than ``min(h_list)``.
    """
    z0 = np.asarray(z0, dtype=float)
    h_list = [float(h) for h in h_list]
    if reference is None:
        if prob.exact_flow is not None:
            reference = prob.exact_flow(t_final, z0)
        else:
            h_ref = min(h_list) / 100
            reference = integrate(reference_method(), prob, 0.0, z0, h_ref,
                                  _steps_for(t_final, h_ref)).states[-1]
    errors = []
    for h in h_list:
        final = integrate(method, prob, 0.0, z0, h, _steps_for(t_final, h), swap=swap).states[-1]
        errors.append(float(np.max(np.abs(final - reference))))
    return np.array(errors)


def fit_slope(h_list, errors) -> float:
    return float(np.polyfit(np.log(h_list), np.log(errors), 1)[0])


def empirical_order(method: Method, prob: Problem, z0, t_final: float, h_list, *,
                    swap: bool = False, reference=None) -> float:
    """Least-squares slope of ``log(error)`` against ``log(h)``."""
    if len(h_list) < 4:
        raise ValueError("need at least four step sizes")
    ratios = np.array(h_list[1:]) / np.array(h_list[:-1])
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise ValueError("step sizes must form a geometric progression")
    errors = convergence_errors(method, prob, z0, t_final, h_list, swap=swap, reference=reference)
    if np.any(errors <= 1e2 * np.finfo(float).eps):
        raise ValueError("errors have reached roundoff; use larger step sizes")
    return fit_slope(h_list, errors)


def linear_step_matrix(method: Method, prob: HamiltonianProblem, h: float, *, swap: bool = False) -> np.ndarray:
    """Exact one-step matrix for a quadratic Hamiltonian."""
    L = prob.linear_generator()
    scheme = _scheme_for(method, prob, swap)
    n, r = prob.dim, scheme.r
    G = scheme.stage_generator(L)
    stages = np.linalg.solve(np.eye(r * n) - h * G, np.kron(np.ones((r, 1)), np.eye(n)))
    return np.eye(n) + h * np.kron(scheme.b[None, :], L) @ stages


def step_jacobian(method: Method, prob: HamiltonianProblem, z0, h: float, *,
                  swap: bool = False, fd_step: float = FD_STEP) -> np.ndarray:
    """Central finite-difference Jacobian of the one-step map at ``z0``."""
    z0 = np.asarray(z0, dtype=float)
    jac = np.empty((z0.size, z0.size))
    for k in range(z0.size):
        dz = np.zeros(z0.size)
        dz[k] = fd_step
        plus, _ = step(method, prob, 0.0, z0 + dz, h, swap=swap)
        minus, _ = step(method, prob, 0.0, z0 - dz, h, swap=swap)
        jac[:, k] = (plus - minus) / (2 * fd_step)
    return jac


def jacobian_symplecticity(method: Method, prob: HamiltonianProblem, z0, h: float, *,
                           exact_linear: bool | None = None, swap: bool = False) -> float:
    """``max |M^T J M - J|`` for the Jacobian ``M`` of the one-step map.

    ``exact_linear`` defaults to true when the problem carries a constant
    Hessian.
    """
    if not isinstance(prob, HamiltonianProblem):
        raise TypeError("symplecticity is defined for Hamiltonian problems")
    if exact_linear is None:
        exact_linear = prob.hessian is not None
    if exact_linear:
        M = linear_step_matrix(method, prob, h, swap=swap)
    else:
        M = step_jacobian(method, prob, z0, h, swap=swap)
    J = structure_matrix(prob.dof)
    return float(np.max(np.abs(M.T @ J @ M - J)))


def energy_drift(traj: Trajectory) -> tuple[float, float, float]:
    """Max energy deviation overall and over the first/second half of the run."""
    if traj.energy is None:
        raise ValueError("trajectory has no energy channel")
    dev = np.abs(traj.energy - traj.energy[0])
    half = (len(dev) - 1) // 2 + 1
    first = float(np.max(dev[1:half])) if half > 1 else 0.0
    second = float(np.max(dev[half:])) if len(dev) > half else 0.0
    return float(np.max(dev)), first, second


def convergence_summary(h_list, errors) -> str:
    return json.dumps({"h": [float(h) for h in h_list], "error": [float(e) for e in errors],
                       "slope": fit_slope(h_list, errors)})
