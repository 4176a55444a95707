"""
Linear lumped networks and their semi-implicit Euler integration.

    M q'' + C q' + K q = -(K_u w + C_u w')

where w are prescribed input displacements. One substep is

    v <- v + h M^-1 (-K q - C v - F)
    q <- q + h v

Substeps are linear maps, so a whole output step is precomputed once:
x(k+1) = Phi x(k) + Ga u(k) + Gb u(k+1), with u = [w, w'] and the input
force interpolated linearly inside the step.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .core import DivergedSimulation, FitnessError

log = logging.getLogger(__name__)

# upper bounds on h * omega_max and h * c / m per substep
MAX_STEP_PHASE = 0.01


@dataclass
class LumpedNetwork:
    # diagonal of the mass matrix
    mass: np.ndarray
    K: np.ndarray
    C: np.ndarray
    # input couplings, n x m
    K_u: Optional[np.ndarray] = None
    C_u: Optional[np.ndarray] = None

    def __post_init__(self):
        n = len(self.mass)
        if np.any(self.mass <= 0):
            raise FitnessError("Masses must be positive")
        if self.K_u is None:
            self.K_u = np.zeros((n, 0))
        if self.C_u is None:
            self.C_u = np.zeros((n, self.K_u.shape[1]))
        if self.K.shape != (n, n) or self.C.shape != (n, n):
            raise FitnessError("Stiffness and damping matrices must be %d x %d" % (n, n))

    @property
    def n(self) -> int:
        return len(self.mass)

    @property
    def n_inputs(self) -> int:
        return self.K_u.shape[1]

    def forces(self, w: np.ndarray, wdot: np.ndarray) -> np.ndarray:
        return self.K_u @ w + self.C_u @ wdot

    def accelerations(self, q, v, w=None, wdot=None) -> np.ndarray:
        """q'' for states given as rows (or a single vector)"""
        q = np.atleast_2d(q)
        v = np.atleast_2d(v)
        f = q @ self.K.T + v @ self.C.T
        if self.n_inputs:
            f = f + np.atleast_2d(w) @ self.K_u.T + np.atleast_2d(wdot) @ self.C_u.T
        return -f / self.mass

    def energy(self, q, v) -> np.ndarray:
        """Kinetic plus elastic energy, inputs held at zero"""
        q = np.atleast_2d(q)
        v = np.atleast_2d(v)
        kinetic = 0.5 * np.sum(self.mass * v * v, axis=1)
        elastic = 0.5 * np.einsum("ti,ij,tj->t", q, self.K, q)
        return kinetic + elastic

    def substep_size(self, dt: float) -> Tuple[float, int]:
        """Largest h <= dt dividing dt and keeping the explicit parts stable"""
        # Gershgorin bounds of M^-1 K and M^-1 C
        omega2 = np.max(np.abs(self.K).sum(axis=1) / self.mass) if self.n else 0.0
        rate = np.max(np.abs(self.C).sum(axis=1) / self.mass) if self.n else 0.0
        h = dt
        if omega2 > 0:
            h = min(h, MAX_STEP_PHASE / math.sqrt(omega2))
        if rate > 0:
            h = min(h, MAX_STEP_PHASE / rate)
        steps = max(1, math.ceil(dt / h - 1e-9))
        return dt / steps, steps

    def substep_matrices(self, h: float):
        n = self.n
        I = np.eye(n)
        Minv = np.diag(1.0 / self.mass)
        damp = I - h * Minv @ self.C
        A = np.block([[I - h * h * Minv @ self.K, h * damp], [-h * Minv @ self.K, damp]])
        B = np.vstack([-h * h * Minv, -h * Minv])
        return A, B

    def step_operators(self, dt: float):
        """Phi, Ga, Gb of one output step"""
        h, s = self.substep_size(dt)
        A, B = self.substep_matrices(h)
        G = B @ np.hstack([self.K_u, self.C_u])
        power = np.eye(2 * self.n)
        Ga = np.zeros_like(G)
        Gb = np.zeros_like(G)
        # substep j contributes A^(s-1-j) G with weights (1 - j/s, j/s)
        for p in range(s):
            j = s - 1 - p
            term = power @ G
            Ga += (1.0 - j / s) * term
            Gb += (j / s) * term
            power = A @ power
        log.debug("%d substeps of %.3g s per output step", s, h)
        return power, Ga, Gb


def integrate(
    net: LumpedNetwork,
    dt: float,
    steps: int,
    w: Optional[np.ndarray] = None,
    wdot: Optional[np.ndarray] = None,
    q0: Optional[np.ndarray] = None,
    v0: Optional[np.ndarray] = None,
):
    """
    States at t = 0, dt, ..., steps * dt.
    w and wdot are input samples at the same times, shape (steps + 1, m).
    Returns (Q, V) with one row per sample.
    """
    if dt <= 0 or steps < 1:
        raise FitnessError("Time step and step count must be positive")
    n = net.n
    m = net.n_inputs
    if w is None:
        w = np.zeros((steps + 1, m))
    if wdot is None:
        wdot = np.zeros((steps + 1, m))
    if w.shape != (steps + 1, m) or wdot.shape != (steps + 1, m):
        raise FitnessError("Input samples must have shape (%d, %d)" % (steps + 1, m))
    phi, Ga, Gb = net.step_operators(dt)
    u = np.hstack([w, wdot])
    drive = u[:-1] @ Ga.T + u[1:] @ Gb.T
    X = np.zeros((steps + 1, 2 * n))
    X[0, :n] = 0 if q0 is None else q0
    X[0, n:] = 0 if v0 is None else v0
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(steps):
            X[k + 1] = phi @ X[k] + drive[k]
    if not np.all(np.isfinite(X)):
        raise DivergedSimulation("Non-finite state after %d steps" % steps)
    return X[:, :n], X[:, n:]
