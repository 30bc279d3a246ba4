"""Total-degree homotopy continuation for small square polynomial systems.

The target system is given as a sparse sum of square-free monomials
(``masks``) with one coefficient row per equation.  Equation ``m`` is paired
with variable ``m`` in the start system ``y_m**d_m - 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


class PathFailure(RuntimeError):
    pass


@dataclass
class MonomialSystem:
    masks: np.ndarray   # (n_monomials, n_vars) bool
    coeffs: np.ndarray  # (n_eqs, n_monomials) complex

    @property
    def n_vars(self) -> int:
        return self.masks.shape[1]

    def degrees(self) -> list[int]:
        size = self.masks.sum(axis=1)
        return [int(size[np.abs(row) > 0].max()) for row in self.coeffs]

    def evaluate(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        P = np.where(self.masks, y, 1.0)
        val = self.coeffs @ P.prod(axis=1)
        jac = np.empty((self.coeffs.shape[0], self.n_vars), dtype=complex)
        for j in range(self.n_vars):
            Pj = P.copy()
            Pj[:, j] = 1.0
            jac[:, j] = self.coeffs @ (self.masks[:, j] * Pj.prod(axis=1))
        return val, jac


def start_solutions(degrees: list[int]) -> list[np.ndarray]:
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    return [np.array(p, dtype=complex) for p in itertools.product(*roots)]


class Tracker:
    """Predictor (RK4) / corrector (Newton) path tracker with adaptive steps."""

    def __init__(self, target: MonomialSystem, gamma: complex, tol: float = 1e-10,
                 min_step: float = 1e-9, max_steps: int = 20000):
        self.target = target
        self.degrees = np.array(target.degrees())
        self.gamma = gamma
        self.tol = tol
        self.min_step = min_step
        self.max_steps = max_steps

    def _start(self, y):
        d = self.degrees
        return y ** d - 1.0, np.diag(d * y ** (d - 1))

    def _H(self, y, t):
        f, jf = self.target.evaluate(y)
        g, jg = self._start(y)
        g = self.gamma * g
        jg = self.gamma * jg
        return (1 - t) * g + t * f, (1 - t) * jg + t * jf, f - g

    def _velocity(self, y, t):
        _, hy, ht = self._H(y, t)
        return -np.linalg.solve(hy, ht)

    def _correct(self, y, t, iters=3):
        for _ in range(iters):
            h, hy, _ = self._H(y, t)
            dy = np.linalg.solve(hy, -h)
            y = y + dy
            if np.linalg.norm(dy) <= self.tol * (1 + np.linalg.norm(y)):
                return y, True
        return y, False

    def track(self, y0: np.ndarray) -> np.ndarray:
        y, t, dt = y0.astype(complex), 0.0, 0.02
        streak = 0
        for _ in range(self.max_steps):
            if t >= 1.0:
                break
            dt = min(dt, 1.0 - t)
            try:
                k1 = self._velocity(y, t)
                k2 = self._velocity(y + dt / 2 * k1, t + dt / 2)
                k3 = self._velocity(y + dt / 2 * k2, t + dt / 2)
                k4 = self._velocity(y + dt * k3, t + dt)
                pred = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
                new, ok = self._correct(pred, t + dt)
                ok = ok and np.linalg.norm(new - pred) <= 0.1 * (1 + np.linalg.norm(y))
            except np.linalg.LinAlgError:
                ok = False
            if ok and np.all(np.isfinite(new)):
                y, t = new, t + dt
                streak += 1
                if streak >= 3:
                    dt *= 2.0
                    streak = 0
            else:
                dt /= 2.0
                streak = 0
                if dt < self.min_step:
                    raise PathFailure(f"step size underflow at t={t:.6g}")
        else:
            raise PathFailure("too many steps")
        return newton(self.target, y)


def newton(system: MonomialSystem, y: np.ndarray, iters: int = 20, tol: float = 1e-15) -> np.ndarray:
    for _ in range(iters):
        f, jf = system.evaluate(y)
        dy = np.linalg.solve(jf, -f)
        y = y + dy
        if np.linalg.norm(dy) <= tol * (1 + np.linalg.norm(y)):
            break
    return y
