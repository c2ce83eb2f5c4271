"""Logistic growth: the continuum ODE versus its finite-difference family.

The map N_{n+1} = mu (1 - N_n/kappa) N_n with mu = 1 + r*dt and
kappa = (1 + r*dt) K / (r*dt) shares the fixed points {0, K} with the ODE
dN/dt = r (1 - N/K) N, but develops period-doubling and chaos at large
step sizes where the ODE stays monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DynamicsError(ValueError):
    """Raised on invalid growth parameters."""


@dataclass(frozen=True)
class LogisticParams:
    r: float
    K: float
    dt: float

    def __post_init__(self):
        if self.r <= 0 or self.K <= 0 or self.dt <= 0:
            raise DynamicsError("r, K, dt must all be positive")

    @property
    def mu(self) -> float:
        return 1.0 + self.r * self.dt

    @property
    def kappa(self) -> float:
        return (1.0 + self.r * self.dt) * self.K / (self.r * self.dt)


def ode_solution(p: LogisticParams, n0: float, t: float) -> float:
    """Closed-form logistic solution N(t) = K N0 e^{rt} / (K + N0(e^{rt}-1))."""
    if n0 < 0:
        raise DynamicsError("population must be nonnegative")
    if n0 == 0.0:
        return 0.0
    e = math.exp(p.r * t)
    return p.K * n0 * e / (p.K + n0 * (e - 1.0))


def map_step(mu: float, kappa: float, n: float) -> float:
    return mu * (1.0 - n / kappa) * n


def map_orbit(mu: float, kappa: float, n0: float, steps: int) -> np.ndarray:
    """Exact iteration of the finite-difference map, n0 included."""
    if steps < 0:
        raise DynamicsError("steps must be nonnegative")
    orbit = np.empty(steps + 1)
    orbit[0] = n0
    for i in range(steps):
        orbit[i + 1] = map_step(mu, kappa, orbit[i])
    return orbit


def map_fixed_points(mu: float, kappa: float) -> tuple[float, float]:
    """The extinction and steady-state fixed points of the map."""
    return 0.0, kappa * (1.0 - 1.0 / mu)


@dataclass
class CycleReport:
    kind: str            # fixed | period-k | aperiodic-within-window
    period: int | None


def detect_cycle(
    orbit: np.ndarray,
    tol: float = 1e-9,
    transient: int = 256,
    window: int = 1024,
) -> CycleReport:
    """Smallest period k with |N(n+k) - N(n)| < tol over the orbit tail.

    The first `transient` points are discarded; candidate periods run up to
    a quarter of the analysis window.
    """
    tail = np.asarray(orbit, dtype=float)[transient:]
    if tail.size > window:
        tail = tail[-window:]
    if tail.size < 8:
        raise DynamicsError("orbit too short after transient discard")
    max_period = tail.size // 4
    for k in range(1, max_period + 1):
        if np.all(np.abs(tail[k:] - tail[:-k]) < tol):
            return CycleReport("fixed" if k == 1 else f"period-{k}", k)
    return CycleReport("aperiodic-within-window", None)


def bifurcation_scan(
    mu_values: np.ndarray,
    kappa: float = 1.0,
    n0: float = 0.5,
    transient: int = 512,
    keep: int = 64,
) -> list[tuple[float, np.ndarray]]:
    """Tail orbit values per mu, for bifurcation-diagram export."""
    out = []
    for mu in mu_values:
        orbit = map_orbit(float(mu), kappa, n0, transient + keep)
        out.append((float(mu), orbit[-keep:]))
    return out
