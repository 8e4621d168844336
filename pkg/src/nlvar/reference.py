"""Closed-form reference profiles and constants used as oracles and overlays.

Covers the exponential solution of the local quadratic-plus-mass problem,
the second-order-ODE approximation of the homogeneous quadratic optimality
equation (derivative k x^{2x} (1-x)^{2(1-x)} with its normalization), and
the Hoelder exponent guaranteeing end-point conditions for p > 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .grid import Grid1D

__all__ = [
    "ReferenceProfile",
    "local_exp_solution",
    "ode_approx_derivative",
    "normalize_k",
    "ode_approx_profile",
    "holder_exponent",
]

_QUAD_EPSABS = 1e-10  # per-call absolute tolerance; well inside the 1e-8 contract


@dataclass(frozen=True)
class ReferenceProfile:
    name: str
    u: Callable[[np.ndarray], np.ndarray]
    u_prime: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: dict = field(default_factory=dict)


def local_exp_solution(x):
    """Solution e^4/(e^8 - 1) (e^{4x} - e^{-4x}) of the local
    quadratic-plus-mass problem with u(0)=0, u(1)=1."""
    x = np.asarray(x, dtype=float)
    c = np.exp(4.0) / (np.exp(8.0) - 1.0)
    out = c * (np.exp(4.0 * x) - np.exp(-4.0 * x))
    return float(out) if out.ndim == 0 else out


def _shape(x: np.ndarray) -> np.ndarray:
    """x^{2x} (1-x)^{2(1-x)} via exponentials, with limit value 1 at 0 and 1."""
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    inside = (x > 0.0) & (x < 1.0)
    xi = x[inside]
    out[inside] = np.exp(2.0 * xi * np.log(xi) + 2.0 * (1.0 - xi) * np.log(1.0 - xi))
    return out


def ode_approx_derivative(x, k: float):
    """Approximate optimal derivative k x^{2x} (1-x)^{2(1-x)}, extended
    continuously by the value k at the end points."""
    if k <= 0:
        raise ValueError(f"scale constant must be positive, got {k}")
    x = np.asarray(x, dtype=float)
    out = k * _shape(np.atleast_1d(x))
    return float(out[0]) if x.ndim == 0 else out


def normalize_k() -> float:
    """Constant k with 1/k = int_0^1 x^{2x} (1-x)^{2(1-x)} dx, so that the
    approximate derivative integrates to 1."""
    total, _ = quad(lambda t: float(_shape(np.atleast_1d(t))[0]), 0.0, 1.0,
                    epsabs=_QUAD_EPSABS, limit=200)
    return 1.0 / total


def ode_approx_profile(grid: Grid1D, k: Optional[float] = None) -> ReferenceProfile:
    """Antiderivative of the approximate optimal derivative on the grid nodes.

    With the normalized k the profile runs from u(0)=0 to u(1)=1 (up to the
    quadrature tolerance) and respects the reflection identity
    u(x) + u(1-x) = 1.
    """
    if k is None:
        k = normalize_k()
    elif k <= 0:
        raise ValueError(f"scale constant must be positive, got {k}")
    increments = np.empty(grid.n)
    f = lambda t: float(_shape(np.atleast_1d(t))[0])
    for i in range(grid.n):
        val, _ = quad(f, grid.nodes[i], grid.nodes[i + 1],
                      epsabs=_QUAD_EPSABS, limit=200)
        increments[i] = k * val
    nodal = np.concatenate([[0.0], np.cumsum(increments)])

    def u_of(x):
        x = np.asarray(x, dtype=float)
        out = np.interp(x, grid.nodes, nodal)
        return float(out) if out.ndim == 0 else out

    return ReferenceProfile(
        name="ode-approx",
        u=u_of,
        u_prime=lambda x: ode_approx_derivative(x, k),
        params={"k": k, "nodal": nodal},
    )


def holder_exponent(p: float) -> float:
    """Continuity exponent (p - 2)/p of finite-energy functions; defined only
    for p > 2, where end-point conditions are meaningful."""
    if p <= 2:
        raise ValueError(f"Hoelder exponent requires p > 2, got {p}")
    return (p - 2.0) / p
