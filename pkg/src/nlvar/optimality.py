"""Optimality residuals for the non-local variational integral equation.

A stationary u satisfies, for a.e. x in (0, 1),

    R(x) = int_0^1 [ -Ndiv W_U(x, u(x), D(x, X)) + W_u(x, u(x), D(x, X)) ] dX = 0,

where Ndiv F(x, X) = (F(x, X) + F(X, x)) / (X - x). The 1/(X - x)
singularity is handled in a principal-value sense: residuals are evaluated
at interior grid nodes while quadrature abscissae are cell midpoints (so x
never hits an abscissa), and contributions from midpoints symmetric about x
are summed as pairs before accumulation; cells beyond the largest symmetric
whole-cell window accumulate singly.

The two-well Bolza integral equation
u(x)/2 = int (u(X)-u(x))/(X-x)^2 [((u(X)-u(x))/(X-x))^2 - 1] dX is this
residual with the two-well density including the mass term; it needs no
separate entry point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import NodalFunction
from .integrands import Integrand

__all__ = [
    "ResidualReport",
    "ndiv",
    "pv_log",
    "residual",
    "residual_report",
    "check_inteqo",
    "kernel_K",
]


def ndiv(F: Callable[[float, float], float], x: float, X: float) -> float:
    """Non-local divergence (F(x, X) + F(X, x)) / (X - x); x != X required."""
    if X == x:
        raise ZeroDivisionError("non-local divergence is singular at X = x")
    return (F(x, X) + F(X, x)) / (X - x)


def pv_log(x: float) -> float:
    """Principal value of int_0^1 dX / (X - x), equal to log((1-x)/x)."""
    if not 0.0 < x < 1.0:
        raise ValueError(f"principal value needs x strictly inside (0, 1), got {x}")
    return float(np.log((1.0 - x) / x))


def kernel_K(x: float, X: float) -> float:
    """Kernel x(1-x)/(X-x) + 1_{(0,x)}(X) of the integrated quadratic
    optimality equation int K(x, X) u'(X) dX = x."""
    if not 0.0 < x < 1.0 or not 0.0 < X < 1.0:
        raise ValueError("kernel arguments must lie strictly inside (0, 1)")
    if X == x:
        raise ZeroDivisionError("kernel is singular at X = x")
    return x * (1.0 - x) / (X - x) + (1.0 if X < x else 0.0)


def _node_index(u: NodalFunction, x: float) -> int:
    g = u.grid
    k = int(round(x / g.h))
    if not 1 <= k <= g.n - 1 or abs(k * g.h - x) > 4 * np.finfo(float).eps:
        raise ValueError(f"x={x} is not an interior node of the n={g.n} grid")
    return k


def _paired_sum(terms: np.ndarray, k: int) -> float:
    """Accumulate per-cell terms with symmetric pairing around node k.

    Midpoints m_{k-1-r} and m_{k+r} sit at equal distances (r + 1/2) h from
    x_k; their contributions are added pairwise first, realizing the
    principal value discretely. Cells outside the symmetric window sum
    singly.
    """
    n = terms.size
    w = min(k, n - k)
    pairs = terms[k - w:k][::-1] + terms[k:k + w]
    singles = terms[:k - w] if k > n - k else terms[k + w:]
    return float(pairs.sum() + singles.sum())


def _residual_terms(u: NodalFunction, integrand: Integrand, k: int) -> np.ndarray:
    g = u.grid
    m = g.midpoints
    x = g.nodes[k]
    ux = u.values[k]
    um = u.midpoint_values
    dX = m - x
    D = (um - ux) / dX
    wU_here = integrand.w_U(np.full_like(m, x), np.full_like(m, ux), D)
    wU_there = integrand.w_U(m, um, D)
    wu_here = integrand.w_u(np.full_like(m, x), np.full_like(m, ux), D)
    return g.h * (-(wU_here + wU_there) / dX + wu_here)


def residual(u: NodalFunction, integrand: Integrand, x: float) -> float:
    """Optimality residual R(x) at an interior grid node x."""
    k = _node_index(u, x)
    return _paired_sum(_residual_terms(u, integrand, k), k)


@dataclass(frozen=True)
class ResidualReport:
    """Residual values at all interior nodes plus aggregate norms.

    The raw vector and norm_l2 = sqrt(h * sum R^2) cover every interior
    node. norm_sup by default drops the two boundary-adjacent nodes (x_1 and
    x_{n-1}), whose degenerate pairing window carries an O(1) one-sided
    quadrature bias. norm_l2_central covers the central band of nodes whose
    symmetric window spans at least half the domain (min(k, n-k) >= n/4); it
    is the norm in which discrete stationarity is actually visible for
    minimizers with end-point layers.
    """

    x_points: np.ndarray
    residuals: np.ndarray
    norm_l2: float
    norm_sup: float
    norm_l2_central: float
    boundary_excluded: bool = True


def _make_report(x_points, residuals, h, exclude_boundary):
    n = residuals.size + 1
    sup_set = residuals[1:-1] if exclude_boundary and residuals.size > 2 else residuals
    lo = max(n // 4, 1)
    central = residuals[lo - 1:(n - lo)]
    return ResidualReport(
        x_points=x_points,
        residuals=residuals,
        norm_l2=float(np.sqrt(h * np.sum(residuals**2))),
        norm_sup=float(np.max(np.abs(sup_set))) if sup_set.size else 0.0,
        norm_l2_central=float(np.sqrt(h * np.sum(central**2))),
        boundary_excluded=exclude_boundary,
    )


def residual_report(
    u: NodalFunction, integrand: Integrand, exclude_boundary: bool = True
) -> ResidualReport:
    """Residual at every interior node plus l2 and sup norms."""
    g = u.grid
    xs = g.nodes[1:-1]
    vals = np.array(
        [_paired_sum(_residual_terms(u, integrand, k), k) for k in range(1, g.n)]
    )
    return _make_report(xs, vals, g.h, exclude_boundary)


def check_inteqo(u: NodalFunction, exclude_boundary: bool = True) -> ResidualReport:
    """Specialized quadratic-case residual int (u(X) - u(x)) / (X - x)^2 dX.

    For the half-square density this equals -1/2 times the general residual,
    an algebraic identity independent of u.
    """
    g = u.grid
    m = g.midpoints
    um = u.midpoint_values
    xs = g.nodes[1:-1]
    vals = np.empty(g.n - 1)
    for k in range(1, g.n):
        dX = m - g.nodes[k]
        terms = g.h * (um - u.values[k]) / dX**2
        vals[k - 1] = _paired_sum(terms, k)
    return _make_report(xs, vals, g.h, exclude_boundary)
