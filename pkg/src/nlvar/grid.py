"""Uniform 1-D grids and piecewise-linear nodal functions on (0, 1).

The domain is always the unit interval. Functions are represented by their
values at the n+1 nodes of a uniform partition and interpolated linearly in
between; the non-local difference quotient (u(X) - u(x)) / (X - x) is exact
for this representation and reduces to the cell slope on the diagonal X = x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "GridError",
    "Grid1D",
    "NodalFunction",
    "make_uniform_grid",
    "difference_quotient",
]

# relative half-width (in units of h) below which |t - s| counts as diagonal
DIAGONAL_TOL = 1e-9


class GridError(ValueError):
    """Invalid grid construction or out-of-domain evaluation."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform partition of (0, 1) into n cells.

    Attributes
    ----------
    n : int
        Number of cells (>= 2).
    h : float
        Cell width, 1/n.
    nodes : ndarray, shape (n+1,)
        Node coordinates i*h, i = 0..n.
    midpoints : ndarray, shape (n,)
        Cell midpoints (i + 1/2)*h, i = 0..n-1.
    """

    n: int
    h: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)
    midpoints: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise GridError(f"cell count must be an integer >= 2, got {self.n!r}")
        h = 1.0 / self.n
        nodes = np.arange(self.n + 1) * h
        nodes[-1] = 1.0
        midpoints = (np.arange(self.n) + 0.5) * h
        nodes.setflags(write=False)
        midpoints.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "midpoints", midpoints)

    def cell_of(self, t: float) -> int:
        """Index of the cell containing t, clamped to 0..n-1."""
        if not 0.0 <= t <= 1.0:
            raise GridError(f"coordinate {t} outside [0, 1]")
        return min(int(t / self.h), self.n - 1)


def make_uniform_grid(n: int) -> Grid1D:
    """Uniform grid with n cells on (0, 1); requires n >= 2."""
    return Grid1D(n)


@dataclass(frozen=True)
class NodalFunction:
    """Piecewise-linear function given by values at the nodes of a Grid1D.

    Optional end-point constraints pin the first/last value; they are
    validated at construction and never touched by solvers afterwards.
    """

    grid: Grid1D
    values: np.ndarray
    left_bc: Optional[float] = None
    right_bc: Optional[float] = None

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if v.shape != (self.grid.n + 1,):
            raise GridError(
                f"need {self.grid.n + 1} nodal values, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise GridError("nodal values must be finite")
        if self.left_bc is not None and v[0] != self.left_bc:
            raise GridError(f"v[0]={v[0]} violates left end condition {self.left_bc}")
        if self.right_bc is not None and v[-1] != self.right_bc:
            raise GridError(
                f"v[-1]={v[-1]} violates right end condition {self.right_bc}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # -- constructors ------------------------------------------------------

    @classmethod
    def linear(cls, grid: Grid1D, left: float, right: float) -> "NodalFunction":
        """Linear interpolant between the two end values."""
        vals = left + (right - left) * grid.nodes
        return cls(grid, vals, left_bc=left, right_bc=right)

    @classmethod
    def constant(cls, grid: Grid1D, c: float) -> "NodalFunction":
        return cls(grid, np.full(grid.n + 1, float(c)))

    @classmethod
    def from_callable(
        cls,
        grid: Grid1D,
        f: Callable[[np.ndarray], np.ndarray],
        left_bc: Optional[float] = None,
        right_bc: Optional[float] = None,
    ) -> "NodalFunction":
        """Sample f at the grid nodes."""
        vals = np.asarray(f(grid.nodes), dtype=float)
        return cls(grid, vals, left_bc=left_bc, right_bc=right_bc)

    def with_values(self, values: np.ndarray) -> "NodalFunction":
        """Same grid and end conditions, new nodal values."""
        return NodalFunction(self.grid, values, self.left_bc, self.right_bc)

    # -- evaluation --------------------------------------------------------

    def __call__(self, t):
        """Piecewise-linear evaluation; t may be a scalar or array in [0, 1]."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0) or np.any(t_arr > 1.0):
            raise GridError("evaluation point outside [0, 1]")
        out = np.interp(t_arr, self.grid.nodes, self.values)
        return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out

    @property
    def slopes(self) -> np.ndarray:
        """Per-cell slopes, shape (n,)."""
        return np.diff(self.values) / self.grid.h

    @property
    def midpoint_values(self) -> np.ndarray:
        """Exact values at cell midpoints (average of adjacent nodes)."""
        return 0.5 * (self.values[:-1] + self.values[1:])


def difference_quotient(u: NodalFunction, s: float, t: float) -> float:
    """Non-local difference quotient (u(t) - u(s)) / (t - s).

    On the diagonal (|t - s| below h * 1e-9) returns the slope of the cell
    containing (s + t) / 2, which is the X -> x limit for piecewise-linear u.
    """
    if abs(t - s) <= u.grid.h * DIAGONAL_TOL:
        cell = u.grid.cell_of(0.5 * (s + t))
        return float(u.slopes[cell])
    return (u(t) - u(s)) / (t - s)
