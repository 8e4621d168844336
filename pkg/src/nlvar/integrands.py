"""Energy densities W(x, u, U) with analytic partial derivatives.

All built-ins take vectorized (x, u, U) arguments and are x-independent;
derivatives are supplied in closed form so that residual evaluation never
stacks numerical differentiation on top of singular-kernel quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Integrand",
    "DerivativeCheckReport",
    "power_p",
    "half_square",
    "quadratic_mass",
    "two_well_full",
    "two_well_bare",
    "integrand_by_name",
    "check_derivatives",
]

ArrayFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Integrand:
    """Density W(x, u, U) with partials w_u = dW/du and w_U = dW/dU.

    p is the growth exponent of W in U (used for coercivity and Hoelder
    diagnostics, even where the evaluation itself never reads it).
    """

    w: ArrayFn
    w_u: ArrayFn
    w_U: ArrayFn
    p: float
    name: str

    def evaluate(self, x, u, U):
        return self.w(np.asarray(x, float), np.asarray(u, float), np.asarray(U, float))

    def grad(self, x, u, U):
        """(dW/du, dW/dU) at the probe point."""
        x = np.asarray(x, float)
        u = np.asarray(u, float)
        U = np.asarray(U, float)
        return self.w_u(x, u, U), self.w_U(x, u, U)


def power_p(p: float) -> Integrand:
    """W = |U|^p (homogeneous problem with end conditions u(0)=0, u(1)=1)."""
    if p <= 1:
        raise ValueError(f"growth exponent must exceed 1, got {p}")
    return Integrand(
        w=lambda x, u, U: np.abs(U) ** p,
        w_u=lambda x, u, U: np.zeros_like(U),
        w_U=lambda x, u, U: p * np.sign(U) * np.abs(U) ** (p - 1),
        p=p,
        name=f"power:{p:g}",
    )


def half_square() -> Integrand:
    """W = U^2 / 2, the quadratic special case used for p = 2 experiments."""
    return Integrand(
        w=lambda x, u, U: 0.5 * U**2,
        w_u=lambda x, u, U: np.zeros_like(U),
        w_U=lambda x, u, U: U,
        p=2.0,
        name="half-square",
    )


def quadratic_mass() -> Integrand:
    """W = U^2 / 2 + 8 u^2, quadratic plus a zero-order mass term."""
    return Integrand(
        w=lambda x, u, U: 0.5 * U**2 + 8.0 * u**2,
        w_u=lambda x, u, U: 16.0 * u * np.ones_like(U),
        w_U=lambda x, u, U: U,
        p=2.0,
        name="quad-mass",
    )


def two_well_full() -> Integrand:
    """W = (U^2 - 1)^2 / 4 + u^2 / 2, the non-convex Bolza density."""
    return Integrand(
        w=lambda x, u, U: 0.25 * (U**2 - 1.0) ** 2 + 0.5 * u**2,
        w_u=lambda x, u, U: u * np.ones_like(U),
        w_U=lambda x, u, U: U * (U**2 - 1.0),
        p=4.0,
        name="two-well",
    )


def two_well_bare() -> Integrand:
    """W = (U^2 - 1)^2 / 4, the two-well density without the mass term."""
    return Integrand(
        w=lambda x, u, U: 0.25 * (U**2 - 1.0) ** 2,
        w_u=lambda x, u, U: np.zeros_like(U),
        w_U=lambda x, u, U: U * (U**2 - 1.0),
        p=4.0,
        name="two-well-bare",
    )


_FACTORIES = {
    "half-square": half_square,
    "quad-mass": quadratic_mass,
    "two-well": two_well_full,
    "two-well-bare": two_well_bare,
}


def integrand_by_name(name: str) -> Integrand:
    """Resolve a CLI name: 'power:p', 'half-square', 'quad-mass', 'two-well',
    'two-well-bare'."""
    name = name.strip()
    if name.startswith("power:"):
        try:
            p = float(name.split(":", 1)[1])
        except ValueError:
            raise KeyError(f"bad exponent in integrand name {name!r}") from None
        return power_p(p)
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown integrand {name!r}") from None


@dataclass(frozen=True)
class DerivativeCheckReport:
    max_err_u: float
    max_err_U: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_err_u <= self.tol and self.max_err_U <= self.tol


def check_derivatives(
    integrand: Integrand,
    probes: Sequence[tuple[float, float, float]],
    step: float = 1e-6,
    tol: float = 1e-5,
) -> DerivativeCheckReport:
    """Compare w_u, w_U against central finite differences of w at the probes.

    The mismatch is relative to max(1, |finite difference|) per probe.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("probe list must be nonempty")
    err_u = 0.0
    err_U = 0.0
    for x, u, U in probes:
        x = np.asarray(x, float)
        fd_u = (integrand.evaluate(x, u + step, U) - integrand.evaluate(x, u - step, U)) / (2 * step)
        fd_U = (integrand.evaluate(x, u, U + step) - integrand.evaluate(x, u, U - step)) / (2 * step)
        au, aU = integrand.grad(x, u, U)
        err_u = max(err_u, abs(float(au) - float(fd_u)) / max(1.0, abs(float(fd_u))))
        err_U = max(err_U, abs(float(aU) - float(fd_U)) / max(1.0, abs(float(fd_U))))
    return DerivativeCheckReport(max_err_u=err_u, max_err_U=err_U, tol=tol)
