"""Numerical bias-derivatives of the dominant eigenvalue and investment sweeps.

The per-capita investment at inverse control parameter beta is

    l(beta) = -(1 / beta) * (d lambda_1 / dD) / lambda_1   at D = 0,

with lambda_1 the dominant transfer-matrix eigenvalue.  The derivative is
taken by central differencing in the bias D.  Two stencils are offered:

    two_point:   (f(xi) - f(-xi)) / (2 xi)                      error O(xi^2)
    four_point:  4/3 * two_point(xi) - 1/3 * two_point(2 xi)    error O(xi^4)

All matrices in one stencil share the log scale of the zero-bias matrix.
A per-matrix scale would shift each eigenvalue by a different factor and
corrupt the difference; with a common scale the factor cancels in the
ratio, so l never touches the (potentially astronomically large) true
eigenvalue magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Literal

from .model import ModelParams
from .transfer import DEFAULT_MAX_ITER, DEFAULT_TOL, build_matrix, dominant_eigenvalue

__all__ = [
    "StencilConfig",
    "InvestmentCurve",
    "SweepError",
    "central_difference",
    "richardson_difference",
    "eigen_derivative_two_point",
    "eigen_derivative_four_point",
    "per_capita_investment",
    "sweep_curve",
]

Order = Literal["two_point", "four_point"]
_ORDERS = ("two_point", "four_point")


@dataclass(frozen=True)
class StencilConfig:
    """Stencil step, stencil order, and eigensolver budget."""

    xi: float = 1e-4
    order: Order = "four_point"
    eigen_tol: float = DEFAULT_TOL
    eigen_max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self) -> None:
        if not math.isfinite(self.xi) or self.xi <= 0.0:
            raise ValueError("xi must be finite and positive")
        if self.order not in _ORDERS:
            raise ValueError(f"order must be one of {_ORDERS}")
        if self.eigen_tol <= 0.0:
            raise ValueError("eigen_tol must be positive")
        if self.eigen_max_iter < 1:
            raise ValueError("eigen_max_iter must be at least 1")


class SweepError(RuntimeError):
    """A sweep point failed; carries the offending beta (and seed, if any)."""

    def __init__(self, beta: float, cause: BaseException, seed: int | None = None):
        at = f"beta={beta!r}" if seed is None else f"beta={beta!r}, seed={seed}"
        super().__init__(f"investment evaluation failed at {at}: {cause}")
        self.beta = beta
        self.seed = seed


@dataclass(frozen=True)
class InvestmentCurve:
    """A sampled investment curve: (beta, l) points plus provenance.

    ``params_snapshot`` records the beta-independent part of the model (its
    beta field is zeroed); it is None for aggregate curves that average over
    several coupling vectors.  ``seed`` identifies the coupling draw for
    ensemble members.
    """

    points: tuple[tuple[float, float], ...]
    method: Literal["closed_form", "numeric"]
    params_snapshot: ModelParams | None
    seed: int | None = None


def central_difference(f: Callable[[float], float], xi: float) -> float:
    """Two-point central difference (f(xi) - f(-xi)) / (2 xi), O(xi^2)."""
    return (f(xi) - f(-xi)) / (2.0 * xi)


def richardson_difference(f: Callable[[float], float], xi: float) -> float:
    """Four-point stencil: the xi and 2 xi central differences combined.

    The combination 4/3 * delta(xi) - 1/3 * delta(2 xi) cancels the xi^2
    error term, leaving a leading error of xi^4 * f'''''(0) / 30.  Exact on
    polynomials up to degree four.
    """
    return (4.0 / 3.0) * central_difference(f, xi) - (1.0 / 3.0) * central_difference(
        f, 2.0 * xi
    )


def _require_zero_field(params: ModelParams) -> None:
    if params.field != 0.0:
        raise ValueError("derivatives are taken at zero external bias (field = 0)")


def _scaled_eigen_fn(params: ModelParams, cfg: StencilConfig):
    """Scaled dominant eigenvalue as a function of the bias offset.

    Returns (f, lam0, s0) where f(offset) solves the matrix built at
    field=offset under the common scale s0 of the zero-offset matrix, and
    lam0 = f(0.0) is the zero-offset scaled eigenvalue.
    """
    base = build_matrix(params)
    s0 = base.log_scale

    def f(offset: float) -> float:
        m = base if offset == 0.0 else build_matrix(
            replace(params, field=offset), log_scale=s0
        )
        return dominant_eigenvalue(m, cfg.eigen_tol, cfg.eigen_max_iter).value_scaled

    return f, f(0.0), s0


def eigen_derivative_two_point(
    params: ModelParams, cfg: StencilConfig = StencilConfig()
) -> float:
    """d lambda_1 / dD at D = 0 by the two-point stencil, on the true scale.

    May overflow for parameters whose true eigenvalue exceeds double range;
    the investment pipeline avoids this by never leaving the scaled form.
    """
    _require_zero_field(params)
    f, _, s0 = _scaled_eigen_fn(params, cfg)
    return central_difference(f, cfg.xi) * math.exp(s0)


def eigen_derivative_four_point(
    params: ModelParams, cfg: StencilConfig = StencilConfig()
) -> float:
    """d lambda_1 / dD at D = 0 by the four-point stencil, on the true scale."""
    _require_zero_field(params)
    f, _, s0 = _scaled_eigen_fn(params, cfg)
    return richardson_difference(f, cfg.xi) * math.exp(s0)


def per_capita_investment(
    params: ModelParams, cfg: StencilConfig = StencilConfig()
) -> float:
    """Per-capita investment l(beta) of the infinite ring at zero bias.

    beta = 0 is exact: every configuration is equally likely, so the value
    is the plain mean of the levels, (q - 1) / 2 for the default levels.
    For beta > 0 the bias derivative is formed from scaled eigenvalues under
    a common log scale, so the scale factor cancels and no intermediate
    overflows even when the true eigenvalues do.
    """
    _require_zero_field(params)
    if params.beta == 0.0:
        return math.fsum(params.levels) / params.q
    f, lam0, _ = _scaled_eigen_fn(params, cfg)
    if cfg.order == "two_point":
        d = central_difference(f, cfg.xi)
    else:
        d = richardson_difference(f, cfg.xi)
    return -d / (params.beta * lam0)


def sweep_curve(
    params_base: ModelParams,
    betas,
    cfg: StencilConfig = StencilConfig(),
) -> InvestmentCurve:
    """Evaluate l(beta) over a grid of beta values.

    The grid must be non-negative and strictly increasing.  Any point
    failure aborts the sweep with a :class:`SweepError` naming the beta.
    """
    grid = [float(b) for b in betas]
    if not grid:
        raise ValueError("beta grid must contain at least one point")
    if any(not math.isfinite(b) or b < 0.0 for b in grid):
        raise ValueError("beta grid values must be finite and non-negative")
    if any(b2 <= b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValueError("beta grid must be strictly increasing")
    points = []
    for b in grid:
        try:
            val = per_capita_investment(replace(params_base, beta=b), cfg)
        except Exception as exc:
            raise SweepError(b, exc) from exc
        points.append((b, val))
    return InvestmentCurve(
        points=tuple(points),
        method="numeric",
        params_snapshot=replace(params_base, beta=0.0),
        seed=None,
    )
