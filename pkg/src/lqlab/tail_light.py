"""Cramer-case decay rates.

``theta*`` solves ``phi(theta) = theta`` on ``(0, beta*)`` and
``I(r) = sup_{theta > 0} (theta r - phi(theta))``.  The window result is the
logarithmic asymptote

    log P{M(T) > u} ~ -u theta* - T I(1)

which is what :func:`decay_rate_light` returns (a negative number, not a
probability).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._rootfind import argmin_convex, increasing_root
from .errors import AssumptionError, DomainError, NumericalError, UnsupportedModelError
from .models import CompoundPoissonNegative, LevyModel, Stable, _cumulant_pair, beta_star
from .tail_heavy import RegimeSpec

__all__ = [
    "CramerSolution",
    "theta_star",
    "rate_function",
    "cramer_solution",
    "decay_rate_light",
    "decay_rate_regime",
    "qe_tail_light_bound",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CramerSolution:
    theta_star: float
    beta_star: float
    I_one: float
    residual: float


def _cramer_model(model):
    if isinstance(model, Stable):
        raise UnsupportedModelError("stable laws have no exponential moments (beta* = 0)")
    return model


def _excess(model):
    """``phi(theta) - theta`` with derivative; None where phi is infinite."""
    def fun(theta):
        pair = _cumulant_pair(model, theta)
        return None if pair is None else (pair[0] - theta, pair[1] - 1.0)
    return fun


def theta_star(model: LevyModel) -> float:
    """Positive root of ``phi(theta) = theta`` below ``beta*``."""
    return _theta_star(model)[0]


def _theta_star(model):
    _cramer_model(model)
    if isinstance(model, CompoundPoissonNegative) and model.lam <= model.mu:
        raise AssumptionError("phi(theta) < theta for all theta > 0 when lambda <= mu")
    upper = beta_star(model)
    fun = _excess(model)
    lo = argmin_convex(fun, 0.0, upper)
    theta, residual, _ = increasing_root(fun, lo, 0.0, upper=upper)
    if not 0.0 < theta < upper:
        raise AssumptionError(f"no Cramer root in (0, {upper})")
    return theta, residual


def rate_function(model: LevyModel, r: float) -> float:
    """``I(r) = sup_{theta > 0} (theta r - phi(theta))``, ``inf`` when r exceeds sup phi'.

    The objective is concave; golden-section search on
    ``[1e-12, min(beta* - 1e-9, cap)]`` locates the maximiser, then bisection
    on the derivative sign polishes it to 1e-12 in theta.
    """
    _cramer_model(model)
    upper = beta_star(model)
    lo = 1e-12

    def slope(theta):
        return r - _cumulant_pair(model, theta)[1]

    def objective(theta):
        return theta * r - _cumulant_pair(model, theta)[0]

    if slope(lo) <= 0.0:
        # phi'(0) = 0 >= r: objective decreasing, supremum at theta -> 0+
        return 0.0

    hi = upper - 1e-9 if math.isfinite(upper) else None
    if hi is None:
        cap = 1.0
        while slope(cap) > 0.0:
            cap *= 2.0
            if cap > 1e100:
                # r >= sup phi': the objective increases forever
                value = objective(cap)
                return math.inf if value > 1e90 else value
        hi = cap
    elif slope(hi) > 0.0:
        raise NumericalError("maximiser not inside (0, beta*)", r=r, beta_star=upper)

    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > 1e-6 * max(1.0, b):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = objective(d)

    # The golden bracket may be slightly off because of flat objective values;
    # widen it until the derivative changes sign, then bisect.
    a, b = max(lo, a - (b - a)), min(hi, b + (b - a))
    while slope(a) < 0.0 and a > lo:
        a = max(lo, a - 2.0 * (b - a))
    while slope(b) > 0.0 and b < hi:
        b = min(hi, b + 2.0 * (b - a))
    for _ in range(200):
        if b - a <= 1e-12:
            break
        m = 0.5 * (a + b)
        if slope(m) > 0.0:
            a = m
        else:
            b = m
    theta = 0.5 * (a + b)
    return objective(theta)


def cramer_solution(model: LevyModel) -> CramerSolution:
    ts, residual = _theta_star(model)
    return CramerSolution(ts, beta_star(model), rate_function(model, 1.0), residual)


def decay_rate_light(model: LevyModel, u: float, T: float) -> float:
    """Logarithmic asymptote ``-u theta* - T I(1)`` of ``P{M(T) > u}``."""
    if u < 0 or T < 0:
        raise DomainError(f"u and T must be nonnegative, got u={u}, T={T}")
    return -u * theta_star(model) - T * rate_function(model, 1.0)


def decay_rate_regime(model: LevyModel, regime: RegimeSpec, u_or_T: float) -> float:
    """Regime line of the decay rate; the argument is u for ``T_small``, else T."""
    if not u_or_T > 0:
        raise DomainError(f"argument must be positive, got {u_or_T}")
    if regime.kind == "T_small":
        return -u_or_T * theta_star(model)
    if regime.kind == "T_large":
        return -u_or_T * rate_function(model, 1.0)
    return -u_or_T * (regime.A * theta_star(model) + rate_function(model, 1.0))


def qe_tail_light_bound(model: LevyModel, u: float) -> float:
    """Upper bound ``P{Q_e > u} <= exp(-theta* u)``; a bound, not an approximation."""
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    return math.exp(-theta_star(model) * u)
