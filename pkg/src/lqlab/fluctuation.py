"""Right inverses of the Laplace exponents and the exponential-clock transforms.

All quantities here are evaluated at an independent exponential horizon
``e_q`` with rate ``q``:

* ``L(x, q)    = E exp(-x M(e_q))``
* ``K(x, q)    = int_0^inf exp(-x u) P{M(e_q) > u} du``, so ``L = 1 - x K``
* ``Qe(x)      = E exp(-x Q_e)``
* ``Ymax(x, q) = E exp(-x sup_{s <= e_q} Y(s))``

and ``L * Ymax = Qe`` for both jump directions.

Spectrally positive formulas contain the ratio ``(psi_hat(x) - q) / (x - F)``
with ``F = Phi_hat(q)``.  It has a removable singularity at ``x = F``; within
``SWITCH_RTOL * max(1, F)`` of it the ratio is replaced by the mean of the two
end-point derivatives, which equals the limit ``psi_hat'(F)`` at ``x = F`` and
is second-order accurate around it.

Passing ``q`` as an ``mpmath.mpf`` makes the right inverses (and everything
built on them) come back in mpmath precision; extended-precision inversion
relies on this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath

from ._rootfind import argmin_convex, increasing_root
from .errors import AssumptionError, ClassificationError, DomainError, UnsupportedModelError
from .models import (
    BrownianDrift,
    CompoundPoissonNegative,
    CompoundPoissonPositive,
    LevyModel,
    Stable,
    _cumulant_pair,
    is_spectrally_negative,
    is_spectrally_positive,
)

__all__ = [
    "InverseEval",
    "TransformValue",
    "SWITCH_RTOL",
    "phi_inverse",
    "phi_hat_inverse",
    "transform",
    "transform_sn",
    "transform_sp",
    "k_transform",
    "qe_transform",
    "ymax_transform",
    "qe_tail",
    "survival_expclock",
    "survival_expclock_sn",
    "survival_expclock_sp",
    "resolve_side",
    "has_closed_qe_tail",
]

SWITCH_RTOL = 1e-6


@dataclass(frozen=True)
class InverseEval:
    q: float
    theta: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class TransformValue:
    x: float
    q: Optional[float]
    value: float
    kind: str  # "L", "K", "Qe" or "Ymax"


def _psi_fun(model):
    def fun(theta):
        pair = _cumulant_pair(model, theta)
        return None if pair is None else (pair[0] - theta, pair[1] - 1.0)
    return fun


def _psi_hat_fun(model):
    def fun(theta):
        pair = _cumulant_pair(model, -theta)
        return None if pair is None else (pair[0] + theta, 1.0 - pair[1])
    return fun


def _polish(fun, theta, q, steps=4):
    """Newton steps in mpmath arithmetic from a double-precision root."""
    theta = mpmath.mpf(theta)
    for _ in range(steps):
        value, deriv = fun(theta)
        theta -= (value - q) / deriv
    return theta, fun(theta)[0] - q


def _check_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value}")


def resolve_side(model: LevyModel, side: Optional[str] = None) -> str:
    """Pick ``"sn"`` or ``"sp"`` for a one-sided model.

    Brownian motion qualifies for both and defaults to ``"sn"``.
    """
    if side is None:
        if is_spectrally_negative(model):
            return "sn"
        if is_spectrally_positive(model):
            return "sp"
        raise UnsupportedModelError(f"{model!r} is not spectrally one-sided")
    if side == "sn" and is_spectrally_negative(model):
        return side
    if side == "sp" and is_spectrally_positive(model):
        return side
    raise ClassificationError(f"{model!r} is not usable as side={side!r}")


def phi_inverse(model: LevyModel, q: float) -> InverseEval:
    """Largest root ``Phi(q)`` of ``psi(theta) = q`` for a spectrally negative model."""
    if not is_spectrally_negative(model):
        raise ClassificationError(f"phi_inverse needs a spectrally negative model, got {model!r}")
    if q < 0:
        raise DomainError(f"q must be nonnegative, got {q}")
    if isinstance(model, CompoundPoissonNegative) and model.lam <= model.mu:
        # drift lambda/mu - 1 <= 0: Y never increases and the queue stays empty
        raise AssumptionError("cpn model with lambda <= mu has a degenerate (empty) queue; "
                              "Phi(0) does not exist")
    fun = _psi_fun(model)
    if isinstance(model, BrownianDrift):
        theta_min = 1.0 / model.sigma ** 2
    else:
        theta_min = argmin_convex(fun, 0.0)
    theta, residual, iterations = increasing_root(fun, theta_min, float(q))
    if isinstance(q, mpmath.mpf):
        theta, residual = _polish(fun, theta, q)
    return InverseEval(q, theta, residual, iterations)


def phi_hat_inverse(model: LevyModel, q: float) -> InverseEval:
    """Root ``Phi_hat(q)`` of ``psi_hat(theta) = q``; ``Phi_hat(0) = 0``."""
    if not is_spectrally_positive(model):
        raise ClassificationError(f"phi_hat_inverse needs a spectrally positive model, got {model!r}")
    if q < 0:
        raise DomainError(f"q must be nonnegative, got {q}")
    if q == 0:
        return InverseEval(q, 0.0, 0.0, 0)
    fun = _psi_hat_fun(model)
    theta, residual, iterations = increasing_root(fun, 0.0, float(q))
    if isinstance(q, mpmath.mpf):
        theta, residual = _polish(fun, theta, q)
    return InverseEval(q, theta, residual, iterations)


def _sp_slope(model, x, F, q):
    """``(psi_hat(x) - q) / (x - F)`` with the removable singularity at ``x = F``."""
    fun = _psi_hat_fun(model)
    if abs(x - F) < SWITCH_RTOL * max(1.0, F):
        return 0.5 * (fun(x)[1] + fun(F)[1])
    return (fun(x)[0] - fun(F)[0]) / (x - F)


def _qe_sp(model, x):
    fun = _psi_hat_fun(model)
    return fun(0.0)[1] * x / fun(x)[0]


def transform_sn(model: LevyModel, x: float, q: float) -> TransformValue:
    """``L(x, q) = Phi(0)/(x + Phi(0)) * (Phi(q) + x)/Phi(q)``."""
    _check_positive(x=x, q=q)
    p0 = phi_inverse(model, 0.0).theta
    pq = phi_inverse(model, q).theta
    return TransformValue(x, q, p0 / (x + p0) * (pq + x) / pq, "L")


def transform_sp(model: LevyModel, x: float, q: float) -> TransformValue:
    """``L(x, q)`` for a spectrally positive model (Pollaczek-Khintchine times Wiener-Hopf factor)."""
    _check_positive(x=x, q=q)
    F = phi_hat_inverse(model, q).theta
    slope = _sp_slope(model, x, F, q)
    return TransformValue(x, q, _qe_sp(model, x) * F / q * slope, "L")


def transform(model: LevyModel, x: float, q: float, side: Optional[str] = None) -> TransformValue:
    side = resolve_side(model, side)
    return transform_sn(model, x, q) if side == "sn" else transform_sp(model, x, q)


def qe_transform(model: LevyModel, x: float, side: Optional[str] = None) -> TransformValue:
    """Stationary workload transform ``E exp(-x Q_e)``."""
    _check_positive(x=x)
    if resolve_side(model, side) == "sn":
        p0 = phi_inverse(model, 0.0).theta
        return TransformValue(x, None, p0 / (p0 + x), "Qe")
    return TransformValue(x, None, _qe_sp(model, x), "Qe")


def ymax_transform(model: LevyModel, x: float, q: float, side: Optional[str] = None) -> TransformValue:
    """``E exp(-x Ybar(e_q))`` for the running maximum of the net input."""
    _check_positive(x=x, q=q)
    if resolve_side(model, side) == "sn":
        pq = phi_inverse(model, q).theta
        return TransformValue(x, q, pq / (pq + x), "Ymax")
    F = phi_hat_inverse(model, q).theta
    return TransformValue(x, q, q / (F * _sp_slope(model, x, F, q)), "Ymax")


def k_transform(model: LevyModel, x: float, q: float, side: Optional[str] = None) -> TransformValue:
    """``K(x, q)`` built directly from the law of ``Q_e + inf_{s<=e_q} Y(s)``.

    This follows the integral decomposition rather than ``(1 - L)/x`` so the
    two can be checked against each other.
    """
    _check_positive(x=x, q=q)
    if resolve_side(model, side) == "sn":
        p0 = phi_inverse(model, 0.0).theta
        pq = phi_inverse(model, q).theta
        return TransformValue(x, q, (pq - p0) / ((x + p0) * pq), "K")
    F = phi_hat_inverse(model, q).theta
    return TransformValue(x, q, _k_sp(model, x, q, F), "K")


def _k_sp(model, x, q, F):
    """Spectrally positive ``K(x, q)`` given ``F = Phi_hat(q)``."""
    fun = _psi_hat_fun(model)
    d0 = fun(0.0)[1]
    P = fun(x)[0]
    slope = _sp_slope(model, x, F, q)
    return (1.0 - d0 * x / P) / x - d0 * (F * slope - q) / (q * P)


def _qe_exponential_law(model, side):
    """``(p, r)`` with ``P{Q_e > u} = p exp(-r u)`` when that closed form exists."""
    if side == "sn":
        return 1.0, phi_inverse(model, 0.0).theta
    if isinstance(model, BrownianDrift):
        return 1.0, 2.0 / model.sigma ** 2
    if isinstance(model, CompoundPoissonPositive):
        lam, mu = model.lam, model.mu
        return lam / (lam + mu), mu * mu / (lam + mu)
    raise UnsupportedModelError(f"no closed-form stationary tail for {model!r}")


def has_closed_qe_tail(model: LevyModel) -> bool:
    return not isinstance(model, Stable)


def qe_tail(model: LevyModel, u: float, side: Optional[str] = None) -> float:
    """Exact ``P{Q_e > u}`` for models with an exponential stationary tail."""
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    p, r = _qe_exponential_law(model, resolve_side(model, side))
    return p * math.exp(-r * u)


def survival_expclock_sn(model: LevyModel, u: float, q: float) -> float:
    """``P{M(e_q) > u} = (1 - Phi(0)/Phi(q)) exp(-Phi(0) u)``."""
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    _check_positive(q=q)
    p0 = phi_inverse(model, 0.0).theta
    pq = phi_inverse(model, q).theta
    return (1.0 - p0 / pq) * math.exp(-p0 * u)


def survival_expclock_sp(model: LevyModel, u: float, q: float) -> float:
    """``P{M(e_q) > u}`` for a spectrally positive model with exponential ``Q_e`` tail.

    ``-inf_{s<=e_q} Y(s)`` is exponential with rate ``Phi_hat(q)``, hence
    ``int_0^inf P{Q_e > u + w} F exp(-F w) dw = p exp(-r u) F / (F + r)``.
    """
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    _check_positive(q=q)
    p, r = _qe_exponential_law(model, resolve_side(model, "sp"))
    F = phi_hat_inverse(model, q).theta
    return p * math.exp(-r * u) * F / (F + r)


def survival_expclock(model: LevyModel, u: float, q: float, side: Optional[str] = None) -> float:
    if resolve_side(model, side) == "sn":
        return survival_expclock_sn(model, u, q)
    return survival_expclock_sp(model, u, q)
