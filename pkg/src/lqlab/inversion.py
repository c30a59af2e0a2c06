"""Real-axis Laplace inversion (Gaver-Stehfest) of the exponential-clock transforms.

Convention: if ``g(q)`` is a quantity evaluated at an exponential horizon of
rate ``q`` (for instance ``P{M(e_q) > u}``), then
``g(q) = q * int_0^inf exp(-q t) f(t) dt`` and the function handed to
:func:`invert_q` must be ``g(q) / q``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Tuple

import mpmath

from .errors import DomainError, NumericalError
from .fluctuation import (
    _k_sp,
    has_closed_qe_tail,
    phi_hat_inverse,
    resolve_side,
    survival_expclock_sn,
    survival_expclock_sp,
    transform,
)
from .models import LevyModel

__all__ = [
    "InversionConfig",
    "SurvivalEstimate",
    "stehfest_weights",
    "invert_q",
    "survival_sn",
    "survival_sp",
    "survival",
    "mgf_of_M",
    "CLAMP_SLACK",
]

log = logging.getLogger(__name__)

# Inverted probabilities may overshoot [0, 1] by this much before it is an error.
CLAMP_SLACK = 5e-3


@dataclass(frozen=True)
class InversionConfig:
    """Gaver-Stehfest settings.

    ``mode="standard"`` works in double precision with 8 to 32 terms.
    ``mode="extended"`` sums in mpmath at roughly ``2.2 * terms`` digits and
    passes mpmath numbers to the transform, which must therefore accept them.
    The survival and mgf routines do: their right inverses are polished to
    working precision at each node.

    ``double_terms`` is the per-axis term count of the iterated two-dimensional
    inversion.  The inner rounding error is multiplied by the outer weights
    (sum of ``|V_k|`` is about 1e6 at 10 terms, 1e10 at 16), so it stays small.
    """

    terms: int = 16
    mode: str = "standard"
    target: str = ""
    double_terms: int = 10

    def __post_init__(self):
        if self.terms % 2 or self.terms < 8:
            raise DomainError(f"terms must be even and >= 8, got {self.terms}")
        if self.mode == "standard":
            if self.terms > 32:
                raise DomainError(f"standard mode allows at most 32 terms, got {self.terms}")
        elif self.mode != "extended":
            raise DomainError(f"mode must be 'standard' or 'extended', got {self.mode!r}")
        if self.double_terms % 2 or not 8 <= self.double_terms <= 16:
            raise DomainError(f"double_terms must be even in [8, 16], got {self.double_terms}")

    @classmethod
    def extended(cls, terms: int = 32, target: str = "") -> "InversionConfig":
        return cls(terms=terms, mode="extended", target=target)


@dataclass(frozen=True)
class SurvivalEstimate:
    value: float
    method: str
    stderr: Optional[float] = None
    n: Optional[int] = None
    flags: Tuple[str, ...] = field(default_factory=tuple)


@lru_cache(maxsize=None)
def stehfest_weights(terms: int) -> Tuple[Fraction, ...]:
    """Exact Stehfest weights ``V_1 .. V_N`` as fractions."""
    if terms % 2 or terms < 2:
        raise DomainError(f"terms must be a positive even number, got {terms}")
    half = terms // 2
    fac = math.factorial
    weights = []
    for k in range(1, terms + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            acc += Fraction(j ** half * fac(2 * j),
                            fac(half - j) * fac(j) * fac(j - 1) * fac(k - j) * fac(2 * j - k))
        weights.append((-1) ** (k + half) * acc)
    return tuple(weights)


@lru_cache(maxsize=None)
def _float_weights(terms):
    return tuple(float(w) for w in stehfest_weights(terms))


def invert_q(transform_fn: Callable, t: float, cfg: InversionConfig = InversionConfig()) -> float:
    """Gaver-Stehfest estimate of ``f(t)`` from its Laplace transform.

    ``f(t) ~ (ln 2 / t) * sum_k V_k F(k ln 2 / t)``.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    if cfg.mode == "extended":
        with mpmath.workdps(int(2.2 * cfg.terms) + 10):
            a = mpmath.log(2) / mpmath.mpf(t)
            total = mpmath.mpf(0)
            for k, w in enumerate(stehfest_weights(cfg.terms), start=1):
                value = transform_fn(k * a)
                if not mpmath.isfinite(value):
                    raise NumericalError("transform returned a non-finite value", q=float(k * a), t=t)
                total += mpmath.mpf(w.numerator) / w.denominator * value
            return float(a * total)

    a = math.log(2.0) / t
    terms = []
    for k, w in enumerate(_float_weights(cfg.terms), start=1):
        value = float(transform_fn(k * a))
        if not math.isfinite(value):
            raise NumericalError("transform returned a non-finite value", q=k * a, t=t)
        terms.append(w * value)
    return a * math.fsum(terms)


def _clamp_probability(value, context):
    if 0.0 <= value <= 1.0:
        return value, ()
    if -CLAMP_SLACK <= value <= 1.0 + CLAMP_SLACK:
        log.info("clamped inverted probability %.3g (%s)", value, context)
        return min(max(value, 0.0), 1.0), ("clamped",)
    raise NumericalError("inverted probability outside [0, 1]", value=value, **context)


def survival_sn(model: LevyModel, t: float, u: float,
                cfg: InversionConfig = InversionConfig()) -> SurvivalEstimate:
    """``P{M(t) > u}`` for a spectrally negative model by one inversion in q."""
    resolve_side(model, "sn")
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    raw = invert_q(lambda q: survival_expclock_sn(model, u, q) / q, t, cfg)
    value, flags = _clamp_probability(raw, {"t": t, "u": u})
    return SurvivalEstimate(value, "invert-sn", flags=flags)


def survival_sp(model: LevyModel, t: float, u: float,
                cfg: InversionConfig = InversionConfig(),
                force_double: bool = False) -> SurvivalEstimate:
    """``P{M(t) > u}`` for a spectrally positive model.

    With an exponential stationary tail the exponential-clock survival is
    explicit and one inversion in q suffices.  Otherwise (or with
    ``force_double``) the double transform ``K(x, q)/q`` is inverted twice,
    x outer and q inner, which is markedly less accurate.
    """
    resolve_side(model, "sp")
    if u < 0:
        raise DomainError(f"u must be nonnegative, got {u}")
    if has_closed_qe_tail(model) and not force_double:
        raw = invert_q(lambda q: survival_expclock_sp(model, u, q) / q, t, cfg)
        value, flags = _clamp_probability(raw, {"t": t, "u": u})
        return SurvivalEstimate(value, "invert-sp", flags=flags)

    if not u > 0:
        raise DomainError("double inversion needs u > 0")
    # Phi_hat at each q-node is shared by every x-node.
    axis = InversionConfig(terms=cfg.double_terms)
    a_t = math.log(2.0) / t
    nodes = [k * a_t for k in range(1, axis.terms + 1)]
    F = {q: phi_hat_inverse(model, q).theta for q in nodes}

    def inner(x):
        x = float(x)
        return invert_q(lambda q: _k_sp(model, x, q, F[q]) / q, t, axis)

    raw = invert_q(inner, u, axis)
    value, flags = _clamp_probability(raw, {"t": t, "u": u})
    return SurvivalEstimate(value, "invert-sp-double", flags=("fallback-inversion",) + flags)


def survival(model: LevyModel, t: float, u: float,
             cfg: InversionConfig = InversionConfig(), side: Optional[str] = None) -> SurvivalEstimate:
    if resolve_side(model, side) == "sn":
        return survival_sn(model, t, u, cfg)
    return survival_sp(model, t, u, cfg)


def mgf_of_M(model: LevyModel, x: float, t: float,
             cfg: InversionConfig = InversionConfig(), side: Optional[str] = None) -> float:
    """``E exp(-x M(t))`` by inverting ``L(x, q)/q`` in q."""
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    raw = invert_q(lambda q: transform(model, x, q, side).value / q, t, cfg)
    value, _ = _clamp_probability(raw, {"t": t, "x": x})
    return value
