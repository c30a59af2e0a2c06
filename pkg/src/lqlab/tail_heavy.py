"""Exact asymptotics of P{M(T) > u} for regularly varying (stable) input.

With ``tail(x) = P{X(1) > x}``:

    P{M(T) > u} ~ P{Q_e > u + T} + T * tail(u + T)
    P{Q_e > u}  ~ u / (alpha - 1) * tail(u)

The regime-specific lines are

    T = o(u):   1/(alpha-1)                          * u * tail(u)
    u ~ A T:    (A + alpha)/(alpha-1) * (A+1)^-alpha * T * tail(T)
    u = o(T):   alpha/(alpha-1)                      * T * tail(T)

For stable models ``tail`` is itself the power-law asymptote of
:func:`lqlab.models.tail_x1`.  None of these carry an error bound; every
result is tagged as asymptotic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, UnsupportedModelError
from .models import LevyModel, Stable, stable_tail_constant, tail_x1

__all__ = [
    "RegimeSpec",
    "AsymptoticResult",
    "stable_tail_constant",
    "qe_tail_heavy",
    "levy_big_jump_tail",
    "asymp_heavy",
    "asymp_heavy_regime",
    "heavy_regime_prefactor",
    "PreconditionWarning",
]

REGIMES = ("T_small", "proportional", "T_large")


class PreconditionWarning(UserWarning):
    """An asymptotic statement is used outside its stated hypotheses."""


@dataclass(frozen=True)
class RegimeSpec:
    """How the window length T grows relative to the level u.

    ``T_small``: T = o(u); ``proportional``: u ~ A T; ``T_large``: u = o(T).
    """

    kind: str
    A: Optional[float] = None

    def __post_init__(self):
        if self.kind not in REGIMES:
            raise DomainError(f"regime must be one of {REGIMES}, got {self.kind!r}")
        if self.kind == "proportional":
            if self.A is None or not self.A > 0:
                raise DomainError(f"proportional regime needs A > 0, got {self.A}")
        elif self.A is not None:
            raise DomainError(f"A is only meaningful for the proportional regime, not {self.kind}")


@dataclass(frozen=True)
class AsymptoticResult:
    value: float
    prefactor: float
    regime: Optional[RegimeSpec]
    formula: str
    asymptotic: bool = True


def _stable(model):
    if not isinstance(model, Stable):
        raise UnsupportedModelError(f"heavy-tail asymptotics are implemented for stable models, got {model!r}")
    return model


def qe_tail_heavy(model: LevyModel, u: float) -> float:
    """``P{Q_e > u} ~ u/(alpha-1) * P{X(1) > u}``."""
    m = _stable(model)
    return u / (m.alpha - 1.0) * tail_x1(m, u)


def levy_big_jump_tail(model: LevyModel, n: float, x: float) -> float:
    """``P{X(n) > x} ~ n P{X(1) > x}`` for ``x >= n``."""
    m = _stable(model)
    if not n > 0:
        raise DomainError(f"n must be positive, got {n}")
    if x < n:
        warnings.warn(f"big-jump asymptotics need x >= n (got x={x}, n={n})",
                      PreconditionWarning, stacklevel=2)
    return n * tail_x1(m, x)


def asymp_heavy(model: LevyModel, u: float, T: float) -> AsymptoticResult:
    """``P{Q_e > u + T} + T P{X(1) > u + T}``.

    ``prefactor`` is the coefficient c in ``value = c * P{X(1) > u + T}``.
    """
    m = _stable(model)
    if u < 0 or T < 0 or u + T <= 0:
        raise DomainError(f"need u, T >= 0 with u + T > 0, got u={u}, T={T}")
    level = u + T
    prefactor = level / (m.alpha - 1.0) + T
    return AsymptoticResult(prefactor * tail_x1(m, level), prefactor, None, "window")


def heavy_regime_prefactor(alpha: float, regime: RegimeSpec) -> float:
    if regime.kind == "T_small":
        return 1.0 / (alpha - 1.0)
    if regime.kind == "T_large":
        return alpha / (alpha - 1.0)
    A = regime.A
    return (A + alpha) / (alpha - 1.0) * (A + 1.0) ** (-alpha)


def asymp_heavy_regime(model: LevyModel, regime: RegimeSpec, u_or_T: float) -> AsymptoticResult:
    """Regime line; the argument is u for ``T_small`` and T otherwise."""
    m = _stable(model)
    if not u_or_T > 0:
        raise DomainError(f"argument must be positive, got {u_or_T}")
    c = heavy_regime_prefactor(m.alpha, regime)
    return AsymptoticResult(c * u_or_T * tail_x1(m, u_or_T), c, regime, regime.kind)
