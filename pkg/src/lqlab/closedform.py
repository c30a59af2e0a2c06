"""Exact law of M(t) for reflected standard Brownian motion with unit drain.

    P{M(t) > u} = exp(-2u) * (2 (1 + t) Psi(sqrt t) - sqrt(2t/pi) exp(-t/2))

with ``Psi`` the standard normal upper tail.
"""

from __future__ import annotations

import math

import mpmath
from scipy.special import erfcx

from .errors import DomainError, NumericalError

__all__ = ["normal_tail", "survival_brownian", "log_survival_brownian"]

_CLAMP_SLACK = 1e-12


def normal_tail(x: float) -> float:
    """Upper tail ``P{N > x}`` of a standard normal, via ``erfc``."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def _bracket(t):
    # 2(1+t)Psi(sqrt t) - sqrt(2t/pi) e^{-t/2}, with the Gaussian factor pulled out
    # through the scaled erfc so large t does not underflow before the subtraction.
    z = math.sqrt(0.5 * t)
    inner = (1.0 + t) * erfcx(z) - math.sqrt(2.0 * t / math.pi)
    return math.exp(-0.5 * t) * inner


def survival_brownian(t: float, u: float) -> float:
    """``P{M(t) > u}`` for the reflected standard Brownian motion."""
    if not t > 0:
        raise DomainError(f"window length t must be positive, got {t}")
    if u < 0:
        raise DomainError(f"level u must be nonnegative, got {u}")
    value = math.exp(-2.0 * u) * _bracket(t)
    if 0.0 <= value <= 1.0:
        return value
    if -_CLAMP_SLACK <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + _CLAMP_SLACK:
        return 1.0
    raise NumericalError("closed form left [0, 1]", t=t, u=u, value=value)


def log_survival_brownian(t: float, u: float) -> float:
    """``log P{M(t) > u}`` evaluated in extended precision.

    The bracket loses about ``2 log10(t)`` digits to cancellation and underflows
    double precision for ``t`` beyond roughly 1500, so the whole expression is
    computed with mpmath.
    """
    if not t > 0:
        raise DomainError(f"window length t must be positive, got {t}")
    if u < 0:
        raise DomainError(f"level u must be nonnegative, got {u}")
    dps = 30 + int(2 * math.log10(1.0 + t))
    with mpmath.workdps(dps):
        tt = mpmath.mpf(t)
        bracket = (2 * (1 + tt) * mpmath.erfc(mpmath.sqrt(tt / 2)) / 2
                   - mpmath.sqrt(2 * tt / mpmath.pi) * mpmath.exp(-tt / 2))
        if bracket <= 0:
            raise NumericalError("extended-precision bracket not positive", t=t, dps=dps)
        return float(-2 * mpmath.mpf(u) + mpmath.log(bracket))
