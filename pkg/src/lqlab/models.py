"""Levy input models and their exponents.

Every model is normalised so that ``E X(1) = 0`` and the queue drains at unit
rate, i.e. the net input is ``Y(t) = X(t) - t``.  Four variants are supported:

* :class:`BrownianDrift` -- ``X = sigma * B``.
* :class:`CompoundPoissonPositive` -- exponential(mu) upward jumps at rate
  lambda, compensated by a drift ``-lambda/mu``.
* :class:`CompoundPoissonNegative` -- exponential(mu) downward jumps at rate
  lambda, compensated by a drift ``+lambda/mu``.
* :class:`Stable` -- ``X(1) ~ S_alpha(1, beta, 0)`` with ``1 < alpha < 2``.

The three exponents used throughout the package are

* ``cumulant``:  ``phi(theta)     = log E exp(theta X(1))``
* ``psi``:       ``psi(theta)     = log E exp(theta Y(1))  = phi(theta) - theta``
* ``psi_hat``:   ``psi_hat(theta) = log E exp(-theta Y(1)) = phi(-theta) + theta``
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ClassificationError, DomainError, ModelSpecError, UnsupportedModelError

__all__ = [
    "BrownianDrift",
    "CompoundPoissonPositive",
    "CompoundPoissonNegative",
    "Stable",
    "LevyModel",
    "ExponentEval",
    "AsymptoticRegimeWarning",
    "TAIL_REGIME_THRESHOLD",
    "psi",
    "psi_hat",
    "cumulant",
    "tail_x1",
    "beta_star",
    "is_spectrally_negative",
    "is_spectrally_positive",
    "parse_model",
    "model_spec",
    "stable_tail_constant",
]

# tail_x1 is an asymptotic formula; below this level callers get a warning.
TAIL_REGIME_THRESHOLD = 5.0


class AsymptoticRegimeWarning(UserWarning):
    """An asymptotic formula was evaluated outside its declared regime."""


@dataclass(frozen=True)
class BrownianDrift:
    sigma: float = 1.0

    def __post_init__(self):
        _require_positive("sigma", self.sigma)

    kind = "brownian"


@dataclass(frozen=True)
class CompoundPoissonPositive:
    lam: float
    mu: float

    def __post_init__(self):
        _require_positive("lambda", self.lam)
        _require_positive("mu", self.mu)

    kind = "cpp"

    @property
    def drift(self) -> float:
        """Compensating drift of X (so that E X(1) = 0)."""
        return -self.lam / self.mu


@dataclass(frozen=True)
class CompoundPoissonNegative:
    lam: float
    mu: float

    def __post_init__(self):
        _require_positive("lambda", self.lam)
        _require_positive("mu", self.mu)

    kind = "cpn"

    @property
    def drift(self) -> float:
        return self.lam / self.mu


@dataclass(frozen=True)
class Stable:
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise DomainError(f"alpha must lie in (1, 2), got {self.alpha}")
        if not -1.0 < self.beta <= 1.0:
            raise DomainError(f"beta must lie in (-1, 1], got {self.beta}")

    kind = "stable"


LevyModel = Union[BrownianDrift, CompoundPoissonPositive, CompoundPoissonNegative, Stable]


@dataclass(frozen=True)
class ExponentEval:
    """Value and first derivative of an exponent at a real argument.

    ``value`` and ``derivative`` are ``None`` when the exponent is infinite.
    """

    theta: float
    value: Optional[float]
    derivative: Optional[float]
    finite: bool


def _require_positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


def is_spectrally_negative(model: LevyModel) -> bool:
    return isinstance(model, (BrownianDrift, CompoundPoissonNegative))


def is_spectrally_positive(model: LevyModel) -> bool:
    if isinstance(model, Stable):
        return model.beta == 1.0
    return isinstance(model, (BrownianDrift, CompoundPoissonPositive))


def beta_star(model: LevyModel) -> float:
    """Supremum of the exponential moments of X(1), ``sup{b: E e^{b X(1)} < inf}``."""
    if isinstance(model, CompoundPoissonPositive):
        return model.mu
    if isinstance(model, Stable):
        return 0.0
    return math.inf


def _cumulant_pair(model: LevyModel, theta: float):
    """Return ``(phi, phi')`` at theta, or ``None`` where phi is infinite."""
    if isinstance(model, BrownianDrift):
        s2 = model.sigma * model.sigma
        return 0.5 * s2 * theta * theta, s2 * theta
    if isinstance(model, CompoundPoissonPositive):
        lam, mu = model.lam, model.mu
        if theta >= mu:
            return None
        return (lam * theta / (mu - theta) - lam * theta / mu,
                lam * mu / (mu - theta) ** 2 - lam / mu)
    if isinstance(model, CompoundPoissonNegative):
        lam, mu = model.lam, model.mu
        if theta <= -mu:
            return None
        return (-lam * theta / (mu + theta) + lam * theta / mu,
                -lam * mu / (mu + theta) ** 2 + lam / mu)
    if isinstance(model, Stable):
        if theta == 0.0:
            return 0.0, 0.0
        if model.beta == 1.0 and theta < 0.0:
            # E exp(-g X) = exp(-g^alpha / cos(pi alpha / 2)) for g >= 0
            c = -1.0 / math.cos(0.5 * math.pi * model.alpha)
            g = -theta
            return c * g ** model.alpha, -c * model.alpha * g ** (model.alpha - 1.0)
        return None
    raise UnsupportedModelError(f"unknown model {model!r}")


def cumulant(model: LevyModel, theta: float) -> ExponentEval:
    """Cumulant function ``phi(theta) = log E exp(theta X(1))``.

    Never raises for a valid model; infinite values are reported through
    ``finite=False``.
    """
    theta = float(theta)
    pair = _cumulant_pair(model, theta)
    if pair is None:
        return ExponentEval(theta, None, None, False)
    return ExponentEval(theta, pair[0], pair[1], True)


def psi(model: LevyModel, theta: float) -> ExponentEval:
    """Laplace exponent ``log E exp(theta Y(1))`` of a spectrally negative model."""
    if not is_spectrally_negative(model):
        raise ClassificationError(f"psi needs a spectrally negative model, got {model!r}")
    theta = float(theta)
    if theta < 0.0:
        raise DomainError(f"psi is evaluated on theta >= 0, got {theta}")
    value, deriv = _cumulant_pair(model, theta)
    return ExponentEval(theta, value - theta, deriv - 1.0, True)


def psi_hat(model: LevyModel, theta: float) -> ExponentEval:
    """Laplace exponent ``log E exp(-theta Y(1))`` of a spectrally positive model.

    Finite for every ``theta >= 0``: the only singularity of the compound
    Poisson exponent sits at ``theta = -mu``.
    """
    if not is_spectrally_positive(model):
        raise ClassificationError(f"psi_hat needs a spectrally positive model, got {model!r}")
    theta = float(theta)
    if theta < 0.0:
        raise DomainError(f"psi_hat is evaluated on theta >= 0, got {theta}")
    value, deriv = _cumulant_pair(model, -theta)
    return ExponentEval(theta, value + theta, 1.0 - deriv, True)


def stable_tail_constant(alpha: float, beta: float) -> float:
    """Constant ``B(alpha, beta)`` with ``P{X(1) > x} ~ B/alpha * x^-alpha``."""
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    if not -1.0 < beta <= 1.0:
        raise DomainError(f"beta must lie in (-1, 1], got {beta}")
    tan = math.tan(0.5 * math.pi * alpha)
    return (math.gamma(1.0 + alpha) / math.pi
            * math.sqrt(1.0 + beta * beta * tan * tan)
            * math.sin(0.5 * math.pi * alpha + math.atan(beta * tan)))


def tail_x1(model: LevyModel, x: float) -> float:
    """Asymptotic upper tail ``P{X(1) > x}`` of a stable model.

    Emits :class:`AsymptoticRegimeWarning` when ``x < TAIL_REGIME_THRESHOLD``.
    """
    if not isinstance(model, Stable):
        raise UnsupportedModelError(f"tail_x1 is only defined for stable models, got {model!r}")
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if x < TAIL_REGIME_THRESHOLD:
        warnings.warn(f"tail_x1 evaluated at x={x} below the asymptotic threshold "
                      f"{TAIL_REGIME_THRESHOLD}", AsymptoticRegimeWarning, stacklevel=2)
    b = stable_tail_constant(model.alpha, model.beta)
    return b / model.alpha * x ** (-model.alpha)


# ---------------------------------------------------------------------------
# model specification strings

_KINDS = {
    "brownian": (BrownianDrift, {"sigma": "sigma"}, ()),
    "cpp": (CompoundPoissonPositive, {"lambda": "lam", "mu": "mu"}, ("lambda", "mu")),
    "cpn": (CompoundPoissonNegative, {"lambda": "lam", "mu": "mu"}, ("lambda", "mu")),
    "stable": (Stable, {"alpha": "alpha", "beta": "beta"}, ("alpha",)),
}


def parse_model(text: str) -> LevyModel:
    """Parse ``kind=... key=value ...`` into a model.

    Keys are case-insensitive.  Errors carry the 1-based column of the token.
    """
    tokens = []
    pos = 0
    for part in text.split():
        col = text.index(part, pos)
        pos = col + len(part)
        tokens.append((col + 1, part))
    if not tokens:
        raise ModelSpecError("empty model specification", column=1)

    fields = {}
    columns = {}
    for col, tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not key or not value:
            raise ModelSpecError(f"expected key=value, got {tok!r}", column=col)
        key = key.lower()
        if key in fields:
            raise ModelSpecError(f"duplicate key {key!r}", column=col)
        fields[key] = value
        columns[key] = col

    if "kind" not in fields:
        raise ModelSpecError("missing kind=...", column=tokens[0][0])
    kind = fields.pop("kind").lower()
    if kind not in _KINDS:
        raise ModelSpecError(f"unknown kind {kind!r}; expected one of {sorted(_KINDS)}",
                             column=columns["kind"] + len("kind="))
    cls, keymap, required = _KINDS[kind]

    kwargs = {}
    for key, raw in fields.items():
        if key not in keymap:
            raise ModelSpecError(f"unknown key {key!r} for kind={kind}", column=columns[key])
        try:
            kwargs[keymap[key]] = float(raw)
        except ValueError:
            raise ModelSpecError(f"{key}: not a number: {raw!r}",
                                 column=columns[key] + len(key) + 1) from None
    for key in required:
        if keymap[key] not in kwargs:
            raise ModelSpecError(f"kind={kind} requires {key}=...", column=len(text.rstrip()) + 1)
    try:
        return cls(**kwargs)
    except DomainError as exc:
        bad = next((k for k in fields if str(exc).startswith(k)), "kind")
        raise ModelSpecError(str(exc), column=columns.get(bad)) from None


def model_spec(model: LevyModel) -> str:
    """Canonical specification string, the inverse of :func:`parse_model`."""
    if isinstance(model, BrownianDrift):
        return f"kind=brownian sigma={model.sigma!r}"
    if isinstance(model, (CompoundPoissonPositive, CompoundPoissonNegative)):
        return f"kind={model.kind} lambda={model.lam!r} mu={model.mu!r}"
    if isinstance(model, Stable):
        return f"kind=stable alpha={model.alpha!r} beta={model.beta!r}"
    raise UnsupportedModelError(f"unknown model {model!r}")
