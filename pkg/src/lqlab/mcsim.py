"""Monte Carlo oracle for the minimum workload over a window.

The workload started in stationarity satisfies

    Q(t) = Q(0) + Y(t) + max(0, -Q(0) - inf_{s<=t} Y(s))

so ``M(t) = max(0, Q(0) + inf_{s<=t} Y(s))`` and no reflected path has to be
simulated: it is enough to draw ``Q(0)`` from the stationary law and the
running infimum of the free net input ``Y``.

* Compound Poisson input is simulated exactly, event by event: between jumps
  Y is linear, so its infimum sits at 0, at t, or next to a jump.
* Brownian input is simulated on a grid; with ``bridge=True`` the minimum of
  the Brownian bridge between grid points is drawn from its exact law, which
  makes the infimum exact in distribution for any step.
* Stable input is simulated on a grid with the Chambers-Mallows-Stuck
  generator; its stationary start comes from a burn-in run and is flagged
  approximate.

Randomness is split into blocks of ``McConfig.block`` paths.  Block ``b`` owns
a Philox stream keyed by ``(seed, b)``, so results do not depend on how many
workers process the blocks or in which order they finish.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError, UnsupportedModelError
from .fluctuation import phi_inverse
from .models import (
    BrownianDrift,
    CompoundPoissonNegative,
    CompoundPoissonPositive,
    LevyModel,
    Stable,
)

__all__ = [
    "McConfig",
    "McEstimate",
    "PathSample",
    "block_rng",
    "stable_variates",
    "sample_increments",
    "sample_stationary_q0",
    "simulate_min",
    "sample_paths",
    "sample_minima",
    "estimate_survival",
    "estimate_survival_grid",
    "estimate_mgf",
    "estimate_mgf_grid",
    "slln_frequency",
]


@dataclass(frozen=True)
class McConfig:
    paths: int = 100_000
    dt: float = 0.01
    seed: int = 20240611
    workers: int = 1
    bridge: bool = True
    burn_in: float = 50.0
    block: int = 16_384

    def __post_init__(self):
        if self.paths < 1:
            raise DomainError(f"paths must be >= 1, got {self.paths}")
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        if self.block < 1:
            raise DomainError(f"block must be >= 1, got {self.block}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must fit in 64 bits, got {self.seed}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n: int
    method: str
    flags: Tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class PathSample:
    """Per-path draws: stationary start, ``Y(t)`` and ``inf_{s<=t} Y(s)``."""

    q0: np.ndarray
    y_end: np.ndarray
    y_inf: np.ndarray
    flags: Tuple[str, ...] = ()

    @property
    def minimum(self) -> np.ndarray:
        """``M(t)``."""
        return np.maximum(0.0, self.q0 + self.y_inf)

    @property
    def workload(self) -> np.ndarray:
        """``Q(t)``."""
        return np.maximum(self.q0 + self.y_end, self.y_end - self.y_inf)


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based generator for substream ``block`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


# ---------------------------------------------------------------------------
# increments


def stable_variates(alpha: float, beta: float, size, rng: np.random.Generator) -> np.ndarray:
    """Chambers-Mallows-Stuck draws from ``S_alpha(1, beta, 0)``, ``alpha != 1``."""
    v = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    tan = beta * math.tan(0.5 * math.pi * alpha)
    shift = math.atan(tan) / alpha
    scale = (1.0 + tan * tan) ** (0.5 / alpha)
    arg = alpha * (v + shift)
    return (scale * np.sin(arg) / np.cos(v) ** (1.0 / alpha)
            * (np.cos(v - arg) / w) ** ((1.0 - alpha) / alpha))


def sample_increments(model: LevyModel, dt: float, size, rng: np.random.Generator) -> np.ndarray:
    """Draws of ``X(dt)`` (centred input, no drain)."""
    if isinstance(model, BrownianDrift):
        return model.sigma * math.sqrt(dt) * rng.standard_normal(size)
    if isinstance(model, (CompoundPoissonPositive, CompoundPoissonNegative)):
        counts = rng.poisson(model.lam * dt, size)
        # sum of k exponentials is Gamma(k); k = 0 gives 0
        jumps = np.where(counts > 0, rng.gamma(np.maximum(counts, 1), 1.0 / model.mu), 0.0)
        sign = 1.0 if isinstance(model, CompoundPoissonPositive) else -1.0
        return sign * jumps + model.drift * dt
    if isinstance(model, Stable):
        return dt ** (1.0 / model.alpha) * stable_variates(model.alpha, model.beta, size, rng)
    raise UnsupportedModelError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# path simulation


def _brownian_inf(model, t, cfg, rng, n):
    steps = max(1, round(t / cfg.dt))
    h = t / steps
    sd = model.sigma * math.sqrt(h)
    two_var = 2.0 * model.sigma ** 2 * h
    y = np.zeros(n)
    y_inf = np.zeros(n)
    for _ in range(steps):
        y_next = y + sd * rng.standard_normal(n) - h
        if cfg.bridge:
            # minimum of a Brownian bridge from y to y_next, by inverse CDF
            e = -np.log1p(-rng.random(n))
            low = 0.5 * (y + y_next - np.sqrt((y_next - y) ** 2 + two_var * e))
            np.minimum(y_inf, low, out=y_inf)
        else:
            np.minimum(y_inf, y_next, out=y_inf)
        y = y_next
    return y, y_inf


def _compound_poisson_inf(model, t, rng, n):
    positive = isinstance(model, CompoundPoissonPositive)
    counts = rng.poisson(model.lam * t, n)
    total = int(counts.sum())
    times = rng.random(total) * t
    sizes = rng.exponential(1.0 / model.mu, total)
    owner = np.repeat(np.arange(n), counts)
    times = times[np.lexsort((times, owner))]

    starts = np.cumsum(counts) - counts
    csum = np.concatenate(([0.0], np.cumsum(sizes)))
    offset = csum[starts]
    idx = np.arange(total)
    jumped = counts > 0

    y_inf = np.zeros(n)
    if positive:
        rate = 1.0 + model.lam / model.mu  # Y falls at this rate between jumps
        y_end = (csum[starts + counts] - offset) - rate * t
        # just before each jump: previous jumps minus the drain so far
        cand = (csum[idx] - offset[owner]) - rate * times
    else:
        rate = model.lam / model.mu - 1.0
        y_end = -(csum[starts + counts] - offset) + rate * t
        # just after each jump
        cand = -(csum[idx + 1] - offset[owner]) + rate * times
    if total:
        y_inf[jumped] = np.minimum.reduceat(cand, starts[jumped])
    np.minimum(y_inf, 0.0, out=y_inf)
    np.minimum(y_inf, y_end, out=y_inf)
    return y_end, y_inf


def _stable_inf(model, t, cfg, rng, n):
    steps = max(1, round(t / cfg.dt))
    h = t / steps
    y = np.zeros(n)
    y_inf = np.zeros(n)
    for _ in range(steps):
        y += sample_increments(model, h, n, rng) - h
        np.minimum(y_inf, y, out=y_inf)
    return y, y_inf


def _net_input_inf(model, t, cfg, rng, n):
    if isinstance(model, BrownianDrift):
        if not cfg.bridge and cfg.dt > 0.01:
            warnings.warn("Brownian grid minimum without bridge correction is biased; "
                          "use dt <= 0.01", stacklevel=3)
        return _brownian_inf(model, t, cfg, rng, n)
    if isinstance(model, (CompoundPoissonPositive, CompoundPoissonNegative)):
        return _compound_poisson_inf(model, t, rng, n)
    if isinstance(model, Stable):
        return _stable_inf(model, t, cfg, rng, n)
    raise UnsupportedModelError(f"unknown model {model!r}")


def _stable_burn_in(model, cfg, rng, n):
    """Lindley recursion from an empty queue over ``cfg.burn_in`` time units."""
    steps = max(1, round(cfg.burn_in / cfg.dt))
    h = cfg.burn_in / steps
    q = np.zeros(n)
    for _ in range(steps):
        q += sample_increments(model, h, n, rng) - h
        np.maximum(q, 0.0, out=q)
    return q


def sample_stationary_q0(model: LevyModel, rng: np.random.Generator, size=None,
                         cfg: McConfig = McConfig()) -> np.ndarray:
    """Draws from the stationary workload law ``Q_e``.

    Spectrally negative input: exponential with rate ``Phi(0)``.  Exponential
    upward jumps: an atom at 0 of mass ``mu/(lambda+mu)`` and otherwise
    exponential with rate ``mu^2/(lambda+mu)``.  Stable input has no closed
    form here; the draw is the end point of a burn-in run (approximate).
    """
    n = 1 if size is None else size
    if isinstance(model, (BrownianDrift, CompoundPoissonNegative)):
        rate = phi_inverse(model, 0.0).theta
        out = rng.exponential(1.0 / rate, n)
    elif isinstance(model, CompoundPoissonPositive):
        lam, mu = model.lam, model.mu
        busy = rng.random(n) < lam / (lam + mu)
        out = np.where(busy, rng.exponential((lam + mu) / (mu * mu), n), 0.0)
    elif isinstance(model, Stable):
        out = _stable_burn_in(model, cfg, rng, n)
    else:
        raise UnsupportedModelError(f"unknown model {model!r}")
    return out[0] if size is None else out


def simulate_min(model: LevyModel, q0, t: float, cfg: McConfig, rng: np.random.Generator):
    """``M(t) = max(0, q0 + inf_{s<=t} Y(s))`` for given start(s) ``q0``."""
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    q0_arr = np.atleast_1d(np.asarray(q0, dtype=float))
    _, y_inf = _net_input_inf(model, t, cfg, rng, q0_arr.size)
    out = np.maximum(0.0, q0_arr + y_inf)
    return out if np.ndim(q0) else float(out[0])


def _blocks(cfg):
    full, rest = divmod(cfg.paths, cfg.block)
    sizes = [cfg.block] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _map_blocks(fn, cfg):
    blocks = _blocks(cfg)
    if cfg.workers == 1 or len(blocks) == 1:
        return [fn(b, n) for b, n in blocks]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda bn: fn(*bn), blocks))


def sample_paths(model: LevyModel, t: float, cfg: McConfig, stationary: bool = True) -> PathSample:
    """Simulate ``cfg.paths`` independent windows of length t.

    With ``stationary=False`` the start is ``Q(0) = 0`` (useful for statistics
    of the free net input).
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")

    def run(b, n):
        rng = block_rng(cfg.seed, b)
        q0 = sample_stationary_q0(model, rng, n, cfg) if stationary else np.zeros(n)
        y_end, y_inf = _net_input_inf(model, t, cfg, rng, n)
        return q0, y_end, y_inf

    parts = _map_blocks(run, cfg)
    flags = ("approximate-stationarity",) if stationary and isinstance(model, Stable) else ()
    return PathSample(*(np.concatenate(arrs) for arrs in zip(*parts)), flags=flags)


def sample_minima(model: LevyModel, t: float, cfg: McConfig) -> np.ndarray:
    return sample_paths(model, t, cfg).minimum


def _method(model, cfg):
    if isinstance(model, BrownianDrift):
        return "mc-bridge" if cfg.bridge else "mc-grid"
    if isinstance(model, Stable):
        return "mc-grid"
    return "mc-exact"


def _proportion(hits, n, method, flags):
    p = hits / n
    return McEstimate(p, math.sqrt(p * (1.0 - p) / n), n, method, flags)


def estimate_survival_grid(model: LevyModel, t: float, us: Sequence[float],
                           cfg: McConfig) -> list:
    """``P{M(t) > u}`` for every u, all from the same simulated paths."""
    sample = sample_paths(model, t, cfg)
    m = sample.minimum
    return [_proportion(int(np.count_nonzero(m > u)), m.size, _method(model, cfg), sample.flags)
            for u in us]


def estimate_survival(model: LevyModel, t: float, u: float, cfg: McConfig) -> McEstimate:
    return estimate_survival_grid(model, t, [u], cfg)[0]


def _mean_estimate(values, method, flags):
    n = values.size
    sd = float(values.std(ddof=1)) if n > 1 else 0.0
    return McEstimate(float(values.mean()), sd / math.sqrt(n), n, method, flags)


def estimate_mgf_grid(model: LevyModel, xs: Sequence[float], t: float, cfg: McConfig) -> list:
    """``E exp(-x M(t))`` for every x, from the same simulated paths."""
    sample = sample_paths(model, t, cfg)
    m = sample.minimum
    return [_mean_estimate(np.exp(-x * m), _method(model, cfg), sample.flags) for x in xs]


def estimate_mgf(model: LevyModel, x: float, t: float, cfg: McConfig) -> McEstimate:
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    return estimate_mgf_grid(model, [x], t, cfg)[0]


def slln_frequency(model: LevyModel, u: float, eps: float, cfg: McConfig) -> McEstimate:
    """Empirical ``P{|inf_{s<=u} Y(s) / u + 1| > eps}``."""
    sample = sample_paths(model, u, cfg, stationary=False)
    hits = int(np.count_nonzero(np.abs(sample.y_inf / u + 1.0) > eps))
    return _proportion(hits, sample.y_inf.size, _method(model, cfg), ())
