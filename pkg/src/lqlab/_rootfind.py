"""Scalar root finding on the increasing branch of a convex function.

``fun(theta)`` returns ``(value, derivative)`` or ``None`` where the function
is infinite (treated as +inf, which is the only way a convex exponent blows up
on the right).
"""

from __future__ import annotations

import math
from typing import Callable, Optional, Tuple

from .errors import NumericalError

Pair = Optional[Tuple[float, float]]

_EPS = 2.220446049250313e-16
_MAX_DOUBLINGS = 200


def _probe(fun, upper, lo, k):
    """k-th bracket candidate: doubling to the right, or halving toward ``upper``."""
    if math.isinf(upper):
        return lo + 2.0 ** k
    return upper - (upper - lo) * 0.5 ** (k + 1)


def argmin_convex(fun: Callable[[float], Pair], lo: float, upper: float = math.inf,
                  tol: float = 1e-15) -> float:
    """Minimiser of a convex function on ``[lo, upper)`` located by derivative sign."""
    pair = fun(lo)
    if pair is None:
        raise NumericalError("function infinite at left end", lo=lo)
    if pair[1] >= 0.0:
        return lo
    a = lo
    for k in range(_MAX_DOUBLINGS):
        b = _probe(fun, upper, lo, k)
        pb = fun(b)
        if pb is None or pb[1] >= 0.0:
            break
        a = b
    else:
        raise NumericalError("derivative never turns positive", lo=lo, last=b)
    while b - a > tol * max(1.0, abs(b)):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        pm = fun(m)
        if pm is None or pm[1] >= 0.0:
            b = m
        else:
            a = m
    return 0.5 * (a + b)


def increasing_root(fun: Callable[[float], Pair], lo: float, target: float,
                    upper: float = math.inf, rtol: float = 1e-12,
                    maxiter: int = 200) -> Tuple[float, float, int]:
    """Solve ``fun(theta) = target`` for theta in ``[lo, upper)``.

    ``fun`` must be increasing on that interval with ``fun(lo) <= target``.
    The bracket ``[lo, lo + 2**k]`` (or ``[lo, upper - (upper-lo)/2**(k+1)]``
    for finite ``upper``) is grown until it straddles the target, after which
    Newton steps are taken and replaced by bisection whenever they leave the
    bracket.  Returns ``(theta, residual, iterations)``.
    """
    plo = fun(lo)
    if plo is None:
        raise NumericalError("function infinite at left end", lo=lo)
    if plo[0] == target:
        return lo, 0.0, 0
    if plo[0] > target:
        raise NumericalError("target below the branch minimum", lo=lo, f_lo=plo[0], target=target)

    a = lo
    b = None
    for k in range(_MAX_DOUBLINGS):
        cand = _probe(fun, upper, lo, k)
        pc = fun(cand)
        if pc is not None and pc[0] == target:
            return cand, 0.0, 0
        if pc is None or pc[0] >= target:
            b = cand
            break
        a = cand
    if b is None:
        raise NumericalError("could not bracket root", lo=lo, target=target, last=cand)

    x = 0.5 * (a + b)
    best = None  # (theta, residual, derivative) with the smallest |residual|
    iterations = 0
    for iterations in range(1, maxiter + 1):
        px = fun(x)
        if px is None:
            b = x
            x = 0.5 * (a + b)
            continue
        fx, dfx = px[0] - target, px[1]
        if best is None or abs(fx) < abs(best[1]):
            best = (x, fx, dfx)
        if fx == 0.0:
            break
        if fx < 0.0:
            a = x
        else:
            b = x
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break  # bracket down to adjacent doubles
        xn = x - fx / dfx if dfx > 0.0 else mid
        # a step onto a bracket end could bounce between the ends forever
        if not a < xn < b:
            xn = mid
        if abs(xn - x) <= 2.0 * _EPS * max(1.0, abs(x)):
            break
        x = xn
    else:
        raise NumericalError("root finder did not converge", iterations=maxiter, a=a, b=b)

    if best is None:
        raise NumericalError("root landed where function is infinite", theta=x)
    x, residual, deriv = best
    # one ulp of theta moves fun by about eps * |theta * fun'|; never demand less
    floor = 4.0 * _EPS * abs(x * deriv)
    if abs(residual) > max(rtol * max(1.0, abs(target)), floor):
        raise NumericalError("root residual above tolerance", theta=x, residual=residual,
                             target=target, iterations=iterations)
    return x, residual, iterations
