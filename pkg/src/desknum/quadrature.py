"""Finite-difference derivatives and one-dimensional quadrature.

Integration rules: composite trapezoid (callable or sampled data),
composite Simpson, and Gauss-Legendre. Gauss nodes are found at runtime
by Newton iteration on the Legendre recurrence, so no tabulated
constants are needed; rules are memoized per order.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    BadOrder,
    BadPartition,
    OddPartition,
    ShapeMismatch,
    TooFewPoints,
    UnsortedKnots,
)

Fn = Callable[[float], float]

_SCHEMES = ("forward", "backward", "central")

_MAX_GAUSS_ORDER = 64


def finite_diff(f: Fn, x: float, h: float = 1e-5, scheme: str = "central") -> float:
    """Difference quotient of f at x. central is second order in h,
    forward and backward are first order."""
    if h <= 0:
        raise ValueError("step h must be positive")
    if scheme == "forward":
        return (f(x + h) - f(x)) / h
    if scheme == "backward":
        return (f(x) - f(x - h)) / h
    if scheme == "central":
        return (f(x + h) - f(x - h)) / (2.0 * h)
    raise ValueError(f"unknown scheme {scheme!r}, expected one of {_SCHEMES}")


def trapezoid_fn(f: Fn, a: float, b: float, n: int) -> float:
    if n < 1:
        raise BadPartition("need at least one subinterval")
    if not a < b:
        raise BadPartition("need a < b")
    h = (b - a) / n
    interior = math.fsum(f(a + i * h) for i in range(1, n))
    return (h / 2.0) * (f(a) + 2.0 * interior + f(b))


def trapezoid_samples(xs: Sequence[float], ys: Sequence[float]) -> float:
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys):
        raise ShapeMismatch(f"{len(xs)} abscissae but {len(ys)} ordinates")
    if len(xs) < 2:
        raise TooFewPoints("need at least two samples")
    for p, q in zip(xs, xs[1:]):
        if q < p:
            raise UnsortedKnots("sample abscissae must be nondecreasing")
    return math.fsum(
        (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]) / 2.0 for i in range(len(xs) - 1)
    )


def simpson(f: Fn, a: float, b: float, n: int) -> float:
    if n % 2 != 0:
        raise OddPartition("n must be even")
    if n < 2:
        raise BadPartition("need at least two subintervals")
    if not a < b:
        raise BadPartition("need a < b")
    h = (b - a) / n
    acc = [f(a), f(b)]
    acc.extend(4.0 * f(a + i * h) for i in range(1, n, 2))
    acc.extend(2.0 * f(a + i * h) for i in range(2, n, 2))
    return (h / 3.0) * math.fsum(acc)


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre nodes and weights on [-1, 1]."""

    n: int
    nodes: tuple[float, ...]
    weights: tuple[float, ...]


def _legendre_pair(n: int, x: float) -> tuple[float, float]:
    # returns (P_n(x), P_n'(x)) via the three-term recurrence
    p_prev, p = 1.0, x
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@functools.lru_cache(maxsize=None)
def gauss_rule(n: int) -> GaussRule:
    if not 1 <= n <= _MAX_GAUSS_ORDER:
        raise BadOrder(f"order must be in [1, {_MAX_GAUSS_ORDER}], got {n}")
    nodes = []
    weights = []
    for i in range(1, n + 1):
        x = math.cos(math.pi * (i - 0.25) / (n + 0.5))
        for _ in range(100):
            p, dp = _legendre_pair(n, x)
            step = p / dp
            x -= step
            if abs(step) < 1e-15:
                break
        _, dp = _legendre_pair(n, x)
        nodes.append(x)
        weights.append(2.0 / ((1.0 - x * x) * dp * dp))
    return GaussRule(n, tuple(nodes), tuple(weights))


def gauss_legendre(f: Fn, a: float, b: float, n: int) -> float:
    rule = gauss_rule(n)
    mid = (a + b) / 2.0
    half = (b - a) / 2.0
    return half * math.fsum(
        w * f(mid + half * x) for x, w in zip(rule.nodes, rule.weights)
    )
