"""Gradient-based and derivative-free minimizers.

First-order steppers (momentum, adagrad, rmsprop, adam, adamw) are
pure functions over caller-owned state. Momentum uses the
convex-combination form v = beta*v + (1-beta)*g. Epsilon sits inside
the square root for adagrad/rmsprop and outside for adam; adamw
subtracts eta*lambda*theta on top of the adam step.

Newton and quasi-Newton minimizers solve linear systems through
lindecomp instead of forming explicit inverses. BFGS/L-BFGS use
backtracking Armijo line search (c = 1e-4, halving).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from . import lindecomp
from .errors import (
    LineSearchFailure,
    MaxIterations,
    NonFinite,
    ShapeMismatch,
    Singular,
    SingularHessian,
)
from .ndcore import Matrix, Vector

VecFn = Callable[[Sequence[float]], Sequence[float]]

_DIVERGE_LIMIT = 1e12
_CURVATURE_GUARD = 1e-10
_ARMIJO_C = 1e-4


@dataclass(frozen=True)
class OptConfig:
    eta: float
    beta: float = 0.9
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        for name in ("beta", "beta1", "beta2"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name} must be in [0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be nonnegative")


@dataclass(frozen=True)
class OptState:
    velocity: Vector
    accum: Vector
    sq_avg: Vector
    m: Vector
    vhat_raw: Vector
    t: int

    @classmethod
    def zeros(cls, n: int) -> "OptState":
        def z() -> Vector:
            return Vector([0.0] * n)

        return cls(z(), z(), z(), z(), z(), 0)


@dataclass(frozen=True)
class Schedule:
    kind: str
    eta0: float
    drop_factor: float = 0.5
    drop_epoch: int = 10
    lam: float = 0.0
    eta_min: float = 0.0
    eta_max: float | None = None
    t0: int = 10
    t_mult: int = 2

    def __post_init__(self):
        if self.kind not in ("step", "exponential", "cosine_warm_restarts"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.drop_epoch < 1 or self.t0 < 1:
            raise ValueError("drop_epoch and t0 must be >= 1")
        if self.eta_max is not None and self.eta_min > self.eta_max:
            raise ValueError("need eta_min <= eta_max")


@dataclass(frozen=True)
class QuasiNewtonState:
    """Either a dense inverse-Hessian estimate or an (s, y) ring buffer."""

    h_inv: Matrix | None = None
    pairs: tuple[tuple[tuple[float, ...], tuple[float, ...]], ...] = ()
    memory: int = 0


@dataclass(frozen=True)
class MinimizeResult:
    x: Vector
    iterations: int
    residual: float  # last gradient sup-norm; simplex f-spread for nelder_mead
    converged: bool
    fval: float | None = None
    state: QuasiNewtonState | None = None


def _vec(x, name="x") -> list[float]:
    return Vector(list(x)).data


def _norm_inf(v: Sequence[float]) -> float:
    return max(abs(a) for a in v)


def _norm2(v: Sequence[float]) -> float:
    return math.sqrt(math.fsum(a * a for a in v))


def _dot(a: Sequence[float], b: Sequence[float]) -> float:
    return math.fsum(p * q for p, q in zip(a, b))


def gd_minimize(
    grad: VecFn, x0: Sequence[float], eta: float, iters: int
) -> list[Vector]:
    if eta <= 0:
        raise ValueError("eta must be positive")
    if iters < 0:
        raise ValueError("iters must be nonnegative")
    x = _vec(x0)
    traj = [Vector(x)]
    for _ in range(iters):
        g = list(grad(x))
        if len(g) != len(x):
            raise ShapeMismatch("gradient size differs from parameter size")
        x = [p - eta * q for p, q in zip(x, g)]
        for v in x:
            if not math.isfinite(v) or abs(v) > _DIVERGE_LIMIT:
                raise NonFinite("gradient descent diverged")
        traj.append(Vector(x))
    return traj


def optimizer_step(
    kind: str,
    theta: Sequence[float],
    g: Sequence[float],
    state: OptState,
    cfg: OptConfig,
) -> tuple[Vector, OptState]:
    th = _vec(theta)
    gr = _vec(g)
    n = len(th)
    if len(gr) != n:
        raise ShapeMismatch("gradient size differs from parameter size")
    for field in (state.velocity, state.accum, state.sq_avg, state.m, state.vhat_raw):
        if len(field) != n:
            raise ShapeMismatch("optimizer state sized for a different parameter count")
    t = state.t + 1

    if kind == "momentum":
        v = [cfg.beta * a + (1.0 - cfg.beta) * b for a, b in zip(state.velocity, gr)]
        new = [p - cfg.eta * q for p, q in zip(th, v)]
        return Vector(new), replace(state, velocity=Vector(v), t=t)

    if kind == "adagrad":
        acc = [a + b * b for a, b in zip(state.accum, gr)]
        new = [p - cfg.eta * q / math.sqrt(a + cfg.eps) for p, q, a in zip(th, gr, acc)]
        return Vector(new), replace(state, accum=Vector(acc), t=t)

    if kind == "rmsprop":
        e = [cfg.beta * a + (1.0 - cfg.beta) * b * b for a, b in zip(state.sq_avg, gr)]
        new = [p - cfg.eta * q / math.sqrt(a + cfg.eps) for p, q, a in zip(th, gr, e)]
        return Vector(new), replace(state, sq_avg=Vector(e), t=t)

    if kind in ("adam", "adamw"):
        m = [cfg.beta1 * a + (1.0 - cfg.beta1) * b for a, b in zip(state.m, gr)]
        v = [cfg.beta2 * a + (1.0 - cfg.beta2) * b * b for a, b in zip(state.vhat_raw, gr)]
        mc = 1.0 - cfg.beta1**t
        vc = 1.0 - cfg.beta2**t
        new = [
            p - cfg.eta * (mm / mc) / (math.sqrt(vv / vc) + cfg.eps)
            for p, mm, vv in zip(th, m, v)
        ]
        if kind == "adamw":
            new = [p2 - cfg.eta * cfg.weight_decay * p for p2, p in zip(new, th)]
        return Vector(new), replace(state, m=Vector(m), vhat_raw=Vector(v), t=t)

    raise ValueError(f"unknown optimizer kind {kind!r}")


def lr_at(sched: Schedule, t: int) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    if sched.kind == "step":
        return sched.eta0 * sched.drop_factor ** (t // sched.drop_epoch)
    if sched.kind == "exponential":
        return sched.eta0 * math.exp(-sched.lam * t)
    # cosine annealing with warm restarts: walk the cycle lengths
    # t0, t0*t_mult, t0*t_mult^2, ... to locate the current cycle
    eta_max = sched.eta0 if sched.eta_max is None else sched.eta_max
    t_cur = t
    period = sched.t0
    while t_cur >= period:
        t_cur -= period
        period *= sched.t_mult
    return sched.eta_min + 0.5 * (eta_max - sched.eta_min) * (
        1.0 + math.cos(math.pi * t_cur / period)
    )


def clip_by_norm(g: Sequence[float], threshold: float) -> Vector:
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    gr = _vec(g)
    norm = _norm2(gr)
    if norm <= threshold:
        return Vector(gr)
    scale = threshold / norm
    return Vector([v * scale for v in gr])


def newton_minimize(
    grad: VecFn,
    hess: Callable[[Sequence[float]], Matrix],
    x0: Sequence[float],
    tol: float = 1e-8,
    max_iter: int = 100,
) -> MinimizeResult:
    x = _vec(x0)
    g = list(grad(x))
    if _norm_inf(g) <= 1e-15:
        return MinimizeResult(Vector(x), 0, _norm_inf(g), True)
    for k in range(1, max_iter + 1):
        h = hess(x)
        try:
            delta = lindecomp.solve_direct(h, g, "lu")
        except Singular as exc:
            raise SingularHessian("Hessian is singular at the current point") from exc
        x = [p - d for p, d in zip(x, delta.data)]
        g = list(grad(x))
        if _norm_inf(delta.data) < tol:
            return MinimizeResult(Vector(x), k, _norm_inf(g), True)
    raise MaxIterations(f"no convergence in {max_iter} iterations")


def _armijo(f, x, fx, g, d):
    # backtracking halving until sufficient decrease
    slope = _dot(g, d)
    t = 1.0
    while t > 1e-20:
        x_new = [p + t * q for p, q in zip(x, d)]
        f_new = f(x_new)
        if f_new <= fx + _ARMIJO_C * t * slope:
            return x_new, f_new
        t *= 0.5
    raise LineSearchFailure("backtracking found no sufficient decrease")


def bfgs_minimize(
    f: Callable[[Sequence[float]], float],
    grad: VecFn,
    x0: Sequence[float],
    tol: float = 1e-6,
    max_iter: int = 200,
) -> MinimizeResult:
    x = _vec(x0)
    n = len(x)
    g = list(grad(x))
    fx = f(x)
    h = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    if _norm_inf(g) < tol:
        return MinimizeResult(
            Vector(x), 0, _norm_inf(g), True, fx, _qn_state_from_dense(h)
        )
    for k in range(1, max_iter + 1):
        d = [-math.fsum(h[i][j] * g[j] for j in range(n)) for i in range(n)]
        if _dot(d, g) >= 0.0:
            # stale curvature made the direction non-descending; restart from I
            h = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
            d = [-v for v in g]
        x_new, f_new = _armijo(f, x, fx, g, d)
        g_new = list(grad(x_new))
        s = [a - b for a, b in zip(x_new, x)]
        y = [a - b for a, b in zip(g_new, g)]
        ys = _dot(y, s)
        if ys > _CURVATURE_GUARD:
            rho = 1.0 / ys
            hy = [math.fsum(h[i][j] * y[j] for j in range(n)) for i in range(n)]
            yhy = _dot(y, hy)
            # H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded
            for i in range(n):
                for j in range(n):
                    h[i][j] += (
                        rho * rho * yhy * s[i] * s[j]
                        + rho * s[i] * s[j]
                        - rho * (s[i] * hy[j] + hy[i] * s[j])
                    )
            for i in range(n):
                for j in range(i + 1, n):
                    avg = 0.5 * (h[i][j] + h[j][i])
                    h[i][j] = avg
                    h[j][i] = avg
        x, g, fx = x_new, g_new, f_new
        if _norm_inf(g) < tol:
            return MinimizeResult(
                Vector(x), k, _norm_inf(g), True, fx, _qn_state_from_dense(h)
            )
    raise MaxIterations(f"no convergence in {max_iter} iterations")


def _qn_state_from_dense(h: list[list[float]]) -> QuasiNewtonState:
    return QuasiNewtonState(h_inv=Matrix.from_rows(h))


def lbfgs_minimize(
    f: Callable[[Sequence[float]], float],
    grad: VecFn,
    x0: Sequence[float],
    memory: int = 10,
    tol: float = 1e-6,
    max_iter: int = 200,
) -> MinimizeResult:
    if memory < 1:
        raise ValueError("memory must be >= 1")
    x = _vec(x0)
    g = list(grad(x))
    fx = f(x)
    pairs: list[tuple[list[float], list[float]]] = []
    if _norm_inf(g) < tol:
        return MinimizeResult(Vector(x), 0, _norm_inf(g), True, fx, QuasiNewtonState(pairs=(), memory=memory))
    for k in range(1, max_iter + 1):
        d = _two_loop_direction(g, pairs)
        if _dot(d, g) >= 0.0:
            pairs.clear()
            d = [-v for v in g]
        x_new, f_new = _armijo(f, x, fx, g, d)
        g_new = list(grad(x_new))
        s = [a - b for a, b in zip(x_new, x)]
        y = [a - b for a, b in zip(g_new, g)]
        if _dot(y, s) > _CURVATURE_GUARD:
            pairs.append((s, y))
            if len(pairs) > memory:
                pairs.pop(0)
        elif pairs:
            # Armijo steps can land where y's = s'y <= 0; the pair is
            # unusable and the remembered model is going stale, so age
            # out the oldest entry instead of crawling on it forever
            pairs.pop(0)
        x, g, fx = x_new, g_new, f_new
        if _norm_inf(g) < tol:
            state = QuasiNewtonState(
                pairs=tuple((tuple(s), tuple(y)) for s, y in pairs), memory=memory
            )
            return MinimizeResult(Vector(x), k, _norm_inf(g), True, fx, state)
    raise MaxIterations(f"no convergence in {max_iter} iterations")


def _two_loop_direction(g, pairs):
    q = [-v for v in g]
    if not pairs:
        return q
    alphas = []
    for s, y in reversed(pairs):
        rho = 1.0 / _dot(y, s)
        alpha = rho * _dot(s, q)
        alphas.append((rho, alpha, s, y))
        q = [a - alpha * b for a, b in zip(q, y)]
    s_last, y_last = pairs[-1]
    gamma = _dot(s_last, y_last) / _dot(y_last, y_last)
    q = [gamma * v for v in q]
    for rho, alpha, s, y in reversed(alphas):
        beta = rho * _dot(y, q)
        q = [a + (alpha - beta) * b for a, b in zip(q, s)]
    return q


def nelder_mead(
    f: Callable[[Sequence[float]], float],
    x0: Sequence[float],
    tol: float = 1e-8,
    max_iter: int = 500,
) -> MinimizeResult:
    x = _vec(x0)
    n = len(x)
    simplex = [list(x)]
    for i in range(n):
        p = list(x)
        p[i] += 0.05 * p[i] if p[i] != 0.0 else 0.00025
        simplex.append(p)
    fvals = [f(p) for p in simplex]

    for k in range(max_iter + 1):
        order = sorted(range(n + 1), key=lambda i: fvals[i])
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        spread = fvals[-1] - fvals[0]
        if spread < tol:
            return MinimizeResult(Vector(simplex[0]), k, spread, True, fvals[0])
        if k == max_iter:
            break
        centroid = [
            math.fsum(simplex[i][j] for i in range(n)) / n for j in range(n)
        ]
        worst = simplex[-1]
        reflected = [c + (c - w) for c, w in zip(centroid, worst)]
        fr = f(reflected)
        if fvals[0] <= fr < fvals[-2]:
            simplex[-1], fvals[-1] = reflected, fr
            continue
        if fr < fvals[0]:
            expanded = [c + 2.0 * (c - w) for c, w in zip(centroid, worst)]
            fe = f(expanded)
            if fe < fr:
                simplex[-1], fvals[-1] = expanded, fe
            else:
                simplex[-1], fvals[-1] = reflected, fr
            continue
        if fr < fvals[-1]:
            outside = [c + 0.5 * (r - c) for c, r in zip(centroid, reflected)]
            fo = f(outside)
            if fo <= fr:
                simplex[-1], fvals[-1] = outside, fo
                continue
        else:
            inside = [c + 0.5 * (w - c) for c, w in zip(centroid, worst)]
            fi = f(inside)
            if fi < fvals[-1]:
                simplex[-1], fvals[-1] = inside, fi
                continue
        best = simplex[0]
        for i in range(1, n + 1):
            simplex[i] = [b + 0.5 * (p - b) for b, p in zip(best, simplex[i])]
            fvals[i] = f(simplex[i])
    raise MaxIterations(f"no convergence in {max_iter} iterations")


def sgd_linreg(
    xs: Sequence[float],
    ys: Sequence[float],
    batch: int,
    eta: float,
    iters: int,
    seed: int,
) -> Vector:
    """Mini-batch SGD for y = theta0 + theta1*x; returns [intercept, slope].

    Parameters start from two standard-normal draws and batches are
    sampled with replacement, all from one generator seeded here, so a
    given seed fixes the whole trajectory.  When batch equals the data
    size every step uses the whole dataset, which makes the loss a
    convex quadratic descent (with-replacement resampling would break
    that monotonicity).
    """
    data_x = _vec(xs)
    data_y = _vec(ys)
    if len(data_x) != len(data_y):
        raise ShapeMismatch(f"{len(data_x)} inputs but {len(data_y)} targets")
    if not 1 <= batch <= len(data_x):
        raise ShapeMismatch("batch must be in [1, len(xs)]")
    if eta <= 0:
        raise ValueError("eta must be positive")
    rng = random.Random(seed)
    theta0 = rng.gauss(0.0, 1.0)
    theta1 = rng.gauss(0.0, 1.0)
    n = len(data_x)
    full = list(range(n))
    for _ in range(iters):
        idx = full if batch == n else [rng.randrange(n) for _ in range(batch)]
        g0 = 0.0
        g1 = 0.0
        for i in idx:
            err = theta0 + theta1 * data_x[i] - data_y[i]
            g0 += err
            g1 += err * data_x[i]
        theta0 -= eta * 2.0 * g0 / batch
        theta1 -= eta * 2.0 * g1 / batch
    return Vector([theta0, theta1])
