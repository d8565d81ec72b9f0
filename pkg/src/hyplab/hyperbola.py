"""Dirichlet's hyperbola method, long form and short-interval form.

The short form rewrites a window sum of a convolution exactly:

    sum over x < n <= x+y of (f * g)(n)
        =   sum over d <= T of f(d) (window sum of g on (x/d, (x+y)/d])
          + sum over k <= x/T of g(k) (window sum of f on (x/k, (x+y)/k])
          + boundary term

provided 1 <= max(y, x/y) <= T <= x.  Under that hypothesis the interval
(x/T, (x+y)/T] contains at most one integer k0 = floor((x+y)/T), and the
boundary term equals g(k0) times the f-sum over (T, (x+y)/k0]; it vanishes
whenever the interval holds no integer or (x+y)/T is itself an integer.
The split is an identity, not an estimate, and the tests hold it to exact
equality on integer-valued inputs.

T is a real parameter.  All floor comparisons against T go through exact
rational arithmetic (a float is a dyadic rational), so boundary cases are
classified exactly and the identity survives adversarial T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (
    PREFIX_WINDOW_MAX,
    evaluate_point,
    prefix_sums,
    prefix_values,
    short_sum_bruteforce,
)
from .errors import PreconditionError, SegmentCapError
from .specs import FuncSpec

__all__ = [
    "HyperbolaDecomposition",
    "WINDOW_DIRECT",
    "psi",
    "nearest_int_dist",
    "short_hyperbola",
    "long_hyperbola",
    "sawtooth_block_sum",
]

#: Inner window sums at most this wide are sieved directly instead of going
#: through a prefix table.
WINDOW_DIRECT = 10_000


def psi(t: float) -> float:
    """First Bernoulli (sawtooth) function t - floor(t) - 1/2, in [-1/2, 1/2)."""
    return t - math.floor(t) - 0.5


def nearest_int_dist(t: float) -> float:
    """Distance from t to the nearest integer, in [0, 1/2]."""
    fr = t - math.floor(t)
    return min(fr, 1.0 - fr)


@dataclass
class HyperbolaDecomposition:
    """The three exact components of the short-interval hyperbola identity.

    ``total = term_d + term_k + boundary_term`` holds exactly, and equals the
    windowed sum of the convolution.  ``d_count`` and ``k_count`` meter the
    number of outer evaluations on each leg (T + x/T work, not x).
    """

    term_d: object
    term_k: object
    boundary_term: object
    total: object
    T: float
    x: int
    y: int
    d_count: int
    k_count: int


def _range_sum(spec: FuncSpec, a: int, b: int):
    """Sum of spec over the integer window (a, b]."""
    if b <= a:
        return 0 if spec.integer_valued else 0.0
    if b - a <= WINDOW_DIRECT or b > PREFIX_WINDOW_MAX:
        return short_sum_bruteforce(spec, a, b - a)
    sums = prefix_sums(spec, b)
    out = sums[b] - sums[a]
    return int(out) if spec.integer_valued else float(out)


def _as_fraction(T) -> Fraction:
    try:
        q = Fraction(T)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"T must be a real number, got {T!r}") from exc
    return q


def _blocked_d_leg(f: FuncSpec, g: FuncSpec, x: int, top: int, D: int, isint: bool):
    """sum over d <= D of f(d) (g-sum on (x/d, top/d]), grouped by quotient.

    Both floors are constant on runs of d, so one prefix-sum lookup per run
    covers the whole block; the run count is O(sqrt(top)) instead of D.
    Returns (value, blocks).
    """
    fs = prefix_sums(f, D)
    gs = None if g.kind == "one" else prefix_sums(g, top)
    total = 0 if isint else 0.0
    blocks = 0
    d = 1
    while d <= D:
        q1 = top // d
        q2 = x // d
        d2 = min(top // q1, x // q2, D)
        blockf = fs[d2] - fs[d - 1]
        if isint:
            blockf = int(blockf)
        gwin = (q1 - q2) if gs is None else gs[q1] - gs[q2]
        if isint:
            gwin = int(gwin)
        total += blockf * gwin
        blocks += 1
        d = d2 + 1
    return total, blocks


def short_hyperbola(
    f: FuncSpec, g: FuncSpec, x: int, y: int, T
) -> HyperbolaDecomposition:
    """Exact short-interval hyperbola decomposition of sum (f*g)(n), x < n <= x+y."""
    if x < 1 or y < 1:
        raise PreconditionError(f"short hyperbola requires x, y >= 1, got {x}, {y}")
    Tq = _as_fraction(T)
    if Tq < y:
        raise PreconditionError(f"hypothesis y <= T violated: y = {y}, T = {T}")
    if Tq * y < x:
        raise PreconditionError(f"hypothesis x/y <= T violated: x/y = {x / y}, T = {T}")
    if Tq > x:
        raise PreconditionError(f"hypothesis T <= x violated: T = {T}, x = {x}")

    D = math.floor(Tq)
    kmax = x // Tq
    isint = f.integer_valued and g.integer_valued
    top = x + y
    if D > PREFIX_WINDOW_MAX:
        raise SegmentCapError(
            f"d-leg table of {D} entries exceeds the prefix cap {PREFIX_WINDOW_MAX};"
            " use a smaller T"
        )

    # d-leg: f(d) times the count or g-sum of the window (x/d, (x+y)/d]
    if g.kind == "one" or top <= PREFIX_WINDOW_MAX:
        term_d, d_count = _blocked_d_leg(f, g, x, top, D, isint)
    else:
        fv = prefix_values(f, D)
        term_d = 0 if isint else 0.0
        for d in range(1, D + 1):
            fd = fv[d]
            if fd:
                term_d += fd * _range_sum(g, x // d, top // d)
        d_count = D

    # k-leg: g(k) times the f-sum of the window (x/k, (x+y)/k]
    km = int(kmax)
    k_arr = np.arange(1, km + 1, dtype=np.int64)
    gv = prefix_values(g, km)[1 : km + 1]
    if f.kind == "one":
        fwin = (top // k_arr) - (x // k_arr)
        term_k = _mixed_sum(gv, fwin, isint)
    elif top <= PREFIX_WINDOW_MAX:
        fs = prefix_sums(f, top)
        fwin = fs[top // k_arr] - fs[x // k_arr]
        term_k = _mixed_sum(gv, fwin, isint)
    else:
        term_k = 0 if isint else 0.0
        for k in range(1, km + 1):
            gk = gv[k - 1]
            if gk:
                term_k += gk * _range_sum(f, x // k, top // k)

    # boundary: the single integer the interval (x/T, (x+y)/T] can contain
    k0 = top // Tq
    cnt = k0 - kmax
    if cnt:
        inner = _range_sum(f, D, top // k0)
        gk0 = evaluate_point(g, int(k0))
        boundary = gk0 * cnt * inner
    else:
        boundary = 0 if isint else 0.0

    total = term_d + term_k + boundary
    if not isint:
        total = float(total)
        term_d, term_k, boundary = float(term_d), float(term_k), float(boundary)
    return HyperbolaDecomposition(
        term_d, term_k, boundary, total, float(Tq), x, y, d_count, km
    )


def _mixed_sum(a: np.ndarray, b: np.ndarray, isint: bool):
    if isint:
        if a.dtype == object or b.dtype == object:
            return sum(int(u) * int(v) for u, v in zip(a, b))
        bound = (
            int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)) * (len(a) + 1)
        )
        if bound < 1 << 62:
            return int(np.sum(a * b, dtype=np.int64))
        return sum(int(u) * int(v) for u, v in zip(a, b))
    return float(np.sum(a.astype(np.float64) * b.astype(np.float64)))


def long_hyperbola(f: FuncSpec, g: FuncSpec, x: int, T):
    """Exact prefix identity: sum of (f*g)(n) over n <= x, split at T."""
    if x < 1:
        raise PreconditionError(f"long hyperbola requires x >= 1, got {x}")
    Tq = _as_fraction(T)
    if not (1 <= Tq <= x):
        raise PreconditionError(f"long hyperbola requires 1 <= T <= x, got T = {T}")
    if x > PREFIX_WINDOW_MAX:
        raise SegmentCapError(
            f"long hyperbola prefix tables capped at {PREFIX_WINDOW_MAX}, got x = {x}"
        )
    D = math.floor(Tq)
    kmax = x // Tq
    isint = f.integer_valued and g.integer_valued
    fs = prefix_sums(f, x)
    gs = prefix_sums(g, x)
    d_arr = np.arange(1, D + 1, dtype=np.int64)
    k_arr = np.arange(1, int(kmax) + 1, dtype=np.int64)
    fv = prefix_values(f, D)[1 : D + 1]
    gv = prefix_values(g, int(kmax))[1 : int(kmax) + 1]
    term1 = _mixed_sum(fv, gs[x // d_arr], isint)
    term2 = _mixed_sum(gv, fs[x // k_arr], isint)
    corr = fs[D] * gs[int(kmax)]
    total = term1 + term2 - corr
    return int(total) if isint else float(total)


def sawtooth_block_sum(f: FuncSpec, N: int, x: int, y: int) -> float:
    """Sum of f(n) (psi((x+y)/n) - psi(x/n)) over the dyadic block N < n <= 2N.

    Requires y < N <= x.  The sawtooth differences are evaluated through
    integer remainders, so the jump locations are classified exactly.
    """
    if not (0 <= y < N <= x):
        raise PreconditionError(
            f"block sum requires 0 <= y < N <= x, got N = {N}, x = {x}, y = {y}"
        )
    if y == 0:
        return 0.0
    n_arr = np.arange(N + 1, 2 * N + 1, dtype=np.int64)
    fv = prefix_values(f, 2 * N)[N + 1 : 2 * N + 1]
    frac_hi = ((x + y) % n_arr) / n_arr
    frac_lo = (x % n_arr) / n_arr
    return float(np.sum(fv.astype(np.float64) * (frac_hi - frac_lo)))
