"""Divisor concentration: Hooley's Delta_r function and dyadic divisor sums.

Delta_r(n) is the maximum, over real shifts u_1, ..., u_{r-1}, of the number
of tuples (d_1, ..., d_{r-1}) with d_1 ... d_{r-1} | n and each d_i inside the
log-length-1 window (e^{u_i}, e^{u_i+1}].

The tuple count is piecewise constant in every u_i, changing only where a
window edge crosses log d for some divisor d, and shifting any window left
until its edge sits just below the smallest divisor it contains never drops
the count.  The exact maximum is therefore attained on candidate windows
anchored just below a divisor, which the solver enumerates coordinate by
coordinate over a shrinking multiset of cofactors.  Window-edge comparisons
carry a relative 1e-12 nudge so that strict and weak inequalities stay
unambiguous in floating point; integer divisor ratios cannot approach e
closely enough at desk scale to be misread under that nudge.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .arith import evaluate_point, factorize
from .errors import PreconditionError, WorkCapError
from .specs import MAX_N, tau_m

__all__ = [
    "DivisorList",
    "DeltaValue",
    "WORK_CAP",
    "divisors",
    "delta_r",
    "delta_r_grid_oracle",
    "window_tuple_count",
    "dyadic_divisor_tau_sum",
    "dyadic_tau_delta_check",
    "iter_delta_values",
    "delta_short_sum",
    "delta_weighted_prefix",
]

#: Default cap on divisor tuples enumerated per call.
WORK_CAP = 10_000_000

#: Log-length of a window minus the anti-tie nudge.
_WINDOW_LEN = 1.0 - 1e-12

#: Multiplicative window top: a divisor window anchored at a covers [a, a*_E_TOP).
_E_TOP = math.exp(_WINDOW_LEN)

#: Left-edge offset of a candidate window anchored at a divisor.
_EDGE_NUDGE = 1e-12


@dataclass
class DivisorList:
    n: int
    divisors: list[int]


@dataclass
class DeltaValue:
    """Exact Delta_r(n) together with maximizing window left endpoints."""

    n: int
    r: int
    value: int
    witness: tuple[float, ...]


def divisors(n: int) -> DivisorList:
    """All divisors of n, sorted ascending."""
    if not (1 <= n <= MAX_N):
        raise PreconditionError(f"divisors requires 1 <= n <= 2^63-1, got {n}")
    divs = [1]
    for p, e in factorize(n):
        q = 1
        grown = []
        for _ in range(e):
            q *= p
            grown.extend(d * q for d in divs)
        divs.extend(grown)
    divs.sort()
    return DivisorList(n, divs)


def _divisor_cache(n: int) -> dict[int, list[int]]:
    """Lazy map from each divisor value of n to its own sorted divisor list."""
    full = divisors(n).divisors
    cache = {n: full, 1: [1]}

    class _Lazy(dict):
        def __missing__(self, m):
            ds = [d for d in full if m % d == 0]
            self[m] = ds
            return ds

    lazy = _Lazy(cache)
    return lazy


def _last_coordinate_best(mult: dict[int, int], divmap) -> tuple[int, float]:
    """Best single window over the weighted multiset of divisors of mult keys."""
    agg: dict[int, int] = {}
    for m, c in mult.items():
        for d in divmap[m]:
            agg[d] = agg.get(d, 0) + c
    vals = sorted(agg)
    cum = [0]
    for v in vals:
        cum.append(cum[-1] + agg[v])
    best = -1
    best_at = 1
    for i, v in enumerate(vals):
        j = bisect_left(vals, v * _E_TOP)
        count = cum[j] - cum[i]
        if count > best:
            best = count
            best_at = v
    return best, math.log(best_at) - _EDGE_NUDGE


class _Budget:
    __slots__ = ("left",)

    def __init__(self, cap: int) -> None:
        self.left = cap

    def spend(self, amount: int) -> None:
        self.left -= amount
        if self.left < 0:
            raise WorkCapError("divisor tuple enumeration exceeded the work cap")


def _best_windows(
    mult: dict[int, int], coords: int, divmap, budget: _Budget
) -> tuple[int, tuple[float, ...]]:
    if coords == 1:
        budget.spend(sum(len(divmap[m]) for m in mult))
        count, u = _last_coordinate_best(mult, divmap)
        return count, (u,)
    cands = sorted({d for m in mult for d in divmap[m]})
    best = -1
    best_ws: tuple[float, ...] = ()
    for a in cands:
        top = a * _E_TOP
        sub: dict[int, int] = {}
        touched = 0
        for m, c in mult.items():
            ds = divmap[m]
            j = i = bisect_left(ds, a)
            while j < len(ds) and ds[j] < top:
                q = m // ds[j]
                sub[q] = sub.get(q, 0) + c
                j += 1
            touched += j - i
        budget.spend(touched)
        if not sub:
            continue
        count, ws = _best_windows(sub, coords - 1, divmap, budget)
        if count > best:
            best = count
            best_ws = (math.log(a) - _EDGE_NUDGE, *ws)
    return best, best_ws


def delta_r(n: int, r: int, *, work_cap: int | None = None) -> DeltaValue:
    """Exact Delta_r(n) with a maximizing witness, r in {2, 3, 4}."""
    cap = WORK_CAP if work_cap is None else work_cap
    if r not in (2, 3, 4):
        raise PreconditionError(f"delta_r supports r in {{2, 3, 4}}, got {r}")
    if not (1 <= n <= MAX_N):
        raise PreconditionError(f"delta_r requires 1 <= n <= 2^63-1, got {n}")
    divmap = _divisor_cache(n)
    tau = len(divmap[n])
    if tau ** (r - 1) > cap:
        raise WorkCapError(
            f"tau(n)^(r-1) = {tau ** (r - 1)} exceeds the work cap {cap}"
        )
    budget = _Budget(cap)
    value, witness = _best_windows({n: 1}, r - 1, divmap, budget)
    return DeltaValue(n, r, value, witness)


def window_tuple_count(n: int, u: tuple[float, ...]) -> int:
    """Direct recount of divisor tuples inside the windows (e^{u_i}, e^{u_i+1}]."""
    divmap = _divisor_cache(n)

    def rec(m: int, i: int) -> int:
        if i == len(u):
            return 1
        lo, hi = u[i], u[i] + 1.0
        total = 0
        for d in divmap[m]:
            ld = math.log(d)
            if lo < ld <= hi:
                total += rec(m // d, i + 1)
        return total

    return rec(n, 0)


def _grid_representatives(logs: list[float], step: float, u_max: float) -> list[float]:
    """One grid point per piece of constancy of the window content on [-1, u_max].

    The content of (e^u, e^{u+1}] changes only at u = log d and u = log d - 1;
    between consecutive breakpoints every grid point sees the same count, so
    the grid maximum is the maximum over one representative per piece that
    actually contains a grid point.
    """
    bps = {-1.0, u_max}
    for lv in logs:
        if -1.0 < lv < u_max:
            bps.add(lv)
        if -1.0 < lv - 1.0 < u_max:
            bps.add(lv - 1.0)
    bp = sorted(bps)
    reps: list[float] = []
    for i in range(len(bp)):
        start = bp[i]
        end = bp[i + 1] if i + 1 < len(bp) else u_max + step
        j = math.ceil((start + 1.0) / step - 1e-12)
        u = -1.0 + j * step
        if u < start:
            u += step
        if u < end and u <= u_max + 1e-15:
            reps.append(u)
    return reps


def delta_r_grid_oracle(n: int, r: int, grid_step: float = 1e-4) -> int:
    """Maximum window count over the finite grid u_i = -1 + j*grid_step.

    A lower bound of Delta_r(n) that matches it once the step is below the
    smallest gap between the breakpoints of the count; evaluated exactly by
    scanning one grid representative per piece of constancy.
    """
    if grid_step > 1e-3:
        raise PreconditionError(f"grid oracle requires step <= 1e-3, got {grid_step}")
    if r not in (2, 3):
        raise PreconditionError(f"grid oracle supports r in {{2, 3}}, got {r}")
    if n < 1:
        raise PreconditionError(f"grid oracle requires n >= 1, got {n}")
    divmap = _divisor_cache(n)
    divs = divmap[n]
    logs = [math.log(d) for d in divs]
    u_max = math.log(n)
    reps = _grid_representatives(logs, grid_step, u_max)
    if r == 2:
        best = 0
        for u in reps:
            i = bisect_right(logs, u)
            j = bisect_right(logs, u + 1.0)
            best = max(best, j - i)
        return best
    sub_logs: dict[int, list[float]] = {}
    best = 0
    seen: set[tuple[int, int]] = set()
    for u1 in reps:
        i = bisect_right(logs, u1)
        j = bisect_right(logs, u1 + 1.0)
        if (i, j) in seen or i == j:
            continue
        seen.add((i, j))
        inner = divs[i:j]
        for q in (n // d for d in inner):
            if q not in sub_logs:
                sub_logs[q] = [math.log(t) for t in divmap[q]]
        for u2 in reps:
            count = 0
            for d in inner:
                ls = sub_logs[n // d]
                count += bisect_right(ls, u2 + 1.0) - bisect_right(ls, u2)
            best = max(best, count)
    return best


def dyadic_divisor_tau_sum(n: int, r: int, N: int) -> int:
    """Sum of tau_r(d) over divisors d of n with N < d <= 2N (tau_1 = 1)."""
    if r < 1 or n < 1 or N < 1:
        raise PreconditionError("dyadic divisor sum requires n, r, N >= 1")
    divs = divisors(n).divisors
    i = bisect_right(divs, N)
    j = bisect_right(divs, 2 * N)
    if r == 1:
        return j - i
    spec = tau_m(r)
    return sum(evaluate_point(spec, d) for d in divs[i:j])


def dyadic_tau_delta_check(
    n: int, r: int, N: int, *, delta_value: int | None = None
) -> tuple[int, float, bool]:
    """Compare the dyadic divisor tau_r sum against (log 2eN)^(r-1) Delta_{r+1}(n).

    Returns (lhs, rhs, lhs <= rhs).  ``delta_value`` short-circuits the Delta
    computation when the caller already holds it (exhaustive scans reuse one
    Delta_{r+1}(n) across many N).
    """
    if r not in (1, 2, 3):
        raise PreconditionError(f"bound check supports r in {{1, 2, 3}}, got {r}")
    lhs = dyadic_divisor_tau_sum(n, r, N)
    dv = delta_value if delta_value is not None else delta_r(n, r + 1).value
    rhs = math.log(2 * math.e * N) ** (r - 1) * dv
    return lhs, rhs, lhs <= rhs


# ---------------------------------------------------------------------------
# Delta sums over ranges
# ---------------------------------------------------------------------------

_BLOCK = 1 << 15


def _iter_divisor_lists(lo: int, hi: int):
    """Yield (n, sorted divisors of n) for n in [lo, hi], in blocks."""
    start = lo
    while start <= hi:
        stop = min(start + _BLOCK - 1, hi)
        lists: list[list[int]] = [[] for _ in range(stop - start + 1)]
        for d in range(1, stop + 1):
            first = ((start + d - 1) // d) * d
            for m in range(first, stop + 1, d):
                lists[m - start].append(d)
        for i, ds in enumerate(lists):
            yield start + i, ds
        start = stop + 1


def _delta_from_divlist(ds: list[int], r: int, budget: _Budget) -> int:
    if r == 2:
        budget.spend(len(ds))
        best = 0
        for i, v in enumerate(ds):
            j = bisect_left(ds, v * _E_TOP)
            best = max(best, j - i)
        return best
    n = ds[-1]
    full = ds

    class _Lazy(dict):
        def __missing__(self, m):
            sub = [d for d in full if m % d == 0]
            self[m] = sub
            return sub

    divmap = _Lazy({n: ds, 1: [1]})
    value, _ = _best_windows({n: 1}, r - 1, divmap, budget)
    return value


def iter_delta_values(lo: int, hi: int, r: int, *, work_cap: int | None = None):
    """Yield (n, Delta_r(n)) over [lo, hi] from blockwise divisor lists.

    Equivalent to calling :func:`delta_r` pointwise but amortizes the divisor
    enumeration; the work cap applies per n.
    """
    if r not in (2, 3, 4):
        raise PreconditionError(f"delta iteration supports r in {{2, 3, 4}}, got {r}")
    if not (1 <= lo <= hi):
        raise PreconditionError(f"delta iteration requires 1 <= lo <= hi, got [{lo}, {hi}]")
    cap = WORK_CAP if work_cap is None else work_cap
    for n, ds in _iter_divisor_lists(lo, hi):
        yield n, _delta_from_divlist(ds, r, _Budget(cap))


def delta_short_sum(r: int, x: int, y: int, *, work_cap: int | None = None) -> int:
    """Exact sum of Delta_r(n) over the window (x, x+y]; x = 0 sums a prefix."""
    if r not in (2, 3, 4):
        raise PreconditionError(f"delta_short_sum supports r in {{2, 3, 4}}, got {r}")
    if x < 0 or y < 0:
        raise PreconditionError("delta_short_sum requires x >= 0 and y >= 0")
    if y == 0:
        return 0
    budget = _Budget(WORK_CAP if work_cap is None else work_cap)
    total = 0
    for _, ds in _iter_divisor_lists(x + 1, x + y):
        total += _delta_from_divlist(ds, r, budget)
    return total


def delta_weighted_prefix(r: int, x: int, *, work_cap: int | None = None) -> float:
    """Exact sum of Delta_r(n)/n over n <= x."""
    if r not in (2, 3, 4):
        raise PreconditionError(f"delta prefix supports r in {{2, 3, 4}}, got {r}")
    if x < 1:
        raise PreconditionError(f"delta prefix requires x >= 1, got {x}")
    budget = _Budget(WORK_CAP if work_cap is None else work_cap)
    return math.fsum(
        _delta_from_divlist(ds, r, budget) / n for n, ds in _iter_divisor_lists(1, x)
    )
