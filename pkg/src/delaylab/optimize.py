"""The three numerical searches the bounds engine needs.

1. golden-section maximization of a concave function on an interval,
2. maximization of a concave function over the input simplex,
3. multi-start penalized minimization over small channel matrices
   (the inner search of the Haroutunian bound).

All searches are deterministic given their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dmc import Dmc, ConvergenceError, uniform_input

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Search1DResult:
    argmax: float
    value: float
    iterations: int


def maximize_concave_1d(f, lo: float, hi: float, tol: float = 1e-10,
                        max_iter: int = 500) -> Search1DResult:
    """Golden-section maximization of a concave ``f`` on [lo, hi].

    Ties between plateau points resolve to the smallest maximizer: when the
    two probe values are equal the right part of the interval is discarded.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    a, b = float(lo), float(hi)
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        it += 1
        if f1 >= f2:  # keep the left interval on ties -> smallest maximizer
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    cands = [(a, f(a)), (x1, f1), (x2, f2), (b, f(b))]
    finite = [(x, v) for x, v in cands if math.isfinite(v)]
    if not finite:
        raise ValueError("objective is non-finite on the whole interval")
    best_v = max(v for _, v in finite)
    best_x = min(x for x, v in finite if v >= best_v - 1e-15)
    return Search1DResult(argmax=best_x, value=best_v, iterations=it)


def _pair_directions(dim: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(dim) for j in range(dim) if i != j]


def maximize_over_simplex(f, dim: int, tol: float = 1e-9,
                          max_cycles: int = 200) -> tuple[np.ndarray, float]:
    """Maximize a concave ``f`` over the probability simplex of dimension ``dim``.

    Cyclic pairwise line searches: mass is moved between coordinate pairs with
    a golden-section search along each segment, which converges for smooth
    concave objectives on the simplex.
    """
    if dim < 1:
        raise ValueError("dimension must be positive")
    if dim == 1:
        q = np.array([1.0])
        return q, float(f(q))
    q = uniform_input(dim)
    val = float(f(q))
    improved = math.inf
    for _ in range(max_cycles):
        improved = 0.0
        for i, j in _pair_directions(dim):
            budget = q[i] + q[j]
            if budget <= 0:
                continue

            def along(t, i=i, j=j, budget=budget):
                qq = q.copy()
                qq[i], qq[j] = t, budget - t
                return f(qq)

            res = maximize_concave_1d(along, 0.0, budget, tol=max(tol * 1e-2, 1e-13))
            if res.value > val + 1e-15:
                improved += res.value - val
                q = q.copy()
                q[i], q[j] = res.argmax, budget - res.argmax
                val = res.value
        if improved <= tol:
            return q, val
    raise ConvergenceError("simplex search cycle cap exceeded", improved)


def _lexicographic_key(g: Dmc) -> tuple:
    return tuple(np.round(g.rows, 12).ravel())


def minimize_over_channels(objective, feasible, dims: tuple[int, int],
                           restarts: int = 64, tol: float = 1e-6, seed: int = 0,
                           penalty=None, row_supports=None, repair=None,
                           line_tol: float = 1e-5, patience: int = 12) -> tuple[Dmc, float]:
    """Minimize ``objective`` over |X| x |Y| stochastic matrices G with ``feasible(G)``.

    Multi-start coordinate descent on rows: each row is improved by
    golden-section line searches toward its support vertices.  The constraint
    enters through ``penalty`` (continuous, 0 when feasible) scaled by an
    escalating coefficient, and ``feasible`` is re-checked on every candidate;
    an infeasible candidate is passed through ``repair`` when provided.
    ``row_supports`` restricts each row of G to a support set, which keeps
    divergence objectives finite.

    Deterministic given ``seed``; the start list only grows with ``restarts``,
    so the best value never worsens as restarts increase.  Restarts stop early
    once ``patience`` consecutive starts fail to improve the best value, which
    preserves both determinism and monotonicity in ``restarts``.
    """
    nx, ny = dims
    if nx > 4 or ny > 4:
        raise ValueError("channel minimization supports alphabets up to 4x4")
    if penalty is None:
        penalty = lambda g: 0.0
    if row_supports is None:
        row_supports = [np.arange(ny)] * nx

    def build(rows):
        rows = np.clip(rows, 0.0, 1.0)
        return Dmc(rows / rows.sum(axis=1, keepdims=True))

    def scored(rows, kappa):
        g = build(rows)
        val = objective(g)
        if not math.isfinite(val):
            return math.inf
        return val + kappa * penalty(g)

    rng = np.random.default_rng(seed)
    uniform_rows = np.zeros((nx, ny))
    for x in range(nx):
        uniform_rows[x, row_supports[x]] = 1.0 / len(row_supports[x])
    starts = [uniform_rows]
    while len(starts) < max(restarts, 1):
        rows = np.zeros((nx, ny))
        for x in range(nx):
            rows[x, row_supports[x]] = rng.dirichlet(np.ones(len(row_supports[x])))
        starts.append(rows)

    def descend(rows, kappas, max_cycles, step_tol):
        for kappa in kappas:
            current = scored(rows, kappa)
            for _ in range(max_cycles):
                cycle_gain = 0.0
                for x in range(nx):
                    support = row_supports[x]
                    if len(support) < 2:
                        continue
                    for letter in support:
                        target = np.zeros(ny)
                        target[letter] = 1.0

                        def along(t, x=x, target=target, rows=rows):
                            trial = rows.copy()
                            trial[x] = (1 - t) * rows[x] + t * target
                            return -scored(trial, kappa)

                        res = maximize_concave_1d(along, 0.0, 1.0, tol=step_tol)
                        if -res.value < current - 1e-14:
                            cycle_gain += current - (-res.value)
                            rows = rows.copy()
                            rows[x] = (1 - res.argmax) * rows[x] + res.argmax * target
                            current = -res.value
                if cycle_gain <= tol * 1e-3:
                    break
        return rows

    def finish(rows):
        g = build(rows)
        if not feasible(g) and repair is not None:
            g = repair(g)
        val = objective(g)
        if not (math.isfinite(val) and feasible(g)):
            return None
        return val, _lexicographic_key(g), g, rows

    best = None
    stale = 0
    for rows0 in starts[:max(restarts, 1)]:
        rows = descend(rows0.copy(), (1e2, 1e4, 1e6, 1e8), 6, line_tol)
        cand = finish(rows)
        if cand is not None and (best is None or cand[0] < best[0] - 1e-10):
            best = cand
            stale = 0
        else:
            if cand is not None and best is not None and cand[:2] < best[:2]:
                best = cand  # equal value, lexicographically smaller channel
            stale += 1
            if best is not None and stale >= patience:
                break

    if best is None:
        raise ConvergenceError("no feasible channel found", math.inf)

    # polish the winner with a tight line tolerance
    rows = descend(best[3].copy(), (1e8,), 3, min(line_tol, 1e-8))
    cand = finish(rows)
    if cand is not None and cand[:2] < best[:2]:
        best = cand
    return best[2], best[0]
