"""Erasure-channel laboratory: the repeat-until-received FIFO scheme with
feedback, its birth-death steady state, the idealized feedback-free causal
parity code, and the exact union bound on deadline misses.

Discrete-time accounting, fixed once for all simulators and tests:

* channel uses are t = 1, 2, ..., horizon;
* bit i arrives at a_i = ceil(i / R') and can be transmitted from use a_i + 1;
* the delay-d decoder sees outputs through use a_i + d, so bit i misses
  deadline d exactly when its decode time exceeds a_i + d.

Under this accounting the rate-1/2 FIFO queue embedded at arrival epochs is
the birth-death chain with birth beta^2 and death (1-beta)^2, and the
stationary probability of missing deadline d is (beta/(1-beta))^d exactly,
matching the closed-form analysis.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

def substream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based per-stream generator: reproducible and order-independent."""
    return np.random.Generator(
        np.random.Philox(seed=np.random.SeedSequence(entropy=seed, spawn_key=key))
    )


@dataclass
class BecConfig:
    beta: float
    rate_bits: float
    horizon: int
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise ValueError("erasure probability must lie in (0, 1)")
        if self.rate_bits <= 0:
            raise ValueError("rate must be positive")
        if self.horizon < 2:
            raise ValueError("horizon too short")
        if self.rate_bits >= 1 - self.beta:
            warnings.warn(
                f"rate {self.rate_bits} >= capacity {1 - self.beta}: queue is "
                "unstable; run is legal but miss probabilities will not decay",
                stacklevel=2,
            )


@dataclass
class SimTrace:
    """Decode times plus enough bookkeeping to reconstruct the time series.

    ``decode_times[i]`` is the channel use at which bit i+1 was committed
    (np.inf when the horizon ended first); ``arrival_times`` are the a_i.
    ``series(stride)`` materializes (time, arrivals_cum, decoded_cum,
    queue_len) rows; queue_len counts every arrived undecoded bit, including
    one mid-service, so arrivals_cum == decoded_cum + queue_len at each step.
    """

    scheme: str
    horizon: int
    arrival_times: np.ndarray
    decode_times: np.ndarray
    meta: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def n_bits(self) -> int:
        return len(self.arrival_times)

    def delays(self) -> np.ndarray:
        return self.decode_times - self.arrival_times

    def series(self, stride: int = 1) -> dict[str, np.ndarray]:
        t = np.arange(1, self.horizon + 1, stride, dtype=np.int64)
        arrivals = np.searchsorted(self.arrival_times, t, side="right")
        finite = np.sort(self.decode_times[np.isfinite(self.decode_times)])
        decoded = np.searchsorted(finite, t, side="right")
        return {
            "time": t,
            "arrivals_cum": arrivals,
            "decoded_cum": decoded,
            "queue_len": arrivals - decoded,
        }

    def check_conservation(self, stride: int = 1) -> bool:
        s = self.series(stride)
        return bool(np.all(s["arrivals_cum"] == s["decoded_cum"] + s["queue_len"]))


def _arrival_times(rate_bits: float, horizon: int) -> np.ndarray:
    n_guess = int(horizon * rate_bits) + 2
    i = np.arange(1, n_guess + 1, dtype=np.int64)
    a = np.ceil(i / rate_bits).astype(np.int64)
    # a bit arriving at the last use could never be served within the horizon
    return a[a < horizon]


def _erasure_pattern(cfg: BecConfig) -> np.ndarray:
    # both simulators must consume the stream identically for pathwise coupling
    rng = substream(cfg.seed, 0)
    z = rng.random(cfg.horizon + 1) < (1.0 - cfg.beta)
    z[0] = False
    return z


def simulate_fifo(cfg: BecConfig) -> SimTrace:
    """Repeat-until-received FIFO scheme over the BEC with noiseless feedback.

    Exact and fully vectorized: with success times ST, decode times obey
    D_i = first success after max(a_i, D_{i-1}), which unrolls into a prefix
    maximum over success indices.
    """
    z = _erasure_pattern(cfg)
    st = np.flatnonzero(z)
    a = _arrival_times(cfg.rate_bits, cfg.horizon)
    n = len(a)
    idx = np.arange(n, dtype=np.int64)
    c = np.searchsorted(st, a, side="right")  # first success index at time > a_i
    k = np.maximum.accumulate(c - idx) + idx
    decoded = k < len(st)
    dt = np.full(n, np.inf)
    dt[decoded] = st[k[decoded]]
    return SimTrace(
        scheme="bec_fifo",
        horizon=cfg.horizon,
        arrival_times=a,
        decode_times=dt,
        meta={"beta": cfg.beta, "rate_bits": cfg.rate_bits, "seed": cfg.seed},
    )


def simulate_causal_parity_nofeedback(cfg: BecConfig) -> SimTrace:
    """Idealized feedback-free causal parity code over the BEC.

    The encoder streams parities of everything it has seen; the decoder
    resolves the whole outstanding group at once as soon as it holds as many
    unerased parities as there are undecoded symbols.  Simulated directly
    from the per-use erasure pattern (the same one ``simulate_fifo`` consumes
    for this seed), tracking the undecoded-symbol count and the parity
    deficit; the deficit series is stored under ``extra["deficit"]``.
    """
    z = _erasure_pattern(cfg)
    a = _arrival_times(cfg.rate_bits, cfg.horizon)
    arrival_mark = np.zeros(cfg.horizon + 1, dtype=np.int32)
    np.add.at(arrival_mark, a, 1)
    dt = np.full(len(a), np.inf)
    deficit = np.zeros(cfg.horizon + 1, dtype=np.int32)
    undecoded = np.zeros(cfg.horizon + 1, dtype=np.int32)
    u = 0        # symbols in the current ambiguous group
    credit = 0   # unerased parities held against that group
    g0 = 0       # index of the first undecoded bit
    zl = z.tolist()
    al = arrival_mark.tolist()
    for t in range(1, cfg.horizon + 1):
        if u - credit > 0 and zl[t]:
            credit += 1
            if credit == u:
                dt[g0:g0 + u] = t  # the renewal frees the whole group
                g0 += u
                u = 0
                credit = 0
        u += al[t]
        deficit[t] = u - credit
        undecoded[t] = u
    return SimTrace(
        scheme="bec_parity_nofeedback",
        horizon=cfg.horizon,
        arrival_times=a,
        decode_times=dt,
        meta={"beta": cfg.beta, "rate_bits": cfg.rate_bits, "seed": cfg.seed},
        extra={"deficit": deficit[1:], "undecoded_symbols": undecoded[1:]},
    )


def queue_seen_by_arrivals(trace: SimTrace) -> np.ndarray:
    """Backlog in front of each arriving bit: senior bits still undecoded at a_i.

    For the rate-1/2 FIFO scheme this is exactly the state of the birth-death
    chain embedded at arrival epochs.
    """
    d = trace.decode_times
    if np.any(np.diff(d[np.isfinite(d)]) < 0):
        raise ValueError("decode times must be FIFO-ordered")
    done_by_arrival = np.searchsorted(d, trace.arrival_times, side="right")
    return np.arange(len(d)) - done_by_arrival


def birth_death_stationary(beta: float, kmax: int = 64) -> np.ndarray:
    """Stationary law pi_i = kappa (beta/(1-beta))^{2i} of the rate-1/2 queue.

    Requires beta < 1/2 (positive recurrence).
    """
    if not 0 < beta < 0.5:
        raise ValueError("chain is positive recurrent only for beta < 1/2")
    x = (beta / (1.0 - beta)) ** 2
    return (1.0 - x) * x ** np.arange(kmax + 1)


def birth_death_tail(beta: float, d: float) -> float:
    """Stationary miss probability at delay d: (beta/(1-beta))^d."""
    if not 0 < beta < 0.5:
        raise ValueError("chain is positive recurrent only for beta < 1/2")
    return (beta / (1.0 - beta)) ** d


def birth_death_numeric(beta: float, kmax: int = 400, sweeps: int = 200_000,
                        tol: float = 1e-14) -> np.ndarray:
    """Stationary law by power iteration of the truncated chain (test oracle)."""
    p_up, p_dn = beta**2, (1 - beta) ** 2
    v = np.zeros(kmax + 1)
    v[0] = 1.0
    for _ in range(sweeps):
        w = np.zeros_like(v)
        w[0] = v[0] * (1 - p_up) + v[1] * p_dn
        w[1:-1] = v[:-2] * p_up + v[1:-1] * (1 - p_up - p_dn) + v[2:] * p_dn
        w[-1] = v[-1] * (1 - p_dn) + v[-2] * p_up
        if np.abs(w - v).sum() < tol:
            return w
        v = w
    return v


def burn_in_steps(beta: float) -> int:
    """Steady-state measurements discard 1e3 / (1 - 2 beta)^2 initial steps."""
    return int(1e3 / max(1e-6, (1.0 - 2.0 * beta) ** 2))


def stationary_queue_samples(trace: SimTrace) -> np.ndarray:
    """Arrival-embedded queue samples after the burn-in prefix."""
    burn_uses = burn_in_steps(trace.meta["beta"])
    q = queue_seen_by_arrivals(trace)
    start = int(np.searchsorted(trace.arrival_times, burn_uses))
    # drop the tail where the horizon may truncate decode times
    stop = len(q) - 64 if len(q) > 128 else len(q)
    return q[start:stop]


def queue_law_chisquare(samples: np.ndarray, beta: float,
                        thin: int = 100, min_expected: float = 5.0) -> tuple[float, float]:
    """Chi-squared test of the empirical queue law against the birth-death law.

    Samples are thinned to approximate independence (consecutive arrivals see
    strongly correlated queues) before forming the statistic.  Bins are
    {0}, {1}, ..., {B-1} plus the folded tail {>= B}, with B chosen so every
    expected count is at least ``min_expected``.  Returns (statistic, p_value).
    """
    s = np.asarray(samples)[::thin]
    n = len(s)
    x = (beta / (1.0 - beta)) ** 2
    kappa = 1.0 - x
    b = 1
    while b < 64 and n * kappa * x**b >= min_expected and n * x ** (b + 1) >= min_expected:
        b += 1
    counts = np.array([(s == i).sum() for i in range(b)] + [(s >= b).sum()], dtype=float)
    expected = np.array([n * kappa * x**i for i in range(b)] + [n * x**b])
    stat, pvalue = stats.chisquare(counts, expected)
    return float(stat), float(pvalue)


def miss_probability(trace: SimTrace, d: float, n_batches: int = 100,
                     burn_in: bool = True) -> tuple[float, float]:
    """Empirical deadline-miss probability and its batch-means standard error.

    Miss indicators of nearby bits are strongly correlated (they share busy
    periods), so the naive binomial error bar would be optimistic; contiguous
    batch means give an honest one.
    """
    delays = trace.delays()
    if burn_in:
        start = int(np.searchsorted(trace.arrival_times, burn_in_steps(trace.meta["beta"])))
        delays = delays[start:]
    # bits whose deadline lies beyond the horizon are not yet decidable
    ok = trace.arrival_times[-len(delays):] + d <= trace.horizon
    miss = (delays[ok] > d).astype(float)
    if len(miss) == 0:
        return math.nan, math.nan
    p = float(miss.mean())
    nb = min(n_batches, max(1, len(miss) // 50))
    batches = np.array_split(miss, nb)
    means = np.array([b.mean() for b in batches])
    se = float(means.std(ddof=1) / math.sqrt(len(means))) if len(means) > 1 else math.nan
    return p, se


def union_bound_exact(beta: float, rate_bits: float, i: int, d: int) -> float:
    """Exact union bound on the FIFO miss probability of bit i at deadline d.

    Sums, over candidate backlog start points k <= i, the probability that
    the channel uses available to bits k..i before the deadline contain at
    most i-k successes: sum_k P(Binomial(n(k), 1-beta) <= i-k) with
    n(k) = d + ceil(i/R') - ceil(k/R').  Nonincreasing in d.
    """
    if i < 1 or d < 1:
        raise ValueError("need i >= 1 and d >= 1")
    k = np.arange(1, i + 1)
    n_k = d + math.ceil(i / rate_bits) - np.ceil(k / rate_bits).astype(np.int64)
    total = stats.binom.cdf(i - k, n_k, 1.0 - beta).sum()
    return float(min(1.0, total))


@dataclass
class DelayExponentFit:
    """Least-squares slope of -ln(miss probability) against deadline."""
    slope: float
    ci_low: float
    ci_high: float
    d_values: np.ndarray
    miss_probs: np.ndarray
    miss_counts: np.ndarray
    unbounded: bool = False
    widened_ci: bool = False


def measure_delay_exponent(traces, d_grid, min_misses: int = 100,
                           n_boot: int = 200, seed: int = 0) -> DelayExponentFit:
    """Regression estimate of the delay exponent from one or more traces.

    Keeps grid points with at least ``min_misses`` misses (flagging a widened
    confidence interval when fewer than 3 survive), and bootstraps over
    contiguous bit blocks to get a CI that respects the serial correlation.
    With no misses anywhere the exponent is unbounded by the data.
    """
    if isinstance(traces, SimTrace):
        traces = [traces]
    d_grid = np.asarray(sorted(d_grid), dtype=float)
    chunks = []
    for t in traces:
        burn = burn_in_steps(t.meta["beta"]) if "beta" in t.meta else 0
        start = int(np.searchsorted(t.arrival_times, burn))
        # censor bits whose largest deadline lies beyond the horizon
        stop = int(np.searchsorted(t.arrival_times, t.horizon - d_grid[-1],
                                   side="right"))
        chunks.append(t.delays()[start:stop])
    delays = np.concatenate(chunks)  # inf delays (undecoded) miss every d
    counts = np.array([(delays > d).sum() for d in d_grid])
    probs = counts / len(delays)
    if counts.sum() == 0:
        return DelayExponentFit(math.inf, math.inf, math.inf, d_grid, probs,
                                counts, unbounded=True)
    keep = counts >= min_misses
    widened = keep.sum() < 3
    if keep.sum() < 2:
        keep = counts > 0
    dd, pp = d_grid[keep], probs[keep]

    def fit(dv, pv):
        y = -np.log(pv)
        a = np.vstack([dv, np.ones_like(dv)]).T
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        return sol[0]

    slope = fit(dd, pp)
    rng = substream(seed, 999)
    block = max(1000, len(delays) // 200)
    n_blocks = len(delays) // block
    trimmed = delays[: n_blocks * block].reshape(n_blocks, block)
    # per-block miss counts once, then bootstrapping is just index sums
    block_counts = np.stack([(trimmed > d).sum(axis=1) for d in dd], axis=1)
    boots = []
    for _ in range(n_boot):
        picks = rng.integers(0, n_blocks, n_blocks)
        pv = block_counts[picks].sum(axis=0) / (n_blocks * block)
        if np.all(pv > 0):
            boots.append(fit(dd, pv))
    if boots:
        lo, hi = np.percentile(boots, [2.5, 97.5])
    else:
        lo = hi = math.nan
        widened = True
    return DelayExponentFit(float(slope), float(lo), float(hi), dd, pp,
                            counts[keep], widened_ci=widened)
