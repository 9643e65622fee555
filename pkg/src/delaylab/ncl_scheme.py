"""The fortified (n, c, l) hybrid-ARQ scheme and its two-stream variant.

A 1/k-fortified system carries one error-free control bit alongside every
k-th noisy use.  The scheme sends random-codeword symbols for the current
message block, attempts a list decode every chunk (c*k uses), and signals
confirm/deny plus list disambiguation over the error-free bits: the decoder
never commits an error, all randomness lands in the delay.

Transmission times obey P(T - ceil(t~) ck > t ck) <= exp(-ck E0(rho, q))^t,
with t~ = R n / Ctilde(rho, q) and Ctilde = E0/rho, so the queue analysis of
the D/G/1 module applies with an effective erasure probability
exp(-ck E0(rho, q)) and reduced block rate R'' = 1/(n - ceil(t~)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bec_lab import DelayExponentFit, substream
from .dmc import LN2, Dmc
from .exponents import bec_focusing_exponent_bits, e0_max, timesharing_exponent
from .queue_model import QueueConfig, ServiceTimeModel, simulate_point_queue

EXACT_TINY_MAX_BLOCK_USES = 24
EXACT_TINY_MAX_CODEWORDS = 4096


@dataclass(frozen=True)
class NclParams:
    """Operating point of one (n, c, l) scheme at fortification period k.

    n: block length in chunks; c: control bits per chunk; l: log2 list size;
    rho: list-decoding parameter in (0, 2^l]; q: codeword input distribution;
    rate: message rate in nats per channel use; e0: E0(rho, q) on the target
    channel.
    """

    n: int
    c: int
    l: int
    k: int
    rho: float
    q: np.ndarray
    rate: float
    e0: float

    def __post_init__(self):
        if self.c < self.l + 1:
            raise ValueError("need c >= l + 1 so the disambiguation bits fit one chunk")
        if self.n <= self.l:
            raise ValueError("need n > l")
        if not 0 < self.rho <= 2**self.l:
            raise ValueError("rho must lie in (0, list size]")
        if self.rate >= self.ctilde:
            raise ValueError("rate must be below E0(rho)/rho (positive slack)")

    @property
    def ck(self) -> int:
        return self.c * self.k

    @property
    def block_period(self) -> int:
        return self.n * self.c * self.k

    @property
    def ctilde(self) -> float:
        return self.e0 / self.rho

    @property
    def t_tilde(self) -> float:
        """Essential service time in chunks: R n / Ctilde."""
        return self.rate * self.n / self.ctilde

    @property
    def slack_chunks(self) -> int:
        return self.n - math.ceil(self.t_tilde)


def select_params(p: Dmc, rate: float, delta: float, k: int, rho: float) -> NclParams:
    """Pick (l, c, r, n) for a target rate and parameter rho.

    l = max(0, ceil(log2 rho)); c = max(l+1, ceil(ln 16 / (k E0(rho))));
    r >= max(0, ln(Delta c k) / (c k E0(rho))); n = ceil(Ctilde/(Ctilde-R) (2+2r)),
    which guarantees the slack lower bound n - ceil(t~) >= (Ctilde-R) n / Ctilde - 1.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if k < 1:
        raise ValueError("fortification period must be a positive integer")
    e0, q = e0_max(p, rho)
    ctilde = e0 / rho
    if rate >= ctilde:
        raise ValueError(f"infeasible: rate {rate:.4f} >= E0(rho)/rho = {ctilde:.4f}")
    l = max(0, math.ceil(math.log2(rho)))
    c = max(l + 1, math.ceil(math.log(16.0) / (k * e0)))
    r_growth = max(0.0, math.log(delta * c * k) / (c * k * e0))
    n = math.ceil(ctilde / (ctilde - rate) * (2.0 + 2.0 * r_growth))
    n = max(n, l + 1)
    params = NclParams(n=n, c=c, l=l, k=k, rho=rho, q=q, rate=rate, e0=e0)
    assert params.slack_chunks >= (ctilde - rate) * n / ctilde - 1
    return params


def transmission_tail_bound(params: NclParams, t: int) -> float:
    """P(T_j - ceil(t~) ck > t ck) <= exp(-ck E0(rho, q))^t, clamped to 1."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    return min(1.0, math.exp(-params.ck * params.e0) ** t)


@dataclass
class NclTrace:
    """Per-block timing of one scheme run, in channel uses.

    End-to-end delay decomposes exactly as assembly + queueing + transmission
    + termination for every block.
    """

    arrival_times: np.ndarray       # block fully assembled
    service_starts: np.ndarray
    transmission_times: np.ndarray  # T_j, multiples of ck
    commit_times: np.ndarray
    assembly: int
    termination: int
    committed_errors: int
    meta: dict = field(default_factory=dict)

    def queueing(self) -> np.ndarray:
        return self.service_starts - self.arrival_times

    def end_to_end(self) -> np.ndarray:
        return self.commit_times - self.arrival_times + self.assembly

    def decomposition_exact(self) -> bool:
        total = (self.assembly + self.queueing() + self.transmission_times
                 + self.termination)
        return bool(np.all(total == self.end_to_end()))

    def miss_probability(self, d: float) -> float:
        delays = self.end_to_end()[10:]
        return float((delays > d).mean())

    def measure_exponent(self, d_grid, min_misses: int = 50) -> DelayExponentFit:
        delays = self.end_to_end()[10:]
        d_grid = np.asarray(sorted(d_grid), dtype=float)
        counts = np.array([(delays > d).sum() for d in d_grid])
        probs = counts / len(delays)
        if counts.sum() == 0:
            return DelayExponentFit(math.inf, math.inf, math.inf, d_grid,
                                    probs, counts, unbounded=True)
        keep = counts >= min_misses
        if keep.sum() < 2:
            keep = counts > 0
        y = -np.log(probs[keep])
        a = np.vstack([d_grid[keep], np.ones(int(keep.sum()))]).T
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        return DelayExponentFit(float(sol[0]), math.nan, math.nan,
                                d_grid[keep], probs[keep], counts[keep],
                                widened_ci=bool(keep.sum() < 3))


def default_delay_grid(params: NclParams, points: int = 8) -> np.ndarray:
    """Chunk-aligned deadline grid starting at the smallest possible
    end-to-end delay; decayed tails are only resolvable on this spacing."""
    base = (params.block_period + (math.ceil(params.t_tilde) + 1) * params.ck
            + params.l * params.k)
    return base + params.ck * np.arange(points, dtype=np.int64)


def simulate_ncl_bound_driven(params: NclParams, horizon_blocks: int,
                              seed: int = 0) -> NclTrace:
    """Large-scale run with service times drawn from the Lemma bound itself.

    Blocks take ceil(t~) + Geometric(1 - exp(-ck E0)) chunks, the law that
    saturates the transmission-time bound, queued FIFO at one block per
    n c k uses.  A conservative stand-in for the true list-decoding law:
    measured exponents estimate the scheme's guaranteed floor rather than
    its true performance.
    """
    beta_eff = math.exp(-params.ck * params.e0)
    svc = ServiceTimeModel(offset=math.ceil(params.t_tilde), tail_beta=beta_eff,
                           kind="offset_geometric", validate=False)
    queue = simulate_point_queue(
        QueueConfig(arrival_period=params.n, horizon=horizon_blocks, seed=seed), svc
    )
    ck = params.ck
    return NclTrace(
        arrival_times=queue.arrival_times * ck,
        service_starts=(queue.completion_times - queue.service_times) * ck,
        transmission_times=queue.service_times * ck,
        commit_times=queue.completion_times * ck + params.l * params.k,
        assembly=params.block_period,
        termination=params.l * params.k,
        committed_errors=0,
        meta={"mode": "bound_driven", "beta_eff": beta_eff, "seed": seed},
    )


def queueing_exponent_bound(params: NclParams) -> float:
    """Guaranteed end-to-end delay exponent in nats per channel use.

    Corollary machinery at block scale: reduced rate R'' = 1/(n - ceil(t~))
    blocks per chunk against effective erasure exp(-ck E0), then rescaled
    from chunk units to channel uses.
    """
    slack = params.slack_chunks
    if slack < 1:
        return 0.0
    beta_eff = math.exp(-params.ck * params.e0)
    r2 = 1.0 / slack
    if r2 >= 1.0 - beta_eff:
        return 0.0
    return bec_focusing_exponent_bits(beta_eff, r2) * LN2 / params.ck


def simulate_ncl_exact_tiny(p: Dmc, params: NclParams, horizon_blocks: int,
                            seed: int = 0, n_messages: int | None = None,
                            feedback_lag: int = 1) -> NclTrace:
    """Exact small-scale run: real random codebooks, exact list-ML ranking.

    Every block draws a fresh iid codebook from q (one symbol per noisy use,
    extended chunk by chunk for as long as the block needs), the channel is
    sampled honestly, and each chunk end performs an exact maximum-likelihood
    list decode over all message hypotheses with lexicographic tie-breaking.
    The encoder mirrors the decoder through noiseless feedback and signals
    confirm/deny plus the l list-index bits over the error-free control
    slots, so committed decisions are never wrong; the run reports
    ``committed_errors`` to prove it.

    ``feedback_lag`` phi > 1 discards the last phi - 1 outputs of each chunk
    (both sides), trading rate for tolerance of delayed feedback.
    """
    if feedback_lag < 1 or feedback_lag >= params.ck:
        raise ValueError("feedback lag must satisfy 1 <= phi < ck")
    nck = params.block_period
    if nck > EXACT_TINY_MAX_BLOCK_USES:
        raise ValueError(f"exact mode caps block period at {EXACT_TINY_MAX_BLOCK_USES} uses")
    m_count = n_messages if n_messages is not None else max(2, round(math.exp(nck * params.rate)))
    if m_count > EXACT_TINY_MAX_CODEWORDS:
        raise ValueError(f"exact mode caps the codebook at {EXACT_TINY_MAX_CODEWORDS} messages")

    ck = params.ck
    used_per_chunk = ck - (feedback_lag - 1)
    list_size = 2**params.l
    nx = p.input_size
    log_p = np.log(np.where(p.rows > 0, p.rows, 1e-300))
    q = params.q
    ny = p.output_size
    rows_cdf = np.cumsum(p.rows, axis=1)

    arrivals = nck * np.arange(1, horizon_blocks + 1, dtype=np.int64)
    starts = np.zeros(horizon_blocks, dtype=np.int64)
    t_j = np.zeros(horizon_blocks, dtype=np.int64)
    commits = np.zeros(horizon_blocks, dtype=np.int64)
    committed_errors = 0
    free_at = 0  # first channel use not yet claimed by an earlier block

    msg_rng = substream(seed, 3)
    true_msgs = msg_rng.integers(0, m_count, horizon_blocks)

    for j in range(horizon_blocks):
        rng = substream(seed, 4, j)  # per-block codebook and noise stream
        start = max(arrivals[j], free_at)
        loglik = np.zeros(m_count)
        chunks = 0
        truth = int(true_msgs[j])
        while True:
            chunks += 1
            # fresh codeword symbols for every hypothesis over this chunk
            cw = rng.choice(nx, size=(m_count, used_per_chunk), p=q)
            x_true = cw[truth]
            u = rng.random(used_per_chunk)
            y = (u[:, None] > rows_cdf[x_true]).sum(axis=1)
            loglik = loglik + log_p[cw, y].sum(axis=1)
            order = np.lexsort((np.arange(m_count), -loglik))
            if truth in order[:list_size]:
                index_in_list = int(np.where(order[:list_size] == truth)[0][0])
                break
        t_j[j] = chunks * ck
        confirm_time = start + t_j[j]
        free_at = confirm_time
        # l disambiguation bits ride the next l control slots at spacing k
        commits[j] = confirm_time + params.l * params.k
        decoded = int(order[:list_size][index_in_list])
        if decoded != truth:
            committed_errors += 1
        starts[j] = start

    return NclTrace(
        arrival_times=arrivals,
        service_starts=starts,
        transmission_times=t_j,
        commit_times=commits,
        assembly=nck,
        termination=params.l * params.k,
        committed_errors=committed_errors,
        meta={"mode": "exact_tiny", "n_messages": m_count,
              "rate_realized": math.log(m_count) / nck,
              "feedback_lag": feedback_lag, "seed": seed},
    )


def delayed_feedback_adjust(params: NclParams, phi: int) -> tuple[NclParams, float]:
    """Account for feedback delayed by phi uses: the last phi - 1 uses of each
    chunk are discarded, scaling throughput and exponent by 1 - (phi-1)/ck.

    Returns the adjusted params (same chunk grid, reduced rate) and the
    throughput factor.
    """
    if not 1 <= phi < params.ck:
        raise ValueError("need 1 <= phi < ck")
    factor = 1.0 - (phi - 1) / params.ck
    adjusted = replace(params, rate=params.rate * factor, e0=params.e0 * factor)
    return adjusted, factor


@dataclass(frozen=True)
class TwoStreamSplit:
    """Channel-use split between message and punctuation streams for generic DMCs.

    psi = E0(rho) / (E0(1) + E0(rho)) of the uses carry punctuation through a
    rate->0 code with exponent E0(1); the balanced overall delay exponent is
    E' = psi E0(1) = (1 - psi) E0(rho), with R = E'/rho.
    """

    psi: float
    rho: float
    e_prime: float
    e0_rho: float
    e0_one: float

    def __post_init__(self):
        if abs(self.psi - self.e0_rho / (self.e0_one + self.e0_rho)) > 1e-9:
            raise ValueError("psi must equal E0(rho) / (E0(1) + E0(rho))")
        if abs(self.e_prime - self.psi * self.e0_one) > 1e-9:
            raise ValueError("exponent must equal psi E0(1)")
        if abs(self.psi * self.e0_one - (1 - self.psi) * self.e0_rho) > 1e-9:
            raise ValueError("balance identity psi E0(1) = (1-psi) E0(rho) violated")


def two_stream_split(p: Dmc, rate: float, rho_max: float = 64.0) -> TwoStreamSplit:
    """Solve R = E'(rho)/rho for rho, then split per psi = E0(rho)/(E0(1)+E0(rho))."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    lo, hi = 1e-9, rho_max
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if timesharing_exponent(p, mid)[0] > rate:
            lo = mid
        else:
            hi = mid
    rho = 0.5 * (lo + hi)
    e0_rho = e0_max(p, rho)[0]
    e0_one = e0_max(p, 1.0)[0]
    psi = e0_rho / (e0_one + e0_rho)
    return TwoStreamSplit(psi=psi, rho=rho, e_prime=psi * e0_one,
                          e0_rho=e0_rho, e0_one=e0_one)


def simulate_two_stream(p: Dmc, split: TwoStreamSplit, horizon_blocks: int,
                        seed: int = 0, k: int = 10, delta: float = 0.05,
                        rate_margin: float = 0.15,
                        d_grid=None) -> tuple[DelayExponentFit, dict]:
    """Measure the two-stream delay exponent at the split's operating point.

    The message stream runs the bound-driven scheme over its (1 - psi)
    fraction of uses.  Exactly at the split the scheme has zero slack, so
    the simulation backs off: it keeps the message rate R/(1 - psi) but
    picks the rho whose reliability capacity exceeds that rate by
    ``rate_margin``, and reports the margin used.  The punctuation stream
    enters as its exponent psi E0(1): per-delay failure probability
    exp(-d_f psi E0(1)) in true channel uses.  Total miss probability at
    delay d is the union bound over splits d = d_f + d_m.
    """
    psi = split.psi
    rate_msg = split.e_prime / split.rho / (1.0 - psi)  # = E0(rho)/rho at the split
    lo, hi = 1e-9, split.rho
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if e0_max(p, mid)[0] / mid > rate_msg / (1.0 - rate_margin):
            lo = mid
        else:
            hi = mid
    rho_sim = lo  # largest rho that leaves a rate_margin of slack
    params = select_params(p, rate_msg, delta, k, rho_sim)
    trace = simulate_ncl_bound_driven(params, horizon_blocks, seed)
    msg_delays = trace.end_to_end()[10:]
    if d_grid is None:
        base = params.block_period / (1.0 - psi)
        d_grid = np.linspace(2 * base, 10 * base, 9)
    d_grid = np.asarray(sorted(d_grid), dtype=float)
    punc_exp = psi * split.e0_one
    step = max(1.0, params.ck / (1.0 - psi) / 4.0)
    probs = []
    for d in d_grid:
        df = np.arange(0.0, d + step, step)
        p_m = np.array([(msg_delays > (d - f) * (1.0 - psi)).mean() for f in df])
        p_f = np.exp(-df * punc_exp)
        probs.append(min(1.0, float(np.sum(p_m * p_f))))
    probs = np.array(probs)
    keep = probs > 0
    y = -np.log(probs[keep])
    a = np.vstack([d_grid[keep], np.ones(int(keep.sum()))]).T
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    fit = DelayExponentFit(float(sol[0]), math.nan, math.nan, d_grid[keep],
                           probs[keep], (probs[keep] * len(msg_delays)).astype(int))
    details = {"params": params, "rho_sim": rho_sim, "rate_margin": rate_margin,
               "punctuation_exponent": punc_exp}
    return fit, details


def scheme_exponent_curve(p: Dmc, n: int, c: int, l: int, k: int,
                          rate_grid, rho_points: int = 48) -> list[tuple[float, float]]:
    """Analytic guaranteed-exponent curve of a fixed (n, c, l) scheme.

    For each rate, maximizes the Corollary-driven end-to-end exponent over
    the operating parameter rho in (0, 2^l]; zero where no rho leaves slack.
    """
    rhos = np.geomspace(1e-2, 2**l, rho_points)
    table = [(float(rho), *e0_max(p, float(rho))) for rho in rhos]
    out = []
    for rate in sorted(rate_grid):
        best = 0.0
        for rho, e0, q in table:
            if rate >= e0 / rho:
                continue
            try:
                params = NclParams(n=n, c=c, l=l, k=k, rho=rho, q=q,
                                   rate=float(rate), e0=e0)
            except ValueError:
                continue
            best = max(best, queueing_exponent_bound(params))
        out.append((float(rate), best))
    return out
