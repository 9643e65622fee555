"""Reliability bounds for DMCs: block-length exponents and fixed-delay exponents.

Every bound is exposed both as a scalar function of (channel, rate) and as a
sampled curve.  Rates and exponents are in nats per channel use throughout;
the two erasure-channel helpers that the source formulas state in bits are
explicitly suffixed ``_bits``.

A channel may optionally be "fortified": one error-free bit rides along with
every k-th channel use.  At the level of the Gallager function this adds
rho * ln2 / k, which shifts capacity by ln2 / k and lifts the zero-error
feedback capacity from 0 to ln2 / k; all bounds below accept ``fortify_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dmc import (
    LN2,
    Dmc,
    c1 as _c1,
    capacity,
    is_output_symmetric,
    mutual_information,
    uniform_input,
    validate_distribution,
)
from .optimize import maximize_concave_1d, maximize_over_simplex, minimize_over_channels

RHO_MAX = 64.0

_symmetry_cache: dict[str, bool | None] = {}
_capacity_cache: dict[str, tuple[float, np.ndarray]] = {}
_haroutunian_cache: dict[tuple, float] = {}


def _symmetric(p: Dmc) -> bool:
    key = p.digest()
    if key not in _symmetry_cache:
        _symmetry_cache[key] = is_output_symmetric(p)
    return _symmetry_cache[key] is True


def _cached_capacity(p: Dmc) -> tuple[float, np.ndarray]:
    key = p.digest()
    if key not in _capacity_cache:
        _capacity_cache[key] = capacity(p)
    return _capacity_cache[key]


def _fortification_rate(fortify_k) -> float:
    if fortify_k is None:
        return 0.0
    if fortify_k < 1:
        raise ValueError("fortification period must be a positive integer")
    return LN2 / fortify_k


def gallager_e0(p: Dmc, rho: float, q, fortify_k: int | None = None) -> float:
    """Gallager function E0(rho, q) = -ln sum_y (sum_x q_x p(y|x)^{1/(1+rho)})^{1+rho}."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    q = validate_distribution(q, p.input_size)
    if rho == 0:
        base = 0.0
    else:
        inner = (q[:, None] * p.rows ** (1.0 / (1.0 + rho))).sum(axis=0)
        base = -math.log(float((inner ** (1.0 + rho)).sum()))
    return base + rho * _fortification_rate(fortify_k)


def e0_max(p: Dmc, rho: float, fortify_k: int | None = None) -> tuple[float, np.ndarray]:
    """E0(rho) = max_q E0(rho, q) with an achieving input distribution.

    Output-symmetric channels take the uniform-input fast path; otherwise the
    simplex search runs (E0 is concave in q).
    """
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if rho == 0 or _symmetric(p):
        q = uniform_input(p.input_size)
        return gallager_e0(p, rho, q, fortify_k), q
    q, val = maximize_over_simplex(
        lambda qq: gallager_e0(p, rho, qq), p.input_size, tol=1e-12
    )
    return val + rho * _fortification_rate(fortify_k), q


def e0_derivative(p: Dmc, rho: float, q=None, fortify_k: int | None = None,
                  h: float | None = None) -> float:
    """Central-difference dE0/drho at ``rho``, holding ``q`` fixed.

    Defaults to the E0(rho)-achieving distribution; the step follows
    h = 1e-4 * max(1, rho), and the stencil is clipped at rho = 0.
    """
    if q is None:
        q = e0_max(p, max(rho, 1e-9))[1]
    if h is None:
        h = 1e-4 * max(1.0, rho)
    lo = max(0.0, rho - h)
    hi = rho + h
    flo = gallager_e0(p, lo, q, fortify_k)
    fhi = gallager_e0(p, hi, q, fortify_k)
    return (fhi - flo) / (hi - lo)


def e0_second_derivative_at_zero(p: Dmc, q=None, fortify_k: int | None = None,
                                 h: float = 1e-3) -> float:
    """d^2 E0 / drho^2 at rho = 0 for fixed q (default: capacity-achieving)."""
    if q is None:
        q = _cached_capacity(p)[1]
    f0 = gallager_e0(p, 0.0, q, fortify_k)
    f1 = gallager_e0(p, h, q, fortify_k)
    f2 = gallager_e0(p, 2 * h, q, fortify_k)
    return (f2 - 2 * f1 + f0) / h**2


def zero_error_feedback_capacity(p: Dmc, fortify_k: int | None = None,
                                 rho_max: float = RHO_MAX) -> float:
    """C_{0,f} = lim_{rho->inf} E0(rho)/rho, in nats.

    Combinatorial pre-check: when every pair of input rows shares an output
    with positive probability under both, E0 stays bounded and the limit is 0.
    Otherwise the limit is evaluated numerically at escalating rho with a
    Richardson step to cancel the O(1/rho) term.
    """
    shift = _fortification_rate(fortify_k)
    nx = p.input_size
    shared = all(
        np.any((p.rows[x] > 0) & (p.rows[xp] > 0))
        for x in range(nx) for xp in range(x + 1, nx)
    )
    if shared:
        return shift
    r1 = rho_max / 2.0
    f1 = e0_max(p, r1)[0] / r1
    f2 = e0_max(p, rho_max)[0] / rho_max
    return max(0.0, 2 * f2 - f1) + shift


def sphere_packing(p: Dmc, r: float, fortify_k: int | None = None,
                   rho_max: float = RHO_MAX) -> float:
    """Sphere-packing exponent sup_{rho >= 0} [E0(rho) - rho R], in nats.

    Returns +inf when the supremum diverges, which happens exactly for rates
    below the zero-error feedback capacity.
    """
    if r < 0:
        raise ValueError("rate must be nonnegative")
    c0f = zero_error_feedback_capacity(p, fortify_k)
    if r < c0f - 1e-12:
        return math.inf

    def bracket(rho):
        return e0_max(p, rho, fortify_k)[0] - rho * r

    res = maximize_concave_1d(bracket, 0.0, rho_max, tol=1e-9)
    # diverging supremum: still climbing at the edge of the rho range
    if res.argmax > 0.98 * rho_max and bracket(rho_max) > bracket(0.9 * rho_max):
        return math.inf
    return max(0.0, res.value)


def random_coding_list(p: Dmc, r: float, list_size: int = 1,
                       fortify_k: int | None = None) -> float:
    """Random-coding exponent with list decoding: max_{0 <= rho <= L} [E0(rho) - rho R].

    ``list_size`` is the cap L on rho; L = 1 is ordinary random coding.
    """
    if r < 0:
        raise ValueError("rate must be nonnegative")
    if list_size < 1:
        raise ValueError("list size must be at least 1")
    res = maximize_concave_1d(
        lambda rho: e0_max(p, rho, fortify_k)[0] - rho * r,
        0.0, float(list_size), tol=1e-10,
    )
    return max(0.0, res.value)


def _info_binary_rows(row0: list, row1: list, s: float) -> float:
    """I((s, 1-s), rows) for a two-input channel; plain floats for speed."""
    log = math.log
    total = 0.0
    t = 1.0 - s
    for a, b in zip(row0, row1):
        o = s * a + t * b
        if s > 0.0 and a > 0.0:
            total += s * a * log(a / o)
        if t > 0.0 and b > 0.0:
            total += t * b * log(b / o)
    return total


_GOLD = 0.6180339887498949


def _capacity_binary(rows, xtol: float = 1e-9) -> float:
    """Golden-section capacity of a two-input channel (I is concave in s)."""
    row0, row1 = rows[0].tolist(), rows[1].tolist()
    a, b = 0.0, 1.0
    x1 = b - _GOLD * (b - a)
    x2 = a + _GOLD * (b - a)
    f1 = _info_binary_rows(row0, row1, x1)
    f2 = _info_binary_rows(row0, row1, x2)
    while b - a > xtol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLD * (b - a)
            f1 = _info_binary_rows(row0, row1, x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLD * (b - a)
            f2 = _info_binary_rows(row0, row1, x2)
    return max(f1, f2)


def channel_capacity_fast(g: Dmc) -> float:
    """Capacity of a small channel, tuned for the inner loop of channel searches.

    Two-input channels use a certified golden-section search on the concave
    scalar mutual information; larger alphabets fall back to the certified
    alternating-maximization iteration.
    """
    if g.input_size == 2:
        return _capacity_binary(g.rows)
    return capacity(g, tol=1e-9)[0]


def _max_info_over_superlevel(p: Dmc, g: Dmc, r: float) -> float:
    """max { I(q, G) : I(q, P) >= r }; -inf when the superlevel set is empty.

    Exact for two-input channels (the superlevel set of the concave I(., P)
    is an interval found by bisection); larger alphabets use a seeded sample
    of the simplex with local pairwise refinement.
    """
    if g.input_size == 2:
        prow0, prow1 = p.rows[0].tolist(), p.rows[1].tolist()
        grow0, grow1 = g.rows[0].tolist(), g.rows[1].tolist()

        def info_p(s):
            return _info_binary_rows(prow0, prow1, s)

        top = maximize_concave_1d(info_p, 0.0, 1.0, tol=1e-11)
        if top.value < r:
            return -math.inf
        lo, hi = 0.0, top.argmax
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if info_p(mid) >= r:
                hi = mid
            else:
                lo = mid
        s_lo = hi
        lo, hi = top.argmax, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if info_p(mid) >= r:
                lo = mid
            else:
                hi = mid
        s_hi = lo
        if s_hi <= s_lo:
            s_hi = s_lo
        res = maximize_concave_1d(
            lambda s: _info_binary_rows(grow0, grow1, s),
            s_lo, max(s_hi, s_lo + 1e-12), tol=1e-11,
        )
        return res.value
    rng = np.random.default_rng(0)
    best = -math.inf
    for _ in range(512):
        q = rng.dirichlet(np.ones(p.input_size))
        if mutual_information(p, q) >= r:
            best = max(best, mutual_information(g, q))
    return best


def haroutunian(p: Dmc, r: float, variant: str = "standard",
                restarts: int = 64, seed: int = 0,
                use_symmetry_fast_path: bool = True) -> float:
    """Haroutunian block exponent with feedback.

    standard: min over {G : C(G) <= R} of max_x D(G(.|x) || P(.|x)).
    tilde:    the mimicking constraint is relaxed to
              max {I(q,G) : I(q,P) >= R} <= R, which can only lower the value.

    For channels with a verified output-symmetry partition the standard
    variant equals the sphere-packing bound and that fast path is taken
    unless disabled.  Candidate channels G are restricted to the support
    pattern of P, where the divergence objective is finite.
    """
    if variant not in ("standard", "tilde"):
        raise ValueError("variant must be 'standard' or 'tilde'")
    if r < 0:
        raise ValueError("rate must be nonnegative")
    cap_p = _cached_capacity(p)[0]
    if r >= cap_p:
        return 0.0
    if r < zero_error_feedback_capacity(p) - 1e-12:
        return math.inf
    if variant == "standard" and use_symmetry_fast_path and _symmetric(p):
        return sphere_packing(p, r)

    key = (p.digest(), round(r, 12), variant, restarts, seed)
    if key in _haroutunian_cache:
        return _haroutunian_cache[key]

    prows = [row.tolist() for row in p.rows]
    log = math.log

    def objective(g: Dmc) -> float:
        worst = 0.0
        for grow, prow in zip(g.rows.tolist(), prows):
            d = 0.0
            for gv, pv in zip(grow, prow):
                if gv > 0.0:
                    if pv == 0.0:
                        return math.inf
                    d += gv * log(gv / pv)
            if d > worst:
                worst = d
        return worst

    if variant == "standard":
        def constraint_excess(g: Dmc) -> float:
            return max(0.0, channel_capacity_fast(g) - r)
    else:
        def constraint_excess(g: Dmc) -> float:
            return max(0.0, _max_info_over_superlevel(p, g, r) - r)

    def feasible(g: Dmc) -> bool:
        return constraint_excess(g) <= 1e-9

    def penalty(g: Dmc) -> float:
        return constraint_excess(g) ** 2

    # lowest-capacity channel that respects the support pattern: point rows
    # at the output letter shared by the most inputs
    supports = p.row_supports()
    common = max(range(p.output_size),
                 key=lambda y: sum(y in s for s in supports))
    flat = np.zeros_like(p.rows)
    for x, s in enumerate(supports):
        flat[x, common if common in s else s[0]] = 1.0

    def repair(g: Dmc) -> Dmc:
        # shrink toward the minimal-capacity channel until the constraint holds
        lo, hi = 0.0, 1.0
        if not feasible(Dmc(flat)):
            return g  # nothing to shrink toward; leave for the feasibility check
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            trial = Dmc((1 - mid) * g.rows + mid * flat)
            if feasible(trial):
                hi = mid
            else:
                lo = mid
        return Dmc((1 - hi) * g.rows + hi * flat)

    g, val = minimize_over_channels(
        objective, feasible, (p.input_size, p.output_size),
        restarts=restarts, seed=seed, penalty=penalty,
        row_supports=p.row_supports(), repair=repair,
    )
    _haroutunian_cache[key] = val
    return val


def burnashev_bound(p: Dmc, r_bar: float) -> float:
    """Variable-length feedback exponent C1 (1 - Rbar / C); +inf when C1 is."""
    cap_p = _cached_capacity(p)[0]
    if not 0 <= r_bar <= cap_p + 1e-12:
        raise ValueError("average rate must lie in [0, C]")
    coeff = _c1(p)
    if coeff == math.inf:
        return math.inf
    return max(0.0, coeff * (1.0 - r_bar / cap_p))


def _solve_eta_for_rate(p: Dmc, r: float, fortify_k: int | None,
                        rho_max: float = RHO_MAX) -> float:
    """Solve E0(eta)/eta = r for eta; E0(eta)/eta decreases from C to C_{0,f}.

    The bracket grows past ``rho_max`` when the solution lies beyond it,
    which happens at low rates (eta = E_a / R is unbounded as R drops).
    """
    hi = rho_max
    while e0_max(p, hi, fortify_k)[0] / hi > r and hi < 1e8:
        hi *= 4.0
    lo = 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if e0_max(p, mid, fortify_k)[0] / mid > r:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def focusing_bound(p: Dmc, r: float, fortify_k: int | None = None,
                   restarts: int = 64, seed: int = 0,
                   lambda_grid: int = 200, force_general: bool = False) -> float:
    """Uncertainty-focusing bound E_a(R) = inf_{0 <= lambda < 1} E+(lambda R)/(1 - lambda).

    Symmetric channels (where E+ = E_sp) go through the parametric form:
    solve E0(eta)/eta = R, then E_a = E0(eta) = eta R.  The general path
    minimizes over a lambda grid with golden refinement, caching the
    Haroutunian searches per lambda R.
    """
    if r <= 0:
        raise ValueError("rate must be positive")
    cap_p = _cached_capacity(p)[0] + _fortification_rate(fortify_k)
    if r >= cap_p:
        return 0.0
    if r < zero_error_feedback_capacity(p, fortify_k) - 1e-12:
        return math.inf
    if _symmetric(p) and not force_general:
        eta = _solve_eta_for_rate(p, r, fortify_k)
        return eta * r

    if fortify_k is not None:
        raise ValueError("fortified bounds require an output-symmetric base channel")

    cache: dict[float, float] = {}

    def eplus(rate: float) -> float:
        k = round(rate, 12)
        if k not in cache:
            cache[k] = haroutunian(p, rate, restarts=restarts, seed=seed)
        return cache[k]

    def score(lam: float) -> float:
        return eplus(lam * r) / (1.0 - lam)

    lams = np.linspace(0.0, 1.0 - 1e-3, lambda_grid)
    vals = [score(l) for l in lams]
    i = int(np.argmin(vals))
    lo = lams[max(0, i - 1)]
    hi = lams[min(len(lams) - 1, i + 1)]
    if hi > lo:
        res = maximize_concave_1d(lambda l: -score(l), lo, hi, tol=1e-6)
        return min(vals[i], -res.value)
    return vals[i]


@dataclass(frozen=True)
class FocusingPoint:
    """One point of the parametric fixed-delay converse: E = E0(eta), R = E0(eta)/eta."""
    eta: float
    rate: float
    exponent: float
    lambda_star: float

    def __post_init__(self):
        if not 0 <= self.lambda_star < 1:
            raise ValueError("lambda* must lie in [0, 1)")
        if abs(self.eta * self.rate - self.exponent) > 1e-9 * max(1.0, self.exponent):
            raise ValueError("parametric identity exponent = eta * rate violated")


@dataclass
class ExponentCurve:
    """An ordered list of (rate, exponent) samples for one bound on one channel."""
    kind: str
    samples: list[tuple[float, float]]
    channel_digest: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rates = [r for r, _ in self.samples]
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ValueError("curve rates must be strictly increasing")
        exps = [e for _, e in self.samples]
        for a, b in zip(exps, exps[1:]):
            if b > a + 1e-9:
                raise ValueError("curve exponents must be nonincreasing in rate")
        # clamp sub-tolerance wiggle so downstream consumers see a monotone curve
        for i in range(1, len(exps)):
            exps[i] = min(exps[i], exps[i - 1])
        self.samples = list(zip(rates, exps))

    def rates(self) -> np.ndarray:
        return np.array([r for r, _ in self.samples])

    def exponents(self) -> np.ndarray:
        return np.array([e for _, e in self.samples])


def focusing_parametric_curve(p: Dmc, eta_grid, fortify_k: int | None = None) -> list[FocusingPoint]:
    """Sampled parametric focusing bound for output-symmetric channels.

    For each eta: rate = E0(eta)/eta, exponent = E0(eta), and the optimal
    past/future split lambda* = (dE0/drho at eta) / rate by central
    differences.  Raises for channels without a verified symmetry partition.
    """
    if not _symmetric(p):
        raise ValueError("parametric form requires an output-symmetric channel; "
                         "use focusing_bound instead")
    q = uniform_input(p.input_size)
    pts = []
    for eta in sorted(eta_grid, reverse=True):  # descending eta = increasing rate
        if eta <= 0:
            raise ValueError("eta grid must be positive")
        e0 = gallager_e0(p, eta, q, fortify_k)
        rate = e0 / eta
        slope = e0_derivative(p, eta, q, fortify_k)
        lam = min(max(slope / rate, 0.0), 1.0 - 1e-15)
        pts.append(FocusingPoint(eta=eta, rate=rate, exponent=e0, lambda_star=lam))
    return pts


def capacity_slope_focusing(p: Dmc, fortify_k: int | None = None) -> float:
    """Slope of the parametric focusing curve at the capacity point: 2C / E0''(0)."""
    cap_p = _cached_capacity(p)[0] + _fortification_rate(fortify_k)
    second = e0_second_derivative_at_zero(p, fortify_k=fortify_k)
    if abs(second) < 1e-12:
        return -math.inf
    return 2.0 * cap_p / second


def focusing_curve(p: Dmc, eta_grid, fortify_k: int | None = None) -> ExponentCurve:
    """ExponentCurve wrapper around the parametric sweep, with slope metadata."""
    pts = focusing_parametric_curve(p, eta_grid, fortify_k)
    second = e0_second_derivative_at_zero(p, fortify_k=fortify_k)
    meta = {"capacity_slope": capacity_slope_focusing(p, fortify_k)}
    if abs(second) < 1e-12:
        # degenerate Taylor term: the bound jumps to zero above capacity and the
        # parametric curve is only meaningful for eta >= 1
        pts = [pt for pt in pts if pt.eta >= 1.0]
        meta["discontinuous_at_capacity"] = True
    return ExponentCurve(
        kind="focusing_parametric",
        samples=[(pt.rate, pt.exponent) for pt in pts],
        channel_digest=p.digest(),
        meta=meta,
    )


def viterbi_curve(p: Dmc, eta_grid, fortify_k: int | None = None) -> ExponentCurve:
    """Identical samples to the parametric focusing curve, under its
    fixed-constraint-length convolutional-code reading."""
    base = focusing_curve(p, eta_grid, fortify_k)
    return ExponentCurve(kind="viterbi_alias", samples=base.samples,
                         channel_digest=base.channel_digest, meta=dict(base.meta))


def timesharing_exponent(p: Dmc, rho: float, fortify_k: int | None = None) -> tuple[float, float]:
    """One point of the two-stream achievable region:
    E'(rho) = (1/E0(rho) + 1/E0(1))^{-1}, R(rho) = E'(rho)/rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    e_rho = e0_max(p, rho, fortify_k)[0]
    e_one = e0_max(p, 1.0, fortify_k)[0]
    e_prime = 1.0 / (1.0 / e_rho + 1.0 / e_one)
    return e_prime / rho, e_prime


def capacity_slope_timesharing(p: Dmc, fortify_k: int | None = None) -> float:
    """Slope of the two-stream curve at (C, 0): -E0(1) / (C - E0(1) E0''(0) / 2C)."""
    cap_p = _cached_capacity(p)[0] + _fortification_rate(fortify_k)
    e_one = e0_max(p, 1.0, fortify_k)[0]
    second = e0_second_derivative_at_zero(p, fortify_k=fortify_k)
    return -e_one / (cap_p - e_one * second / (2.0 * cap_p))


def timesharing_curve(p: Dmc, rho_grid, fortify_k: int | None = None) -> ExponentCurve:
    pts = [timesharing_exponent(p, rho, fortify_k)
           for rho in sorted(rho_grid, reverse=True)]
    return ExponentCurve(
        kind="timesharing",
        samples=pts,
        channel_digest=p.digest(),
        meta={"capacity_slope": capacity_slope_timesharing(p, fortify_k)},
    )


# ---------------------------------------------------------------------------
# erasure-channel closed forms (stated in bits, as in the source analysis)
# ---------------------------------------------------------------------------

def bec_focusing_point_bits(beta: float, eta: float) -> tuple[float, float]:
    """Parametric fixed-delay point for a BEC, in bits:
    E = eta - log2(1 + beta (2^eta - 1)), R' = E / eta."""
    if not 0 < beta < 1:
        raise ValueError("erasure probability must lie in (0, 1)")
    if eta <= 0:
        raise ValueError("eta must be positive")
    g = eta + math.log2(beta)  # log2 of beta 2^eta
    if g > 40.0:
        # log-domain form: 1 + beta(2^eta - 1) = beta 2^eta (1 + (1-beta) 2^-g)
        log_term = g + math.log1p((1.0 - beta) * 2.0**-g) / LN2
    else:
        log_term = math.log2(1.0 + beta * math.expm1(eta * LN2))
    e_bits = eta - log_term
    return e_bits / eta, e_bits


def bec_focusing_exponent_bits(beta: float, rate_bits: float) -> float:
    """Fixed-delay exponent of a BEC at ``rate_bits``, in base-2 units.

    Inverts the parametric form by bisection; the rate map is decreasing in
    eta from 1 - beta down to 0, and the bracket grows adaptively (eta scales
    like log2(1/beta) / rate for small beta).  Returns +inf for nonpositive
    rates and 0 at or above capacity.
    """
    if not 0 < beta < 1:
        raise ValueError("erasure probability must lie in (0, 1)")
    if rate_bits <= 0:
        return math.inf
    if rate_bits >= 1.0 - beta:
        return 0.0
    hi = 64.0
    while bec_focusing_point_bits(beta, hi)[0] > rate_bits and hi < 1e9:
        hi *= 4.0
    lo = 1e-12
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if bec_focusing_point_bits(beta, mid)[0] > rate_bits:
            lo = mid
        else:
            hi = mid
    eta = 0.5 * (lo + hi)
    return eta * rate_bits


def bec_anytime_capacity(beta: float, alpha_bits: float) -> float:
    """Reliability-dependent capacity of a BEC:
    C'(alpha) = alpha / (alpha + log2((1-beta)/(1 - 2^alpha beta))), bits/use."""
    if not 0 < beta < 1:
        raise ValueError("erasure probability must lie in (0, 1)")
    limit = -math.log2(beta)
    if not 0 < alpha_bits < limit:
        raise ValueError(f"reliability must lie in (0, {limit:.6f}) base-2 units")
    # 1 - 2^alpha beta via expm1 of (alpha + log2 beta) ln 2: alpha may sit
    # within 1e-9 of the limit, where the direct form cancels catastrophically
    one_minus = -math.expm1((alpha_bits - limit) * LN2)
    return alpha_bits / (alpha_bits + math.log2((1.0 - beta) / one_minus))


def bec_lowrate_floor(beta: float, r: float) -> tuple[float, float]:
    """Guaranteed low-rate exponent floor for a BEC.

    For r >= (2 - log2 log2 (1/beta)) / log2 (1/beta) -- any r >= 0 once
    beta <= 1/16 -- every rate R' < 1/(1+2r) bits supports a base-2 delay
    exponent of at least log2(1/beta) - 2 beta^r.  Returns (exponent_bits,
    rate_limit_bits).
    """
    if not 0 < beta < 1:
        raise ValueError("erasure probability must lie in (0, 1)")
    if r < 0:
        raise ValueError("r must be nonnegative")
    log2_inv_beta = -math.log2(beta)
    threshold = (2.0 - math.log2(log2_inv_beta)) / log2_inv_beta
    if r < threshold and beta > 1.0 / 16.0:
        raise ValueError(
            f"precondition violated: need r >= {threshold:.6f} (or beta <= 1/16)"
        )
    return log2_inv_beta - 2.0 * beta**r, 1.0 / (1.0 + 2.0 * r)


# ---------------------------------------------------------------------------
# rate-sampled curves for the CLI
# ---------------------------------------------------------------------------

def bound_at_rate(p: Dmc, name: str, r: float, fortify_k: int | None = None,
                  restarts: int = 64, seed: int = 0) -> float:
    """Evaluate one named bound at a rate in nats.  Names: esp, er, er<L>,
    haroutunian, tilde, burnashev, focusing, viterbi, timesharing."""
    if name == "esp":
        return sphere_packing(p, r, fortify_k)
    if name == "er":
        return random_coding_list(p, r, 1, fortify_k)
    if name.startswith("er") and name[2:].isdigit():
        return random_coding_list(p, r, int(name[2:]), fortify_k)
    if name == "haroutunian":
        return haroutunian(p, r, "standard", restarts=restarts, seed=seed)
    if name == "tilde":
        return haroutunian(p, r, "tilde", restarts=restarts, seed=seed)
    if name == "burnashev":
        return burnashev_bound(p, r)
    if name == "focusing":
        return focusing_bound(p, r, fortify_k, restarts=restarts, seed=seed)
    if name in ("viterbi", "timesharing"):
        # parametric curves inverted at a single rate
        if name == "viterbi":
            return focusing_bound(p, r, fortify_k, restarts=restarts, seed=seed)
        lo, hi = 1e-9, RHO_MAX
        cap_p = _cached_capacity(p)[0] + _fortification_rate(fortify_k)
        if r >= cap_p:
            return 0.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if timesharing_exponent(p, mid, fortify_k)[0] > r:
                lo = mid
            else:
                hi = mid
        return timesharing_exponent(p, 0.5 * (lo + hi), fortify_k)[1]
    raise KeyError(f"unknown bound name: {name}")


KNOWN_BOUNDS = ("esp", "er", "haroutunian", "tilde", "burnashev",
                "focusing", "viterbi", "timesharing")
