"""Discrete memoryless channels and the information quantities built on them.

A channel is a stochastic matrix of conditional probabilities p(y|x).  All
rates, exponents and divergences are in nats; conversion to bits is always an
explicit division by ln 2 (see ``bits_from_nats`` / ``nats_from_bits``).

Infinite values (divergences across a support mismatch, infinite Burnashev
coefficient, ...) are represented by ``math.inf`` and propagate through
ordinary float arithmetic.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)

ROW_SUM_TOL = 1e-12
SYMMETRY_SEARCH_MAX_OUTPUTS = 8


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap; carries the last residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def nats_from_bits(rate_bits: float) -> float:
    return rate_bits * LN2


def bits_from_nats(rate_nats: float) -> float:
    return rate_nats / LN2


@dataclass(frozen=True)
class Dmc:
    """A discrete memoryless channel: ``rows[x, y] = P(Y=y | X=x)``.

    Rows must sum to one within 1e-12 and both alphabets must have at least
    two letters.  Instances are immutable and safe to share across threads.
    """

    rows: np.ndarray
    name: str = ""

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2:
            raise ValueError("channel matrix must be two-dimensional")
        if rows.shape[0] < 2 or rows.shape[1] < 2:
            raise ValueError("need at least two inputs and two outputs")
        if np.any(rows < -ROW_SUM_TOL) or np.any(rows > 1 + ROW_SUM_TOL):
            raise ValueError("transition probabilities must lie in [0, 1]")
        if np.any(np.abs(rows.sum(axis=1) - 1.0) > ROW_SUM_TOL):
            raise ValueError("every row must sum to 1 within 1e-12")
        rows = np.clip(rows, 0.0, 1.0)
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def input_size(self) -> int:
        return self.rows.shape[0]

    @property
    def output_size(self) -> int:
        return self.rows.shape[1]

    def digest(self) -> str:
        """Stable content hash, used to key caches and label curves."""
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.rows).tobytes())
        h.update(str(self.rows.shape).encode())
        return h.hexdigest()[:16]

    def row_supports(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.rows[x] > 0) for x in range(self.input_size)]

    def __repr__(self):
        label = self.name or f"{self.input_size}x{self.output_size}"
        return f"Dmc({label})"


def bsc(p: float) -> Dmc:
    """Binary symmetric channel with crossover probability ``p``."""
    if not 0 <= p <= 1:
        raise ValueError("crossover probability must be in [0, 1]")
    return Dmc(np.array([[1 - p, p], [p, 1 - p]]), name=f"BSC({p})")


def bec(beta: float) -> Dmc:
    """Binary erasure channel; outputs are (0, 1, erasure)."""
    if not 0 <= beta <= 1:
        raise ValueError("erasure probability must be in [0, 1]")
    return Dmc(
        np.array([[1 - beta, 0.0, beta], [0.0, 1 - beta, beta]]),
        name=f"BEC({beta})",
    )


def z_channel(nulling: float) -> Dmc:
    """Z-channel: input 0 is noiseless, input 1 is flipped to 0 w.p. ``nulling``."""
    if not 0 <= nulling <= 1:
        raise ValueError("nulling probability must be in [0, 1]")
    return Dmc(np.array([[1.0, 0.0], [nulling, 1 - nulling]]), name=f"Z({nulling})")


def identity_channel(size: int = 2) -> Dmc:
    return Dmc(np.eye(size), name=f"identity{size}")


def validate_distribution(q, size: int | None = None) -> np.ndarray:
    """Check that ``q`` is a point on the input simplex and return it as an array."""
    q = np.asarray(q, dtype=float)
    if q.ndim != 1:
        raise ValueError("input distribution must be a vector")
    if size is not None and q.shape[0] != size:
        raise ValueError(f"distribution has length {q.shape[0]}, expected {size}")
    if np.any(q < -ROW_SUM_TOL) or abs(q.sum() - 1.0) > ROW_SUM_TOL:
        raise ValueError("input distribution must be nonnegative and sum to 1")
    return np.clip(q, 0.0, None)


def uniform_input(size: int) -> np.ndarray:
    return np.full(size, 1.0 / size)


def mutual_information(p: Dmc, q) -> float:
    """I(q, P) in nats, with 0 log 0 terms treated as zero."""
    q = validate_distribution(q, p.input_size)
    rows = p.rows
    out = q @ rows
    active = (q[:, None] * rows) > 0
    ratio = np.ones_like(rows)
    np.divide(rows, out[None, :], out=ratio, where=active)
    return float(np.sum((q[:, None] * rows)[active] * np.log(ratio[active])))


def capacity(p: Dmc, tol: float = 1e-10, max_iter: int = 100_000) -> tuple[float, np.ndarray]:
    """Channel capacity C(P) = max_q I(q, P) and an achieving distribution.

    Blahut-Arimoto multiplicative updates with the certified stopping rule
    C <= max_x D_x: the returned value is within ``tol`` of the true capacity.
    """
    rows = p.rows
    nx = p.input_size
    q = uniform_input(nx)
    mask = rows > 0
    logrows = np.where(mask, np.log(np.where(mask, rows, 1.0)), 0.0)
    residual = math.inf
    for _ in range(max_iter):
        out = q @ rows
        with np.errstate(divide="ignore"):
            logout = np.where(out > 0, np.log(np.where(out > 0, out, 1.0)), 0.0)
        # D_x = D(P(.|x) || output marginal); finite because supp(out) covers supp(rows)
        d = np.sum(np.where(mask, rows * (logrows - logout[None, :]), 0.0), axis=1)
        lower = float(q @ d)
        upper = float(d.max())
        residual = upper - lower
        if residual <= tol:
            return lower, q
        q = q * np.exp(d - upper)
        q = q / q.sum()
    raise ConvergenceError("capacity iteration cap exceeded", residual)


def divergence_conditional(g: Dmc, p: Dmc, r) -> float:
    """D(G || P | r) in nats; +inf exactly on an absolute-continuity failure."""
    if g.rows.shape != p.rows.shape:
        raise ValueError("channels must share alphabet sizes")
    r = validate_distribution(r, g.input_size)
    grows, prows = g.rows, p.rows
    active = (r[:, None] * grows) > 0
    if np.any(active & (prows == 0)):
        return math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.log(grows / prows)
    return float(np.sum(np.where(active, r[:, None] * grows * ratio, 0.0)))


def divergence_rows(grow: np.ndarray, prow: np.ndarray) -> float:
    """KL divergence between two output distributions, +inf on support mismatch."""
    active = grow > 0
    if np.any(active & (prow == 0)):
        return math.inf
    g, p = grow[active], prow[active]
    return float(np.sum(g * np.log(g / p)))


def c1(p: Dmc) -> float:
    """max_{x,x'} D(P(.|x) || P(.|x')), the Burnashev coefficient.

    Infinite whenever some row has mass on an output another row misses.
    """
    best = 0.0
    for x in range(p.input_size):
        for xp in range(p.input_size):
            if x == xp:
                continue
            best = max(best, divergence_rows(p.rows[x], p.rows[xp]))
            if best == math.inf:
                return math.inf
    return best


def _set_partitions(items: list[int]):
    """All partitions of ``items`` into nonempty blocks (restricted growth)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partial in _set_partitions(rest):
        for i in range(len(partial)):
            yield partial[:i] + [[first] + partial[i]] + partial[i + 1:]
        yield [[first]] + partial


def _block_is_symmetric(sub: np.ndarray) -> bool:
    # rows permutations of each other and columns permutations of each other
    rows_sorted = np.sort(sub, axis=1)
    if not np.allclose(rows_sorted, rows_sorted[0], atol=1e-12, rtol=0):
        return False
    cols_sorted = np.sort(sub, axis=0)
    return bool(np.allclose(cols_sorted.T, cols_sorted.T[0], atol=1e-12, rtol=0))


def output_symmetry_partition(p: Dmc) -> list[tuple[int, ...]] | None:
    """Gallager output-symmetry check by exhaustive search over output partitions.

    Returns a partition of the output letters into blocks whose sub-matrices
    have mutually permuted rows and mutually permuted columns, or None when the
    channel is not output-symmetric.  Raises for alphabets beyond the
    exhaustive-search limit; callers treat that as "undetermined".
    """
    ny = p.output_size
    if ny > SYMMETRY_SEARCH_MAX_OUTPUTS:
        raise ValueError(
            f"symmetry search supports at most {SYMMETRY_SEARCH_MAX_OUTPUTS} outputs"
        )
    for partition in _set_partitions(list(range(ny))):
        if all(_block_is_symmetric(p.rows[:, sorted(block)]) for block in partition):
            return sorted(tuple(sorted(block)) for block in partition)
    return None


def is_output_symmetric(p: Dmc) -> bool | None:
    """True/False from the exhaustive search; None when undetermined (|Y| too large)."""
    try:
        return output_symmetry_partition(p) is not None
    except ValueError:
        return None
