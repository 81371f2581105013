"""Coherence, girth, and the coherence bounds for binary matrices."""
import logging
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from csmatrix.errors import (
    BadMu,
    BadParams,
    BadShape,
    DegenerateWeight,
    TooFewColumns,
    ZeroColumn,
)
from csmatrix.sparse import SparseBinaryMatrix

logger = logging.getLogger(__name__)

PAIRWISE_LIMIT = 8192
CHUNK = 512
INFINITE = math.inf

Triples = Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return "inf" if math.isinf(value) else f"{value:.6f}"
    if isinstance(value, tuple):
        return ",".join(map(str, value))
    return str(value)


@dataclass(frozen=True)
class CoherenceReport:
    mu: float
    mu_squared: Fraction
    lambda_max: int
    witness: Tuple[int, int]
    min_col_weight: int
    max_col_weight: int

    @property
    def mu_exact(self) -> Optional[Fraction]:
        """mu as a fraction when it is rational, e.g. lambda/gamma for uniform weights."""
        num, den = self.mu_squared.numerator, self.mu_squared.denominator
        root_num, root_den = math.isqrt(num), math.isqrt(den)
        if root_num * root_num == num and root_den * root_den == den:
            return Fraction(root_num, root_den)
        return None

    def to_text(self) -> str:
        fields = asdict(self)
        fields["mu_squared"] = str(self.mu_squared)
        fields["mu_exact"] = self.mu_exact
        return "\n".join(f"{key}={_fmt(value)}" for key, value in fields.items()) + "\n"


@dataclass(frozen=True)
class BoundsReport:
    m: int
    n: int
    welch: Optional[float]
    johnson_lower: float
    johnson_columns: Optional[int]
    theorem2_upper: Optional[float]
    rip_order: Optional[int]

    def to_text(self) -> str:
        return "\n".join(f"{key}={_fmt(value)}" for key, value in asdict(self).items()) + "\n"


def _products_pairwise(H: SparseBinaryMatrix, chunk: int) -> Triples:
    # float32 products are exact for inner products below 2**24
    dense = H.to_dense(np.float32)
    columns = np.arange(H.n)
    for start in range(0, H.n, chunk):
        block = dense[:, start : start + chunk].T @ dense
        rows = columns[start : start + block.shape[0], None]
        i, j = np.nonzero((block > 0.5) & (columns[None, :] > rows))
        yield i + start, j, np.rint(block[i, j]).astype(np.int64)


def _products_by_row(H: SparseBinaryMatrix, chunk: int) -> Triples:
    # the sparse Gram product accumulates, row by row, every pair of columns sharing a row
    csc = H.to_csc()
    for start in range(0, H.n, chunk):
        block = (csc[:, start : start + chunk].T @ csc).tocoo()
        i, j, v = block.row + start, block.col, block.data
        keep = (j > i) & (v > 0)
        yield i[keep].astype(np.int64), j[keep].astype(np.int64), v[keep].astype(np.int64)


def _products(H: SparseBinaryMatrix, strategy: str, chunk: int) -> Triples:
    if strategy == "auto":
        strategy = "pairwise" if H.n <= PAIRWISE_LIMIT else "by_row"
    if strategy == "pairwise":
        return _products_pairwise(H, chunk)
    if strategy == "by_row":
        return _products_by_row(H, chunk)
    raise BadParams(f"unknown coherence strategy {strategy!r}")


def lambda_max(H: SparseBinaryMatrix, strategy: str = "auto", chunk: int = CHUNK) -> int:
    """Largest raw inner product between two distinct columns."""
    best = 0
    for _, _, inner in _products(H, strategy, chunk):
        if inner.size:
            best = max(best, int(inner.max()))
    return best


def coherence(H: SparseBinaryMatrix, strategy: str = "auto", chunk: int = CHUNK) -> CoherenceReport:
    if H.n < 2:
        raise TooFewColumns(f"coherence needs at least 2 columns, got {H.n}")
    weights = H.column_weights()
    empty = np.flatnonzero(weights == 0)
    if empty.size:
        raise ZeroColumn(int(empty[0]))

    lam = 0
    top = 0.0
    kept = []
    for i, j, inner in _products(H, strategy, chunk):
        if not inner.size:
            continue
        lam = max(lam, int(inner.max()))
        score = inner / np.sqrt(weights[i] * weights[j])
        top = max(top, float(score.max()))
        near = score >= top * (1 - 1e-9)
        kept.append((i[near], j[near], inner[near], score[near]))

    if not kept:
        mu_squared, witness = Fraction(0), (0, 1)
    else:
        i, j, inner, score = (np.concatenate(parts) for parts in zip(*kept))
        near = score >= top * (1 - 1e-9)
        i, j, inner = i[near], j[near], inner[near]
        # settle float near-ties exactly: compare inner^2 / (w_i w_j) as integers
        num, den = inner * inner, weights[i] * weights[j]
        mu_squared = max(Fraction(int(a), int(b)) for a, b in set(zip(num.tolist(), den.tolist())))
        exact = num * mu_squared.denominator == den * mu_squared.numerator
        order = np.lexsort((j[exact], i[exact]))
        witness = (int(i[exact][order[0]]), int(j[exact][order[0]]))

    if mu_squared:
        a, b = witness
        mu = int(np.intersect1d(H.column(a), H.column(b)).size) / math.sqrt(
            int(weights[a]) * int(weights[b])
        )
    else:
        mu = 0.0
    report = CoherenceReport(
        mu=mu,
        mu_squared=mu_squared,
        lambda_max=lam,
        witness=witness,
        min_col_weight=int(weights.min()),
        max_col_weight=int(weights.max()),
    )
    logger.debug("coherence of %r: mu=%.6f lambda=%d", H, report.mu, lam)
    return report


def tanner_adjacency(H: SparseBinaryMatrix) -> sparse.csr_array:
    """Adjacency of the Tanner graph: variable nodes 0..n-1, check nodes n..n+m-1."""
    csc = H.to_csc()
    return sparse.csr_array(sparse.bmat([[None, csc.T], [csc, None]], format="csr"))


def girth(H: SparseBinaryMatrix) -> Union[int, float]:
    """Shortest cycle in the Tanner graph, or INFINITE when the graph is a forest.

    Level-synchronous BFS from every variable node: a node first reached from
    two frontier nodes at depth d closes a cycle of length 2d, and the minimum
    over all roots is the girth.
    """
    if H.nnz == 0:
        return INFINITE
    adjacency = tanner_adjacency(H)
    size = H.n + H.m
    best = INFINITE
    weights = H.column_weights()
    for root in range(H.n):
        if weights[root] < 2:
            # a cycle through a degree-1 node is impossible
            continue
        visited = np.zeros(size, dtype=bool)
        visited[root] = True
        frontier = np.zeros(size)
        frontier[root] = 1.0
        depth = 0
        while 2 * (depth + 1) < best:
            counts = adjacency @ frontier
            new = (counts > 0) & ~visited
            if np.any(counts[new] >= 2):
                best = 2 * (depth + 1)
                break
            if not new.any():
                break
            visited |= new
            frontier = new.astype(float)
            depth += 1
        if best == 4:
            break
    return best


def welch_bound(m: int, n: int) -> float:
    if m < 2 or n < 2 or m > n:
        raise BadShape(f"Welch bound needs 2 <= m <= n, got m={m}, n={n}")
    return math.sqrt((n - m) / (m * (n - 1)))


def johnson_bound(m: int, d: int, gamma: int) -> int:
    """Johnson upper bound on A(m, d, gamma), evaluated innermost floor first."""
    if d % 2 or d < 2 or d > 2 * gamma or gamma < 1 or gamma > m:
        raise BadParams(f"need even 2 <= d <= 2*gamma and gamma <= m, got m={m}, d={d}, gamma={gamma}")
    delta = d // 2
    depth = gamma - delta
    value = (m - depth) // (gamma - depth)
    for level in range(depth - 1, -1, -1):
        value = (m - level) * value // (gamma - level)
    return value


def johnson_columns(m: int, gamma: int, lam: int) -> int:
    """Largest column count allowed for column weight gamma and max inner product lam."""
    if not 1 <= lam < gamma <= m:
        raise BadParams(f"need 1 <= lambda < gamma <= m, got m={m}, gamma={gamma}, lambda={lam}")
    return johnson_bound(m, 2 * (gamma - lam), gamma)


def johnson_coherence_lower(m: int, n: int) -> float:
    if m < 2 or n < 2:
        raise BadShape(f"need m, n >= 2, got m={m}, n={n}")
    return 2 * n / (n + math.sqrt(n * n + 4 * m * n * (m - 1)))


def base_coherence_lower(s: int) -> float:
    return 2 / (1 + math.sqrt(4 * s * s - 3))


def submatrix_coherence_lower(c: float, s: int) -> float:
    """Lower bound for a c*s^2 x s^2 matrix of uniform weight and girth > 4."""
    return 1 / (0.5 + math.sqrt(c * c * s * s + 0.25 - c))


def theorem2_upper(m: int, s: int, t: int) -> float:
    gamma = m // s
    if gamma <= t:
        raise DegenerateWeight(f"floor({m}/{s}) = {gamma} leaves no guaranteed column weight with t={t}")
    return 1 / (gamma - t)


def rip_order(mu: Union[Fraction, float, int]) -> int:
    """Largest k with k < 1 + 1/mu."""
    if not isinstance(mu, Fraction):
        mu = Fraction(mu).limit_denominator(1_000_000)
    if not 0 < mu <= 1:
        raise BadMu(f"mu must lie in (0, 1], got {mu}")
    return math.ceil(1 + 1 / mu) - 1


def bounds(
    m: int,
    n: int,
    gamma: Optional[int] = None,
    s: Optional[int] = None,
    t: Optional[int] = None,
    mu: Union[Fraction, float, None] = None,
) -> BoundsReport:
    columns = johnson_columns(m, gamma, 1) if gamma and 1 < gamma <= m else None
    upper = None
    if s is not None and t is not None and m // s > t:
        upper = theorem2_upper(m, s, t)
    return BoundsReport(
        m=m,
        n=n,
        welch=welch_bound(m, n) if 2 <= m <= n else None,
        johnson_lower=johnson_coherence_lower(m, n),
        johnson_columns=columns,
        theorem2_upper=upper,
        rip_order=rip_order(mu) if mu else None,
    )
