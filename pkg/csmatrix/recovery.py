"""OMP recovery and the Monte Carlo perfect-recovery benchmark.

Every trial draws its signal from its own stream keyed by (seed, k, trial),
so results do not depend on trial order or on how trials are spread across
worker processes.
"""
import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from scipy.linalg import solve_triangular

from csmatrix import config
from csmatrix.errors import BadK, BadParams, OutputError, SingularSupport, ZeroColumn
from csmatrix.sparse import SparseBinaryMatrix

logger = logging.getLogger(__name__)

CSV_HEADER = ["matrix", "m", "n", "k", "trials", "perfect", "percent", "mean_rel_err", "seed"]
RESIDUAL_EXIT = 1e-12
RANK_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class RealMatrix:
    entries: np.ndarray
    column_norms: np.ndarray
    name: str = "matrix"

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class SparseSignal:
    n: int
    support: np.ndarray
    values: np.ndarray

    @property
    def k(self) -> int:
        return int(self.support.size)

    def dense(self) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.support] = self.values
        return x


@dataclass(frozen=True)
class OmpPath:
    x: np.ndarray
    support: Tuple[int, ...]
    residual_norms: Tuple[float, ...]


def binarize_to_real(H: SparseBinaryMatrix, name: str = "binary") -> RealMatrix:
    weights = H.column_weights()
    empty = np.flatnonzero(weights == 0)
    if empty.size:
        raise ZeroColumn(int(empty[0]))
    return RealMatrix(
        entries=np.asfortranarray(H.to_dense(np.float64)),
        column_norms=np.sqrt(weights.astype(np.float64)),
        name=name,
    )


def gaussian_matrix(m: int, n: int, rng: Union[np.random.Generator, int], name: str = "gaussian") -> RealMatrix:
    """Standard normal entries, no column normalization."""
    if m < 1 or n < 1:
        raise BadParams(f"Gaussian matrix needs a positive shape, got {m}x{n}")
    rng = np.random.default_rng(rng)
    entries = np.asfortranarray(rng.standard_normal((m, n)))
    return RealMatrix(entries=entries, column_norms=np.linalg.norm(entries, axis=0), name=name)


def generate_sparse_signal(n: int, k: int, rng: np.random.Generator) -> SparseSignal:
    """Uniform support without replacement, standard normal values."""
    if not 1 <= k <= n:
        raise BadK(f"sparsity k={k} outside [1, {n}]")
    support = np.sort(rng.choice(n, size=k, replace=False))
    values = rng.standard_normal(k)
    while np.any(values == 0):
        zero = values == 0
        values[zero] = rng.standard_normal(int(zero.sum()))
    return SparseSignal(n=n, support=support, values=values)


def omp_path(A: RealMatrix, y: np.ndarray, k: int) -> OmpPath:
    if not 0 <= k <= A.m:
        raise BadK(f"OMP iterations k={k} outside [0, {A.m}]")
    y = np.asarray(y, dtype=np.float64)
    x = np.zeros(A.n)
    y_norm = float(np.linalg.norm(y))
    residual = y.copy()
    norms = [y_norm]
    support: List[int] = []
    available = np.ones(A.n, dtype=bool)
    coef = np.zeros(0)

    for _ in range(k):
        if norms[-1] <= RESIDUAL_EXIT * y_norm:
            break
        correlation = np.abs(A.entries.T @ residual) / A.column_norms
        correlation[~available] = -1.0
        # argmax keeps the smallest index on exact ties
        j = int(np.argmax(correlation))
        support.append(j)
        available[j] = False

        selected = A.entries[:, support]
        Q, R = np.linalg.qr(selected)
        if np.any(np.abs(np.diag(R)) <= RANK_TOLERANCE * A.column_norms[support]):
            raise SingularSupport(f"selected columns {support} are numerically rank-deficient")
        coef = solve_triangular(R, Q.T @ y)
        residual = y - selected @ coef
        norms.append(float(np.linalg.norm(residual)))

    x[support] = coef
    return OmpPath(x=x, support=tuple(support), residual_norms=tuple(norms))


def omp(A: RealMatrix, y: np.ndarray, k: int) -> np.ndarray:
    return omp_path(A, y, k).x


@dataclass(frozen=True)
class KRecord:
    k: int
    trials: int
    perfect: int
    percent: float
    mean_rel_err: float


@dataclass(frozen=True)
class ExperimentResult:
    matrix: str
    m: int
    n: int
    seed: int
    threshold: float
    records: Tuple[KRecord, ...] = field(default_factory=tuple)

    def percent(self, k: int) -> float:
        return next(r.percent for r in self.records if r.k == k)


def trial_rng(seed: int, k: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k, trial)))


def _trial_errors(A: RealMatrix, k: int, seed: int, trials: Sequence[int]) -> np.ndarray:
    errors = np.empty(len(trials))
    for slot, trial in enumerate(trials):
        signal = generate_sparse_signal(A.n, k, trial_rng(seed, k, trial))
        x = signal.dense()
        try:
            recovered = omp(A, A.entries @ x, k)
        except SingularSupport:
            # a failed trial reports the zero estimate
            recovered = np.zeros(A.n)
        errors[slot] = np.linalg.norm(recovered - x) / np.linalg.norm(x)
    return errors


def run_experiment(
    A: RealMatrix,
    k_list: Iterable[int],
    trials: int,
    seed: int,
    threshold: float = config.THRESHOLD,
    workers: int = 1,
) -> ExperimentResult:
    k_list = list(k_list)
    for k in k_list:
        if not 1 <= k <= A.m:
            raise BadK(f"sparsity k={k} outside [1, {A.m}]")
    if trials < 1:
        raise BadParams(f"trials must be positive, got {trials}")

    records = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in k_list:
            if pool is None:
                errors = _trial_errors(A, k, seed, range(trials))
            else:
                chunks = np.array_split(np.arange(trials), workers)
                futures = [pool.submit(_trial_errors, A, k, seed, chunk.tolist()) for chunk in chunks]
                errors = np.concatenate([f.result() for f in futures])
            perfect = int(np.count_nonzero(errors <= threshold))
            records.append(
                KRecord(
                    k=k,
                    trials=trials,
                    perfect=perfect,
                    percent=100.0 * perfect / trials,
                    mean_rel_err=float(errors.mean()),
                )
            )
            logger.debug("%s k=%d: %d/%d perfect", A.name, k, perfect, trials)
    finally:
        if pool is not None:
            pool.shutdown()

    return ExperimentResult(
        matrix=A.name,
        m=A.m,
        n=A.n,
        seed=seed,
        threshold=threshold,
        records=tuple(records),
    )


def run_comparison(
    A: RealMatrix,
    k_list: Iterable[int],
    trials: int,
    seed: int,
    threshold: float = config.THRESHOLD,
    workers: int = 1,
) -> Tuple[ExperimentResult, ExperimentResult]:
    """Run A and a same-shape Gaussian matrix on identical signals."""
    k_list = list(k_list)
    gaussian = gaussian_matrix(A.m, A.n, seed, name=f"gaussian-{A.m}x{A.n}")
    return (
        run_experiment(A, k_list, trials, seed, threshold, workers),
        run_experiment(gaussian, k_list, trials, seed, threshold, workers),
    )


def _real(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.6g}"


def write_csv(results: Iterable[ExperimentResult], out: Union[str, Path, TextIO], header: bool = True):
    if isinstance(out, (str, Path)):
        try:
            with open(out, "w", newline="") as stream:
                return write_csv(results, stream, header)
        except OSError as e:
            raise OutputError(f"cannot write {out}: {e.strerror}") from e
    writer = csv.writer(out, lineterminator="\n")
    if header:
        writer.writerow(CSV_HEADER)
    for result in results:
        for r in result.records:
            writer.writerow(
                [
                    result.matrix,
                    result.m,
                    result.n,
                    r.k,
                    r.trials,
                    r.perfect,
                    _real(r.percent),
                    _real(r.mean_rel_err),
                    result.seed,
                ]
            )


def to_csv(results: Iterable[ExperimentResult]) -> str:
    buffer = io.StringIO()
    write_csv(results, buffer)
    return buffer.getvalue()


def read_csv(source: Union[str, Path, TextIO], threshold: float = config.THRESHOLD) -> List[ExperimentResult]:
    if isinstance(source, (str, Path)):
        with open(source, newline="") as stream:
            return read_csv(stream, threshold)
    grouped = {}
    for row in csv.DictReader(source):
        key = (row["matrix"], int(row["m"]), int(row["n"]), int(row["seed"]))
        grouped.setdefault(key, []).append(
            KRecord(
                k=int(row["k"]),
                trials=int(row["trials"]),
                perfect=int(row["perfect"]),
                percent=float(row["percent"]),
                mean_rel_err=float(row["mean_rel_err"]),
            )
        )
    return [
        ExperimentResult(matrix=name, m=m, n=n, seed=seed, threshold=threshold, records=tuple(records))
        for (name, m, n, seed), records in grouped.items()
    ]
