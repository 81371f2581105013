"""Measurement matrices of arbitrary size: pick a base matrix, then trim it.

The base is chosen so that s >= sqrt(n), s^2 >= m and floor(m/s) - t, the
guaranteed minimum column weight after trimming, is as large as possible.
Trimming drops the trailing rows and columns.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, List, Optional, Tuple

import galois

from csmatrix.constructions import BaseMatrix, Construction, build_base
from csmatrix.errors import BadShape, DegenerateWeight, NoFeasibleBase
from csmatrix.field import supported_orders
from csmatrix.sparse import SparseBinaryMatrix, trim

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CatalogEntry:
    construction: Construction
    q: int
    s: int
    t: int
    beta_exponent: Optional[int] = None

    @property
    def label(self) -> str:
        if self.beta_exponent is None:
            return f"{self.construction.value}(q={self.q})"
        return f"{self.construction.value}(q={self.q},beta=alpha^{self.beta_exponent})"

    @property
    def slug(self) -> str:
        if not self.beta_exponent:
            return f"{self.construction.value}-q{self.q}"
        return f"{self.construction.value}-q{self.q}-b{self.beta_exponent}"

    def build(self) -> BaseMatrix:
        return _build(self)

    def score(self, m: int) -> int:
        return m // self.s - self.t


@lru_cache(maxsize=32)
def _build(entry: CatalogEntry) -> BaseMatrix:
    return build_base(entry.construction, entry.q, entry.beta_exponent)


@dataclass(frozen=True)
class FamilyCatalog:
    entries: Tuple[CatalogEntry, ...] = ()

    def only(self, construction: Optional[Construction] = None, qs: Optional[Iterable[int]] = None):
        """Sub-catalog, e.g. to pin one family or one field order."""
        qs = None if qs is None else set(qs)
        return replace(
            self,
            entries=tuple(
                e
                for e in self.entries
                if (construction is None or e.construction is Construction(construction))
                and (qs is None or e.q in qs)
            ),
        )

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def enumerate_catalog(
    max_q: int,
    extension_fields: bool = True,
    exhaustive_beta: bool = False,
    constructions: Iterable[Construction] = tuple(Construction),
) -> FamilyCatalog:
    constructions = [Construction(c) for c in constructions]
    entries = []
    for q in supported_orders(max_q):
        prime = galois.is_prime(q)
        for construction in constructions:
            if construction is Construction.additive:
                if prime and q > 2:
                    entries.append(CatalogEntry(construction, q, s=q, t=0))
                continue
            if q < 3 or (not prime and not extension_fields):
                continue
            for e in range(q - 1) if exhaustive_beta else (0,):
                entries.append(CatalogEntry(construction, q, s=q - 1, t=1, beta_exponent=e))
    return FamilyCatalog(tuple(entries))


@dataclass(frozen=True)
class Rejection:
    entry: CatalogEntry
    reason: str
    score: Optional[int] = None


@dataclass(frozen=True)
class SelectionReport:
    m: int
    n: int
    chosen: CatalogEntry
    score: int
    rejected: Tuple[Rejection, ...] = field(default_factory=tuple)

    @property
    def coherence_bound(self) -> float:
        return 1 / self.score

    def to_block(self) -> str:
        lines = [
            f"m={self.m}",
            f"n={self.n}",
            f"construction={self.chosen.construction.value}",
            f"q={self.chosen.q}",
            f"beta_exponent={'none' if self.chosen.beta_exponent is None else self.chosen.beta_exponent}",
            f"s={self.chosen.s}",
            f"t={self.chosen.t}",
            f"score={self.score}",
            f"mu_upper={self.coherence_bound:.6f}",
            f"rejected={len(self.rejected)}",
        ]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"Requested {self.m}x{self.n}: chose {self.chosen.label} "
            f"(s={self.chosen.s}, t={self.chosen.t}, score floor(m/s)-t={self.score}, mu <= 1/{self.score})"
        ]
        for rejection in self.rejected:
            lines.append(f"  rejected {rejection.entry.label}: {rejection.reason}")
        return "\n".join(lines) + "\n"


def _tie_key(entry: CatalogEntry, m: int):
    return (-entry.score(m), entry.s, entry.construction.rank, entry.beta_exponent or 0)


def select_base(m: int, n: int, catalog: FamilyCatalog) -> SelectionReport:
    if m < 2 or n < 2 or m > n:
        raise BadShape(f"need 2 <= m <= n, got {m}x{n}")
    min_s = math.isqrt(n - 1) + 1
    feasible: List[CatalogEntry] = []
    rejected: List[Rejection] = []
    for entry in catalog:
        if entry.s < min_s:
            rejected.append(Rejection(entry, f"s={entry.s} < ceil(sqrt({n}))={min_s}"))
        elif entry.s * entry.s < m:
            rejected.append(Rejection(entry, f"s^2={entry.s * entry.s} < m={m}"))
        elif entry.score(m) < 1:
            rejected.append(Rejection(entry, f"score={entry.score(m)} leaves empty columns", entry.score(m)))
        else:
            feasible.append(entry)
    if not feasible:
        raise NoFeasibleBase(f"no catalog entry can produce a {m}x{n} matrix")

    feasible.sort(key=lambda entry: _tie_key(entry, m))
    chosen = feasible[0]
    rejected += [Rejection(e, f"score={e.score(m)}", e.score(m)) for e in feasible[1:]]
    report = SelectionReport(m=m, n=n, chosen=chosen, score=chosen.score(m), rejected=tuple(rejected))
    logger.info("selected %s for %dx%d with score %d", chosen.label, m, n, report.score)
    return report


def build_measurement_matrix(
    m: int, n: int, catalog: FamilyCatalog
) -> Tuple[SparseBinaryMatrix, SelectionReport]:
    report = select_base(m, n, catalog)
    base = report.chosen.build()
    A = trim(base.H, m, n)
    lightest = int(A.column_weights().min())
    if lightest < report.score:
        raise DegenerateWeight(f"trimmed column weight {lightest} below the guaranteed {report.score}")
    return A, report
