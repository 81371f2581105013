"""Built-in experiment suites: the sizes, base families and sparsity sweeps
used to compare the trimmed matrices against Gaussian ones."""
from dataclasses import dataclass
from typing import Tuple

from csmatrix.builder import CatalogEntry
from csmatrix.constructions import Construction


@dataclass(frozen=True)
class Suite:
    name: str
    shapes: Tuple[Tuple[int, int], ...]
    entries: Tuple[CatalogEntry, ...]
    k_values: Tuple[int, ...]


def _additive(q):
    return CatalogEntry(Construction.additive, q, s=q, t=0)


def _rs_latin(q):
    return CatalogEntry(Construction.rs_latin, q, s=q - 1, t=1, beta_exponent=0)


def _latin(q):
    return CatalogEntry(Construction.latin, q, s=q - 1, t=1, beta_exponent=0)


SUITES = {
    # 100x300 from the q=19 and q=23 Reed-Solomon Latin bases: the selection rule prefers q=19
    "selection": Suite(
        name="selection",
        shapes=((100, 300),),
        entries=(_rs_latin(19), _rs_latin(23)),
        k_values=tuple(range(5, 51, 5)),
    ),
    "small": Suite(
        name="small",
        shapes=((190, 940), (225, 950), (260, 960)),
        entries=(_additive(31), _rs_latin(32), _latin(32)),
        k_values=tuple(range(10, 131, 10)),
    ),
    "large": Suite(
        name="large",
        shapes=((450, 3500), (500, 3600), (550, 3700)),
        entries=(_additive(61), _rs_latin(64), _latin(64)),
        k_values=tuple(range(25, 301, 25)),
    ),
}
