"""Exact arithmetic in GF(q) for prime and prime-power q.

Fields come from a fixed table: the smallest primitive root for prime q and
the lexicographically smallest primitive polynomial for q = p^e, with the
polynomial x as primitive element. The same q therefore always yields the
same field, and so the same matrices downstream.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List

import galois
import numpy as np

from csmatrix.errors import BadParams, FieldMismatch, LogOfZero, NotPrimePower, UnsupportedOrder

logger = logging.getLogger(__name__)

MAX_ORDER = 1024


@dataclass(frozen=True, eq=False)
class Field:
    q: int
    p: int
    e: int
    gf: type

    @property
    def modulus(self) -> galois.Poly:
        if self.e == 1:
            return galois.Poly.Degrees([1], field=galois.GF(self.p))
        return self.gf.irreducible_poly

    @property
    def alpha(self) -> "FieldElement":
        return FieldElement(self, int(self.gf.primitive_element))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def element(self, value: int) -> "FieldElement":
        """Element from its integer representation (residue, or base-p coefficients)."""
        if not 0 <= value < self.q:
            raise BadParams(f"{value} is not an element of GF({self.q})")
        return FieldElement(self, value)

    def power(self, i: int) -> "FieldElement":
        return FieldElement(self, int(self.gf.primitive_element ** (i % (self.q - 1))))

    def powers(self) -> galois.FieldArray:
        """alpha^0, ..., alpha^(q-2) as one galois array."""
        return self.gf.primitive_element ** np.arange(self.q - 1)

    def elements(self) -> Iterator["FieldElement"]:
        """0 first, then the powers of alpha in log order."""
        yield self.zero
        for value in self.powers():
            yield FieldElement(self, int(value))

    def __repr__(self):
        return f"Field(q={self.q}, modulus={self.modulus}, alpha={self.gf.primitive_element})"


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    @property
    def coefficients(self) -> List[int]:
        """Coefficients over GF(p), highest degree first."""
        if self.field.e == 1:
            return [self.value]
        return [int(c) for c in self._lift().vector()]

    def is_zero(self) -> bool:
        return self.value == 0

    def discrete_log(self) -> int:
        if self.value == 0:
            raise LogOfZero("zero has no discrete logarithm; it maps to the zero block")
        return int(np.log(self._lift()))

    def _lift(self):
        return self.field.gf(self.value)

    def _check(self, other: "FieldElement"):
        if not isinstance(other, FieldElement) or other.field is not self.field:
            raise FieldMismatch(f"cannot combine elements of GF({self.field.q}) and {other!r}")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.field, int(self._lift() + other._lift()))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.field, int(self._lift() - other._lift()))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.field, int(self._lift() * other._lift()))

    def __neg__(self):
        return FieldElement(self.field, int(-self._lift()))

    def __repr__(self):
        if self.value == 0:
            return f"GF({self.field.q})(0)"
        return f"GF({self.field.q})(alpha^{self.discrete_log()})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def discrete_log(x: FieldElement) -> int:
    return x.discrete_log()


def supported_orders(max_q: int = MAX_ORDER) -> List[int]:
    return [q for q in range(2, min(max_q, MAX_ORDER) + 1) if galois.is_prime_power(q)]


@lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    if q < 2 or not galois.is_prime_power(q):
        raise NotPrimePower(f"{q} is not a prime power")
    if q > MAX_ORDER:
        raise UnsupportedOrder(f"GF({q}) is outside the supported table (q <= {MAX_ORDER})")

    primes, exponents = galois.factors(q)
    p, e = int(primes[0]), int(exponents[0])
    if e == 1:
        gf = galois.GF(p, primitive_element=int(galois.primitive_root(p)))
    else:
        # x is primitive under a primitive modulus; its integer form is p
        gf = galois.GF(q, irreducible_poly=galois.primitive_poly(p, e), primitive_element=p)

    field = Field(q=q, p=p, e=e, gf=gf)
    if len(np.unique(np.asarray(field.powers()))) != q - 1:
        raise UnsupportedOrder(f"alpha does not generate GF({q})*")
    logger.debug("built %r", field)
    return field
