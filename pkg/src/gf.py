"""
Finite fields GF(p^m).

Arithmetic is delegated to ``galois``; this module pins down the conventions
the rest of the package relies on:

- the modulus of GF(p^m) is the lexicographically least monic irreducible
  polynomial of degree m, so encodings are reproducible between runs;
- field elements are ``galois`` arrays (0-d for scalars) and the array's
  class identifies the owning field;
- elements of different fields never mix unless an :class:`Embedding` is
  applied first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import galois
import numpy as np

from .errors import ConstructionError, DeskScaleError, FieldMismatchError, ParameterError, SubfieldError, ZeroInverseError
from .settings import load_settings

logger = logging.getLogger(__name__)

FieldElement = galois.FieldArray


def as_ints(x) -> np.ndarray:
    """Integer representation of field values (little-endian base-p digits)."""
    return np.asarray(x.view(np.ndarray), dtype=np.int64)


def base_p_digits(values, p: int, m: int) -> np.ndarray:
    """Split integer representations into their m polynomial coefficients."""
    values = np.asarray(values, dtype=np.int64)
    return (values[..., None] // (p ** np.arange(m, dtype=np.int64))) % p


def pack_hex(values: Iterable[int], width: int) -> str:
    """Pack non-negative integers of ``width`` bits each, first value lowest."""
    acc = 0
    for i, v in enumerate(values):
        acc |= int(v) << (i * width)
    return format(acc, "x")


def unpack_hex(text: str, width: int, length: int) -> list[int]:
    acc = int(text, 16)
    mask = (1 << width) - 1
    return [(acc >> (i * width)) & mask for i in range(length)]


@dataclass(frozen=True)
class Field:
    p: int
    m: int
    modulus: tuple[int, ...]
    GF: type = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def primitive_element(self) -> FieldElement:
        return self.GF.primitive_element

    @property
    def zero(self) -> FieldElement:
        return self.GF(0)

    @property
    def one(self) -> FieldElement:
        return self.GF(1)

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    @property
    def coefficient_width(self) -> int:
        """Bits per packed polynomial coefficient."""
        return max(1, (self.p - 1).bit_length())

    def __call__(self, value) -> FieldElement:
        return self.GF(value)

    def __str__(self) -> str:
        return self.label

    def elements(self) -> FieldElement:
        return self.GF.elements

    def owns(self, x) -> bool:
        return type(x) is self.GF

    def zeros(self, shape) -> FieldElement:
        return self.GF.Zeros(shape)

    def random(self, shape, rng: np.random.Generator) -> FieldElement:
        return self.GF(rng.integers(0, self.order, size=shape))

    def coefficients(self, x) -> list[int]:
        """Polynomial-basis coefficients of a scalar, constant term first."""
        self.require(x)
        return [int(c) for c in base_p_digits(int(x), self.p, self.m)]

    def from_coefficients(self, coeffs: Sequence[int]) -> FieldElement:
        if len(coeffs) > self.m or any(not 0 <= int(c) < self.p for c in coeffs):
            raise ParameterError(f"{list(coeffs)} is not a coefficient list of {self.label}")
        return self.GF(sum(int(c) * self.p ** i for i, c in enumerate(coeffs)))

    def to_hex(self, x) -> str:
        return pack_hex(self.coefficients(x), self.coefficient_width)

    def from_hex(self, text: str) -> FieldElement:
        return self.from_coefficients(unpack_hex(text, self.coefficient_width, self.m))

    def vector_to_hex(self, v) -> str:
        """Pack a vector, each entry as its m coefficients, entry 0 lowest."""
        self.require(v)
        digits = base_p_digits(as_ints(v), self.p, self.m).reshape(-1)
        return pack_hex(digits, self.coefficient_width)

    def vector_from_hex(self, text: str, length: int) -> FieldElement:
        digits = np.array(unpack_hex(text, self.coefficient_width, length * self.m), dtype=np.int64)
        if np.any(digits >= self.p):
            raise ParameterError(f"{text!r} is not a packed vector over {self.label}")
        digits = digits.reshape(length, self.m)
        return self.GF(digits @ (self.p ** np.arange(self.m, dtype=np.int64)))

    def require(self, *xs) -> None:
        for x in xs:
            if not self.owns(x):
                raise FieldMismatchError(f"expected an element of {self.label}, got {type(x).__name__}")

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> "Field":
        made = field_make(int(data["p"]), int(data["m"]))
        if "modulus" in data and tuple(data["modulus"]) != made.modulus:
            raise ParameterError(
                f"modulus {data['modulus']} differs from the canonical {list(made.modulus)}"
            )
        return made


@lru_cache(maxsize=None)
def field_make(p: int, m: int = 1) -> Field:
    """GF(p^m) with the lexicographically least irreducible modulus."""
    settings = load_settings()
    if not galois.is_prime(p):
        raise ParameterError(f"characteristic must be prime, got {p}")
    if not 1 <= m <= settings.max_field_degree:
        raise ParameterError(f"extension degree must lie in [1, {settings.max_field_degree}], got {m}")
    if p ** m > settings.max_field_order:
        raise DeskScaleError(f"GF({p}^{m}) exceeds the field order limit {settings.max_field_order}")

    if m == 1:
        made = Field(p, 1, (0, 1), galois.GF(p))
    else:
        poly = galois.irreducible_poly(p, m, method="min")
        if not poly.is_irreducible():
            raise ConstructionError(f"galois returned a reducible modulus {poly}")
        modulus = tuple(int(c) for c in poly.coeffs[::-1])
        made = Field(p, m, modulus, galois.GF(p ** m, irreducible_poly=poly))

    logger.debug("Built %s with modulus %s", made.label, made.modulus)
    return made


def same_field(*xs) -> None:
    kinds = {type(x) for x in xs}
    if len(kinds) > 1:
        names = ", ".join(sorted(k.__name__ for k in kinds))
        raise FieldMismatchError(f"operands live in different fields: {names}")


def field_arith(op: str, a, b=None):
    if op in ("add", "mul"):
        if b is None:
            raise ParameterError(f"{op} needs two operands")
        same_field(a, b)
        return a + b if op == "add" else a * b
    if op == "neg":
        return -a
    if op == "inv":
        if a == 0:
            raise ZeroInverseError("zero has no multiplicative inverse")
        return a ** -1
    raise ParameterError(f"unknown field operation {op!r}")


def split_prime_power(q: int) -> tuple[int, int]:
    """Return (p, s) with q = p**s."""
    if q < 2 or not galois.is_prime_power(q):
        raise ParameterError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    s, rest = 0, q
    while rest > 1:
        rest //= p
        s += 1
    return p, s


def mult_order(q: int, n: int) -> int:
    if n < 1:
        raise ParameterError(f"modulus must be positive, got {n}")
    if math.gcd(q, n) != 1:
        raise ParameterError(f"gcd({q}, {n}) != 1")
    if n == 1:
        return 1
    order, acc = 1, q % n
    while acc != 1:
        acc = acc * q % n
        order += 1
    return order


def euler_totient(n: int) -> int:
    if n < 1:
        raise ParameterError(f"totient needs n >= 1, got {n}")
    return int(galois.euler_phi(n))


def root_of_unity(base_q: int, n: int) -> tuple[Field, FieldElement]:
    """Smallest extension GF(q^E) holding a primitive n-th root of unity, and that root."""
    p, s = split_prime_power(base_q)
    if n < 1 or math.gcd(n, base_q) != 1:
        raise ParameterError(f"need gcd(n, q) = 1, got n={n}, q={base_q}")
    extension = mult_order(base_q, n)
    big = field_make(p, s * extension)
    omega = big.primitive_element ** ((big.order - 1) // n)
    return big, omega


def in_subfield(x, size: int):
    """Elementwise test x**size == x, i.e. membership in GF(size)."""
    return x ** size == x


@dataclass(frozen=True, eq=False)
class Embedding:
    """Injective ring map GF(p^a) -> GF(p^b) fixed by the least root of the source modulus."""

    source: Field
    target: Field
    table: FieldElement
    preimage: np.ndarray

    def __call__(self, x) -> FieldElement:
        self.source.require(x)
        return self.table[as_ints(x)]

    def restrict(self, y) -> FieldElement:
        """Inverse map on the image; raises SubfieldError outside it."""
        self.target.require(y)
        idx = self.preimage[as_ints(y)]
        if np.any(idx < 0):
            raise SubfieldError(f"value not in the image of {self.source.label} in {self.target.label}")
        return self.source.GF(idx)


@lru_cache(maxsize=None)
def embed(source: Field, target: Field) -> Embedding:
    if source.p != target.p or target.m % source.m:
        raise FieldMismatchError(f"{source.label} does not embed in {target.label}")

    if source == target:
        table = target.elements()
    elif source.m == 1:
        table = target.GF(np.arange(source.p))
    else:
        xs = target.elements()
        value = target.zeros(xs.shape)
        for c in reversed(source.modulus):
            value = value * xs + target.GF(c)
        beta = xs[int(np.flatnonzero(as_ints(value) == 0)[0])]
        digits = base_p_digits(np.arange(source.order), source.p, source.m)
        table = target.zeros(source.order)
        for i in range(source.m):
            table = table + target.GF(digits[:, i]) * beta ** i

    preimage = np.full(target.order, -1, dtype=np.int64)
    preimage[as_ints(table)] = np.arange(source.order)
    logger.debug("Embedding %s -> %s", source.label, target.label)
    return Embedding(source, target, table, preimage)
