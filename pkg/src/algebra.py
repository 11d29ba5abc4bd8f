"""
The group algebra F_q[G] and its permute-and-add action on F_q^n.

An element sum_g a_g g is stored as its coefficient vector in the group's
enumeration order, which is also its image under the natural embedding
tau_nat. Over GF(2) with a cyclic group the action on vectors runs on
bit-packed integers (rotate and XOR).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ContextMismatchError, DeskScaleError, ParameterError
from .gf import Field, FieldElement, as_ints, field_make, split_prime_power
from .group import Group, GroupElement, parse_group, regular_permutation
from .settings import load_settings

logger = logging.getLogger(__name__)

EdgeVector = FieldElement


@dataclass(frozen=True)
class GroupAlgebra:
    group: Group
    field: Field

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def label(self) -> str:
        return f"{self.field.label}[{self.group.label}]"

    def __str__(self) -> str:
        return self.label

    def __call__(self, coefficients) -> "AlgebraElement":
        return AlgebraElement(self, self.field.GF(coefficients))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.field.zeros(self.n))

    def one(self) -> "AlgebraElement":
        return self.basis_element(self.group.identity)

    def basis_element(self, g, scalar=None) -> "AlgebraElement":
        """scalar * g, with scalar defaulting to 1."""
        g = self.group.element(g)
        coeffs = self.field.zeros(self.n)
        coeffs[g.index] = 1 if scalar is None else scalar
        return AlgebraElement(self, coeffs)

    def all_ones(self) -> "AlgebraElement":
        return AlgebraElement(self, self.field.GF(np.ones(self.n, dtype=np.int64)))

    def random(self, rng: np.random.Generator) -> "AlgebraElement":
        return AlgebraElement(self, self.field.random(self.n, rng))

    def elements(self) -> Iterator["AlgebraElement"]:
        """Every element of the algebra; small algebras only."""
        limit = load_settings().max_exhaustive_messages
        if self.q ** self.n > limit:
            raise DeskScaleError(f"{self.label} has {self.q}^{self.n} elements, above the limit {limit}")
        for coeffs in itertools.product(range(self.q), repeat=self.n):
            yield self(list(coeffs))

    def to_dict(self) -> dict:
        return {"group": self.group.label, "field": self.field.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "GroupAlgebra":
        return cls(parse_group(data["group"]), Field.from_dict(data["field"]))


def group_algebra(group: Group, q: int) -> GroupAlgebra:
    p, s = split_prime_power(q)
    return GroupAlgebra(group, field_make(p, s))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: GroupAlgebra
    coefficients: FieldElement

    # numpy defers c * a to __rmul__
    __array_ufunc__ = None

    def __post_init__(self):
        self.algebra.field.require(self.coefficients)
        if self.coefficients.shape != (self.algebra.n,):
            raise ParameterError(
                f"{self.algebra.label} needs {self.algebra.n} coefficients, got shape {self.coefficients.shape}"
            )
        coeffs = self.coefficients.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def weight(self) -> int:
        return weight(self)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(as_ints(self.coefficients))

    def is_zero(self) -> bool:
        return not np.any(as_ints(self.coefficients))

    def to_list(self) -> list[int]:
        return [int(c) for c in as_ints(self.coefficients)]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return alg_add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same_algebra(self, other)
        return AlgebraElement(self.algebra, self.coefficients - other.coefficients)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, -self.coefficients)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return alg_mul(self, other)
        self.algebra.field.require(other)
        return AlgebraElement(self.algebra, self.coefficients * other)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and np.array_equal(
            as_ints(self.coefficients), as_ints(other.coefficients)
        )

    def __hash__(self) -> int:
        return hash((self.algebra, as_ints(self.coefficients).tobytes()))

    def __repr__(self) -> str:
        terms = []
        for i in self.support:
            c = int(self.coefficients[i])
            g = str(self.algebra.group.element(int(i)))
            terms.append(g if c == 1 else f"{c}*{g}")
        return f"AlgebraElement({self.algebra.label}: {' + '.join(terms) or '0'})"

    def to_dict(self) -> dict:
        return {**self.algebra.to_dict(), "coefficients": self.to_list()}

    @classmethod
    def from_dict(cls, data: dict) -> "AlgebraElement":
        return GroupAlgebra.from_dict(data)(data["coefficients"])


def _same_algebra(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.algebra != b.algebra:
        raise ContextMismatchError(f"cannot combine elements of {a.algebra.label} and {b.algebra.label}")


def alg_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _same_algebra(a, b)
    return AlgebraElement(a.algebra, a.coefficients + b.coefficients)


def alg_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Convolution c_g = sum_h a_h b_{h^-1 g}."""
    _same_algebra(a, b)
    quotient = a.algebra.group.quotient_table
    terms = a.coefficients[:, None] * b.coefficients[quotient]
    return AlgebraElement(a.algebra, terms.sum(axis=0))


def weight(a: AlgebraElement) -> int:
    return int(np.count_nonzero(as_ints(a.coefficients)))


def matrix_rep(a: AlgebraElement) -> FieldElement:
    """sum_g a_g rho_g, i.e. M[k, h] = a_{k h^-1}."""
    group = a.algebra.group
    return a.coefficients[group.mul_table[:, group.inverse_indices]]


def permute(v: EdgeVector, g: GroupElement) -> EdgeVector:
    """rho_g v: coordinate h moves to index(g h)."""
    group = g.group
    return v[group.mul_table[group.inverse_indices[g.index]]]


# ---------------------------------------------------------------------
# Bit-packed GF(2) path for cyclic groups
# ---------------------------------------------------------------------
def pack_bits(v: EdgeVector) -> int:
    bits = as_ints(v).astype(np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def unpack_bits(word: int, n: int, field: Field) -> EdgeVector:
    raw = np.frombuffer(word.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return field.GF(np.unpackbits(raw, bitorder="little")[:n].astype(np.int64))


def _rotate_xor(shifts: Sequence[int], word: int, n: int) -> int:
    mask = (1 << n) - 1
    acc = 0
    for s in shifts:
        s = int(s)
        acc ^= ((word << s) | (word >> (n - s))) & mask if s else word
    return acc


def apply(a: AlgebraElement, v: EdgeVector) -> EdgeVector:
    """
    Permute-and-add action of a on v, equal to matrix_rep(a) @ v.

    Uses exactly weight(a) permutations and never builds a dense matrix.
    """
    algebra = a.algebra
    algebra.field.require(v)
    if v.shape != (algebra.n,):
        raise ParameterError(f"vector of length {v.shape} does not match n={algebra.n}")

    support = a.support
    if algebra.q == 2 and algebra.group.is_cyclic and algebra.n > 1:
        # y^s acts as a left rotation by s
        word = _rotate_xor(support, pack_bits(v), algebra.n)
        return unpack_bits(word, algebra.n, algebra.field)

    group = algebra.group
    if len(support) == 1:
        g = int(support[0])
        out = permute(v, group.element(g))
        c = a.coefficients[g]
        return out if c == 1 else out * c

    acc = algebra.field.zeros(algebra.n)
    for g in support:
        acc = acc + permute(v, group.element(int(g))) * a.coefficients[g]
    return acc


def tau_nat(a: AlgebraElement) -> EdgeVector:
    return a.coefficients.copy()


def tau_inv(algebra: GroupAlgebra, v: EdgeVector) -> AlgebraElement:
    if v.shape != (algebra.n,):
        raise ParameterError(f"vector of length {v.shape} does not match n={algebra.n}")
    return AlgebraElement(algebra, v)


def bit_truncate(v: EdgeVector) -> EdgeVector:
    """Drop the last coordinate of a vector whose coordinates sum to zero."""
    if v.sum() != 0:
        raise ParameterError("only vectors with zero coordinate sum can be truncated")
    return v[:-1].copy()


def bit_expand(w: EdgeVector) -> EdgeVector:
    out = type(w).Zeros(w.shape[0] + 1)
    out[:-1] = w
    out[-1] = -w.sum()
    return out


def augment(a: AlgebraElement) -> FieldElement:
    """The ring map sum a_g g -> sum a_g onto the base field."""
    return a.coefficients.sum()


def scalar_embed(c, algebra: GroupAlgebra) -> AlgebraElement:
    """The ring map c -> c e from the base field into the algebra."""
    algebra.field.require(c)
    return algebra.basis_element(algebra.group.identity, c)


def regular_matrix(g: GroupElement, field: Field) -> FieldElement:
    return regular_permutation(g).to_matrix(field)
