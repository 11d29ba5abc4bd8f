"""
Finite abelian groups Z_{n_1} x ... x Z_{n_r}.

Elements are enumerated in mixed radix with the last factor varying fastest,
so in C3xC3 the order is e, y, y^2, x, xy, xy^2, x^2, x^2y, x^2y^2.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import DeskScaleError, GroupError
from .gf import Field
from .settings import load_settings

_FACTOR = re.compile(r"c(\d+)")


@dataclass(frozen=True)
class Group:
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        bad = [n for n in self.orders if n < 2]
        if bad:
            raise GroupError(f"cyclic factor orders must be >= 2, got {list(self.orders)}")
        limit = load_settings().max_group_order
        if self.order > limit:
            raise DeskScaleError(f"group order {self.order} exceeds the limit {limit}")

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def label(self) -> str:
        return "x".join(f"C{n}" for n in self.orders) or "C1"

    def __str__(self) -> str:
        return self.label

    @cached_property
    def strides(self) -> np.ndarray:
        strides = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.orders[i + 1]
        return np.array(strides, dtype=np.int64)

    @cached_property
    def exponent_table(self) -> np.ndarray:
        """Row i holds the exponent tuple of element i."""
        idx = np.arange(self.order, dtype=np.int64)
        if not self.rank:
            return np.zeros((1, 0), dtype=np.int64)
        return (idx[:, None] // self.strides) % np.array(self.orders, dtype=np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """mul_table[g, h] = index(g h)."""
        E = self.exponent_table
        orders = np.array(self.orders, dtype=np.int64)
        return ((E[:, None, :] + E[None, :, :]) % orders) @ self.strides

    @cached_property
    def inverse_indices(self) -> np.ndarray:
        orders = np.array(self.orders, dtype=np.int64)
        return ((-self.exponent_table) % orders) @ self.strides

    @cached_property
    def quotient_table(self) -> np.ndarray:
        """quotient_table[h, g] = index(h^{-1} g)."""
        return self.mul_table[self.inverse_indices]

    def index(self, exponents: Sequence[int]) -> int:
        if len(exponents) != self.rank:
            raise GroupError(f"{self.label} needs {self.rank} exponents, got {len(exponents)}")
        return int(sum((int(e) % n) * int(s) for e, n, s in zip(exponents, self.orders, self.strides)))

    def element(self, which) -> "GroupElement":
        """Element from an index or an exponent tuple."""
        if isinstance(which, GroupElement):
            if which.group != self:
                raise GroupError(f"{which} does not belong to {self.label}")
            return which
        if isinstance(which, (int, np.integer)):
            if not 0 <= which < self.order:
                raise GroupError(f"index {which} out of range for {self.label}")
            return GroupElement(self, tuple(int(e) for e in self.exponent_table[which]))
        return GroupElement(self, tuple(which))

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> tuple["GroupElement", ...]:
        return tuple(
            GroupElement(self, tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)
        )

    def elements(self) -> tuple["GroupElement", ...]:
        return tuple(self.element(i) for i in range(self.order))


def _symbols(rank: int) -> list[str]:
    if rank == 1:
        return ["y"]
    if rank == 2:
        return ["x", "y"]
    return [f"g{i + 1}" for i in range(rank)]


@dataclass(frozen=True)
class GroupElement:
    group: Group
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != self.group.rank:
            raise GroupError(f"{self.group.label} needs {self.group.rank} exponents, got {self.exponents}")
        reduced = tuple(int(e) % n for e, n in zip(self.exponents, self.group.orders))
        object.__setattr__(self, "exponents", reduced)

    @property
    def index(self) -> int:
        return self.group.index(self.exponents)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_op(self, other)

    def __invert__(self) -> "GroupElement":
        return group_inv(self)

    def __pow__(self, k: int) -> "GroupElement":
        return group_pow(self, k)

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(_symbols(self.group.rank), self.exponents):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{e}")
        return "".join(parts) or "e"


def group_make(orders: Sequence[int]) -> Group:
    return Group(tuple(orders))


def parse_group(spec: str) -> Group:
    """Parse "C15", "C3xC3", "c5xc9"; "C1" is the trivial group."""
    text = spec.strip().lower().replace(" ", "")
    if text in ("", "c1", "trivial"):
        return Group(())
    orders = []
    for part in text.split("x"):
        match = _FACTOR.fullmatch(part)
        if match is None:
            raise GroupError(f"cannot parse group {spec!r}; expected factors like C15 joined by 'x'")
        orders.append(int(match.group(1)))
    return Group(tuple(orders))


def _same_group(g: GroupElement, h: GroupElement) -> None:
    if g.group != h.group:
        raise GroupError(f"elements of {g.group.label} and {h.group.label} cannot be combined")


def group_op(g: GroupElement, h: GroupElement) -> GroupElement:
    _same_group(g, h)
    return GroupElement(g.group, tuple(a + b for a, b in zip(g.exponents, h.exponents)))


def group_inv(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, tuple(-a for a in g.exponents))


def group_pow(g: GroupElement, k: int) -> GroupElement:
    return GroupElement(g.group, tuple(a * k for a in g.exponents))


@dataclass(frozen=True)
class Permutation:
    """Bijection on [0, n): index h is sent to image[h]."""

    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(i) for i in self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise GroupError("image is not a permutation")

    @property
    def size(self) -> int:
        return len(self.image)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.image, dtype=np.int64)

    def __call__(self, h: int) -> int:
        return self.image[h]

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other."""
        return Permutation(tuple(self.image[i] for i in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for h, k in enumerate(self.image):
            inv[k] = h
        return Permutation(tuple(inv))

    def apply(self, v):
        """Move coordinate h of v to position image[h]."""
        out = v.copy()
        out[self.array] = v
        return out

    def to_matrix(self, field: Field):
        P = field.zeros((self.size, self.size))
        P[self.array, np.arange(self.size)] = 1
        return P


def regular_permutation(g: GroupElement) -> Permutation:
    return Permutation(tuple(int(k) for k in g.group.mul_table[g.index]))


@dataclass(frozen=True)
class ConjugacyClass:
    """Orbit of g -> g^q, listed as rep, rep^q, rep^(q^2), ..."""

    members: tuple[GroupElement, ...]

    @property
    def representative(self) -> GroupElement:
        return self.members[0]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(g.index for g in self.members)

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in self.members) + "}"


@lru_cache(maxsize=None)
def conjugacy_classes(group: Group, q: int) -> tuple[ConjugacyClass, ...]:
    """
    Partition of the group into orbits of g -> g^q.

    The identity class comes first, then larger classes before smaller ones,
    ties broken by least member index. Each class starts at its least member.
    """
    if math.gcd(group.order, q) != 1:
        raise GroupError(f"gcd(|G|={group.order}, q={q}) != 1")

    seen = [False] * group.order
    classes = []
    for start in range(group.order):
        if seen[start]:
            continue
        g = group.element(start)
        orbit = [g]
        seen[start] = True
        h = g ** q
        while h != g:
            orbit.append(h)
            seen[h.index] = True
            h = h ** q
        classes.append(ConjugacyClass(tuple(orbit)))

    classes.sort(key=lambda c: (c.representative.index != 0, -c.size, c.representative.index))
    return tuple(classes)
