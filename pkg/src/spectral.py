"""
Spectral decomposition of a semisimple abelian group algebra.

For gcd(|G|, q) = 1 the algebra F_q[G] is a product of finite fields, one per
q-conjugacy class. The isomorphism is a multidimensional Fourier transform
computed in a single splitting field GF(q^E), E = ord_exp(G)(q); component k
only takes values in the subfield GF(q^{l_k}) where l_k is the class size.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraElement, GroupAlgebra, group_algebra
from .errors import ContextMismatchError, ParameterError, SubfieldError
from .gf import Embedding, Field, FieldElement, embed, euler_totient, in_subfield, mult_order, root_of_unity
from .group import ConjugacyClass, Group, conjugacy_classes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Component:
    index: int
    conjugacy_class: ConjugacyClass
    q: int

    @property
    def size(self) -> int:
        """Class size l_k, the degree of the component field over GF(q)."""
        return self.conjugacy_class.size

    @property
    def field_size(self) -> int:
        return self.q ** self.size

    @property
    def representative(self):
        return self.conjugacy_class.representative

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "representative": str(self.representative),
            "class": [str(g) for g in self.conjugacy_class.members],
            "size": self.size,
            "field_size": self.field_size,
        }


@dataclass(frozen=True, eq=False)
class Decomposition:
    algebra: GroupAlgebra
    splitting: Field
    omega: FieldElement
    components: tuple[Component, ...]
    characters: FieldElement
    inverse_characters: FieldElement

    @property
    def group(self) -> Group:
        return self.algebra.group

    @property
    def base(self) -> Field:
        return self.algebra.field

    @property
    def q(self) -> int:
        return self.algebra.q

    @property
    def t(self) -> int:
        return len(self.components)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Component field sizes q_k."""
        return tuple(c.field_size for c in self.components)

    @property
    def dimensions(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.components)

    @cached_property
    def base_embedding(self) -> Embedding:
        return embed(self.base, self.splitting)

    def component(self, k: int) -> Component:
        if not 1 <= k <= self.t:
            raise ParameterError(f"component index {k} outside 1..{self.t}")
        return self.components[k - 1]

    def validate_support(self, support: Iterable[int]) -> frozenset[int]:
        support = frozenset(int(k) for k in support)
        bad = sorted(k for k in support if not 1 <= k <= self.t)
        if bad:
            raise ParameterError(f"support indices {bad} outside 1..{self.t}")
        return support

    def spectrum(self, values: Sequence) -> "Spectrum":
        return Spectrum(self, self.splitting.GF(values))


@dataclass(frozen=True, eq=False)
class Spectrum:
    decomposition: Decomposition
    values: FieldElement

    def __post_init__(self):
        self.decomposition.splitting.require(self.values)
        if self.values.shape != (self.decomposition.t,):
            raise ParameterError(f"spectrum needs {self.decomposition.t} components, got {self.values.shape}")

    def component(self, k: int) -> FieldElement:
        self.decomposition.component(k)
        return self.values[k - 1]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(int(i) + 1 for i in np.flatnonzero(self.values.view(np.ndarray)))

    def __add__(self, other: "Spectrum") -> "Spectrum":
        return Spectrum(self.decomposition, self.values + other.values)

    def __mul__(self, other: "Spectrum") -> "Spectrum":
        return Spectrum(self.decomposition, self.values * other.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.decomposition is other.decomposition and np.array_equal(self.values, other.values)

    __hash__ = None


@lru_cache(maxsize=None)
def decompose(group: Group, q: int) -> Decomposition:
    algebra = group_algebra(group, q)
    classes = conjugacy_classes(group, q)
    splitting, omega = root_of_unity(q, group.exponent)

    exponent = group.exponent
    powers = splitting.zeros(exponent)
    acc = splitting.one
    for i in range(exponent):
        powers[i] = acc
        acc = acc * omega

    # chi_j(x) = omega^(sum_i (N/n_i) j_i x_i)
    E = group.exponent_table
    scale = np.array([exponent // n for n in group.orders], dtype=np.int64)
    characters = powers[((E * scale) @ E.T) % exponent]
    inverse = np.linalg.inv(characters)

    components = tuple(Component(k + 1, c, q) for k, c in enumerate(classes))
    decomposition = Decomposition(algebra, splitting, omega, components, characters, inverse)
    logger.info(
        "Decomposed %s into %d components %s over %s",
        algebra.label, len(components), list(decomposition.sizes), splitting.label,
    )
    return decomposition


def _check_algebra(d: Decomposition, a: AlgebraElement) -> None:
    if a.algebra != d.algebra:
        raise ContextMismatchError(f"{a.algebra.label} element given to the decomposition of {d.algebra.label}")


def transform(d: Decomposition, a: AlgebraElement) -> FieldElement:
    """All n character sums a_hat_j = sum_x a_x chi_j(x)."""
    _check_algebra(d, a)
    return d.characters @ d.base_embedding(a.coefficients)


def phi_forward(d: Decomposition, a: AlgebraElement) -> Spectrum:
    full = transform(d, a)
    reps = [c.representative.index for c in d.components]
    return Spectrum(d, full[reps])


def phi_inverse(d: Decomposition, s: Spectrum) -> AlgebraElement:
    if s.decomposition is not d:
        raise ContextMismatchError("spectrum belongs to a different decomposition")

    outside = [
        c.index for c, v in zip(d.components, s.values) if not bool(in_subfield(v, c.field_size))
    ]
    if outside:
        raise SubfieldError(f"components {outside} lie outside their subfields GF(q^l_k)")

    # conjugate symmetry: a_hat at rep*q^i equals a_hat_rep^(q^i)
    full = d.splitting.zeros(d.group.order)
    for c, value in zip(d.components, s.values):
        for i, g in enumerate(c.conjugacy_class.members):
            full[g.index] = value ** (d.q ** i)

    lifted = d.inverse_characters @ full
    return AlgebraElement(d.algebra, d.base_embedding.restrict(lifted))


def minimal_ideal_generator(d: Decomposition, k: int) -> AlgebraElement:
    """The primitive idempotent theta_k with spectrum (0,..,1,..,0)."""
    d.component(k)
    values = d.splitting.zeros(d.t)
    values[k - 1] = 1
    return phi_inverse(d, Spectrum(d, values))


def idempotent_for(d: Decomposition, support: Iterable[int]) -> AlgebraElement:
    support = d.validate_support(support)
    values = d.splitting.zeros(d.t)
    for k in support:
        values[k - 1] = 1
    return phi_inverse(d, Spectrum(d, values))


def k_delta(n: int, delta: int) -> int:
    """
    Number of elements of GF(2^l0) that are sums of at most delta powers of a
    primitive n-th root of unity.
    """
    if n < 1 or n % 2 == 0:
        raise ParameterError(f"n must be odd and positive, got {n}")
    if not 0 <= delta <= n:
        raise ParameterError(f"delta must lie in [0, {n}], got {delta}")

    field, alpha = root_of_unity(2, n)
    # addition in GF(2^m) is XOR of the integer representations
    powers = sorted({int(alpha ** i) for i in range(n)})
    reached = {0}
    frontier = {0}
    for _ in range(delta):
        fresh = {x ^ p for x in frontier for p in powers} - reached
        if not fresh:
            break
        reached |= fresh
        frontier = fresh
        if len(reached) == field.order:
            break
    return len(reached)


def sun_bound(n: int, delta: int = 1) -> int:
    """Receiver count floor(K_delta * l0 / phi(n)) - 1 of the earlier circular-shift construction."""
    return k_delta(n, delta) * mult_order(2, n) // euler_totient(n) - 1
