"""
Group codes: ideals M of F_q[G] used as message and symbol modules.

An ideal is held as the linear code tau_nat(M). When it comes from a
decomposition it also remembers its spectral support T(M), and its
annihilator is then built twice (null space of the multiplication maps,
and the ideal on the complementary support) and the two must agree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraElement, GroupAlgebra, matrix_rep, tau_inv, tau_nat
from .errors import AnnihilatorMismatchError, ConstructionError, ContextMismatchError, ParameterError
from .gf import as_ints
from .lincode import LinearCode, code_from_basis
from .spectral import Decomposition, idempotent_for, phi_forward

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupCode:
    algebra: GroupAlgebra
    code: LinearCode
    decomposition: Decomposition | None = None
    support: frozenset[int] | None = None

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def dimension(self) -> int:
        return self.code.dimension

    @property
    def rate(self) -> Fraction:
        return code_rate(self)

    @property
    def rate_label(self) -> str:
        return f"{self.dimension}/{self.n}"

    @property
    def label(self) -> str:
        if self.support is None:
            return f"{self.code.label} ideal of {self.algebra.label}"
        return f"T{{{','.join(map(str, sorted(self.support)))}}} ideal of {self.algebra.label}"

    @property
    def basis(self) -> tuple[AlgebraElement, ...]:
        return tuple(AlgebraElement(self.algebra, row) for row in self.code.generator)

    def contains(self, m: AlgebraElement) -> bool:
        if m.algebra != self.algebra:
            raise ContextMismatchError(f"{m.algebra.label} element tested against {self.label}")
        return self.code.contains(tau_nat(m))

    @cached_property
    def annihilator(self) -> "GroupCode":
        return _annihilator(self)

    @cached_property
    def degree_bound(self) -> int:
        return self.annihilator.code.covering_radius()

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupCode):
            return NotImplemented
        return self.algebra == other.algebra and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.algebra, self.code))

    def to_dict(self) -> dict:
        return {
            "group": self.algebra.group.label,
            "q": self.algebra.q,
            "support": None if self.support is None else sorted(self.support),
            "dimension": self.dimension,
            "rate": self.rate_label,
        }


def _ideal_rows(generators: Sequence[AlgebraElement]):
    # row g of matrix_rep(m).T is tau_nat(m g)
    return [row for m in generators for row in matrix_rep(m).T]


def ideal_from_T(d: Decomposition, T: Iterable[int]) -> GroupCode:
    return _ideal_on_support(d, d.validate_support(T))


# one GroupCode per support keeps annihilators and coset tables across calls
@lru_cache(maxsize=None)
def _ideal_on_support(d: Decomposition, support: frozenset[int]) -> GroupCode:
    theta = idempotent_for(d, support)
    code = code_from_basis(d.base, _ideal_rows([theta]), n=d.group.order)

    expected = sum(d.component(k).size for k in support)
    if code.dimension != expected:
        raise ConstructionError(f"ideal on support {sorted(support)} has dimension {code.dimension}, expected {expected}")
    logger.debug("Ideal T=%s of %s: dimension %d", sorted(support), d.algebra.label, code.dimension)
    return GroupCode(d.algebra, code, d, support)


def ideal_from_generators(
    algebra: GroupAlgebra,
    generators: Sequence[AlgebraElement],
    decomposition: Decomposition | None = None,
) -> GroupCode:
    """The ideal generated by ``generators``; works without spectral data."""
    for m in generators:
        if m.algebra != algebra:
            raise ContextMismatchError(f"generator from {m.algebra.label} given for {algebra.label}")
    code = code_from_basis(algebra.field, _ideal_rows(generators), n=algebra.n)

    support = None
    if decomposition is not None:
        if decomposition.algebra != algebra:
            raise ContextMismatchError("decomposition belongs to a different algebra")
        support = frozenset().union(*(phi_forward(decomposition, m).support for m in generators))
    return GroupCode(algebra, code, decomposition, support)


def _kernel_annihilator(code: GroupCode) -> LinearCode:
    """Null space of r -> (r m_1, ..., r m_k) over a basis of M."""
    algebra = code.algebra
    basis = code.basis
    if not basis:
        return code_from_basis(algebra.field, list(np.eye(algebra.n, dtype=np.int64)), n=algebra.n)
    stacked = algebra.field.GF(np.vstack([as_ints(matrix_rep(m)) for m in basis]))
    return code_from_basis(algebra.field, list(stacked.null_space()), n=algebra.n)


def _annihilator(code: GroupCode) -> GroupCode:
    kernel = _kernel_annihilator(code)
    if code.support is None or code.decomposition is None:
        return GroupCode(code.algebra, kernel)

    d = code.decomposition
    complement = frozenset(range(1, d.t + 1)) - code.support
    spectral = ideal_from_T(d, complement)
    if spectral.code != kernel:
        raise AnnihilatorMismatchError(
            f"annihilator of {code.label}: kernel gives {kernel.label}, complement support gives {spectral.code.label}"
        )
    return spectral


def annihilator(code: GroupCode) -> GroupCode:
    return code.annihilator


def code_rate(code: GroupCode) -> Fraction:
    return Fraction(code.dimension, code.n)


def degree_bound(code: GroupCode) -> int:
    """Covering radius of tau_nat(Ann(M)): the degree every code over M can be reduced to."""
    return code.degree_bound


def degree_reduce(code: GroupCode, k: AlgebraElement) -> AlgebraElement:
    """Coset leader of k + Ann(M); acts on M exactly like k."""
    if k.algebra != code.algebra:
        raise ContextMismatchError(f"{k.algebra.label} coefficient given for {code.label}")
    v = tau_nat(k)
    nearest, _ = code.annihilator.code.nearest_codeword(v)
    return tau_inv(code.algebra, v - nearest)


def has_zero_coordinate_sum(code: GroupCode) -> bool:
    """True iff every element of M has coefficients summing to zero."""
    return code.annihilator.code.contains(tau_nat(code.algebra.all_ones()))


def is_even_weight_ideal(code: GroupCode) -> bool:
    if code.algebra.q != 2:
        raise ParameterError(f"even-weight test is defined over GF(2), got q={code.algebra.q}")
    return has_zero_coordinate_sum(code)


def max_order_support(d: Decomposition) -> frozenset[int]:
    """Components whose class has the largest possible size l0 = ord_exp(G)(q)."""
    top = d.splitting.m // d.base.m
    return frozenset(c.index for c in d.components if c.size == top)


def class_support(d: Decomposition, g) -> frozenset[int]:
    """The single component whose class contains g."""
    g = d.group.element(g)
    for c in d.components:
        if g in c.conjugacy_class.members:
            return frozenset({c.index})
    raise ParameterError(f"{g} is in no class")


def simplex_support(d: Decomposition) -> frozenset[int]:
    """Component of the generator y of a cyclic group."""
    if not d.group.is_cyclic or d.group.order < 2:
        raise ParameterError(f"simplex ideal needs a nontrivial cyclic group, got {d.group.label}")
    return class_support(d, 1)


def achievable_dimensions(d: Decomposition) -> list[int]:
    """Every dim(M) over the 2^t possible supports."""
    sums = {0}
    for c in d.components:
        sums |= {s + c.size for s in sums}
    return sorted(sums)
