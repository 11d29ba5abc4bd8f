"""
Linear codes over GF(q): membership, exact covering radius and coset-leader
decoding.

The coset-leader table is grown breadth-first in syndrome space. Syndromes are
flattened to base-p digit vectors so that adding a scaled parity-check column
is digitwise addition mod p, and each syndrome gets an integer key.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import galois
import numpy as np

from .errors import ConstructionError, DeskScaleError, ParameterError
from .gf import Field, FieldElement, as_ints, base_p_digits
from .settings import load_settings

logger = logging.getLogger(__name__)


def _nonzero_rows(M: FieldElement) -> FieldElement:
    return M[np.any(as_ints(M) != 0, axis=1)]


@dataclass(frozen=True)
class CosetTable:
    """Minimum-weight, lexicographically least leader for every syndrome key."""

    leaders: np.ndarray
    weights: np.ndarray
    distribution: tuple[int, ...]

    @property
    def radius(self) -> int:
        return len(self.distribution) - 1

    @property
    def size(self) -> int:
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class LinearCode:
    field: Field
    n: int
    generator: FieldElement
    parity_check: FieldElement

    @property
    def dimension(self) -> int:
        return int(self.generator.shape[0])

    @property
    def redundancy(self) -> int:
        return self.n - self.dimension

    @property
    def q(self) -> int:
        return self.field.order

    @property
    def label(self) -> str:
        return f"[{self.n},{self.dimension}]"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (
            self.field == other.field
            and self.n == other.n
            and np.array_equal(as_ints(self.generator), as_ints(other.generator))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, as_ints(self.generator).tobytes()))

    def _check_length(self, v) -> None:
        self.field.require(v)
        if v.shape[-1] != self.n:
            raise ParameterError(f"vector length {v.shape[-1]} does not match code length {self.n}")

    def syndrome(self, v) -> FieldElement:
        self._check_length(v)
        return v @ self.parity_check.T

    def syndrome_key(self, v):
        digits = base_p_digits(as_ints(self.syndrome(v)), self.field.p, self.field.m)
        digits = digits.reshape(*digits.shape[:-2], -1)
        return digits @ (self.field.p ** np.arange(digits.shape[-1], dtype=np.int64))

    def contains(self, v) -> bool:
        return not np.any(as_ints(self.syndrome(v)))

    def is_subcode_of(self, other: "LinearCode") -> bool:
        return all(other.contains(row) for row in self.generator)

    def codewords(self) -> Iterator[FieldElement]:
        limit = load_settings().max_exhaustive_messages
        if self.q ** self.dimension > limit:
            raise DeskScaleError(f"{self.label} code has too many codewords to list (limit {limit})")
        for coeffs in itertools.product(range(self.q), repeat=self.dimension):
            if self.dimension:
                yield self.field.GF(list(coeffs)) @ self.generator
            else:
                yield self.field.zeros(self.n)

    @cached_property
    def coset_table(self) -> CosetTable:
        return _build_coset_table(self)

    def covering_radius(self) -> int:
        return self.coset_table.radius

    def nearest_codeword(self, v) -> tuple[FieldElement, int]:
        table = self.coset_table
        key = int(self.syndrome_key(v))
        error = self.field.GF(table.leaders[key].astype(np.int64))
        return v - error, int(table.weights[key])

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "k": self.dimension,
            "generator": [self.field.vector_to_hex(row) for row in self.generator],
        }


def _as_rows(field: Field, vectors) -> np.ndarray:
    """Integer matrix of the given rows, checked against the field."""
    if isinstance(vectors, galois.FieldArray):
        field.require(vectors)
        return as_ints(vectors).reshape(len(vectors), -1)
    rows = []
    for v in vectors:
        if isinstance(v, galois.FieldArray):
            field.require(v)
            rows.append(as_ints(v))
        else:
            rows.append(np.asarray(v, dtype=np.int64))
    if len({len(r) for r in rows}) > 1:
        raise ParameterError(f"inconsistent vector lengths {sorted({len(r) for r in rows})}")
    out = np.stack(rows) if rows else np.zeros((0, 0), dtype=np.int64)
    if np.any(out < 0) or np.any(out >= field.order):
        raise ParameterError(f"entries must lie in [0, {field.order})")
    return out


def code_from_basis(field: Field, vectors: Sequence, n: int | None = None) -> LinearCode:
    """Code spanned by ``vectors``; ``n`` is required when the list is empty."""
    rows = list(_as_rows(field, vectors)) if len(vectors) else []
    lengths = {len(r) for r in rows}
    if n is not None:
        lengths.add(n)
    if len(lengths) != 1:
        raise ParameterError(f"inconsistent vector lengths {sorted(lengths)}")
    (n,) = lengths

    if rows and np.any(np.stack(rows)):
        generator = _nonzero_rows(field.GF(np.stack(rows).astype(np.int64)).row_reduce())
    else:
        generator = field.zeros((0, n))

    k = generator.shape[0]
    if k == 0:
        parity_check = field.GF(np.eye(n, dtype=np.int64))
    elif k == n:
        parity_check = field.zeros((0, n))
    else:
        parity_check = generator.null_space()
    return LinearCode(field, n, generator, parity_check)


def code_from_parity_check(field: Field, H) -> LinearCode:
    checks = _nonzero_rows(field.GF(_as_rows(field, H)))
    n = checks.shape[1]
    if not checks.shape[0]:
        return code_from_basis(field, list(np.eye(n, dtype=np.int64)), n=n)
    return code_from_basis(field, list(checks.null_space()), n=n)


def covering_radius(code: LinearCode) -> int:
    return code.covering_radius()


def nearest_codeword(code: LinearCode, v) -> tuple[FieldElement, int]:
    return code.nearest_codeword(v)


def contains(code: LinearCode, v) -> bool:
    return code.contains(v)


def _build_coset_table(code: LinearCode) -> CosetTable:
    field = code.field
    p, q, n = field.p, field.order, code.n
    width = code.redundancy * field.m
    total = p ** width
    limit = load_settings().max_syndromes
    if total > limit:
        raise DeskScaleError(f"{code.label} code over {field.label} has {total} syndromes, above the limit {limit}")

    place = p ** np.arange(width, dtype=np.int64)
    H = code.parity_check
    # shifts[i, c-1] = digits of the syndrome of c * u_i
    shifts = np.zeros((n, q - 1, width), dtype=np.int64)
    for c in range(1, q):
        scaled = H * field.GF(c)
        shifts[:, c - 1] = base_p_digits(as_ints(scaled).T, p, field.m).reshape(n, width)

    dtype = np.uint8 if q <= 256 else np.uint16
    leaders = np.zeros((total, n), dtype=dtype)
    weights = np.full(total, -1, dtype=np.int32)
    weights[0] = 0
    visited = np.zeros(total, dtype=bool)
    visited[0] = True

    frontier_digits = np.zeros((1, width), dtype=np.int64)
    frontier_leaders = np.zeros((1, n), dtype=np.int64)
    distribution = [1]
    found = 1
    while found < total:
        cand_digits, cand_leaders = [], []
        for i in range(n):
            free = frontier_leaders[:, i] == 0
            if not free.any():
                continue
            base_digits = frontier_digits[free]
            base_leaders = frontier_leaders[free]
            for c in range(1, q):
                extended = base_leaders.copy()
                extended[:, i] = c
                cand_digits.append((base_digits + shifts[i, c - 1]) % p)
                cand_leaders.append(extended)
        if not cand_digits:
            break

        digits = np.concatenate(cand_digits)
        leads = np.concatenate(cand_leaders)
        keys = digits @ place
        fresh = ~visited[keys]
        digits, leads, keys = digits[fresh], leads[fresh], keys[fresh]
        if not len(keys):
            break

        # primary key: syndrome; then leader coordinates 0, 1, ... lexicographically
        order = np.lexsort(tuple(leads[:, j] for j in range(n - 1, -1, -1)) + (keys,))
        digits, leads, keys = digits[order], leads[order], keys[order]
        first = np.ones(len(keys), dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        digits, leads, keys = digits[first], leads[first], keys[first]

        level = len(distribution)
        visited[keys] = True
        weights[keys] = level
        leaders[keys] = leads
        distribution.append(len(keys))
        found += len(keys)
        frontier_digits, frontier_leaders = digits, leads
        logger.debug("%s coset level %d: %d new syndromes", code.label, level, len(keys))

    if found != total:
        raise ConstructionError(f"syndrome search reached {found} of {total} cosets")
    logger.info("Coset table for %s %s: %d syndromes, covering radius %d", code.label, field.label, total, len(distribution) - 1)
    return CosetTable(leaders, weights, tuple(distribution))
