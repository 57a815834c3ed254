"""Numerical semigroups: validation, membership and the classical invariants.

Everything here is exact integer arithmetic.  Membership is answered from
Apéry tables, which are computed as shortest paths on the residue graph
modulo the chosen element.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Sequence


class SemigroupError(ValueError):
    """Base class for invalid semigroup input."""


class EmptyInput(SemigroupError):
    pass


class ContainsOneOrZero(SemigroupError):
    pass


class SingleGenerator(SemigroupError):
    pass


class GcdNotOne(SemigroupError):
    pass


class NotMinimalSystem(SemigroupError):
    def __init__(self, redundant: int, message: str):
        super().__init__(message)
        self.redundant = redundant


class NotAMember(SemigroupError):
    pass


class DimensionMismatch(ValueError):
    pass


def least_per_residue(gens: Sequence[int], modulus: int) -> list[int | None]:
    """Least non-negative combination of ``gens`` in each residue class mod ``modulus``.

    Dijkstra on Z_modulus with arcs r -> (r + g) mod modulus of weight g.
    Classes that no combination reaches are reported as ``None``.
    """
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    steps = sorted({g % modulus: g for g in sorted(set(gens), reverse=True)}.items())
    steps = [(r, g) for r, g in steps if r != 0]
    dist: list[int | None] = [None] * modulus
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for step, g in steps:
            t = r + step
            if t >= modulus:
                t -= modulus
            nd = d + g
            cur = dist[t]
            if cur is None or nd < cur:
                dist[t] = nd
                heapq.heappush(heap, (nd, t))
    return dist


@dataclass(frozen=True)
class MonoidTable:
    """Membership oracle for the submonoid generated by arbitrary positive integers.

    Generators with a common divisor d > 1 are handled by dividing through:
    s is representable iff d | s and s / d is representable by the reduced
    generators.
    """

    gens: tuple[int, ...]
    divisor: int
    modulus: int
    entries: tuple[int | None, ...]

    def __contains__(self, value: int) -> bool:
        if value < 0:
            return False
        if value == 0:
            return True
        if not self.gens:
            return False
        q, rem = divmod(value, self.divisor)
        if rem:
            return False
        least = self.entries[q % self.modulus]
        return least is not None and q >= least

    def lex_min_representation(self, value: int) -> tuple[int, ...] | None:
        """Lexicographically smallest coefficient vector (in ``gens`` order) summing to ``value``."""
        if value not in self:
            return None
        coeffs = []
        rest = value
        for k, g in enumerate(self.gens):
            tail = monoid_table(self.gens[k + 1:])
            c = 0
            while rest - c * g not in tail:
                c += 1
            coeffs.append(c)
            rest -= c * g
        return tuple(coeffs)


@lru_cache(maxsize=4096)
def monoid_table(gens: tuple[int, ...]) -> MonoidTable:
    if any(g <= 0 for g in gens):
        raise ValueError("generators must be positive")
    if not gens:
        return MonoidTable((), 1, 1, (0,))
    d = reduce(gcd, gens)
    reduced = [g // d for g in gens]
    m = min(reduced)
    return MonoidTable(tuple(gens), d, m, tuple(least_per_residue(reduced, m)))


def representable(value: int, gens: Iterable[int]) -> bool:
    """True iff ``value`` is a non-negative integer combination of ``gens``."""
    return value in monoid_table(tuple(gens))


class FactorizationVector(tuple):
    """A point of N^p; ``length`` is the coordinate sum."""

    def __new__(cls, coords: Iterable[int]):
        self = super().__new__(cls, (int(c) for c in coords))
        if any(c < 0 for c in self):
            raise ValueError(f"factorization coordinates must be non-negative: {tuple(self)}")
        return self

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def length(self) -> int:
        return sum(self)

    def __le__(self, other):
        """Component-wise order (not the lexicographic tuple order)."""
        if len(self) != len(other):
            raise DimensionMismatch("vectors of different dimension")
        return all(a <= b for a, b in zip(self, other))

    def __ge__(self, other):
        if len(self) != len(other):
            raise DimensionMismatch("vectors of different dimension")
        return all(a >= b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"FactorizationVector({tuple(self)})"

    @classmethod
    def unit(cls, p: int, j: int) -> "FactorizationVector":
        return cls(1 if i == j else 0 for i in range(p))


@dataclass(frozen=True)
class AperyTable:
    modulus: int
    entries: tuple[int, ...]

    def __getitem__(self, r: int) -> int:
        return self.entries[r]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def max(self) -> int:
        return max(self.entries)


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple[int, ...]
    _apery_cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    @property
    def embedding_dimension(self) -> int:
        return len(self.generators)

    p = embedding_dimension

    def __str__(self) -> str:
        return "<" + ", ".join(map(str, self.generators)) + ">"

    def __contains__(self, s: int) -> bool:
        return contains(self, s)

    def __reduce__(self):
        # the lock cannot be pickled; worker processes rebuild their own cache
        return (NumericalSemigroup, (self.generators,))


def new_semigroup(gens: Iterable[int]) -> NumericalSemigroup:
    """Validate ``gens`` as a minimal generating system and build the semigroup."""
    gens = [int(g) for g in gens]
    if not gens:
        raise EmptyInput("empty generator list")
    bad = [g for g in gens if g < 2]
    if bad:
        raise ContainsOneOrZero(f"generators must be >= 2, got {bad[0]}")
    gens = sorted(set(gens))
    if len(gens) == 1:
        raise SingleGenerator(f"a single generator {gens[0]} cannot give finite complement")
    if reduce(gcd, gens) != 1:
        raise GcdNotOne(f"gcd is not 1 (gcd={reduce(gcd, gens)})")
    for i, g in enumerate(gens):
        others = tuple(gens[:i] + gens[i + 1:])
        if representable(g, others):
            raise NotMinimalSystem(g, f"not a minimal system: {g} is a combination of the other generators")
    return NumericalSemigroup(tuple(gens))


def apery(S: NumericalSemigroup, n: int) -> AperyTable:
    """Least element of S in each residue class modulo ``n`` (``n`` must belong to S)."""
    with S._lock:
        cached = S._apery_cache.get(n)
    if cached is not None:
        return cached
    if n <= 0 or not representable(n, S.generators):
        raise NotAMember(f"{n} is not a positive element of {S}")
    entries = least_per_residue(S.generators, n)
    table = AperyTable(n, tuple(entries))  # type: ignore[arg-type]
    with S._lock:
        return S._apery_cache.setdefault(n, table)


def contains(S: NumericalSemigroup, s: int) -> bool:
    if s < 0:
        return False
    n1 = S.generators[0]
    return s >= apery(S, n1).entries[s % n1]


def multiplicity(S: NumericalSemigroup) -> int:
    return S.generators[0]


def frobenius(S: NumericalSemigroup) -> int:
    table = apery(S, S.generators[0])
    return table.max - table.modulus


def genus(S: NumericalSemigroup) -> int:
    table = apery(S, S.generators[0])
    return sum((w - r) // table.modulus for r, w in enumerate(table.entries))


def evaluate(S: NumericalSemigroup, x: Sequence[int]) -> int:
    """The factorization homomorphism: sum of x_i * n_i."""
    if len(x) != S.embedding_dimension:
        raise DimensionMismatch(f"expected {S.embedding_dimension} coordinates, got {len(x)}")
    return sum(c * n for c, n in zip(x, S.generators))
