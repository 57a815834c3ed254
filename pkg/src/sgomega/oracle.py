"""Brute-force ground truth: enumerate the box, keep the minimal points.

Membership here comes from a plain reachability sieve, not from Apéry
tables, so the oracle shares nothing with the main algorithm except the
per-coordinate box bounds.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .oes import upper_bound
from .semigroup import DimensionMismatch, FactorizationVector, NumericalSemigroup


def sieve(gens: Sequence[int], limit: int) -> bytearray:
    """reach[v] == 1 iff v (0 <= v <= limit) is a non-negative combination of gens."""
    reach = bytearray(limit + 1)
    if limit < 0:
        return reach
    reach[0] = 1
    for g in sorted(set(gens)):
        for v in range(g, limit + 1):
            if reach[v - g] and not reach[v]:
                reach[v] = 1
    return reach


def gaps_direct(S: NumericalSemigroup) -> list[int]:
    gens = S.generators
    limit = gens[0] * gens[-1]
    reach = sieve(gens, limit)
    return [v for v in range(limit + 1) if not reach[v]]


def pareto_filter(points: Iterable[Sequence[int]]) -> list[FactorizationVector]:
    """Points not component-wise >= some other distinct point; first occurrence order kept."""
    pts: list[FactorizationVector] = []
    seen = set()
    dim = None
    for p in points:
        v = FactorizationVector(p)
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise DimensionMismatch(f"mixed dimensions {dim} and {len(v)}")
        if v not in seen:
            seen.add(v)
            pts.append(v)
    out = []
    for a in pts:
        if not any(b != a and all(bi <= ai for ai, bi in zip(a, b)) for b in pts):
            out.append(a)
    return out


def minimals_of_Z(S: NumericalSemigroup, j: int, paranoid: bool = False) -> list[FactorizationVector]:
    """Minimals Z(n_j + S): e_j followed by the minimal points with x_j = 0, in lexicographic order."""
    gens = S.generators
    p = len(gens)
    if not 0 <= j < p:
        raise IndexError(f"generator index {j} out of range for p={p}")
    box = [0 if i == j else upper_bound(S, i, j) + (2 if paranoid else 0) for i in range(p)]
    grids = np.indices([b + 1 for b in box], dtype=np.int64)
    w = np.tensordot(np.asarray(gens, dtype=np.int64), grids, axes=1) - gens[j]
    limit = int(w.max())
    reach = np.frombuffer(bytes(sieve(gens, max(limit, 0))), dtype=np.uint8).astype(bool)
    feasible = (w >= 0) & reach[np.clip(w, 0, None)]
    minimal = feasible.copy()
    for i in range(p):
        if box[i] == 0:
            continue
        # x - e_i feasible (x_i >= 1) disqualifies x; the feasible set is closed upwards
        below = np.zeros_like(feasible)
        src = [slice(None)] * p
        dst = [slice(None)] * p
        src[i] = slice(0, box[i])
        dst[i] = slice(1, box[i] + 1)
        below[tuple(dst)] = feasible[tuple(src)]
        minimal &= ~below
    candidates = [tuple(int(c) for c in v) for v in np.argwhere(minimal)]
    found = pareto_filter(candidates)
    unit = FactorizationVector.unit(p, j)
    return [unit] + found


def omega_bruteforce(S: NumericalSemigroup, j: int) -> int:
    return max(v.length for v in minimals_of_Z(S, j))
