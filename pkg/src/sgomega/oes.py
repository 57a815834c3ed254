"""omega(S, n_j) by optimizing the length over the efficient set.

The minimal elements of Z(n_j + S) are the non-dominated points of the
multiobjective program

    min (x_1, ..., x_p)
    s.t. sum n_i x_i - sum n_i y_i = n_j,  x_j = 0,  x <= box,  x, y >= 0

and omega(S, n_j) is the largest length among them.  Instead of listing the
whole efficient set, :func:`omega_j` alternates two single-objective
integer programs:

* an Ecker-Kouada step, which pushes a feasible point down to a minimal
  element below it (least length in its down-set);
* a Nemhauser-Wolsey step, which finds the longest feasible point that is
  not above any minimal element found so far (big-M disjunctions).

The loop stops once no such point is longer than the best minimal element
already found.  Generator indices are 0-based throughout.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

from . import ilp
from .ilp import IntegerProgram, LinearConstraint, Relation, Sense, SolveOutcome, VarKind
from .semigroup import (
    FactorizationVector,
    NumericalSemigroup,
    apery,
    evaluate,
    monoid_table,
)

BoundMode = Literal["tight", "loose"]


class OmegaError(Exception):
    pass


class InternalInfeasible(OmegaError):
    """The relaxation came out infeasible, which means the box is wrong."""


class InfeasibleInput(OmegaError):
    pass


@dataclass(frozen=True)
class OmegaOptions:
    bound_mode: BoundMode = "tight"
    apery_cuts: bool = False
    big_m_slack: int = 0
    timeout: float | None = None  # seconds per generator

    def __post_init__(self):
        if self.bound_mode not in ("tight", "loose"):
            raise ValueError(f"bound_mode must be 'tight' or 'loose', got {self.bound_mode!r}")
        if self.big_m_slack < 0:
            raise ValueError("big_m_slack must be non-negative")


def upper_bound(S: NumericalSemigroup, i: int, k: int) -> int:
    """Least x >= 1 with x * n_i in n_k + <n_t : t != i>.

    This is the smallest multiple of n_i lying in Z(n_k + S), hence every
    minimal element of Z(n_k + S) has x_i at most this value.
    """
    gens = S.generators
    p = len(gens)
    if not (0 <= i < p and 0 <= k < p) or i == k:
        raise IndexError(f"invalid generator pair ({i}, {k}) for p={p}")
    others = monoid_table(gens[:i] + gens[i + 1:])
    ni, nk = gens[i], gens[k]
    start = max(1, -(-nk // ni))
    for x in range(start, nk + 1):
        if x * ni - nk in others:
            return x
    raise AssertionError("unreachable: x = n_k always works")


def upper_bound_program(S: NumericalSemigroup, i: int, k: int) -> IntegerProgram:
    """The bound as an integer program: min x_i s.t. n_i x_i - sum_{t != i} n_t y_t = n_k."""
    gens = S.generators
    p = len(gens)
    ni, nk = gens[i], gens[k]
    coefs = [0] * (p + 1)
    coefs[0] = ni
    upper: list[int | None] = [nk]
    for t, n in enumerate(gens):
        coefs[t + 1] = -n if t != i else 0
        upper.append((ni * nk) // n if t != i else 0)
    return IntegerProgram(
        num_vars=p + 1,
        objective=(1,) + (0,) * p,
        sense=Sense.MINIMIZE,
        constraints=(
            LinearConstraint(tuple(coefs), Relation.EQ, nk),
            LinearConstraint((1,) + (0,) * p, Relation.GE, 1),
        ),
        upper=tuple(upper),
        names=("x",) + tuple(f"y{t + 1}" for t in range(p)),
    )


def generator_bounds(S: NumericalSemigroup) -> list[int]:
    """ub_i = max over k != i of upper_bound(S, i, k)."""
    p = S.embedding_dimension
    return [max(upper_bound(S, i, k) for k in range(p) if k != i) for i in range(p)]


@dataclass(frozen=True)
class OmegaProblem:
    semigroup: NumericalSemigroup
    j: int
    box: tuple[int, ...]
    big_m: tuple[int, ...]
    y_bounds: tuple[int, ...]
    bound_mode: BoundMode
    apery_cuts: bool
    cut_range: tuple[int, int] | None = None

    @property
    def p(self) -> int:
        return self.semigroup.embedding_dimension

    @property
    def target(self) -> int:
        return self.semigroup.generators[self.j]

    def names(self, extra: Sequence[str] = ()) -> tuple[str, ...]:
        p = self.p
        return tuple(f"x{i + 1}" for i in range(p)) + tuple(f"y{i + 1}" for i in range(p)) + tuple(extra)

    def base_rows(self, nvars: int) -> list[LinearConstraint]:
        """The factorization equation (and the Apéry cuts) over the first 2p variables."""
        p = self.p
        gens = self.semigroup.generators
        pad = (0,) * (nvars - 2 * p)
        rows = [LinearConstraint(tuple(gens) + tuple(-n for n in gens) + pad, Relation.EQ, self.target)]
        if self.cut_range is not None:
            low, high = self.cut_range
            ycoefs = (0,) * p + tuple(gens) + pad
            rows.append(LinearConstraint(ycoefs, Relation.LE, high))
            rows.append(LinearConstraint(ycoefs, Relation.GE, low))
        return rows

    def base_upper(self) -> list[int]:
        return list(self.box) + list(self.y_bounds)

    def is_feasible(self, x: Sequence[int]) -> bool:
        """Whether x (p coordinates) lies in the region of the multiobjective program."""
        if len(x) != self.p or any(c < 0 for c in x):
            return False
        if x[self.j] != 0 or any(c > b for c, b in zip(x, self.box)):
            return False
        w = evaluate(self.semigroup, x) - self.target
        if self.cut_range is not None and not (self.cut_range[0] <= w <= self.cut_range[1]):
            return False
        return w >= 0 and w in monoid_table(self.semigroup.generators)


def build_problem(S: NumericalSemigroup, j: int, bound_mode: BoundMode = "tight",
                  apery_cuts: bool = False, big_m_slack: int = 0) -> OmegaProblem:
    p = S.embedding_dimension
    if not 0 <= j < p:
        raise IndexError(f"generator index {j} out of range for p={p}")
    gens = S.generators
    if bound_mode == "tight":
        box = [0 if i == j else upper_bound(S, i, j) for i in range(p)]
    elif bound_mode == "loose":
        cap = max(generator_bounds(S))
        box = [0 if i == j else cap for i in range(p)]
    else:
        raise ValueError(f"unknown bound mode {bound_mode!r}")
    big_m = [b + big_m_slack for b in box]
    top = sum(b * n for b, n in zip(box, gens)) - gens[j]
    y_bounds = [top // n for n in gens]
    cut_range = None
    if apery_cuts:
        high = max(apery(S, n).max for n in gens)
        cut_range = (min(gens), high)
    return OmegaProblem(S, j, tuple(box), tuple(big_m), tuple(y_bounds), bound_mode, apery_cuts, cut_range)


def problem_from_options(S: NumericalSemigroup, j: int, options: OmegaOptions) -> OmegaProblem:
    return build_problem(S, j, options.bound_mode, options.apery_cuts, options.big_m_slack)


def relaxation_program(prob: OmegaProblem) -> IntegerProgram:
    p = prob.p
    n = 2 * p
    return IntegerProgram(
        num_vars=n,
        objective=(1,) * p + (0,) * p,
        sense=Sense.MAXIMIZE,
        constraints=tuple(prob.base_rows(n)),
        upper=tuple(prob.base_upper()),
        names=prob.names(),
    )


def ecker_kouada_program(prob: OmegaProblem, x_star: Sequence[int]) -> IntegerProgram:
    """Least length in the down-set of x_star: x + s = x_star, s >= 0."""
    p = prob.p
    n = 3 * p
    rows = prob.base_rows(n)
    for i in range(p):
        coefs = [0] * n
        coefs[i] = 1
        coefs[2 * p + i] = 1
        rows.append(LinearConstraint(tuple(coefs), Relation.EQ, int(x_star[i])))
    upper = prob.base_upper() + [int(c) for c in x_star]
    return IntegerProgram(
        num_vars=n,
        objective=(1,) * p + (0,) * (2 * p),
        sense=Sense.MINIMIZE,
        constraints=tuple(rows),
        upper=tuple(upper),
        names=prob.names([f"s{i + 1}" for i in range(p)]),
    )


def nemhauser_wolsey_program(prob: OmegaProblem, excluded: Sequence[Sequence[int]]) -> IntegerProgram:
    """Longest feasible x that is not component-wise >= any excluded point.

    For excluded point k, binaries z^k select a coordinate where x stays
    strictly below it:  x_i <= z_i (xbar_i - 1) + M_i (1 - z_i),  sum_i z_i >= 1.
    """
    p = prob.p
    n = 2 * p + p * len(excluded)
    rows = prob.base_rows(n)
    for k, xbar in enumerate(excluded):
        base = 2 * p + k * p
        for i in range(p):
            coefs = [0] * n
            coefs[i] = 1
            coefs[base + i] = prob.big_m[i] - (int(xbar[i]) - 1)
            rows.append(LinearConstraint(tuple(coefs), Relation.LE, prob.big_m[i]))
        cover = [0] * n
        for i in range(p):
            cover[base + i] = 1
        rows.append(LinearConstraint(tuple(cover), Relation.GE, 1))
    upper = prob.base_upper() + [1] * (p * len(excluded))
    kinds = [VarKind.INTEGER] * (2 * p) + [VarKind.BINARY] * (p * len(excluded))
    znames = [f"z{k + 1}_{i + 1}" for k in range(len(excluded)) for i in range(p)]
    return IntegerProgram(
        num_vars=n,
        objective=(1,) * p + (0,) * (n - p),
        sense=Sense.MAXIMIZE,
        constraints=tuple(rows),
        upper=tuple(upper),
        var_kinds=tuple(kinds),
        names=prob.names(znames),
    )


def x_part(prob: OmegaProblem, outcome: SolveOutcome) -> FactorizationVector | None:
    if not outcome.optimal:
        return None
    return FactorizationVector(outcome.witness[: prob.p])


def relaxation(prob: OmegaProblem, deadline: float | None = None) -> SolveOutcome:
    out = ilp.solve(relaxation_program(prob), deadline=deadline)
    if not out.optimal:
        raise InternalInfeasible(f"relaxation infeasible for {prob.semigroup}, j={prob.j}: box {prob.box}")
    return out


def ecker_kouada(prob: OmegaProblem, x_star: Sequence[int], deadline: float | None = None) -> FactorizationVector:
    """A minimal element below x_star, of least length among the points below it."""
    if not prob.is_feasible(x_star):
        raise InfeasibleInput(f"{tuple(x_star)} is not feasible for j={prob.j}")
    out = ilp.solve(ecker_kouada_program(prob, x_star), deadline=deadline)
    if not out.optimal:
        raise InternalInfeasible("down-set of a feasible point came out empty")
    return x_part(prob, out)


def nemhauser_wolsey(prob: OmegaProblem, excluded: Sequence[Sequence[int]],
                     deadline: float | None = None) -> SolveOutcome:
    if not excluded:
        raise ValueError("nemhauser_wolsey needs at least one excluded point")
    return ilp.solve(nemhauser_wolsey_program(prob, excluded), deadline=deadline)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    point: FactorizationVector
    ek_minimal: FactorizationVector
    nw_point: FactorizationVector | None
    nw_value: int | None
    lower: int
    upper: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "point": list(self.point),
            "ek_minimal": list(self.ek_minimal),
            "nw_point": None if self.nw_point is None else list(self.nw_point),
            "nw_value": self.nw_value,
            "lower": self.lower,
            "upper": self.upper,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IterationRecord":
        nw = d["nw_point"]
        return cls(d["index"], FactorizationVector(d["point"]), FactorizationVector(d["ek_minimal"]),
                   None if nw is None else FactorizationVector(nw), d["nw_value"], d["lower"], d["upper"])


@dataclass(frozen=True)
class OmegaResult:
    generator: int
    j: int
    omega: int
    witness: FactorizationVector
    minimals_found: tuple[FactorizationVector, ...]
    iterations: int
    relaxation_solves: int
    ek_solves: int
    nw_solves: int
    trace: tuple[IterationRecord, ...] = field(repr=False)
    millis: int = 0


def omega_j(S: NumericalSemigroup, j: int, options: OmegaOptions | None = None) -> OmegaResult:
    options = options or OmegaOptions()
    started = time.perf_counter()
    deadline = None if options.timeout is None else time.monotonic() + options.timeout
    prob = problem_from_options(S, j, options)

    rel = relaxation(prob, deadline)
    point = x_part(prob, rel)
    lower = 0
    upper = rel.value
    found: list[FactorizationVector] = []
    trace: list[IterationRecord] = []
    best: FactorizationVector | None = None
    nw_solves = 0
    while True:
        minimal = ecker_kouada(prob, point, deadline)
        if minimal in found:
            raise OmegaError(f"minimal element {minimal} produced twice")
        found.append(minimal)
        if minimal.length > lower:
            lower = minimal.length
            best = minimal
        nw = nemhauser_wolsey(prob, found, deadline)
        nw_solves += 1
        nw_point = x_part(prob, nw)
        if nw.optimal and nw.value < upper:
            upper = nw.value
        trace.append(IterationRecord(len(trace) + 1, point, minimal, nw_point,
                                     nw.value if nw.optimal else None, lower, upper))
        if not nw.optimal or nw.value <= lower:
            break
        point = nw_point

    assert best is not None
    if lower < 2:
        # no generator of a numerical semigroup is prime
        raise OmegaError(f"omega({S}, {S.generators[j]}) = {lower} < 2")
    return OmegaResult(
        generator=S.generators[j],
        j=j,
        omega=lower,
        witness=best,
        minimals_found=tuple(found),
        iterations=len(trace),
        relaxation_solves=1,
        ek_solves=len(found),
        nw_solves=nw_solves,
        trace=tuple(trace),
        millis=int((time.perf_counter() - started) * 1000),
    )


def _omega_j_star(args):
    return omega_j(*args)


def omega(S: NumericalSemigroup, options: OmegaOptions | None = None,
          jobs: int = 1) -> tuple[int, list[OmegaResult]]:
    """omega(S) as the max over generators, with the per-generator results in generator order."""
    options = options or OmegaOptions()
    tasks = [(S, j, options) for j in range(S.embedding_dimension)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_omega_j_star, tasks))
    else:
        results = [omega_j(*t) for t in tasks]
    return max(r.omega for r in results), results


def result_to_dict(r: OmegaResult, with_trace: bool = False) -> dict:
    d = {
        "n": r.generator,
        "omega": r.omega,
        "witness": list(r.witness),
        "iterations": r.iterations,
        "ek_solves": r.ek_solves,
        "nw_solves": r.nw_solves,
        "millis": r.millis,
    }
    if with_trace:
        d["trace"] = [t.to_dict() for t in r.trace]
    return d


__all__ = [
    "OmegaOptions", "OmegaProblem", "OmegaResult", "IterationRecord",
    "upper_bound", "upper_bound_program", "generator_bounds", "build_problem",
    "relaxation", "ecker_kouada", "nemhauser_wolsey", "omega_j", "omega",
    "relaxation_program", "ecker_kouada_program", "nemhauser_wolsey_program",
    "InternalInfeasible", "InfeasibleInput", "OmegaError", "result_to_dict",
]
