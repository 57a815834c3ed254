"""Exact branch-and-bound for bounded integer linear programs.

Depth-first search over the integer box with activity-based bound
propagation, gcd pruning on equality rows and a one-row Lagrangian bound
on the objective.  No floating point is used anywhere.

Groups of zero-cost variables that enter one equality row with coefficients
of a single sign (and every other row proportionally) are aggregated into a
single value ``w = sum(a_t * y_t)`` whenever their upper bounds cannot bind.
The feasible values of ``w`` are then exactly the members of the monoid
generated by the ``a_t``, which a residue table answers in O(1).  This is
what makes the knapsack-shaped subproblems of the omega computation cheap.

Tie-breaking: among optimal solutions the witness is the lexicographically
smallest over the non-aggregated variables (in model order); each aggregated
group receives the lexicographically smallest representation of its value.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Sequence

from .semigroup import MonoidTable, monoid_table


class Sense(str, Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Relation(str, Enum):
    EQ = "="
    LE = "<="
    GE = ">="


class VarKind(str, Enum):
    INTEGER = "integer"
    BINARY = "binary"


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


class SolverError(Exception):
    pass


class UnboundedVariable(SolverError):
    pass


class ModelMalformed(SolverError):
    pass


class SolveTimeout(SolverError):
    pass


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: tuple[int, ...]
    relation: Relation
    rhs: int

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        object.__setattr__(self, "relation", Relation(self.relation))

    def satisfied_by(self, x: Sequence[int]) -> bool:
        lhs = sum(c * v for c, v in zip(self.coefficients, x))
        if self.relation is Relation.EQ:
            return lhs == self.rhs
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        return lhs >= self.rhs


@dataclass(frozen=True)
class IntegerProgram:
    num_vars: int
    objective: tuple[int, ...]
    sense: Sense = Sense.MAXIMIZE
    constraints: tuple[LinearConstraint, ...] = ()
    lower: tuple[int, ...] | None = None
    upper: tuple[int | None, ...] | None = None
    var_kinds: tuple[VarKind, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.num_vars
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        kinds = tuple(VarKind(k) for k in self.var_kinds) if self.var_kinds is not None else (VarKind.INTEGER,) * n
        object.__setattr__(self, "var_kinds", kinds)
        object.__setattr__(self, "lower", tuple(self.lower) if self.lower is not None else (0,) * n)
        object.__setattr__(self, "upper", tuple(self.upper) if self.upper is not None else (None,) * n)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))

    def bounds(self) -> tuple[list[int], list[int | None]]:
        lo = list(self.lower)
        hi = list(self.upper)
        for i, kind in enumerate(self.var_kinds):
            if kind is VarKind.BINARY:
                lo[i] = max(lo[i], 0)
                hi[i] = 1 if hi[i] is None else min(hi[i], 1)
        return lo, hi

    def is_feasible(self, x: Sequence[int]) -> bool:
        lo, hi = self.bounds()
        if len(x) != self.num_vars:
            return False
        for v, l, u in zip(x, lo, hi):
            if v < l or (u is not None and v > u):
                return False
        return all(c.satisfied_by(x) for c in self.constraints)

    def value_of(self, x: Sequence[int]) -> int:
        return sum(c * v for c, v in zip(self.objective, x))


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    value: int | None = None
    witness: tuple[int, ...] | None = None
    nodes: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _check_model(ip: IntegerProgram) -> None:
    n = ip.num_vars
    if n < 0:
        raise ModelMalformed("negative variable count")
    for name, seq in (("objective", ip.objective), ("lower", ip.lower),
                      ("upper", ip.upper), ("var_kinds", ip.var_kinds)):
        if len(seq) != n:
            raise ModelMalformed(f"{name} has length {len(seq)}, expected {n}")
    if ip.names is not None and len(ip.names) != n:
        raise ModelMalformed("names has wrong length")
    for k, con in enumerate(ip.constraints):
        if len(con.coefficients) != n:
            raise ModelMalformed(f"constraint {k} has {len(con.coefficients)} coefficients, expected {n}")
        if not all(isinstance(c, int) for c in con.coefficients) or not isinstance(con.rhs, int):
            raise ModelMalformed(f"constraint {k} has non-integer data")
    if not all(isinstance(c, int) for c in ip.objective):
        raise ModelMalformed("objective has non-integer coefficients")
    lo, hi = ip.bounds()
    for i, (l, u) in enumerate(zip(lo, hi)):
        if u is None:
            label = ip.names[i] if ip.names else f"#{i}"
            raise UnboundedVariable(f"variable {label} has no upper bound")
        if not isinstance(l, int) or not isinstance(u, int):
            raise ModelMalformed(f"variable #{i} has non-integer bounds")


@dataclass
class _Block:
    members: list[int]
    weights: list[int]
    table: MonoidTable
    core_index: int = -1


@dataclass
class _Core:
    """The program after aggregation, in the form the search works on."""

    nvars: int
    lo: list[int]
    hi: list[int]
    # rows as (vars, coefs, rhs, is_eq): sum(coefs * vars) <= rhs, or == rhs
    rows: list[tuple[list[int], list[int], int, bool]]
    var_rows: list[list[int]]
    obj: list[int]  # internal objective, always maximized
    member_of: dict[int, MonoidTable]
    orig_index: list[int]  # core var -> original var, -1 for aggregates
    blocks: list[_Block] = field(default_factory=list)


def _detect_blocks(ip: IntegerProgram, lo: list[int], hi: list[int]) -> list[_Block]:
    n = ip.num_vars
    used: set[int] = set()
    blocks = []
    for r, con in enumerate(ip.constraints):
        if con.relation is not Relation.EQ:
            continue
        best = None
        for sign in (-1, 1):
            T = [t for t in range(n)
                 if t not in used and con.coefficients[t] * sign > 0
                 and ip.objective[t] == 0 and lo[t] == 0]
            if len(T) < 2:
                continue
            a = [abs(con.coefficients[t]) for t in T]
            ok = True
            for r2, other in enumerate(ip.constraints):
                if r2 == r:
                    continue
                part = [other.coefficients[t] for t in T]
                if not any(part):
                    continue
                mu = Fraction(part[0], a[0])
                if any(Fraction(c, w) != mu for c, w in zip(part, a)):
                    ok = False
                    break
            if not ok:
                continue
            rest = [t for t in range(n) if t not in T and con.coefficients[t]]
            rmin = sum(min(con.coefficients[t] * lo[t], con.coefficients[t] * hi[t]) for t in rest)
            rmax = sum(max(con.coefficients[t] * lo[t], con.coefficients[t] * hi[t]) for t in rest)
            # sign * w = rhs - rest
            w_hi = max(sign * (con.rhs - rmin), sign * (con.rhs - rmax))
            w_hi = min(w_hi, sum(w * hi[t] for w, t in zip(a, T)))
            if any(hi[t] < w_hi // w for w, t in zip(a, T)):
                continue
            if best is None or len(T) > len(best[0]):
                best = (T, a)
        if best is not None:
            T, a = best
            used.update(T)
            blocks.append(_Block(T, a, monoid_table(tuple(a))))
    return blocks


def _build_core(ip: IntegerProgram, aggregate: bool) -> _Core:
    lo0, hi0 = ip.bounds()
    blocks = _detect_blocks(ip, lo0, hi0) if aggregate else []
    in_block = {t: b for b, blk in enumerate(blocks) for t in blk.members}
    orig_index = [i for i in range(ip.num_vars) if i not in in_block]
    pos = {i: k for k, i in enumerate(orig_index)}
    lo = [lo0[i] for i in orig_index]
    hi = [hi0[i] for i in orig_index]
    member_of = {}
    for b, blk in enumerate(blocks):
        blk.core_index = len(orig_index) + b
        orig_index.append(-1)
        lo.append(0)
        hi.append(sum(w * hi0[t] for w, t in zip(blk.weights, blk.members)))
        member_of[blk.core_index] = blk.table
    nv = len(orig_index)

    rows = []
    for con in ip.constraints:
        coefs: dict[int, Fraction] = {}
        for i, c in enumerate(con.coefficients):
            if c and i not in in_block:
                coefs[pos[i]] = Fraction(c)
        for blk in blocks:
            t0, a0 = blk.members[0], blk.weights[0]
            c = con.coefficients[t0]
            if c:
                coefs[blk.core_index] = Fraction(c, a0)
        scale = 1
        for c in coefs.values():
            scale = scale * c.denominator // gcd(scale, c.denominator)
        items = sorted((v, int(c * scale)) for v, c in coefs.items())
        vs = [v for v, _ in items]
        cs = [c for _, c in items]
        rhs = con.rhs * scale
        if con.relation is Relation.GE:
            cs = [-c for c in cs]
            rhs = -rhs
        rows.append((vs, cs, rhs, con.relation is Relation.EQ))
    var_rows: list[list[int]] = [[] for _ in range(nv)]
    for r, (vs, _, _, _) in enumerate(rows):
        for v in vs:
            var_rows[v].append(r)
    sgn = 1 if ip.sense is Sense.MAXIMIZE else -1
    obj = [sgn * ip.objective[i] if i >= 0 else 0 for i in orig_index]
    return _Core(nv, lo, hi, rows, var_rows, obj, member_of, orig_index, blocks)


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Search:
    def __init__(self, core: _Core, descending: bool, deadline: float | None):
        self.core = core
        self.descending = descending
        self.deadline = deadline
        self.nodes = 0
        self.best_value: int | None = None
        self.best: list[int] | None = None
        self.obj_vars = [v for v in range(core.nvars) if core.obj[v]]
        self.lp_rows = [r for r, (vs, _, _, eq) in enumerate(core.rows)
                        if eq and any(core.obj[v] for v in vs)]
        self.max_steps = 20 * len(core.rows) + 200

    # -- propagation -------------------------------------------------------
    def _tighten_member(self, v: int, lo: list[int], hi: list[int]) -> bool:
        table = self.core.member_of[v]
        d = table.divisor
        l, u = lo[v], hi[v]
        l = _ceil_div(l, d) * d
        u = _floor_div(u, d) * d
        steps = 0
        limit = 2 * table.modulus + 2
        while l <= u and l not in table and steps < limit:
            l += d
            steps += 1
        steps = 0
        while u >= l and u not in table and steps < limit:
            u -= d
            steps += 1
        if l > u:
            return False
        lo[v], hi[v] = l, u
        return True

    def propagate(self, lo: list[int], hi: list[int], dirty: Sequence[int]) -> bool:
        core = self.core
        rows = core.rows
        var_rows = core.var_rows
        member_of = core.member_of
        queue = list(dict.fromkeys(dirty))
        queued = set(queue)
        steps = 0
        while queue:
            r = queue.pop()
            queued.discard(r)
            steps += 1
            vs, cs, rhs, eq = rows[r]
            minact = 0
            maxact = 0
            for v, c in zip(vs, cs):
                if c > 0:
                    minact += c * lo[v]
                    maxact += c * hi[v]
                else:
                    minact += c * hi[v]
                    maxact += c * lo[v]
            if minact > rhs or (eq and maxact < rhs):
                return False
            if eq:
                g = 0
                fixed = 0
                for v, c in zip(vs, cs):
                    if lo[v] == hi[v]:
                        fixed += c * lo[v]
                    else:
                        g = gcd(g, c)
                rem = rhs - fixed
                if g == 0:
                    if rem != 0:
                        return False
                elif rem % g:
                    return False
            if steps > self.max_steps:
                continue
            slack = rhs - minact
            slack_eq = maxact - rhs if eq else None
            for v, c in zip(vs, cs):
                l, u = lo[v], hi[v]
                if l == u:
                    continue
                if c > 0:
                    nu = l + slack // c
                    nl = u - slack_eq // c if eq else l
                else:
                    nl = u - slack // (-c)
                    nu = l + slack_eq // (-c) if eq else u
                if nu < u or nl > l:
                    nl = max(nl, l)
                    nu = min(nu, u)
                    if nl > nu:
                        return False
                    lo[v], hi[v] = nl, nu
                    if v in member_of and not self._tighten_member(v, lo, hi):
                        return False
                    for r2 in var_rows[v]:
                        if r2 not in queued:
                            queued.add(r2)
                            queue.append(r2)
        return True

    # -- bounding ----------------------------------------------------------
    def bound(self, lo: list[int], hi: list[int]) -> int:
        obj = self.core.obj
        box = 0
        for v in self.obj_vars:
            c = obj[v]
            box += c * hi[v] if c > 0 else c * lo[v]
        best = box
        for r in self.lp_rows:
            b = self._lagrangian(r, lo, hi)
            if b < best:
                best = b
        return best

    def _lagrangian(self, r: int, lo: list[int], hi: list[int]) -> int:
        """floor of min over lambda of  lambda*rhs + sum max_v (c_v - lambda*a_v) v  (all vars in box).

        Objective variables outside the row contribute their box value.
        """
        obj = self.core.obj
        vs, cs, rhs, _ = self.core.rows[r]
        outside = 0
        in_row = set(vs)
        for v in self.obj_vars:
            if v not in in_row:
                c = obj[v]
                outside += c * hi[v] if c > 0 else c * lo[v]
        best_num, best_den = None, 1
        cands = {(0, 1)}
        for v, a in zip(vs, cs):
            c = obj[v]
            if a < 0:
                cands.add((-c, -a))
            else:
                cands.add((c, a))
        for p, q in cands:
            num = p * rhs
            for v, a in zip(vs, cs):
                k = q * obj[v] - p * a
                num += k * hi[v] if k > 0 else k * lo[v]
            if best_num is None or num * best_den < best_num * q:
                best_num, best_den = num, q
        return outside + best_num // best_den

    # -- search ------------------------------------------------------------
    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and (self.nodes & 255) == 0 and time.monotonic() > self.deadline:
            raise SolveTimeout("solver deadline exceeded")

    def optimize(self, lo: list[int], hi: list[int]) -> None:
        self._tick()
        if self.best_value is not None and self.bound(lo, hi) <= self.best_value:
            return
        var = -1
        for v in range(self.core.nvars):
            if lo[v] != hi[v]:
                var = v
                break
        if var < 0:
            if self._leaf_ok(lo):
                value = sum(c * lo[v] for v, c in enumerate(self.core.obj))
                if self.best_value is None or value > self.best_value:
                    self.best_value = value
                    self.best = list(lo)
            return
        values = range(hi[var], lo[var] - 1, -1) if self.descending else range(lo[var], hi[var] + 1)
        dirty = self.core.var_rows[var]
        for val in values:
            if var in self.core.member_of and val not in self.core.member_of[var]:
                continue
            clo = list(lo)
            chi = list(hi)
            clo[var] = chi[var] = val
            if self.propagate(clo, chi, dirty):
                self.optimize(clo, chi)
            if self.best_value is not None and self.bound(lo, hi) <= self.best_value:
                return

    def first_feasible(self, lo: list[int], hi: list[int]) -> list[int] | None:
        """Depth-first, ascending values: the lexicographically smallest feasible point."""
        self._tick()
        var = -1
        for v in range(self.core.nvars):
            if lo[v] != hi[v]:
                var = v
                break
        if var < 0:
            return list(lo) if self._leaf_ok(lo) else None
        dirty = self.core.var_rows[var]
        for val in range(lo[var], hi[var] + 1):
            if var in self.core.member_of and val not in self.core.member_of[var]:
                continue
            clo = list(lo)
            chi = list(hi)
            clo[var] = chi[var] = val
            if self.propagate(clo, chi, dirty):
                found = self.first_feasible(clo, chi)
                if found is not None:
                    return found
        return None

    def _leaf_ok(self, x: list[int]) -> bool:
        for vs, cs, rhs, eq in self.core.rows:
            act = sum(c * x[v] for v, c in zip(vs, cs))
            if act > rhs or (eq and act != rhs):
                return False
        return all(x[v] in t for v, t in self.core.member_of.items())


def _expand(core: _Core, x: list[int], n: int) -> tuple[int, ...]:
    out = [0] * n
    for k, i in enumerate(core.orig_index):
        if i >= 0:
            out[i] = x[k]
    for blk in core.blocks:
        rep = blk.table.lex_min_representation(x[blk.core_index])
        assert rep is not None
        for t, c in zip(blk.members, rep):
            out[t] = c
    return tuple(out)


def solve(ip: IntegerProgram, *, deadline: float | None = None, aggregate: bool = True) -> SolveOutcome:
    """Solve ``ip`` to proven optimality.

    ``deadline`` is a ``time.monotonic()`` instant after which
    :class:`SolveTimeout` is raised.  ``aggregate=False`` disables the
    knapsack aggregation (plain branching on every variable).
    """
    _check_model(ip)
    if deadline is not None and time.monotonic() > deadline:
        raise SolveTimeout("solver deadline exceeded")
    core = _build_core(ip, aggregate)
    descending = ip.sense is Sense.MAXIMIZE
    search = _Search(core, descending, deadline)
    lo, hi = list(core.lo), list(core.hi)
    for v in core.member_of:
        if not search._tighten_member(v, lo, hi):
            return SolveOutcome(Status.INFEASIBLE, nodes=search.nodes)
    if not search.propagate(lo, hi, range(len(core.rows))):
        return SolveOutcome(Status.INFEASIBLE, nodes=search.nodes)
    search.optimize(list(lo), list(hi))
    if search.best_value is None:
        return SolveOutcome(Status.INFEASIBLE, nodes=search.nodes)
    opt = search.best_value

    # second pass: lexicographically smallest point attaining the optimum
    obj_vars = [v for v in range(core.nvars) if core.obj[v]]
    if obj_vars:
        core.rows.append((obj_vars, [core.obj[v] for v in obj_vars], opt, True))
        for v in obj_vars:
            core.var_rows[v].append(len(core.rows) - 1)
    lex = _Search(core, False, deadline)
    lex.nodes = search.nodes
    llo, lhi = list(lo), list(hi)
    if not lex.propagate(llo, lhi, range(len(core.rows))):
        raise SolverError("optimal value could not be re-attained")
    point = lex.first_feasible(llo, lhi)
    if point is None:
        raise SolverError("optimal value could not be re-attained")
    witness = _expand(core, point, ip.num_vars)
    value = ip.value_of(witness)
    if not ip.is_feasible(witness) or value != (opt if descending else -opt):
        raise SolverError("witness failed exact re-check")
    return SolveOutcome(Status.OPTIMAL, value, witness, nodes=lex.nodes)
