import sys
import random
from math import gcd
from functools import reduce

import pytest

from sgomega.semigroup import SemigroupError, new_semigroup

TABLE1_P5 = {
    "S5(1)": (20, 354, 402, 417, 429),
    "S5(2)": (7, 292, 359, 645, 755),
    "S5(3)": (5, 86, 99, 148, 152),
    "S5(4)": (41, 65, 155, 317, 377),
    "S5(5)": (28, 55, 125, 233, 590),
}


def random_semigroups(count, seed, p_choices=(2, 3, 4), max_gen=50):
    """Deterministic stream of valid semigroups with generators in [2, max_gen]."""
    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < count:
        p = rng.choice(p_choices)
        gens = sorted(rng.sample(range(2, max_gen + 1), p))
        if reduce(gcd, gens) != 1 or tuple(gens) in seen:
            continue
        try:
            S = new_semigroup(gens)
        except SemigroupError:
            continue
        seen.add(tuple(gens))
        out.append(S)
    return out


@pytest.fixture
def s61314():
    return new_semigroup([6, 13, 14])


def random_program(rng, max_vars=6, max_bound=8, max_rows=4, coef_range=5):
    """A small bounded integer program with random data, for grid comparisons."""
    from sgomega.ilp import IntegerProgram, LinearConstraint, Relation, Sense

    n = rng.randint(1, max_vars)
    upper = [rng.randint(0, max_bound) for _ in range(n)]
    lower = [rng.randint(0, u) if rng.random() < 0.2 else 0 for u in upper]
    objective = [rng.randint(-coef_range, coef_range) for _ in range(n)]
    rows = []
    for _ in range(rng.randint(0, max_rows)):
        coefs = [rng.randint(-coef_range, coef_range) for _ in range(n)]
        rel = rng.choice([Relation.EQ, Relation.LE, Relation.GE])
        mid = sum(c * (lo + u) // 2 for c, lo, u in zip(coefs, lower, upper))
        rows.append(LinearConstraint(tuple(coefs), rel, mid + rng.randint(-6, 6)))
    sense = rng.choice([Sense.MAXIMIZE, Sense.MINIMIZE])
    return IntegerProgram(n, tuple(objective), sense, tuple(rows), tuple(lower), tuple(upper))


def grid_optimum(ip):
    """(value, lexicographically smallest optimal point) by full enumeration, or None."""
    import numpy as np

    lo, hi = ip.bounds()
    axes = [np.arange(l, u + 1, dtype=np.int64) for l, u in zip(lo, hi)]
    if any(len(a) == 0 for a in axes):
        return None
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, ip.num_vars)
    ok = np.ones(len(grid), dtype=bool)
    for con in ip.constraints:
        lhs = grid @ np.asarray(con.coefficients, dtype=np.int64)
        if con.relation.value == "=":
            ok &= lhs == con.rhs
        elif con.relation.value == "<=":
            ok &= lhs <= con.rhs
        else:
            ok &= lhs >= con.rhs
    if not ok.any():
        return None
    vals = grid[ok] @ np.asarray(ip.objective, dtype=np.int64)
    best = vals.max() if ip.sense.value == "maximize" else vals.min()
    # meshgrid in "ij" order enumerates points lexicographically
    first = grid[ok][np.flatnonzero(vals == best)[0]]
    return int(best), tuple(int(v) for v in first)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
