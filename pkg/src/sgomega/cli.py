"""Command line front end.

Exit codes: 0 ok, 1 internal error, 2 bad input, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import oes, oracle
from .ilp import SolveTimeout
from .semigroup import (
    NumericalSemigroup,
    SemigroupError,
    apery,
    frobenius,
    genus,
    multiplicity,
    new_semigroup,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_MISMATCH = 0, 1, 2, 3


class InputError(Exception):
    pass


def parse_gens(text: str) -> list[int]:
    parts = [t.strip() for t in text.replace(";", ",").split(",")]
    try:
        return [int(t) for t in parts if t]
    except ValueError:
        raise InputError(f"generators must be comma-separated integers, got {text!r}") from None


@dataclass
class Instance:
    label: str
    line: int
    semigroup: NumericalSemigroup


def read_instances(path: Path) -> list[Instance]:
    """One semigroup per line; '#' starts a comment, whose text (if any) labels the line."""
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    out = []
    for no, raw in enumerate(lines, start=1):
        body, _, comment = raw.partition("#")
        if not body.strip():
            continue
        try:
            S = new_semigroup(parse_gens(body))
        except (InputError, SemigroupError) as e:
            raise InputError(f"{path}:{no}: {e}") from None
        out.append(Instance(comment.strip() or f"line {no}", no, S))
    if not out:
        raise InputError(f"{path}: no semigroups found")
    return out


def _options(args) -> oes.OmegaOptions:
    return oes.OmegaOptions(
        bound_mode=args.bound_mode,
        apery_cuts=args.apery_cuts,
        big_m_slack=getattr(args, "big_m_slack", 0),
        timeout=getattr(args, "timeout", None),
    )


def _options_dict(opts: oes.OmegaOptions) -> dict:
    return {"bound_mode": opts.bound_mode, "apery_cuts": opts.apery_cuts, "big_m_slack": opts.big_m_slack}


def _selected_indices(S: NumericalSemigroup, generator: int | None) -> list[int]:
    if generator is None:
        return list(range(S.embedding_dimension))
    if generator not in S.generators:
        raise InputError(f"{generator} is not a minimal generator of {S}")
    return [S.generators.index(generator)]


def _run_omega(S, indices, opts, jobs) -> list[oes.OmegaResult]:
    if len(indices) == S.embedding_dimension:
        return oes.omega(S, opts, jobs=jobs)[1]
    return [oes.omega_j(S, j, opts) for j in indices]


def _fmt(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def cmd_omega(args, out) -> int:
    S = new_semigroup(parse_gens(args.gens))
    opts = _options(args)
    indices = _selected_indices(S, args.generator)
    results = _run_omega(S, indices, opts, args.jobs)
    best = max(r.omega for r in results)
    if args.format == "json":
        report = {
            "generators": list(S.generators),
            "omega": best,
            "per_generator": [oes.result_to_dict(r, with_trace=args.trace) for r in results],
            "options": _options_dict(opts),
        }
        out.write(json.dumps(report) + "\n")
        return EXIT_OK
    label = "omega(S)" if len(indices) == S.embedding_dimension else f"omega(S, {S.generators[indices[0]]})"
    out.write(f"S = {S}\n{label} = {best}\n")
    out.write(f"{'n_j':>6} {'omega':>6}  {'witness':<24} {'it':>4} {'ek':>4} {'nw':>4} {'ms':>7}\n")
    for r in results:
        out.write(f"{r.generator:>6} {r.omega:>6}  {_fmt(r.witness):<24} {r.iterations:>4} "
                  f"{r.ek_solves:>4} {r.nw_solves:>4} {r.millis:>7}\n")
        if args.trace:
            for t in r.trace:
                nw = "infeasible" if t.nw_point is None else f"{_fmt(t.nw_point)} |{t.nw_value}|"
                out.write(f"    it {t.index}: x={_fmt(t.point)} ek={_fmt(t.ek_minimal)} nw={nw} "
                          f"u={t.lower} v={t.upper}\n")
    return EXIT_OK


def cmd_invariants(args, out) -> int:
    S = new_semigroup(parse_gens(args.gens))
    report = {
        "generators": list(S.generators),
        "embedding_dimension": S.embedding_dimension,
        "multiplicity": multiplicity(S),
        "frobenius": frobenius(S),
        "genus": genus(S),
    }
    if args.apery is not None:
        try:
            table = apery(S, args.apery)
        except SemigroupError as e:
            raise InputError(str(e)) from None
        report["apery"] = {"modulus": table.modulus, "entries": list(table.entries)}
    if args.format == "json":
        out.write(json.dumps(report) + "\n")
        return EXIT_OK
    out.write(f"S = {S}\n")
    out.write(f"embedding dimension p = {report['embedding_dimension']}\n")
    out.write(f"multiplicity m(S) = {report['multiplicity']}\n")
    out.write(f"Frobenius F(S) = {report['frobenius']}\n")
    out.write(f"genus g(S) = {report['genus']}\n")
    if "apery" in report:
        out.write(f"Ap(S, {args.apery}) = {report['apery']['entries']}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    S = new_semigroup(parse_gens(args.gens))
    opts = _options(args)
    indices = _selected_indices(S, args.generator)
    results = _run_omega(S, indices, opts, args.jobs)
    rows = []
    ok = True
    for r in results:
        mins = oracle.minimals_of_Z(S, r.j)
        truth = max(v.length for v in mins)
        found_ok = set(r.minimals_found) <= set(mins)
        match = truth == r.omega and found_ok
        ok &= match
        rows.append({"n": r.generator, "omega": r.omega, "omega_oracle": truth, "n_min": len(mins),
                     "ek_solves": r.ek_solves, "match": match})
    if args.format == "json":
        out.write(json.dumps({"generators": list(S.generators), "match": ok, "per_generator": rows}) + "\n")
    else:
        out.write(f"S = {S}\n")
        out.write(f"{'n_j':>6} {'omega':>6} {'oracle':>6} {'#min':>6} {'ek':>4}  result\n")
        for row in rows:
            out.write(f"{row['n']:>6} {row['omega']:>6} {row['omega_oracle']:>6} {row['n_min']:>6} "
                      f"{row['ek_solves']:>4}  {'MATCH' if row['match'] else 'MISMATCH'}\n")
        out.write("MATCH\n" if ok else "MISMATCH\n")
    return EXIT_OK if ok else EXIT_MISMATCH


BENCH_FIELDS = ["semigroup", "generators", "n", "omega", "witness", "iterations",
                "ek_solves", "nw_solves", "millis", "n_min", "status"]


def bench_rows(instances: Sequence[Instance], opts: oes.OmegaOptions, with_oracle: bool,
               oracle_limit: int = 2_000_000) -> list[dict]:
    rows = []
    for inst in instances:
        S = inst.semigroup
        gens = " ".join(map(str, S.generators))
        best: int | None = 0
        total_ms = 0
        for j, n in enumerate(S.generators):
            row = {"semigroup": inst.label, "generators": gens, "n": n, "omega": None, "witness": None,
                   "iterations": None, "ek_solves": None, "nw_solves": None, "millis": None,
                   "n_min": None, "status": "ok"}
            started = time.perf_counter()
            try:
                r = oes.omega_j(S, j, opts)
            except SolveTimeout:
                row["status"] = "timeout"
                row["millis"] = int((time.perf_counter() - started) * 1000)
                best = None
            else:
                row.update(omega=r.omega, witness=list(r.witness), iterations=r.iterations,
                           ek_solves=r.ek_solves, nw_solves=r.nw_solves, millis=r.millis)
                if best is not None:
                    best = max(best, r.omega)
            total_ms += row["millis"]
            if with_oracle:
                size = 1
                for i in range(S.embedding_dimension):
                    if i != j:
                        size *= oes.upper_bound(S, i, j) + 1
                if size <= oracle_limit:
                    row["n_min"] = len(oracle.minimals_of_Z(S, j))
            rows.append(row)
        rows.append({"semigroup": inst.label, "generators": gens, "n": "ALL", "omega": best,
                     "witness": None, "iterations": None, "ek_solves": None, "nw_solves": None,
                     "millis": total_ms, "n_min": None, "status": "ok" if best is not None else "timeout"})
    return rows


def cmd_bench(args, out) -> int:
    instances = read_instances(Path(args.input))
    opts = _options(args)
    rows = bench_rows(instances, opts, args.oracle)
    if args.format == "json":
        text = json.dumps({"options": _options_dict(opts), "rows": rows}) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            flat = dict(row)
            if flat["witness"] is not None:
                flat["witness"] = " ".join(map(str, flat["witness"]))
            writer.writerow({k: "" if v is None else v for k, v in flat.items()})
        text = buf.getvalue()
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sgomega", description="omega invariant of numerical semigroups")
    sub = parser.add_subparsers(dest="command", required=True)

    def algo_flags(p):
        p.add_argument("--bound-mode", choices=["tight", "loose"], default="tight")
        p.add_argument("--apery-cuts", action="store_true", help="add the Apéry-set cuts on sum n_i y_i")
        p.add_argument("--timeout", type=float, default=None, help="seconds per generator")

    p = sub.add_parser("omega", help="compute omega(S) and omega(S, n_j)")
    p.add_argument("--gens", required=True, help="comma-separated minimal generators")
    p.add_argument("--generator", type=int, default=None, help="only this generator n_j")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    algo_flags(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("invariants", help="multiplicity, Frobenius number, genus, Apéry sets")
    p.add_argument("--gens", required=True)
    p.add_argument("--apery", type=int, default=None, metavar="N", help="also print Ap(S, N)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("verify", help="compare the algorithm against brute-force enumeration")
    p.add_argument("--gens", required=True)
    p.add_argument("--generator", type=int, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--jobs", type=int, default=1)
    algo_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a file of semigroups, one per line")
    p.add_argument("input")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--oracle", action="store_true", help="add #min from enumeration where tractable")
    p.add_argument("--output", default=None)
    algo_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except (InputError, SemigroupError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    except SolveTimeout as e:
        err.write(f"error: {e}\n")
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
