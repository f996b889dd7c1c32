"""Command-line front end.

Every command builds one record (a nested dict) and renders it either as
text or, with ``--structured``, as a single JSON document.  Exit status is
0 when every check in the record passed, 1 when one failed and 2 for
invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .families import (
    FamilySpec,
    closed_form_psi,
    crosscheck_family,
    family_matrix,
    verify_block_lemmas,
    verify_psi_identities,
    verify_theorem31,
)
from .levelposet import (
    EmptyIntervalError,
    LevelPoset,
    ab_index,
    cd_index,
    eulerian_check_prop21,
    eulerian_rank_check,
    flag_vector,
    psi_automaton,
    psi_truncated,
)
from .matlin import parse_matrix
from .ncalg import NotInCdSpanError, ab_to_cd
from .walkshell import prop63_oracle, reduced_powers, shellability_certificate

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


def _load_input(args) -> tuple[np.ndarray, dict, FamilySpec | None]:
    if args.family is not None:
        if args.r is None:
            raise InputError("invalid_spec", "--family needs --r")
        try:
            spec = FamilySpec(args.family, args.r)
        except ValueError as exc:
            raise InputError("invalid_spec", str(exc)) from None
        return family_matrix(spec.family, spec.r), {"family": spec.family, "r": spec.r}, spec
    if args.r is not None:
        raise InputError("invalid_spec", "--r only applies with --family")
    if args.matrix is None:
        raise InputError("missing_input", "give a matrix file or --family M|N --r k")
    try:
        if args.matrix == "-":
            text = sys.stdin.read()
        else:
            with open(args.matrix) as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError("unreadable", str(exc)) from None
    try:
        m = parse_matrix(text)
    except ValueError as exc:
        raise InputError("parse", str(exc)) from None
    if m.shape[0] != m.shape[1]:
        raise InputError("not_square", f"matrix is {m.shape[0]}x{m.shape[1]}, expected square")
    if not np.isin(m, (0, 1)).all():
        raise InputError("not_binary", "matrix entries must be 0 or 1")
    return m, {"matrix": args.matrix}, None


# commands: each returns (record, passed)

def cmd_analyze(args) -> tuple[dict, bool]:
    m, source, _ = _load_input(args)
    poset = LevelPoset(m)
    rec = {"command": "analyze", "input": source, "n": poset.n,
           "primitive": poset.is_primitive, "exponent": poset.exponent}
    passed = True
    if poset.is_primitive:
        cert = eulerian_check_prop21(poset)
        rec["certificate"] = cert.to_dict()
        passed = cert.certified
    else:
        rec["certificate"] = None
        rec["powers_examined"] = len(poset._powers)
    rank_checks = [eulerian_rank_check(poset, p) for p in range(2, args.pmax + 1, 2)]
    rec["rank_checks"] = [c.to_dict() for c in rank_checks]
    passed = passed and all(c.passed for c in rank_checks)
    rec["passed"] = passed
    return rec, passed


def cmd_cd_index(args) -> tuple[dict, bool]:
    m, source, _ = _load_input(args)
    poset = LevelPoset(m)
    for name in ("i", "j"):
        v = getattr(args, name)
        if not 0 <= v < poset.n:
            raise InputError("invalid_index", f"--{name} {v} outside 0..{poset.n - 1}")
    if args.p < 0:
        raise InputError("invalid_index", "--p must be nonnegative")
    try:
        iv = poset.interval(args.i, args.j, args.p)
    except EmptyIntervalError as exc:
        raise InputError("empty_interval", str(exc)) from None
    ab = ab_index(iv)
    rec = {"command": "cd-index", "input": source, "interval": [args.i, args.j, args.p],
           "ab_index": str(ab)}
    try:
        rec["cd_index"] = str(cd_index(iv))
        passed = True
    except NotInCdSpanError as exc:
        rec["cd_index"] = None
        rec["not_in_cd_span"] = {"degree": exc.degree, "part": str(exc.poly)}
        passed = False
    if args.flags:
        rec["flag_f"] = [[list(S), f] for S, f in sorted(flag_vector(iv).items(), key=lambda kv: (len(kv[0]), kv[0]))]
    rec["passed"] = passed
    return rec, passed


def cmd_series(args) -> tuple[dict, bool]:
    m, source, spec = _load_input(args)
    if args.degree < 0:
        raise InputError("invalid_degree", "--degree must be nonnegative")
    if args.method == "closed-form":
        if spec is None:
            raise InputError("invalid_spec", "the closed form needs --family")
        psi = closed_form_psi(spec, args.degree)
    elif args.method == "chains":
        psi = psi_truncated(m, args.degree)
    else:
        psi = psi_automaton(m, args.degree)
    rec = {"command": "series", "input": source, "method": args.method, "degree": args.degree}
    passed = True
    entries = []
    for (i, j), x in psi.entries():
        if x.is_zero():
            continue
        item = {"i": i, "j": j}
        if psi.alphabet == "ab" and args.cd:
            try:
                parts = [ab_to_cd(x.homogeneous_part(k)) for k in range(args.degree + 1)]
                item["series"] = str(sum(parts[1:], parts[0]))
            except NotInCdSpanError as exc:
                item["series"] = None
                item["not_in_cd_span"] = {"degree": exc.degree, "part": str(exc.poly)}
                passed = False
        else:
            item["series"] = str(x)
        entries.append(item)
    rec["alphabet"] = "cd" if (args.cd or psi.alphabet == "cd") else "ab"
    rec["entries"] = entries
    rec["passed"] = passed
    return rec, passed


def cmd_family_verify(args) -> tuple[dict, bool]:
    if args.family is None:
        raise InputError("invalid_spec", "family-verify needs --family M|N --r k")
    m, source, spec = _load_input(args)
    if args.degree < 0:
        raise InputError("invalid_degree", "--degree must be nonnegative")
    lemmas = verify_block_lemmas(spec)
    identities = verify_psi_identities(spec, args.degree)
    thm = verify_theorem31(m, closed_form_psi(spec, args.degree), args.degree)
    cross = crosscheck_family(spec, args.degree)
    passed = all(c.passed for c in lemmas + identities) and thm.passed and cross.passed
    rec = {
        "command": "family-verify",
        "input": source,
        "degree": args.degree,
        "lemmas": [c.to_dict() for c in lemmas],
        "series_identities": [c.to_dict() for c in identities],
        "unique_solution": thm.to_dict(),
        "crosscheck": cross.to_dict(),
        "passed": passed,
    }
    return rec, passed


def cmd_shelling(args) -> tuple[dict, bool]:
    m, source, spec = _load_input(args)
    if args.pmax < 1:
        raise InputError("invalid_degree", "--pmax must be positive")
    if args.oracle and (spec is None or spec.family != "M"):
        raise InputError("invalid_spec", "--oracle applies to --family M only")
    table = reduced_powers(m, args.pmax)
    cert = shellability_certificate(m, args.pmax, table)
    rec = {"command": "shelling", "input": source, "certificate": cert.to_dict()}
    passed = cert.certified
    if cert.certified:
        rec["consequence"] = (f"natural vertex order is a shelling order for every interval "
                              f"of length <= {args.pmax}")
    if args.oracle:
        mismatches = []
        for p in range(2, args.pmax + 1):
            for i in range(spec.n):
                for j in range(spec.n):
                    want = prop63_oracle(spec.r, p, i, j)
                    got = table.entry(i, j, p) if table.count(i, j, p) == 1 else None
                    ok = (table.count(i, j, p) == 0) if want is None else (got == (want,))
                    if not ok:
                        mismatches.append({"entry": [i, j, p], "dp": [str(w) for w in table.entry(i, j, p)],
                                           "closed_form": str(want) if want else None})
        rec["oracle"] = {"passed": not mismatches, "mismatches": mismatches}
        passed = passed and not mismatches
    rec["passed"] = passed
    return rec, passed


# text rendering

def _mark(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _render_checks(lines: list[str], title: str, checks: list[dict]) -> None:
    lines.append(f"{title}:")
    for c in checks:
        tail = f"  ({c['witness']})" if c.get("witness") else ""
        lines.append(f"  [{_mark(c['passed'])}] {c['name']}{tail}")


def render_text(rec: dict) -> str:
    lines = []
    cmd = rec["command"]
    src = rec.get("input", {})
    if "family" in src:
        lines.append(f"input: family {src['family']}, r = {src['r']}")
    elif src:
        lines.append(f"input: {src['matrix']}")
    if "error" in rec:
        err = rec["error"]
        lines.append(f"error ({err['kind']}): {err['message']}")
        return "\n".join(lines) + "\n"

    if cmd == "analyze":
        lines.append(f"n = {rec['n']}")
        if rec["primitive"]:
            lines.append(f"primitive: yes, exponent {rec['exponent']}")
            c = rec["certificate"]
            lines.append("Eulerian certificate:")
            lines.append(f"  W row sums {c['w_row_sums']}, column sums {c['w_col_sums']}, target {c['target_sum']}")
            lines.append(f"  [{_mark(c['part_a'])}] W row/column sums equal target")
            lines.append(f"  [{_mark(c['square_vanishes'])}] (J - Bin(M^(g-1)))^2 = 0")
            for d in c["direct"]:
                lines.append(f"  [{_mark(d['passed'])}] rank {d['p']} (direct)")
            verdict = "Eulerian" if c["certified"] else f"not Eulerian, fails at rank {c['failing_rank']}"
            lines.append(f"  verdict: {verdict}")
        else:
            lines.append(f"primitive: no (Bin(M^k) never all-ones; {rec['powers_examined']} powers examined)")
        lines.append("even-rank checks:")
        for d in rec["rank_checks"]:
            w = d["witness"]
            tail = f"  (entry ({w[0]},{w[1]}) = {w[2]})" if w else ""
            lines.append(f"  [{_mark(d['passed'])}] rank {d['p']}{tail}")
    elif cmd == "cd-index":
        i, j, p = rec["interval"]
        lines.append(f"interval: [({i},0), ({j},{p})]")
        lines.append(f"ab-index: {rec['ab_index']}")
        if rec["cd_index"] is not None:
            lines.append(f"cd-index: {rec['cd_index']}")
        else:
            bad = rec["not_in_cd_span"]
            lines.append(f"cd-index: not in cd-span (degree {bad['degree']} part {bad['part']})")
        if "flag_f" in rec:
            lines.append("flag f-vector:")
            for S, f in rec["flag_f"]:
                lines.append(f"  f{{{','.join(str(s) for s in S)}}} = {f}")
    elif cmd == "series":
        lines.append(f"method: {rec['method']}, degree <= {rec['degree']}, alphabet {rec['alphabet']}")
        for e in rec["entries"]:
            if e["series"] is None:
                bad = e["not_in_cd_span"]
                lines.append(f"  ({e['i']},{e['j']}): not in cd-span (degree {bad['degree']} part {bad['part']})")
            else:
                lines.append(f"  ({e['i']},{e['j']}): {e['series']}")
    elif cmd == "family-verify":
        lines.append(f"degree cutoff: {rec['degree']}")
        _render_checks(lines, "block relations", rec["lemmas"])
        _render_checks(lines, "series identities", rec["series_identities"])
        u = rec["unique_solution"]
        if u["passed"]:
            lines.append("[PASS] closed form solves both defining equations")
        else:
            lines.append(f"[FAIL] closed form, equation {u['equation']}, entry {tuple(u['entry'])}: {u['detail']}")
        x = rec["crosscheck"]
        lines.append(f"[{_mark(x['passed'])}] crosscheck: {x['compared']} homogeneous parts compared")
        for mm in x["mismatches"]:
            lines.append(f"  {mm}")
    elif cmd == "shelling":
        c = rec["certificate"]
        if c["status"] == "certified":
            lines.append(f"Certified up to p = {c['p_max']}")
            lines.append(rec["consequence"])
        else:
            cx = c["counterexample"]
            lines.append(f"Refuted at ({cx['i']},{cx['j']},{cx['p']}): " + " + ".join(cx["monomials"]))
            lines.append(f"failing entries at p = {cx['p']}:")
            for f in c["failures"]:
                more = "" if f["count"] == len(f["monomials"]) else f" + ... ({f['count']} monomials)"
                lines.append(f"  ({f['i']},{f['j']},{f['p']}): " + " + ".join(f["monomials"]) + more)
        if "oracle" in rec:
            o = rec["oracle"]
            lines.append(f"[{_mark(o['passed'])}] closed-form oracle match")
            for mm in o["mismatches"]:
                lines.append(f"  entry {tuple(mm['entry'])}: dp {mm['dp']} vs closed form {mm['closed_form']}")
    lines.append(f"result: {_mark(rec['passed'])}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levelposets", description="Level posets of 0,1-matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_family=False):
        src = p.add_mutually_exclusive_group()
        if not needs_family:
            src.add_argument("matrix", nargs="?", help="matrix file ('-' for stdin)")
        src.add_argument("--family", choices=["M", "N"])
        p.add_argument("--r", type=int)
        p.add_argument("--structured", action="store_true", help="emit one JSON record")
        if needs_family:
            p.set_defaults(matrix=None)

    p = sub.add_parser("analyze", help="primitivity, exponent and Eulerian checks")
    add_common(p)
    p.add_argument("--pmax", type=int, default=8)
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("cd-index", help="ab- and cd-index of one interval")
    add_common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--flags", action="store_true", help="also print the flag f-vector")
    p.set_defaults(run=cmd_cd_index)

    p = sub.add_parser("series", help="truncated matrix of interval indices")
    add_common(p)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--method", choices=["closed-form", "chains", "automaton"], default="chains")
    p.add_argument("--cd", action="store_true", help="rewrite ab-series in c, d")
    p.set_defaults(run=cmd_series)

    p = sub.add_parser("family-verify", help="block relations, series identities and crosscheck")
    add_common(p, needs_family=True)
    p.add_argument("--degree", type=int, default=6)
    p.set_defaults(run=cmd_family_verify)

    p = sub.add_parser("shelling", help="single-monomial shelling test")
    add_common(p)
    p.add_argument("--pmax", type=int, default=8)
    p.add_argument("--oracle", action="store_true", help="compare with the closed form (family M)")
    p.set_defaults(run=cmd_shelling)
    return parser


def emit(rec: dict, structured: bool, out=None) -> None:
    out = out or sys.stdout
    if structured:
        out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(render_text(rec))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rec, passed = args.run(args)
    except InputError as exc:
        src = {"family": args.family, "r": args.r} if args.family else (
            {"matrix": args.matrix} if args.matrix else {})
        rec = {"command": args.command, "input": src, "error": {"kind": exc.kind, "message": str(exc)},
               "passed": False}
        emit(rec, args.structured)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(rec, args.structured)
    return EXIT_OK if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
