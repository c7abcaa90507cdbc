"""Batch command-line front end.

Every subcommand prints one deterministic report (JSON by default) that
embeds the configuration, the seed and the library version.  Exit status is
0 when every requested check holds, 1 when some check fails and 2 on usage or
input errors, in which case the report is an ``{"error": ...}`` object.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import re
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, acts, cosets, freegroup, ncalg, presentations
from .fields import field_from_name

DEFAULT_SEED = 0


class InputError(Exception):
    """Bad input; carries a machine-readable error object."""

    def __init__(self, message: str, kind: str = "input", **where):
        super().__init__(message)
        self.payload = {"type": kind, "message": message, **where}


def _position_from(message: str) -> dict:
    m = re.search(r"position (\d+)", message)
    return {"position": int(m.group(1))} if m else {}


def load_input(spec: str | None) -> dict:
    """Inline JSON (anything starting with ``{``) or a path to a JSON file."""
    if spec is None:
        return {}
    text = spec
    source = "<inline>"
    if not spec.lstrip().startswith("{"):
        path = Path(spec)
        if not path.is_file():
            raise InputError(f"input file not found: {spec}", "missing-input", source=spec)
        text = path.read_text()
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(e.msg, "parse", source=source, position=e.pos, line=e.lineno, column=e.colno) from None
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object", "parse", source=source, position=0)
    return data


def _require(data: dict, *keys: str) -> None:
    for k in keys:
        if k not in data:
            raise InputError(f"missing field {k!r}", "schema", field=k)


def _series(s) -> list[str]:
    return s.to_json()


# -- monoid acts ----------------------------------------------------------------------


def _subact(data: dict, key: str = "generators"):
    _require(data, "alphabet", "act_basis")
    act = acts.act_from_json(data)
    try:
        sub = acts.Subact.parse(act, data.get(key, []))
    except KeyError as e:
        raise InputError(f"unknown symbol {e.args[0]!r} in {key}", "schema", field=key) from None
    return act, sub


def _render(act, ws) -> list[str]:
    return [act.render(w) for w in ws]


def cmd_act_basis(data: dict, opts) -> tuple[bool, dict]:
    act, sub = _subact(data)
    cap = opts.cap if opts.cap is not None else 10
    basis = acts.canonical_basis(sub)
    report = {
        "basis": _render(act, basis),
        "rank": len(basis),
        "H_B": _series(acts.basis_series(sub, cap)),
        "H_complement": _series(acts.complement_count(sub, cap)),
    }
    w = acts.complement_witness(sub)
    report["complement_finite"] = w is None
    if w is None:
        report["complement"] = _render(act, acts.complement_elements(sub))
    else:
        report["infinite_complement_witness"] = act.render(w)
    report["ok"] = True
    return True, report


def cmd_act_verify(data: dict, opts) -> tuple[bool, dict]:
    act, sub = _subact(data)
    cap = opts.cap if opts.cap is not None else 10
    lhs = acts.basis_series(sub, cap)
    rhs = acts.schreier_series_rhs(sub, cap)
    report = {"basis": _render(act, acts.canonical_basis(sub)), "lhs": _series(lhs), "rhs": _series(rhs), "series_ok": lhs == rhs}
    ok = lhs == rhs
    w = acts.complement_witness(sub)
    if w is None:
        rk, comp, rank_ok = acts.rank_formula_check(sub)
        report.update(rank=rk, complement_size=comp, rank_ok=rank_ok)
        ok = ok and rank_ok
    else:
        report.update(rank=len(sub.generators), complement_size=None, infinite_complement_witness=act.render(w))
    report["ok"] = ok
    return ok, report


def cmd_act_grassmann(data: dict, opts) -> tuple[bool, dict]:
    act, p = _subact(data, "P")
    q = acts.Subact.parse(act, data.get("Q", []))
    cap = opts.cap if opts.cap is not None else 10
    rep = acts.grassmann_report(p, q, cap)
    out = {
        "union": _render(act, rep["union"].sorted_generators()),
        "intersection": _render(act, rep["intersection"].sorted_generators()),
        "empty_intersection": rep["empty_intersection"],
        "lhs": _series(rep["lhs"]),
        "rhs": _series(rep["rhs"]),
        "series_ok": rep["series_ok"],
        "ranks": rep["ranks"],
        "rank_ok": rep["rank_ok"],
        "ok": rep["ok"],
    }
    return rep["ok"], out


# -- free groups -------------------------------------------------------------------------


def _core(data: dict):
    _require(data, "rank")
    if "permutations" in data:
        return freegroup.from_permutations(data["permutations"])
    return freegroup.subgroup_from_json(data)


def _graph_payload(core, cg) -> dict:
    return {"core_dot": core.to_dot(), "coset_dot": cg.to_dot()}


def cmd_group_series(data: dict, opts) -> tuple[bool, dict]:
    core = _core(data)
    radius = opts.radius if opts.radius is not None else 6
    cg = cosets.coset_graph(core, radius)
    rep = cosets.generalized_schreier_report(cg)
    rep["core_vertices"] = core.num_vertices
    rep["finite_index"] = core.is_complete()
    rep["_dot"] = _graph_payload(core, cg)
    return rep["ok"], rep


def cmd_group_verify(data: dict, opts) -> tuple[bool, dict]:
    ok, rep = cmd_group_series(data, opts)
    core = _core(data)
    if core.is_complete():
        index, rank_h, classical_ok = cosets.classical_schreier_check(core)
        rep.update(index=index, subgroup_rank=rank_h, classical_ok=classical_ok)
        ok = ok and classical_ok
    else:
        rep.update(index=None, subgroup_rank=None, classical_ok=None)
    rep["ok"] = ok
    return ok, rep


def cmd_group_even(data: dict, opts) -> tuple[bool, dict]:
    core = _core(data)
    radius = opts.radius if opts.radius is not None else 6
    is_even, hhat, formulas_ok = cosets.even_subgroup_series(core, core.rank, radius)
    expect = data.get("expect_even")
    ok = formulas_ok if is_even else True
    if expect is not None:
        ok = ok and bool(expect) == is_even
    cg = cosets.coset_graph(core, radius)
    rep = {"is_even": is_even, "Hhat": _series(hhat), "formulas_ok": formulas_ok if is_even else None, "ok": ok}
    rep["_dot"] = _graph_payload(core, cg)
    return ok, rep


def _edge(e) -> list:
    v, a = e
    return [cosets.vertex_label(v), freegroup.format_symbol(a)]


def cmd_group_surgery(data: dict, opts) -> tuple[bool, dict]:
    rank = int(data.get("rank", 2))
    budget = int(data.get("budget", 200))
    max_index = int(data.get("max_index", 6))
    found = cosets.find_surgery_instance(seed=opts.seed, budget=budget, rank=rank, max_index=max_index)
    if found is None:
        # fall back on property checks for synthetic admissible swaps
        checked = ok = 0
        for core in freegroup.enumerate_subgroups(rank, max_index):
            cg = cosets.coset_graph(core, core.num_vertices)
            for e1, e2 in cosets.surgery_candidates(cg):
                try:
                    r = cosets.surgery_report(cg, e1, e2)
                except cosets.SurgeryError:
                    continue
                checked += 1
                ok += r["same_v"] and r["profile_preserved"] and r["theorem_ok"]
        good = checked == ok
        return good, {"found": False, "message": "no instance found", "synthetic_swaps": checked, "ok": good}
    core = found["original"]
    ok = found["same_v"] and found["b_differs"] and found["profile_preserved"] and found["theorem_ok"]
    rep = {
        "found": True,
        "source": found["source"],
        "tried": found["tried"],
        "original_core_vertices": core.num_vertices,
        "e1": _edge(found["e1"]),
        "e2": _edge(found["e2"]),
        "v_before": found["v_before"],
        "v_after": found["v_after"],
        "b_before": found["b_before"],
        "b_after": found["b_after"],
        "same_v": found["same_v"],
        "b_differs": found["b_differs"],
        "profile_preserved": found["profile_preserved"],
        "connected": True,
        "theorem_ok": found["theorem_ok"],
        "ok": ok,
    }
    rep["_dot"] = {"core_dot": core.to_dot(), "coset_dot": found["graph"].to_dot("surgery")}
    return ok, rep


def cmd_group_enum(data: dict, opts) -> tuple[bool, dict]:
    rank = int(data.get("rank", 2))
    max_index = int(data.get("max_index", 4))
    if rank < 1 or max_index < 0:
        raise InputError("need rank >= 1 and max_index >= 0", "schema")
    subs = freegroup.enumerate_subgroups(rank, max_index)
    counts: dict[str, int] = {str(n): 0 for n in range(1, max_index + 1)}
    ranks_ok = True
    rows = []
    for core in subs:
        index, rank_h, good = cosets.classical_schreier_check(core)
        counts[str(index)] += 1
        ranks_ok = ranks_ok and good
        rows.append({"index": index, "subgroup_rank": rank_h, "classical_ok": good})
    return ranks_ok, {"rank": rank, "max_index": max_index, "counts": counts, "total": len(subs), "subgroups": rows, "ok": ranks_ok}


# -- modules ---------------------------------------------------------------------------


def _module_gens(data: dict):
    _require(data, "s", "r")
    fld = field_from_name(data.get("field"))
    F = ncalg.FreeModule(int(data["s"]), int(data["r"]), fld)
    gens = []
    for i, text in enumerate(data.get("generators", [])):
        try:
            gens.append(F.parse(text))
        except ValueError as e:
            raise InputError(str(e), "parse", field=f"generators[{i}]", **_position_from(str(e))) from None
    return F, gens


def cmd_mod_basis(data: dict, opts) -> tuple[bool, dict]:
    F, gens = _module_gens(data)
    basis = ncalg.interreduce(gens, track=True, module=F)
    basis.check()
    # every input generator reduces to zero and every basis element is its cofactor combination
    members = all(not ncalg.reduce(g, basis) for g in gens)
    cof_ok = all(ncalg.expand_cofactor(c, gens) == e for e, c in zip(basis.elements, basis.cofactors))
    ok = members and cof_ok
    return ok, {
        "basis": [ncalg.format_element(e) for e in basis.elements],
        "leads": [ncalg.format_monomial(e.lm()) for e in basis.elements],
        "rank": len(basis),
        "dim": ncalg.dimension(basis, F),
        "inputs_reduce_to_zero": members,
        "cofactors_ok": cof_ok,
        "ok": ok,
    }


def cmd_mod_verify(data: dict, opts) -> tuple[bool, dict]:
    F, gens = _module_gens(data)
    cap = opts.cap if opts.cap is not None else 8
    rep = ncalg.tpsfm_report(gens, F.s, F.r, cap, module=F)
    out = {
        "basis": [ncalg.format_element(e) for e in rep["basis"].elements],
        "rank": rep["rank"],
        "H_M": _series(rep["H_M"]),
        "H_B": _series(rep["H_B"]),
        "rhs": _series(rep["rhs"]),
        "series_ok": rep["series_ok"],
        "dim": rep["dim"],
        "lewin_ok": rep["lewin_ok"],
        "ok": rep["ok"],
    }
    return rep["ok"], out


def _presentation(data: dict):
    _require(data, "rank", "generators")
    try:
        return presentations.presentation_from_json(data)
    except (ValueError, TypeError) as e:
        raise InputError(str(e), "parse", **_position_from(str(e))) from None


def cmd_mod_affine(data: dict, opts) -> tuple[bool, dict]:
    pres = _presentation(data)
    cap = opts.cap if opts.cap is not None else 8
    res = presentations.higman_affinize(pres)
    res.affine.check()
    subst = presentations.substitution_check(pres, res)
    rep = {
        "affine": res.affine.to_json(),
        "added": res.added,
        "definitions": {k: [v[0], presentations._letter_name(v[1])] for k, v in res.definitions.items()},
        "counts_ok": res.affine.p - pres.p == res.affine.q - pres.q == res.added,
        "substitution_ok": subst,
    }
    ok = subst and rep["counts_ok"]
    if pres.algebra == presentations.ASSOC:
        rep["hilbert_ok"] = presentations.hilbert_equivalence(pres, res, cap)
        ok = ok and rep["hilbert_ok"]
    rep["ok"] = ok
    return ok, rep


def cmd_mod_large(data: dict, opts) -> tuple[bool, dict]:
    try:
        if "matrix" in data:
            ap = presentations.affine_from_json(data)
            affine_report = None
        else:
            pres = _presentation(data)
            if pres.p - pres.q <= 0:
                raise presentations.NotApplicable(f"presentation has p - q = {pres.p - pres.q} <= 0")
            res = presentations.higman_affinize(pres)
            ap = res.affine
            affine_report = res.affine.to_json()
        wit = presentations.largeness_witness(ap)
    except presentations.NotApplicable as e:
        raise InputError(str(e), "precondition") from None
    audit = presentations.check_witness(ap, wit)
    rep = {"affine": affine_report, "witness": wit.to_json(), "audit": audit, "codim": wit.codim, "k": wit.k, "ok": audit["ok"]}
    return audit["ok"], rep


def cmd_mod_nilparts(data: dict, opts) -> tuple[bool, dict]:
    rep: dict = {}
    ok = True
    if "j" in data:
        j = [int(x) for x in data["j"]]
        k = int(data.get("k", len(j)))
        try:
            f = presentations.f_polynomials(k, j)
        except ValueError as e:
            raise InputError(str(e), "precondition") from None
        words = sorted(("".join(f"y{a}" for a in m.word) for m in f.terms), key=lambda w: (len(w), w))
        count_ok = len(f.terms) == presentations.multinomial(j)
        rep["f"] = {"k": k, "j": j, "terms": words, "num_terms": len(words), "multinomial_ok": count_ok}
        ok = ok and count_ok
    if "l" in data:
        l, k, r = int(data["l"]), int(data.get("gap_k", data.get("k", 1))), int(data.get("r", 2))
        try:
            m = presentations.growth_gap(l, k, r)
        except ValueError as e:
            raise InputError(str(e), "precondition") from None
        minimal = all(presentations.d_k(k, l + i) >= r**i for i in range(m))
        rep["growth_gap"] = {"l": l, "k": k, "r": r, "m": m, "d_k": presentations.d_k(k, l + m), "r_m": r**m, "minimal": minimal}
        ok = ok and minimal
    if not rep:
        raise InputError("give a multidegree 'j' and/or 'l' (with 'k', 'r')", "schema")
    rep["ok"] = ok
    return ok, rep


COMMANDS = {
    "act-basis": cmd_act_basis,
    "act-verify": cmd_act_verify,
    "act-grassmann": cmd_act_grassmann,
    "group-series": cmd_group_series,
    "group-verify": cmd_group_verify,
    "group-even": cmd_group_even,
    "group-surgery": cmd_group_surgery,
    "group-enum": cmd_group_enum,
    "mod-basis": cmd_mod_basis,
    "mod-verify": cmd_mod_verify,
    "mod-affine": cmd_mod_affine,
    "mod-large": cmd_mod_large,
    "mod-nilparts": cmd_mod_nilparts,
}


# -- output -------------------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_json(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def to_csv(report: dict) -> str:
    """One row per scalar; sequences (series in particular) get one row per degree."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "index", "value"])

    def emit(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v, key=str):
                emit(f"{prefix}.{k}" if prefix else str(k), v[k])
        elif isinstance(v, (list, tuple)) and all(not isinstance(e, (dict, list, tuple)) for e in v):
            for i, e in enumerate(v):
                w.writerow([prefix, i, _jsonable(e)])
        elif isinstance(v, (list, tuple)):
            for i, e in enumerate(v):
                emit(f"{prefix}[{i}]", e)
        else:
            w.writerow([prefix, "", v if isinstance(v, str) else json.dumps(v)])

    emit("", _jsonable(report))
    return buf.getvalue()


def render(report: dict, fmt: str, dot: dict | None = None) -> str:
    if fmt == "dot":
        if not dot:
            raise InputError("dot output is only available for group subcommands", "usage")
        return dot["coset_dot"] + "\n" + dot["core_dot"] + "\n"
    if fmt == "csv":
        return to_csv(report)
    return to_json(report)


# -- driver ----------------------------------------------------------------------------------


def _config(opts) -> dict:
    return {
        "command": opts.command,
        "input": opts.input,
        "cap": opts.cap,
        "radius": opts.radius,
        "format": opts.format,
    }


def execute(opts) -> tuple[int, str]:
    """Run one subcommand; returns ``(exit status, rendered report)``."""
    base = {"config": _config(opts), "seed": opts.seed, "version": __version__}
    try:
        if opts.cap is not None and opts.cap < 0:
            raise InputError("cap must be >= 0", "usage")
        if opts.radius is not None and opts.radius < 1:
            raise InputError("radius must be >= 1", "usage")
        data = load_input(opts.input)
        try:
            ok, rep = COMMANDS[opts.command](data, opts)
        except InputError:
            raise
        except (ValueError, KeyError, TypeError, IndexError) as e:
            msg = str(e) if not isinstance(e, KeyError) else f"missing or unknown key {e.args[0]!r}"
            raise InputError(msg, "input", **_position_from(msg)) from None
        dot = rep.pop("_dot", None)
        report = {**base, "report": rep}
        return (0 if ok else 1), render(report, opts.format, dot)
    except InputError as e:
        return 2, to_json({**base, "error": e.payload})


def regress(corpus: str, fmt: str = "json") -> tuple[int, str, float]:
    """Run every ``*.json`` case under ``corpus``; returns ``(status, report, seconds)``.

    A case is ``{"command", "input", "options", "expect_exit"}``.  The report
    lists cases sorted by name with the SHA-256 of each case's output, so two
    runs can be compared byte for byte.  Timing is returned separately.
    """
    root = Path(corpus)
    base = {"config": {"command": "regress", "corpus": corpus}, "version": __version__}
    if not root.is_dir():
        return 2, to_json({**base, "error": {"type": "missing-corpus", "message": f"corpus directory not found: {corpus}"}}), 0.0
    start = time.perf_counter()
    cases = []
    for path in sorted(root.glob("*.json")):
        entry = {"case": path.stem}
        try:
            case = json.loads(path.read_text())
            opts = _case_options(case)
            status, text = execute(opts)
            expect = int(case.get("expect_exit", 0))
            entry.update(exit=status, expected=expect, passed=status == expect, digest=hashlib.sha256(text.encode()).hexdigest())
        except Exception as e:  # a broken case must not take the others down
            entry.update(exit=None, expected=None, passed=False, error=f"{type(e).__name__}: {e}")
        cases.append(entry)
    elapsed = time.perf_counter() - start
    failed = [c["case"] for c in cases if not c["passed"]]
    summary = {"cases": cases, "total": len(cases), "passed": len(cases) - len(failed), "failed": failed}
    return (1 if failed else 0), to_json({**base, "summary": summary}), elapsed


def _case_options(case: dict) -> argparse.Namespace:
    if case.get("command") not in COMMANDS:
        raise ValueError(f"unknown command {case.get('command')!r}")
    o = case.get("options", {})
    inp = case.get("input")
    return argparse.Namespace(
        command=case["command"],
        input=json.dumps(inp, sort_keys=True) if isinstance(inp, dict) else inp,
        cap=o.get("cap"),
        radius=o.get("radius"),
        seed=o.get("seed", DEFAULT_SEED),
        format=o.get("format", "json"),
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schreier", description="Schreier-type formula checks in exact arithmetic.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=(fn.__doc__ or name).strip().splitlines()[0] if fn.__doc__ else None)
        p.add_argument("input", nargs="?", help="path to a JSON file, or inline JSON")
        p.add_argument("--cap", type=int, help="series truncation degree")
        p.add_argument("--radius", type=int, help="coset-graph radius N")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=["json", "csv", "dot"], default="json")
    p = sub.add_parser("regress", help="run a corpus of cases")
    p.add_argument("corpus", help="directory of case files")
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        opts = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if opts.command == "regress":
        status, text, elapsed = regress(opts.corpus)
        sys.stdout.write(text)
        summary = json.loads(text).get("summary", {})
        for c in summary.get("cases", []):
            print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['case']}", file=sys.stderr)
        print(f"regress: {summary.get('passed', 0)}/{summary.get('total', 0)} passed in {elapsed:.2f}s", file=sys.stderr)
        return status
    status, text = execute(opts)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
