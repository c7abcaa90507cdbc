"""Acceptance run: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines in order, or
directly with ``python tests/test_acceptance.py``.
"""

import itertools
import json
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from schreier import acts, cosets, freegroup as fg, ncalg, presentations as pr
from schreier.cli import regress
from schreier.series import TruncSeries

from helpers import random_act, random_affine, random_cofinite_subact, random_module_gens, random_presentation, random_subact

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
SEED = 20240601


def report(n, ok, detail):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line, file=sys.__stdout__, flush=True)
    return ok


def _xy_act():
    return acts.FreeAct(acts.WeightedAlphabet("xy"), acts.ActBasis("a"))


def _complement_enumerated(p, cap):
    """Complement vertices by degree, walking only outside ``P`` (the complement is prefix-closed)."""
    counts = [0] * (cap + 1)
    act = p.act

    def walk(f, d):
        if any(acts.is_prefix(g, f) for g in p.generators):
            return
        counts[d] += 1
        for x, dx in enumerate(act.alphabet.deg):
            if d + dx <= cap:
                walk(acts.ActWord(f.base, f.word + (x,)), d + dx)

    for b, db in enumerate(act.basis.deg):
        if db <= cap:
            walk(acts.ActWord(b, ()), db)
    return counts


def _subact_instances():
    rng = random.Random(SEED)
    return [(lambda a: random_subact(rng, a, max_gens=4, max_degree=5))(random_act(rng)) for _ in range(200)]


# -- monoid acts ----------------------------------------------------------------------------


def check_1():
    start = time.perf_counter()
    bad = 0
    for p in _subact_instances():
        lhs = acts.basis_series(p, 10)
        rhs = acts.schreier_series_rhs(p, 10)
        acts.complement_count(p, 10)  # census and series identity must agree
        bad += lhs != rhs
    act = _xy_act()
    worked = acts.Subact.parse(act, [["a", "x"], ["a", "y", "x"], ["a", "y", "y"]])
    t = TruncSeries.variable(10)
    worked_ok = acts.basis_series(worked, 10) == t + 2 * t * t == acts.schreier_series_rhs(worked, 10)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and worked_ok and elapsed < 10
    return report(1, ok, f"Schreier series for subacts: 200 random, {bad} mismatches; worked example H(B)=t+2t^2 {worked_ok}; {elapsed:.2f}s (< 10s)")


def _corpus_subacts():
    out = []
    for path in sorted(CORPUS.glob("act_*.json")):
        case = json.loads(path.read_text())
        data = case["input"]
        act = acts.act_from_json(data)
        for key in ("generators", "P", "Q"):
            if key in data:
                out.append(acts.Subact.parse(act, data[key]))
    return out


def check_2():
    rng = random.Random(SEED + 2)
    instances = _subact_instances() + _corpus_subacts()
    for _ in range(100):
        act = random_act(rng, max_letters=3, max_weight=2)
        instances.append(random_cofinite_subact(rng, act))
    finite = rank_bad = misclassified = 0
    for p in instances:
        w = acts.complement_witness(p)
        counts = _complement_enumerated(p, 12)
        top = max(p.act.alphabet.deg)
        reaches = any(counts[d] for d in range(13 - top, 13))
        if reaches == (w is None):
            misclassified += 1
        if w is None:
            finite += 1
            rk, comp, good = acts.rank_formula_check(p)
            rank_bad += not good or comp != sum(counts)
    ok = finite > 0 and rank_bad == 0 and misclassified == 0
    return report(2, ok, f"finite rank formula: {finite} finite-complement instances, {rank_bad} failures; {misclassified}/{len(instances)} finiteness misclassifications vs enumeration to degree 12")


def check_3():
    rng = random.Random(SEED + 3)
    bad_series = bad_rank = empty = 0
    for _ in range(200):
        act = random_act(rng)
        p, q = random_subact(rng, act), random_subact(rng, act)
        rep = acts.grassmann_report(p, q, 10)
        bad_series += not rep["series_ok"]
        bad_rank += not rep["rank_ok"]
        empty += rep["empty_intersection"]
    ok = bad_series == 0 and bad_rank == 0
    return report(3, ok, f"Grassmann identities: 200 random pairs, {bad_series} series and {bad_rank} rank failures ({empty} with empty intersection)")


# -- free groups -------------------------------------------------------------------------------

_GROUP_CACHE = {}


def _group_instances():
    if "graphs" in _GROUP_CACHE:
        return _GROUP_CACHE["graphs"]
    finite = fg.enumerate_subgroups(2, 4) + fg.enumerate_subgroups(3, 3)
    rng = random.Random(SEED + 4)
    infinite = []
    while len(infinite) < 100:
        _, core = fg.random_subgroup(rng, rng.randint(2, 3), max_gens=3, max_len=6)
        if not core.is_complete():
            infinite.append(core)
    graphs = []
    for core in finite + infinite:
        cg = cosets.coset_graph(core, 6)
        graphs.append((core, cg, cosets.schreier_generators(cg, keep_words=False)))
    _GROUP_CACHE["graphs"] = graphs
    _GROUP_CACHE["finite"] = finite
    return graphs


def check_4():
    start = time.perf_counter()
    graphs = _group_instances()
    bad = {"series": 0, "local": 0, "base": 0}
    for _, cg, gens in graphs:
        rep = cosets.generalized_schreier_report(cg, gens)
        bad["series"] += not rep["series_ok"]
        bad["local"] += not rep["local_ok"]
        bad["base"] += not rep["base_ok"]
    elapsed = time.perf_counter() - start
    nfin = len(_GROUP_CACHE["finite"])
    ok = not any(bad.values()) and elapsed < 60
    return report(4, ok, f"generalized Schreier formula, radius 6: {nfin} finite-index + {len(graphs) - nfin} infinite-index subgroups, failures {bad}; {elapsed:.2f}s (< 60s)")


def check_5():
    _group_instances()
    bad = 0
    for core in _GROUP_CACHE["finite"]:
        index, rank_h, good = cosets.classical_schreier_check(core)
        bad += not good or rank_h != (core.rank - 1) * index + 1
    n = len(_GROUP_CACHE["finite"])
    return report(5, bad == 0, f"classical Schreier formula: {n} finite-index subgroups, {bad} failures")


def check_6():
    bad = total = 0
    for _, cg, gens in _group_instances():
        for _, good in cosets.edge_audit(cg, gens):
            total += 1
            bad += not good
    return report(6, bad == 0 and total > 0, f"edge audit: {total} (graph, level) checks, {bad} failures")


def check_7():
    results = []
    for rank in (2, 3):
        words = ["xx"] + [w for l in fg.LETTERS[1:rank] for w in ("x" + l, "x" + l.upper())]
        core = fg.fold([fg.parse_word(w, rank) for w in words], rank)
        is_even, hhat, good = cosets.even_subgroup_series(core, rank, 6)
        results.append(is_even and good and hhat[1] == 2 * rank - 1)
    ok = all(results)
    return report(7, ok, f"even subgroups: kernels of F_2, F_3 -> Z/2 detected even with both recovery formulas to degree 6: {results}")


def check_8():
    found = cosets.find_surgery_instance(seed=0)
    if found is not None:
        ok = found["same_v"] and found["b_differs"] and found["profile_preserved"] and found["theorem_ok"]
        detail = f"instance found (index {found['original'].num_vertices}, tried {found['tried']}): v {found['v_before']} unchanged, b {found['b_before'][:8]} -> {found['b_after'][:8]}"
    else:
        ok, checked = True, 0
        for core in fg.enumerate_subgroups(2, 5):
            cg = cosets.coset_graph(core, core.num_vertices)
            for e1, e2 in cosets.surgery_candidates(cg):
                rep = cosets.surgery_report(cg, e1, e2)
                ok = ok and rep["profile_preserved"] and rep["same_v"]
                checked += 1
        detail = f"no instance found; {checked} synthetic admissible swaps checked"
    return report(8, ok, f"surgery: {detail}; degree profile and connectivity preserved")


# -- modules ---------------------------------------------------------------------------------

_MOD_CACHE = {}


def _module_reports():
    if "reports" not in _MOD_CACHE:
        rng = random.Random(SEED + 9)
        reports = []
        for _ in range(100):
            s, r = rng.randint(1, 3), rng.randint(1, 3)
            F, gens = random_module_gens(rng, s, r, max_gens=4, max_degree=4)
            # raises if the normal-monomial DP disagrees with enumeration
            reports.append((s, r, ncalg.tpsfm_report(gens, s, r, 8, module=F, brute_limit=6)))
        _MOD_CACHE["reports"] = reports
    return _MOD_CACHE["reports"]


def check_9():
    start = time.perf_counter()
    _MOD_CACHE.clear()
    bad = sum(not rep["series_ok"] for _, _, rep in _module_reports())
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 30
    return report(9, ok, f"module series H(B)=H(M)(rt-1)+s: 100 random generator sets, {bad} failures, DP == enumeration to degree 6; {elapsed:.2f}s (< 30s)")


def check_10():
    finite = [(s, r, rep) for s, r, rep in _module_reports() if rep["dim"] is not None]
    bad = sum(rep["rank"] != (r - 1) * rep["dim"] + s for s, r, rep in finite)
    codim_one = []
    for s, r in [(2, 2), (3, 2), (2, 3), (3, 3)]:
        F = ncalg.FreeModule(s, r)
        gens = [F.monomial(1, (j,)) for j in range(1, r + 1)] + [F.monomial(i) for i in range(2, s + 1)]
        rep = ncalg.tpsfm_report(gens, s, r, 8, module=F)
        codim_one.append(rep["dim"] == 1 and rep["rank"] == r + s - 1 and rep["ok"])
    ok = bad == 0 and all(codim_one)
    return report(10, ok, f"Schreier-Lewin: {len(finite)} finite-dimensional instances, {bad} failures; N=<u1x1..u1xr,u2..us> codim 1, rank r+s-1: {codim_one}")


def check_11():
    rng = random.Random(SEED + 11)
    bad_syntax = bad_series = 0
    for _ in range(50):
        p = random_presentation(rng)
        res = pr.higman_affinize(p)
        ap = res.affine
        syntax = all(len(e) == ap.rank + 1 for row in ap.matrix for e in row) and pr.substitution_check(p, res)
        bad_syntax += not syntax
        bad_series += not pr.hilbert_equivalence(p, res, 8)
    ok = bad_syntax == 0 and bad_series == 0
    return report(11, ok, f"affinization: 50 random presentations, {bad_syntax} non-affine/substitution failures, {bad_series} Hilbert-series mismatches to degree 8")


def check_12():
    rng = random.Random(SEED + 12)
    bad = 0
    for _ in range(100):
        ap = random_affine(rng)
        w = pr.largeness_witness(ap)
        audit = pr.check_witness(ap, w)
        bad += not (audit["ok"] and w.codim <= ap.q // ap.rank + 1 and w.final.is_zero_column(w.free_generator_index))
    _, rep = pr.bound_large_example(2, 2, bound=6)
    example_ok = rep["codim"] == 1 and rep["witness_ok"] and rep["no_surjection"] and set(rep["solution_dims"]) == set(range(7))
    ok = bad == 0 and example_ok
    return report(12, ok, f"largeness witness: 100 random affine presentations, {bad} failures; bound example codim {rep['codim']}, no-surjection solve zero through degree 6: {rep['no_surjection']}")


def check_13():
    bad_f = total_f = 0
    for k in range(1, 4):
        for m in range(7):
            for j in itertools.product(range(m + 1), repeat=k):
                if sum(j) != m:
                    continue
                total_f += 1
                bad_f += len(pr.f_polynomials(k, j).terms) != math.factorial(m) // math.prod(math.factorial(x) for x in j)
    bad_g = total_g = 0
    for r in (2, 3):
        for l in range(11):
            for k in range(1, 5):
                total_g += 1
                scan = next(i for i in itertools.count() if math.comb(l + i + k - 1, k - 1) < r**i)
                bad_g += pr.growth_gap(l, k, r) != scan
    ok = bad_f == 0 and bad_g == 0
    return report(13, ok, f"nil ingredients: {total_f} multidegrees, {bad_f} term-count failures; {total_g} growth_gap cases, {bad_g} minimality failures")


def check_14():
    s1, t1, _ = regress(str(CORPUS))
    s2, t2, _ = regress(str(CORPUS))
    total = json.loads(t1)["summary"]["total"]
    ok = t1 == t2 and s1 == 0
    return report(14, ok, f"determinism: regress corpus ({total} cases) run twice, byte-identical {t1 == t2}, all passed {s1 == 0}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11, check_12, check_13, check_14]


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 15)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
