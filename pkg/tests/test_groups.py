import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from schreier import cosets, freegroup as fg
from schreier.series import TruncSeries

KERNEL = ["xx", "xy", "xY"]


def core_of(words, rank=2):
    return fg.fold([fg.parse_word(w, rank) for w in words], rank)


def same_core(g, h):
    return g.rank == h.rank and g.num_vertices == h.num_vertices and g.edges == h.edges


def all_reduced_words(rank, max_len):
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (a,) for w in frontier for a in fg.symbols(rank) if not w or w[-1] != -a]
        out.extend(frontier)
    return out


def perm_act(perms, w, point=0):
    """Right action of the word ``w`` on ``point``."""
    inv = [[0] * len(p) for p in perms]
    for i, p in enumerate(perms):
        for x, y in enumerate(p):
            inv[i][y] = x
    for a in w:
        point = perms[a - 1][point] if a > 0 else inv[-a - 1][point]
    return point


# -- words and folding ---------------------------------------------------------------


def test_word_helpers():
    assert fg.reduce_word((1, 2, -2, -1, 1)) == (1,)
    assert fg.format_word(fg.parse_word("xyX", 2)) == "xyX"
    assert fg.format_word(()) == "1"
    assert fg.inverse((1, -2)) == (2, -1)
    with pytest.raises(ValueError, match="position 1"):
        fg.parse_word("xq", 2)


def test_fold_examples():
    g = core_of(["x"])
    assert g.num_vertices == 1 and g.edges == {(0, 1): 0, (0, -1): 0}
    assert core_of(KERNEL).num_vertices == 2
    g = core_of([])
    assert g.num_vertices == 1 and not g.edges


def test_membership_examples():
    assert core_of(["x"]).membership((1, 1))
    assert not core_of(["x"]).membership((2,))
    assert core_of(KERNEL).membership((1, 2))
    assert not core_of(KERNEL).membership((1,))


@given(st.integers(0, 10**9))
def test_membership_of_products(seed):
    rng = random.Random(seed)
    gens, core = fg.random_subgroup(rng, rng.randint(2, 3))
    core.check()
    for _ in range(10):
        w = ()
        for _ in range(rng.randint(0, 4)):
            g = rng.choice(gens)
            w = fg.multiply(w, g if rng.random() < 0.5 else fg.inverse(g))
        assert core.membership(w)


def test_membership_against_permutation_action():
    for perms in itertools.product(itertools.permutations(range(4)), repeat=2):
        try:
            core = fg.from_permutations(perms)
        except ValueError:
            continue
        for w in all_reduced_words(2, 5):
            assert core.membership(w) == (perm_act(perms, w) == 0)


# -- low-index enumeration ------------------------------------------------------------


def transitive_count(rank, n):
    """Subgroups of index ``n`` = transitive actions on ``n`` points / ``(n-1)!``."""
    count = 0
    for perms in itertools.product(itertools.permutations(range(n)), repeat=rank):
        seen, todo = {0}, [0]
        while todo:
            p = todo.pop()
            for perm in perms:
                for q in (perm[p], perm.index(p)):
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
        count += len(seen) == n
    return count // math.factorial(n - 1)


@pytest.mark.parametrize("rank,max_index", [(2, 4), (3, 3)])
def test_enumerate_counts_against_permutation_oracle(rank, max_index):
    subs = fg.enumerate_subgroups(rank, max_index)
    by_index = {}
    for g in subs:
        g.check()
        assert g.is_complete()
        by_index[g.num_vertices] = by_index.get(g.num_vertices, 0) + 1
    assert [by_index.get(n, 0) for n in range(1, max_index + 1)] == [transitive_count(rank, n) for n in range(1, max_index + 1)]


def test_enumerate_known_counts():
    counts = [0] * 6
    for g in fg.enumerate_subgroups(2, 5):
        counts[g.num_vertices] += 1
    assert counts[1:] == [1, 3, 13, 71, 461]


def test_enumerated_subgroups_are_distinct_and_generated_by_schreier_words():
    subs = fg.enumerate_subgroups(2, 4)
    keys = {tuple(sorted(g.edges.items())) for g in subs}
    assert len(keys) == len(subs)
    for g in subs:
        cg = cosets.coset_graph(g, g.num_vertices)
        gens = cosets.schreier_generators(cg)
        assert all(g.membership(w) for w in gens.words)
        assert same_core(fg.fold(gens.words, 2), g)


# -- coset graphs ---------------------------------------------------------------------


def test_coset_graph_examples():
    assert cosets.coset_graph(core_of(["x", "y"]), 4).v == [1, 0, 0, 0, 0]
    assert cosets.coset_graph(core_of(KERNEL), 1).v == [1, 1]
    assert cosets.coset_graph(core_of(["x"]), 2).v == [1, 2, 6]


def brute_sphere_counts(core, radius):
    """Sphere sizes from classes of reduced words under ``H w1 == H w2``."""
    words = all_reduced_words(core.rank, radius)
    reps = []
    for w in sorted(words, key=len):
        if not any(core.membership(fg.multiply(w, fg.inverse(r))) for r in reps):
            reps.append(w)
    v = [0] * (radius + 1)
    for r in reps:
        v[len(r)] += 1
    return v


@given(st.integers(0, 10**9))
def test_sphere_counts_against_brute_force(seed):
    rng = random.Random(seed)
    _, core = fg.random_subgroup(rng, 2, max_gens=2, max_len=4)
    assert cosets.coset_graph(core, 3).v == brute_sphere_counts(core, 3)


def test_cyclic_subgroup_spheres():
    v = cosets.coset_graph(core_of(["x"]), 6).v
    assert v == [1] + [2 * 3 ** (n - 1) for n in range(1, 7)]


@given(st.integers(0, 10**9))
def test_determinism_invariant(seed):
    rng = random.Random(seed)
    _, core = fg.random_subgroup(rng, rng.randint(2, 3))
    cg = cosets.coset_graph(core, 4)
    cg.check_determinism()
    for u in cg.vertices()[: sum(cg.v[:-1])]:
        assert all((u, a) in cg.trans for a in fg.symbols(cg.rank))


# -- spanning trees and Schreier generators -----------------------------------------------


def test_spanning_tree_examples():
    assert cosets.spanning_tree(cosets.coset_graph(core_of(["x", "y"]), 3)).num_edges == 0
    cg = cosets.coset_graph(core_of(KERNEL), 1)
    tree = cosets.spanning_tree(cg)
    (u,) = cg.spheres[1]
    assert tree.parent[u][1] == 1
    tree = cosets.spanning_tree(cosets.coset_graph(core_of(["x"]), 1))
    assert tree.num_edges == 2 and sorted(a for _, a in tree.parent.values()) == [-2, 2]


def test_schreier_generator_examples():
    gens = cosets.schreier_generators(cosets.coset_graph(core_of(["x", "y"]), 2))
    assert gens.b[1] == 4 and gens.rank_estimate() == 2
    gens = cosets.schreier_generators(cosets.coset_graph(core_of(KERNEL), 2))
    assert gens.b[:3] == [0, 0, 6] and gens.rank_estimate() == 3
    assert {fg.format_word(w) for w in gens.words} == {"xx", "XX", "xy", "YX", "yX", "xY"}
    gens = cosets.schreier_generators(cosets.coset_graph(core_of(["x"]), 3))
    assert gens.b[1] == 2 and not any(gens.b[2:7])


def tree_with_last_choice(cg):
    """A different level-by-level tree: latest parent, largest label."""
    parent = {}
    for n in range(1, len(cg.spheres)):
        for u in reversed(cg.spheres[n - 1]):
            for a in reversed(fg.symbols(cg.rank)):
                t = cg.trans[(u, a)]
                if cg.level.get(t) == n and t not in parent:
                    parent[t] = (u, a)
    return cosets.SpanningTree(parent, cg.base)


@given(st.integers(0, 10**9))
def test_generators_reduced_and_tree_independent(seed):
    rng = random.Random(seed)
    _, core = fg.random_subgroup(rng, rng.randint(2, 3))
    cg = cosets.coset_graph(core, 4)
    tree = cosets.spanning_tree(cg)
    for u in cg.vertices():
        assert len(tree.geodesic(u)) == cg.level[u]
        assert fg.is_reduced(tree.geodesic(u))
    g1 = cosets.schreier_generators(cg, tree)
    g2 = cosets.schreier_generators(cg, tree_with_last_choice(cg))
    assert g1.b == g2.b
    assert all(core.membership(w) for w in g1.words)


# -- identities -----------------------------------------------------------------------------


def test_generalized_schreier_examples():
    rep = cosets.generalized_schreier_report(cosets.coset_graph(core_of(["x", "y"]), 3))
    assert rep["ok"] and rep["a"][:2] == ["0/1", "2/1"]
    rep = cosets.generalized_schreier_report(cosets.coset_graph(core_of(["x"]), 4))
    assert rep["ok"] and [Fraction(a) for a in rep["a"]] == [0, 1, 0, 0, 0]


@given(st.integers(0, 10**9))
def test_generalized_schreier_random(seed):
    rng = random.Random(seed)
    _, core = fg.random_subgroup(rng, rng.randint(2, 3))
    assert cosets.verify_generalized_schreier(core, core.rank, 5)


def test_classical_schreier():
    assert cosets.classical_schreier_check(core_of(KERNEL)) == (2, 3, True)
    assert cosets.classical_schreier_check(core_of(["x", "y"])) == (1, 2, True)
    index3 = [g for g in fg.enumerate_subgroups(2, 3) if g.num_vertices == 3]
    assert index3 and all(cosets.classical_schreier_check(g) == (3, 4, True) for g in index3)
    with pytest.raises(cosets.InfiniteIndex):
        cosets.classical_schreier_check(core_of(["x"]))


def test_even_subgroups():
    is_even, hhat, ok = cosets.even_subgroup_series(core_of(KERNEL), 2, 6)
    assert is_even and ok and hhat == 3 * TruncSeries.variable(6)
    assert not cosets.even_subgroup_series(core_of(["x", "y"]), 2, 4)[0]
    k3 = fg.fold([fg.parse_word(w, 3) for w in ["xx", "xy", "xY", "xz", "xZ"]], 3)
    is_even, hhat, ok = cosets.even_subgroup_series(k3, 3, 6)
    assert is_even and ok and hhat[1] == 5


def test_edge_audit_random():
    rng = random.Random(7)
    for _ in range(20):
        _, core = fg.random_subgroup(rng, 2)
        cg = cosets.coset_graph(core, 5)
        assert all(ok for _, ok in cosets.edge_audit(cg, cosets.schreier_generators(cg, keep_words=False)))


# -- surgery ----------------------------------------------------------------------------------


def test_surgery_instance():
    found = cosets.find_surgery_instance(seed=0)
    assert found is not None
    assert found["same_v"] and found["b_differs"] and found["profile_preserved"] and found["theorem_ok"]
    assert found["v_before"] == found["v_after"] and found["b_before"] != found["b_after"]


def test_surgery_preserves_profile_on_every_admissible_swap():
    checked = 0
    for core in fg.enumerate_subgroups(2, 5):
        cg = cosets.coset_graph(core, core.num_vertices)
        for e1, e2 in cosets.surgery_candidates(cg):
            rep = cosets.surgery_report(cg, e1, e2)
            assert rep["same_v"] and rep["profile_preserved"] and rep["theorem_ok"]
            # two odd generators (lengths 2n-1, 2n+1) become two of length 2n, inverses included
            n = cg.level[e2[0]]
            diff = [y - x for x, y in zip(rep["b_before"], rep["b_after"])]
            expect = [0] * len(diff)
            expect[2 * n - 1] -= 2
            expect[2 * n] += 4
            expect[2 * n + 1] -= 2
            assert diff == expect
            checked += 1
    assert checked > 0


def test_surgery_errors():
    cg = cosets.coset_graph(core_of(["x"]), 3)
    base = cg.base
    with pytest.raises(cosets.SurgeryError):
        cosets.surgery(cg, (base, 1), (base, 2))
    with pytest.raises(cosets.SurgeryError):
        cosets.surgery(cg, (base, 1), (base, 1))
