"""Coset graphs of subgroups of F_2: sphere sizes, Schreier generators and the length formula."""

import random

from schreier import cosets, freegroup as fg

# H = <x> has infinite index; the spheres grow like 2*3^(n-1)
H = fg.fold([fg.parse_word("x", 2)], 2)
cg = cosets.coset_graph(H, 5)
print("v(n) for <x>:", cg.v)
rep = cosets.generalized_schreier_report(cg)
print("a(n)        :", rep["a"])
print("rhs         :", rep["rhs"], "ok:", rep["ok"])

# the kernel of F_2 -> Z/2 sending both generators to 1
K = fg.fold([fg.parse_word(w, 2) for w in ["xx", "xy", "xY"]], 2)
cg = cosets.coset_graph(K, 3)
gens = cosets.schreier_generators(cg)
print("kernel spheres:", cg.v, " generators:", sorted(fg.format_word(w) for w in gens.words))
print("index, rank, formula:", cosets.classical_schreier_check(K))
is_even, hhat, ok = cosets.even_subgroup_series(K, 2, 6)
print("even:", is_even, " Hhat:", hhat, " formulas hold:", ok)

# a random finitely generated subgroup
words, core = fg.random_subgroup(random.Random(4), 2)
print("random subgroup generated by", [fg.format_word(w) for w in words])
cg = cosets.coset_graph(core, 6)
print("v(n):", cg.v, " identities hold:", cosets.generalized_schreier_report(cg)["ok"])

# the number of subgroups of small index
for n in range(1, 5):
    print(f"index {n}:", sum(g.num_vertices == n for g in fg.enumerate_subgroups(2, 4)))
