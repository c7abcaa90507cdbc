"""Affine presentations, largeness witnesses and the ingredients of the nil-module construction."""

import json

from schreier import presentations as pr

# a long word is cut down with one extra generator
p = pr.presentation_from_json({"algebra": "assoc", "rank": 2, "generators": ["u1"], "relators": [[["u1", "x1x2"]]]})
res = pr.higman_affinize(p)
print("affine generators:", res.affine.generators, "relators:", res.affine.q)
print("same Hilbert series:", pr.hilbert_equivalence(p, res, 8))

# over the group algebra inverse letters are removed first
g = pr.presentation_from_json({"algebra": "group", "rank": 2, "generators": ["u1", "u2", "u3"], "relators": [[["u1", "x1X2"], ["u3", "x2"]]]})
res = pr.higman_affinize(g)
print("group case:", res.definitions)

# a module that is large but has no map onto the ring
_, rep = pr.bound_large_example(2, 2, bound=6)
print(json.dumps(rep["witness"], indent=1))
print("codimension", rep["codim"], " no linear solution through degree 6:", rep["no_surjection"])

# nil-module ingredients
f = pr.f_polynomials(3, (1, 1, 1))
print(len(f.terms), "words of multidegree (1,1,1)")
for l in range(4):
    print(f"least m with d_3({l}+m) < 2^m:", pr.growth_gap(l, 3, 2))
