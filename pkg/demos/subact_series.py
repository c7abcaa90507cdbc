"""Subacts of a free act: Schreier basis, complement and the two Hilbert-series identities."""

from schreier import acts

# one basis element a of degree 0, two letters x, y of degree 1
act = acts.FreeAct(acts.WeightedAlphabet("xy"), acts.ActBasis("a"))
P = acts.Subact.parse(act, [["a", "x"], ["a", "y", "x"], ["a", "y", "y"]])

basis = acts.canonical_basis(P)
print("basis of P:", [act.render(b) for b in basis])
print("complement:", [act.render(f) for f in acts.complement_elements(P)])

cap = 6
print("H(B)        =", acts.basis_series(P, cap))
print("H(A)+...    =", acts.schreier_series_rhs(P, cap))
print("rank check  :", acts.rank_formula_check(P))

# <ax> leaves the whole cone over ay outside
try:
    acts.rank_formula_check(acts.Subact.parse(act, [["a", "x"]]))
except acts.InfiniteComplement as e:
    print("infinite complement, witness", e.rendered)

# weighted letters work the same way
wact = acts.FreeAct(acts.WeightedAlphabet("xyz", [1, 2, 3]), acts.ActBasis("ab", [0, 1]))
W = acts.Subact.parse(wact, [["a", "x"], ["a", "y", "z"], ["b"]])
print("weighted case holds:", acts.verify_schreier_series(W, 12))

# union and intersection
Q = acts.Subact.parse(act, [["a", "x", "y"], ["a", "y"]])
R = acts.Subact.parse(act, [["a", "x"]])
rep = acts.grassmann_report(R, Q, cap)
print("union       :", rep["union"], " intersection:", rep["intersection"])
print("ranks       :", rep["ranks"], " identities hold:", rep["ok"])
