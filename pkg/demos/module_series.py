"""Right submodules of free modules over k<x1, x2>: prefix bases and Hilbert series."""

from schreier import ncalg
from schreier.fields import PrimeField

F = ncalg.FreeModule(2, 2)
gens = [F.parse("u1.x1 - u2.x2x1"), F.parse("u1.x2 + 1/2*u2"), F.parse("u2.x1x1")]
basis = ncalg.interreduce(gens, module=F)
for e in basis:
    print("basis element:", ncalg.format_element(e))

rep = ncalg.tpsfm_report(gens, 2, 2, 8, module=F)
print("H(M)          :", rep["H_M"])
print("H(B)          :", rep["H_B"])
print("H(M)(2t-1)+2  :", rep["rhs"])

# a submodule of codimension one: rank r + s - 1
gens = [F.monomial(1, (1,)), F.monomial(1, (2,)), F.monomial(2)]
rep = ncalg.tpsfm_report(gens, 2, 2, 8, module=F)
print("codimension", rep["dim"], "rank", rep["rank"], "rank formula", rep["lewin_ok"])

# the same machinery over GF(5)
G = ncalg.FreeModule(1, 3, PrimeField(5))
print("over GF(5):", ncalg.verify_tPSFM([G.parse("u1.x1x2 + 4*u1.x2x1"), G.parse("u1.x3")], 1, 3, 7))
