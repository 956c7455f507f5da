"""A two-element chain over the three-valued Gödel quantale that is
continuous but not algebraic.

lo <= hi holds to degree 1 and hi <= lo to degree 0. The way-below degree
of hi with itself comes out as 1/2, so hi is not compact and cannot be
rebuilt from compact elements alone.
"""

from qdomain import CATALOG, check_algebraic, check_continuous, sigma_and_s, way_below

A = CATALOG["fix-g3-chain2"]
print("hom:", A.hom_names())

wb = way_below("inhabited-flat", A)
for (y, x), v in sorted(wb.names().items()):
    print(f"  ⇓({y}, {x}) = {v}")

cont = check_continuous("inhabited-flat", A)
print("continuous:", cont.verdict, "| F_⇓ left adjoint to sup:", cont.adjoint_ok)

alg = check_algebraic("inhabited-flat", A)
print("compacts:", alg.compacts, "| algebraic:", alg.verdict, "| fails at:", alg.witnesses)
_, S = sigma_and_s("inhabited-flat", A)
print("S(hi) =", S["hi"].label(), "whose supremum is lo, not hi")

# the smaller class of conical ideals only sees representables, and there A is algebraic
print("conical-ideal algebraic:", check_algebraic("conical-ideal", A).verdict)
