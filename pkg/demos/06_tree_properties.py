"""Finite tree-property witnesses and definability certificates.

The array witness realizes every branch through an additively free variety;
candidate trees for the strong order property are falsified by the same
finite checks; the kernel-stabilizer witnesses show that no non-integer
scalar fixes the kernel of E.
"""

from itertools import product

from expofield import (FieldElem, coerce, e_eval, presentation, tp2_witness,
                       type_family, verify_finite_witness,
                       z_stabilizer_witness)
from expofield.exprlang import parse
from expofield.treeprops import PHI_TEXT, PSI_TEXT, SOP1Candidate

S = FieldElem.from_symbol

print("== the array witness E(y*x) = z ==")
w, rep = tp2_witness(2, 3, sigma=(2, 3))
branch = rep.condition_i[0]
print(f"phi: {PHI_TEXT};  psi: {PSI_TEXT}")
print(f"branch sigma = (2, 3): {branch.detail}")
sol = branch.solution
print(f"point x = {[str(x) for x in sol.point_x]}")
print(f"      y = {[str(y) for y in sol.point_y]}")
print(f"condition (iii) pairs checked: {len(rep.condition_iii)}, "
      f"condition (ii): {rep.condition_ii}")

print()
print("== all branches of a 3 x 2 array ==")
w8, _ = tp2_witness(3, 2, (1, 1, 1))
rep8 = verify_finite_witness(w8, branches=list(product((1, 2), repeat=3)))
print(f"{sum(r.consistent for r in rep8.condition_i)}/8 branches realized")

print()
print("== falsifying a strong-order candidate ==")
base = presentation("A", transcendentals=("t",))
tree = {"".join(bits): (S("t"), FieldElem.one())
        for level in range(2) for bits in product("01", repeat=level)}
cand = SOP1Candidate(depth=2, tree=tree, base=base,
                     phi=parse(PHI_TEXT), psi=parse(PSI_TEXT))
repc = verify_finite_witness(cand, branches="all")
bad = [ix for ix, v in repc.condition_iii if not v]
print(f"condition (iii) fails at {bad} (equal parameters force z1 = z2)")

print()
print("== the kernel stabilizer is exactly Z ==")
wq = z_stabilizer_witness(presentation("Q", cyclotomic_order=3),
                          coerce(5, 3) / 3)
print(f"c = 5/3: adjoin b with E(b) = zeta_3; checks {wq.checks}")
wt = z_stabilizer_witness(presentation("F", transcendentals=("t",)),
                          S("t"), d=coerce(2))
print(f"c = t:   point a with E(a) = 1, E(t a) = 2; checks {wt.checks}")

print()
print("== type counting over a transcendental ==")
fam = type_family(presentation("Q"), [{1: 2, 2: 5}, {1: 2, 2: 7}, {1: 3}])
for i, j, n in fam.certificates:
    print(f"assignments {i} and {j} split at exponent {n}")
