"""Exact coefficient arithmetic: rational functions over Q(zeta_m).

Everything downstream (freeness decisions, transcendence degrees, graph
evaluation) reduces to identities between these elements, so equality must
be exact and decidable.
"""

from expofield import FieldElem, cyclotomic_root, ff_rank, jacobian_rank

S = FieldElem.from_symbol

t1, t2 = S("t1"), S("t2")

print("== rational function arithmetic ==")
e = (t1 ** 2 - 1) / (t1 - 1)
print(f"(t1^2 - 1)/(t1 - 1)  ->  {e}")
print(f"equals t1 + 1:  {e == t1 + 1}")

print()
print("== one cyclotomic layer ==")
z = cyclotomic_root(3)
print(f"zeta_3           = {z}")
print(f"zeta_3^2         = {z ** 2}   (reduced in the power basis)")
print(f"zeta_3^3         = {z ** 3}")
print(f"1/(zeta_3 - 1)   = {1 / (z - 1)}")

print()
print("== formal differentiation ==")
f = (t1 + t2) / (t1 * t2 + 1)
print(f"f = {f}")
print(f"df/dt1 = {f.derivative('t1')}")
g = t1 * t1 - t2
lhs = (f * g).derivative("t1")
rhs = f * g.derivative("t1") + g * f.derivative("t1")
print(f"Leibniz rule holds exactly: {lhs == rhs}")

print()
print("== rank over the function field ==")
m = [[t1, t2], [t2, t1]]
print(f"rank [[t1, t2], [t2, t1]] = {ff_rank(m)}   (det = t1^2 - t2^2 != 0)")
print(f"rank [[t1], [2 t1]]       = {ff_rank([[t1], [2 * t1]])}")
print("Jacobian rank of (t1 + t2, t1*t2, t1):",
      jacobian_rank([t1 + t2, t1 * t2, t1], ["t1", "t2"]))
