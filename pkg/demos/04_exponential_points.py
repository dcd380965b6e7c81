"""Finitely presented exponential fields and exponential points.

A presentation fixes E on the Z-span of a Q-linearly independent argument
set; divisible-hull freedom means every unresolved value can be a fresh
transcendental, so additively free varieties always acquire points in a
purely transcendental extension.
"""

from expofield import (FieldElem, ParametricVariety, e_eval, extend_graph,
                       hull, minimal_ea_family, presentation, solve)

S = FieldElem.from_symbol

print("== evaluation on the Z-span ==")
f = presentation("F", transcendentals=("a", "b"), egraph=((S("a"), S("b")),))
print(f"graph: E(a) = b")
print(f"E(3a)   = {e_eval(f, 3 * S('a')).value}")
print(f"E(0)    = {e_eval(f, FieldElem.zero()).value}")
ev = e_eval(f, S("a") / 2)
print(f"E(a/2)  -> needs a {ev.root_specs[0][1]}-th root of {ev.root_specs[0][0]}")

print()
print("== surjectivity: every value is hit ==")
v = ParametricVariety(base_params=(), locus_params=("_p1",),
                      X=(S("_p1"),), Y=(FieldElem.from_int(5),),
                      free_Y=(False,))
res = solve(presentation("Q"), v)
print(f"adjoined: {res.adjoined}")
print(f"point: E({res.point_x[0]}) = {res.point_y[0]}")

print()
print("== kernel elements ==")
fk = extend_graph(presentation("Q"), [(S("k"), FieldElem.one())])
print(f"after adjoining E(k) = 1: E(7k) = {e_eval(fk, 7 * S('k')).value}")

print()
print("== hull extraction ==")
chain = presentation("C", transcendentals=("t1", "t2", "t3"),
                     egraph=((S("t1"), S("t2")), (S("t2"), S("t3"))))
h = hull(chain, [S("t1")])
print(f"hull of {{t1}} under t1 -> t2 -> t3: "
      f"{[str(g) for g in h.generators]}")

print()
print("== minimal families: 2^aleph_0 joint-embedding classes ==")
f1 = minimal_ea_family([2, 3])
f2 = minimal_ea_family([2, 5])
tau = S("tau")
print(f"family (2,3): E(1) = tau, E(tau^2) = 2, E(tau^3) = 3")
print(f"family (2,5) disagrees at tau^3: "
      f"{e_eval(f1, tau ** 3).value} vs {e_eval(f2, tau ** 3).value}")
