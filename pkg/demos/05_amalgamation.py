"""Independence and amalgamation, pairwise and in higher dimension.

Two extensions of a shared base merge into their free composite; the union
exponential graph is well defined because every integer kernel relation
among the arguments has value product 1.  The same check certifies the top
node of a completed independent system.
"""

from dataclasses import replace

from expofield import (FieldElem, IndepSystem, amalgamate2, complete_system,
                       e_eval, extend_graph, indep, presentation, tdeg,
                       verify_independent_system)

S = FieldElem.from_symbol
ONE = FieldElem.one()

print("== transcendence degree and the independence relation ==")
print(f"td(t1+t2, t1*t2, t1 / Q) = "
      f"{tdeg(['t1', 't2'], [S('t1') + S('t2'), S('t1') * S('t2'), S('t1')])}")
fg = presentation("F", transcendentals=("t1", "t2"),
                  egraph=((S("t1"), S("t2")),))
print(f"with E(t1) = t2: t1 independent from t2 over {{}}:  "
      f"{indep(fg, [S('t1')], [S('t2')], [])}")
print(f"                 t1 independent from t2 over {{t2}}: "
      f"{indep(fg, [S('t1')], [S('t2')], [S('t2')])}")

print()
print("== pairwise amalgamation over a base ==")
base = presentation("B", transcendentals=("tau",), egraph=((ONE, S("tau")),))
f1 = replace(extend_graph(base, [(S("s1"), S("v1"))]), name="F1")
f2 = replace(extend_graph(base, [(S("s2"), S("v2"))]), name="F2")
am = amalgamate2(base, f1, f2)
print(f"composite transcendentals: {am.composite.transcendentals}")
print(f"shared pair survives once: E(1) = {e_eval(am.composite, ONE).value}")
print(f"well-definedness kernel: {am.check.kernel_basis} "
      f"verdicts {am.check.verdicts}")

print()
print("== completing an independent system ==")
nodes = {}
subsets = [frozenset(s) for s in
           ({i for i in range(3) if m >> i & 1} for m in range(7))]
for s in subsets:
    label = "".join(str(i) for i in sorted(s))
    trans = ["tau"] + [f"g{i}" for i in sorted(s)]
    pairs = [(ONE, S("tau"))] + [(S(f"g{i}"), FieldElem.from_int(i + 2))
                                 for i in sorted(s)]
    nodes[s] = presentation(f"F{label}", 1, tuple(trans), tuple(pairs))
system = IndepSystem(n=3, nodes=nodes)
print(f"input verified independent: {verify_independent_system(system).ok}")
comp = complete_system(system)
top = comp.system.node(range(3))
print(f"top node carries {len(top.egraph)} graph pairs over "
      f"{top.transcendentals}")
print(f"all well-definedness verdicts true: {all(comp.check.verdicts)}")
print(f"completed system still independent: "
      f"{verify_independent_system(comp.system).ok}")
