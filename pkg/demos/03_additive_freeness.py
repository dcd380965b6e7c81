"""Additive freeness of parametric varieties, and the reduction that makes
any variety free.

A locus presentation gives each coordinate as a rational function of fresh
parameters; an integer relation sum(m_i X_i) = a over the base exists
exactly when the kernel of the parameter-derivative system is nonzero, so
the decision is exact linear algebra, cross-checked here by brute force.
"""

from expofield import (FieldElem, ParametricVariety, additive_freeness,
                       freeness_oracle, pullback, reduce)

S = FieldElem.from_symbol
u = S("_p1")

print("== a free variety (the array shape from the witness construction) ==")
w = ParametricVariety(
    base_params=("t1", "t2"), locus_params=("_p1", "_q1"),
    X=(u, S("t1") * u, S("t2") * u),
    Y=(S("_q1"), FieldElem.from_int(2), FieldElem.from_int(3)),
    free_Y=(True, False, False))
print(f"X = {[str(x) for x in w.X]}")
print(f"verdict: {additive_freeness(w).verdict}")

print()
print("== a hidden affine relation ==")
v = ParametricVariety(
    base_params=(), locus_params=("_p1", "_q1", "_q2"),
    X=(u, 2 * u + 3), Y=(S("_q1"), S("_q2")), free_Y=(True, True))
cert = additive_freeness(v)
print(f"X = {[str(x) for x in v.X]}")
print(f"verdict: {cert.verdict}, relation m = {cert.relation}, a = {cert.value}")
oracle = freeness_oracle(v, bound=5)
print(f"brute-force oracle (|m_i| <= 5) agrees: {oracle.verdict == cert.verdict}")

print()
print("== reduction to free form and pullback ==")
rr = reduce(v)
print(f"selected coordinates: {rr.index_map}")
print(f"A = {[[str(q) for q in row] for row in rr.A]}, b = "
      f"{[str(b) for b in rr.b]}, N = {rr.N}")
print(f"reduced X' = {[str(x) for x in rr.vprime.X]} "
      f"-> {additive_freeness(rr.vprime).verdict}")
r, g = S("r"), S("g")
d, ed = pullback(rr, [FieldElem.from_int(5)], [r], resolve_b=lambda i, b: g)
print(f"point c = (5), Ec = (r), E(3) = g pulls back to")
print(f"  d  = {[str(x) for x in d]}")
print(f"  Ed = {[str(x) for x in ed]}")
