"""The exponential-ring language and its normalization pipeline.

Arbitrary systems of exponential equations and inequations reduce to flat
polynomial systems with a designated pairing y_i = E(x_i): inequations
become equations with a fresh witness, nested exponentials become alias
variables.
"""

from expofield import eliminate_inequations, flatten, parse, print_system
from expofield.exprlang import print_flat, print_term

print("== parse and print ==")
t = parse("E( x ) * E(x+ y)", kind="term")
print(f"normalized text: {print_term(t)}")

print()
print("== inequations become equations ==")
s = parse("x != 0 & E(x) != 1")
out = eliminate_inequations(s)
print(f"input:  {print_system(s)}")
print(f"output: {print_system(out)}")

print()
print("== flattening nested exponentials ==")
fs = flatten(parse("E(E(x)) = x"))
print(print_flat(fs))
print(f"aux_count = {fs.aux_count}  (one alias for the inner value)")

print()
print("== shared subterms share a pair ==")
fs = flatten(parse("E(x)*E(x) = E(2*x)"))
print(print_flat(fs))
