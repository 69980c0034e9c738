"""Seeded random campaign holding every bound against the true remainder.

Each trial draws a function and segment from a family, gates each bound
on the hypothesis it needs (sampled along the path), and records the
ratio remainder/bound.  A ratio above 1 + 1e-9 on a gated trial would be
a violation; there are none.
"""

from etaquad import BoundSpec, THEOREM_ORDER, run_inequality_suite, sharpness_search

specs = [BoundSpec(t, 2.0) for t in THEOREM_ORDER]

for family in ("poly6", "exp", "trig"):
    rep = run_inequality_suite(family, specs, trials=200, seed=7)
    print(f"family {family}: {rep.hypothesis_passed} gated rows, "
          f"{rep.violations} violations, max ratio {rep.max_ratio:.4f}")
    for entry in rep.table:
        print(f"    {entry['theorem']:>5}  gated {entry['hypothesis_passed']:>4}"
              f"  max ratio {entry['max_ratio']:.4f}")

rep = run_inequality_suite("exp", specs, trials=200, seed=7)
print("\nhardest gated instance:")
for key, value in rep.argmax.items():
    print(f"    {key}: {value}")

# how close can the quartic corollary get to equality?  the sup over
# the mono4 family is 8/15, at segments straddling the origin
inst, ratio = sharpness_search(BoundSpec("C2.1", 1.0), "mono4", iterations=200, seed=3)
print(f"\nsharpness search on mono4/C2.1: ratio {ratio:.6f} (8/15 = {8/15:.6f})")
print("    at", inst.summary())
