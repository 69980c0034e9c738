"""Grid-sampled invexity checks, including the map that rescues -|x|.

f(x) = -|x| is not convex, so the plain chord test with eta(v,u) = v - u
fails.  With the piecewise sign map

    eta(v,u) = v - u   if u and v share a weak sign,
               u - v   otherwise,

every path u + t*eta(v,u) stays on one side of zero, where -|x| is
affine, and the chord condition holds.
"""

from etaquad import (
    DifferenceMap,
    Domain,
    PiecewiseSignMap,
    check_invex_set,
    check_preinvex,
    check_prequasiinvex,
    parse,
)

f = parse("0 - abs(x)")
dom = Domain(-2.0, 2.0)

rep = check_preinvex(f, DifferenceMap(), dom)
print("difference map :", "pass" if rep.passed else "FAIL", "witness:", rep.witness)

rep = check_preinvex(f, PiecewiseSignMap(), dom)
print("piecewise sign :", "pass" if rep.passed else "FAIL", f"({rep.checked} triples)")

# the weaker max-form hypothesis separates functions like x^3
g = parse("pow(x,3)")
dom3 = Domain(-1.0, 1.0)
print()
print("x^3 preinvex      :", check_preinvex(g, DifferenceMap(), dom3).passed)
print("x^3 prequasiinvex :", check_prequasiinvex(g, DifferenceMap(), dom3).passed)

# for pairs straddling zero the sign map walks outward past u, so its paths
# can leave a bounded interval even though the chord inequality holds on them
print()
for eta in (DifferenceMap(), PiecewiseSignMap()):
    rep = check_invex_set(eta, dom, grid_n=33)
    print(f"[-2,2] invex under {eta.kind}: {rep.passed}  witness: {rep.witness}")
