"""
The corrected-trapezoid remainder identity
==========================================

For a single step from b to b + h, the rule

    Q = h*(f(b) + f(b+h))/2 + h^2/12 * (f'(b) - f'(b+h))

misses the true integral by a weighted average of the third derivative:

    integral - Q = h^4/12 * int_0^1 t(1-t)(2t-1) f'''(b + t h) dt

Both sides are computable, so we compute both.
"""

from etaquad import PathSegment, corrected_trapezoid, kernel_integral, parse, verify_identity

cases = [
    ("pow(x,4)", 0.0, 1.0),     # lhs = rhs = 1/30 exactly
    ("exp(x)", 0.0, 1.0),
    ("sin(3*x)", -0.5, 1.7),
    ("1/(4+x)", 1.0, -0.8),     # h < 0 runs the path backwards
]

print(f"{'f':>14} {'b':>5} {'h':>5} {'lhs':>22} {'rhs':>22} {'|diff|':>10}")
for source, b, h in cases:
    f = parse(source)
    seg = PathSegment(b, h)
    rep = verify_identity(f, seg)
    print(f"{source:>14} {b:>5.1f} {h:>5.1f} {rep.lhs:>22.15e} {rep.rhs:>22.15e} {rep.abs_diff:>10.1e}")

# cubics are reproduced exactly: the weight t(1-t)(2t-1) kills constants,
# and f''' of a cubic is constant
f = parse("1 - 2*x + 5*pow(x,3)")
seg = PathSegment(-1.0, 1.5)
print()
print("cubic remainder:", kernel_integral(f, seg))
print("cubic Q value:  ", corrected_trapezoid(f, seg))
