"""Which closed-form remainder bound is smallest, and when.

Six bounds cover the same remainder.  T2.1/T3.1 use the kernel moment
1/16 with a power mean / max of the endpoint third derivatives; the
others trade sharper weight moments against Holder exponents.  The
tournament evaluates all six on one instance across a q grid.
"""

from etaquad import DifferenceMap, Instance, THEOREM_ORDER, parse, tournament

inst = Instance(parse("exp(2*x)"), DifferenceMap(), a=1.0, b=0.0)
rows = tournament(inst, q_grid=[1.0, 1.25, 2.0, 4.0, 16.0])

header = "  q     " + "".join(f"{t:>12}" for t in THEOREM_ORDER) + "   winner"
print(header)
for row in rows:
    cells = ""
    for t in THEOREM_ORDER:
        v = row["bounds"][t]
        cells += f"{'-':>12}" if v is None else f"{v:>12.3e}"
    print(f"{row['q']:>5.2f} {cells}   {row['winner']}")

print()
print("remainder |lhs| =", rows[0]["lhs"])
print("winner ratio at q=2:", rows[2]["ratio_winner"])
print("gates (chord / max) at q=2:", rows[2]["preinvex_pass"], "/", rows[2]["prequasiinvex_pass"])

# the power-mean forms never exceed their max-form partners; at q -> inf
# they converge, and for one-sided derivatives the gap is 2^(-1/q)
