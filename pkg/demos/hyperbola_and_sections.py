"""Areas under 1/x, and what happens to them when the section changes.

Run: python3 demos/hyperbola_and_sections.py
"""
from hahnmeasure.calculus import integrate_interval, measure_region
from hahnmeasure.datum import Section, build_isomorphism_Q, hyperbola, verify_nonisomorphism_rank2
from hahnmeasure.constants import sqrt
from hahnmeasure.exponents import QQ
from hahnmeasure.parser import parse_expr
from hahnmeasure.series import t

# The area under 1/x from 1 to 1/t is not a series: it is the new element X.
print("integral of 1/x over [1, 1/t] =", integrate_interval(parse_expr("1/x"), 1, t(-1)))

c = 3 * t(-2) + t(-1) + 5
area = measure_region(hyperbola(c))
print("area under 1/x up to", c, "=", area)

# Send t^-1 to 2 t^-1 instead.  The areas move, but by a single map X -> X + log 2.
target = Section([(QQ(-1), 2 * t(-1))])
phi = build_isomorphism_Q(Section.standard(), target)
moved = measure_region(phi.transport.set(hyperbola(c)))
print("map:", phi)
print("image of the old area:", phi(area.algebra()))
print("area after the change:", moved)

# With exponents in Q + Q*sqrt(2) there are two generators, and one map no longer suffices.
print(verify_nonisomorphism_rank2(sqrt(2), 1 + t()))
