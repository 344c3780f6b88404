"""Standard parts of measures versus measures of standard parts.

For sets bounded by a real number the two agree.  A box of width 2t and
height 2/t has area 4, yet its standard part is a segment of area 0.

Run: python3 demos/standard_part.py
"""
from hahnmeasure.calculus import standard_part_measure
from hahnmeasure.parser import parse_domain

for text in ["[t, 1 + t]", "[1/2 - t^2, 3] u [5, 6 + t]",
             "region x in [0, 1 + t]; y in [t, 2]",
             "region x in [-t, t]; y in [-1/t, 1/t]"]:
    report = standard_part_measure(parse_domain(text))
    print(text)
    print(f"    st(measure) = {report.standard_part_of_measure},"
          f" measure(st) = {report.measure_of_standard_part},"
          f" bounded by a real: {report.r_bounded}")
