"""Probe every surface of the completeness sample and compare with the table."""

from fractions import Fraction as F

from afflab.catalogue import label
from afflab.completeness import completeness_probe, verdict

SAMPLE = [label("M_0^0"), label("M_4^0"), label("M_3^1", F(-1, 2)), label("M_2^2", -1, 0),
          label("M_2^2", -1, 1), label("M_2^2", -1, 2), label("N"), label("M_1^0"), label("M_5^0"),
          label("M_1^1"), label("M_2^1", F(-1, 2)), label("M_4^1", 1), label("M_5^1", 0),
          label("M_5^1", 1), label("M_4^2", -1)]

print(f"{'model':<14}{'rays stopped':>13}  {'max |rho(u,d_i)|':>17}  table")
for lab in SAMPLE:
    rep = completeness_probe(lab, n=32)
    print(f"{str(lab):<14}{len(rep.blowups()):>6} of {len(rep.fan):<4}  {rep.ricci_max:>17.3g}  {verdict(lab)}")
