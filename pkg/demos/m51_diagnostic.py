"""Why the Ricci diagnostic stays bounded on M_5^1(c), c != 0.

On M_5^1(c) the only Ricci component is rho_22 = 1 + c^2, so the
diagnostic is (1 + c^2)|u2|.  With u2 = 1/(2c tau), tau = t - t0, the first
component solves a Riccati equation whose solution

    u1 = 1/(2 tau) - tan(log(tau)/(2c) + phi) / (2c tau)

has poles accumulating at tau = 0.  Every geodesic therefore meets a pole
of u1 at some tau_k > 0, where u2 (and the diagnostic) is still finite.
The explicit curve (log cos(s/2c) + s/2, s/2c), s = log t, is the special
case phi = 0; it lives on exp(-pi|c|) < t < exp(pi|c|), not on t > 0.
"""

import math

import numpy as np

from afflab.catalogue import canonical_model, label
from afflab.closed_forms import closed_form_geodesic
from afflab.completeness import completeness_probe
from afflab.geodesics import integrate, ricci_diagnostic

c = 1.0
m = canonical_model(label("M_5^1", 1))
cf = closed_form_geodesic("M51-log", 1)
lo, hi = cf.interval
print(f"closed form defined on ({lo:.4g}, {hi:.4g})")
for t in (lo * 1.001, 1.0, hi * 0.999):
    u = cf.vel(t)
    print(f"  t = {t:8.4g}  u = ({u[0]:10.4g}, {u[1]:8.4g})  diagnostic = {(1 + c * c) * abs(u[1]):.4g}")

tr = integrate(m, cf.pos(1.0), cf.vel(1.0), 0.5 * lo - 1.0, t0=1.0)
d = ricci_diagnostic(m, tr)
print(f"integrated backward: {tr.termination}, final diagnostic {d[-1, 2]:.4g}")

rep = completeness_probe(label("M_5^1", 1), n=64)
print(f"probe: {len(rep.blowups())} of {len(rep.fan)} rays blow up, largest terminal diagnostic {rep.ricci_max:.4g}")
# the bound scales with the initial speed: a ray with |u2(0)| = b reaches at most about
# (1 + c^2) b exp(2 pi c) / 2 before its first pole
print(f"rough ceiling for unit rays: {(1 + c * c) * math.exp(2 * math.pi * c) / 2:.4g}")
