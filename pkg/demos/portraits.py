"""Write the seven geodesic portraits of the complete surfaces as SVG files."""

import sys
from fractions import Fraction as F
from pathlib import Path

from afflab.catalogue import label
from afflab.portrait import PortraitSpec, cmd_portrait

out = Path(sys.argv[1] if len(sys.argv) > 1 else "portraits")
out.mkdir(exist_ok=True)
for lab in (label("M_0^0"), label("M_4^0"), label("M_3^1", F(-1, 2)), label("N"),
            label("M_2^2", -1, 0), label("M_2^2", -1, 1), label("M_2^2", -1, 2)):
    name = str(lab).replace("^", "").replace("(", "_").replace(")", "").replace(",", "_").replace("/", "over")
    p = cmd_portrait(PortraitSpec(lab, out=str(out / f"{name}.svg")))
    print(f"{lab}: {len(p.polylines)} rays, {p.blowups} blow-ups -> {out / name}.svg")
