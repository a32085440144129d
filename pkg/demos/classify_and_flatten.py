"""Scramble a catalogue surface, then recover it.

A random linear change of coordinates hides the normal form; classify()
finds it again from the exponents of the quasi-Einstein space, and
flatten() finds a linear potential that kills the Ricci tensor.
"""

import random
from fractions import Fraction as F

from afflab.catalogue import canonical_model, label
from afflab.classify import classify
from afflab.connection import ricci_type_a
from afflab.projective import flatten, linear_transform
from afflab.quasi_einstein import qe_solve_type_a

rng = random.Random(1)
for lab in (label("M_2^2", -1, 1), label("M_4^1", 3), label("M_1^2", 2, F(1, 3)), label("M_5^0")):
    A = [[F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
    if A[0][0] * A[1][1] == A[0][1] * A[1][0]:
        A[0][0] += 1
    hidden = linear_transform(canonical_model(lab), A)
    res = classify(hidden)
    flat = flatten(hidden)
    print(f"{lab}")
    print(f"  scrambled   {hidden}")
    print(f"  Q           {qe_solve_type_a(hidden)}")
    print(f"  classified  {res.label}, back-transform exact: "
          f"{linear_transform(hidden, res.A) == canonical_model(res.label)}")
    print(f"  potential   w = {flat.w_original.to_json()}, "
          f"Ricci after = {[str(v) for v in ricci_type_a(flat.model).components()]}")
