"""Evaluate every summary-row relation on a few states and print the chain.

Each entropic report also carries its entropy-power and variance forms, all
against the same bound, so one line shows ``variance >= entropy power >= bound``.

    python3 demos/relation_tour.py
"""

import math

from cvur import relations
from cvur.cli import table1_rows
from cvur.states import fock_number, fock_superposition, squeezed_vacuum_gaussian, thermal, vacuum

STATES = {
    "vacuum": vacuum(),
    "thermal nu=1": thermal(1.0),
    "squeezed r=0.2 phi=pi/4": squeezed_vacuum_gaussian(0.2, math.pi / 4),
    "Fock |1>": fock_number(1),
    "(|0>+|1>)/sqrt2": fock_superposition([1, 1]),
}

for name, state in STATES.items():
    rows, violated = table1_rows(state)
    print(f"\n{name}  (proven relation violated: {violated})")
    for row in rows:
        if row["skipped"]:
            print(f"  {row['id']:<17} skipped: {row['reason']}")
            continue
        var, ep = row["meta"]["variance"], row["meta"]["entropy_power"]
        print(
            f"  {row['id']:<17} slack {row['slack']:+.6f} [{row['path']}]"
            f"  variance {var['lhs']:.4f} >= power {ep['lhs']:.4f} >= {ep['rhs']:.4f}"
        )

# the lifted Heisenberg relation tightens sigma_x^2 sigma_p^2 >= 1/4 by the non-Gaussianity
report = relations.lifted_heisenberg(fock_number(1))
print(f"\nFock |1>: sigma_x^2 sigma_p^2 = {report.lhs:.4f} >= {report.rhs:.4f} (D_x = {report.meta['D_x']:.4f})")
