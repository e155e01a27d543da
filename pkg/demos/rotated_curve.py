"""Entropy sum of ``x`` and ``x_theta`` for squeezed vacua as the squeezing angle turns.

Writes ``rotated_curve.csv`` next to this script and prints the minimum slack
per ``theta``: only ``theta = pi/2`` (conjugate quadratures) reaches zero, and
only when the state is aligned with the principal axes.

    python3 demos/rotated_curve.py
"""

import math
from pathlib import Path

import numpy as np

from cvur.conjecture_lab import FIGURE2_THETAS, figure2_curve, write_figure2_csv

rows = figure2_curve(r=0.2, thetas=FIGURE2_THETAS, phi_samples=360)
out = Path(__file__).with_name("rotated_curve.csv")
with out.open("w", newline="\n") as fh:
    write_figure2_csv(rows, fh)

for theta in FIGURE2_THETAS:
    slack = np.array([r.slack for r in rows if r.theta == theta])
    phi = np.array([r.phi for r in rows if r.theta == theta])
    k = int(np.argmin(slack))
    print(f"theta = {theta / math.pi:.4f} pi: min slack {slack[k]:.3e} at phi = {phi[k] / math.pi:.3f} pi")
print(f"ln cosh 0.4 = {math.log(math.cosh(0.4)):.4f}  (theta = pi/2, phi = pi/4)")
print(f"wrote {out}")
