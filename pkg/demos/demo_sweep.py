#!/usr/bin/env python3
"""Near-field heat transfer of deformed spheres (the sweep figure).

Far-field-subtracted SiO2 heat transfer between a flat plate and a 50 um
sphere that is smooth, dome-modulated (h = 50 nm), Gaussian-rough
(sigma = 10 nm, s0 in {2, 3} sigma), or pyramid-modulated (h = 100 nm).
Shows the near-field ordering at 1 nm and the "only about doubled" rough
transfer relative to the 4.2 uW classical far field.

Run:  python3 demos/demo_sweep.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

from proxint import (
    convolve,
    curve_to_csv,
    dome_distribution,
    heat_sio2_kernel,
    pyramid_distribution,
    sphere_distribution,
    sweep,
    truncated_gaussian_distribution,
)

R = 50_000.0
D_REF = 300.0
FAR_FIELD_NW = 4200.0  # classical far-field transfer, external constant

outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
outdir.mkdir(exist_ok=True)

kernel = heat_sio2_kernel()
sphere = sphere_distribution(R)
curves = {
    "smooth": sphere,
    "dome-h50": convolve(sphere, dome_distribution(50.0)),
    "rough-s0-2sig": convolve(sphere, truncated_gaussian_distribution(10.0, 20.0)),
    "rough-s0-3sig": convolve(sphere, truncated_gaussian_distribution(10.0, 30.0)),
    "pyramid-h100": convolve(sphere, pyramid_distribution(100.0, 100.0, per_unit_area=True)),
}

d = np.geomspace(1.0, 300.0, 120)
print(f"kernel: alpha = {kernel.alpha} nW, nu = {kernel.nu:g}; subtraction at {D_REF:g} nm\n")
print(f"{'curve':>14} {'I_sub(1 nm) nW':>15} {'total/far-field':>16}")
at_1nm = {}
for name, f in curves.items():
    curve = sweep(f, kernel, d, subtract_at=D_REF).with_ratio(FAR_FIELD_NW)
    at_1nm[name] = curve.values[0]
    gain = 1.0 + curve.values[0] / FAR_FIELD_NW
    print(f"{name:>14} {curve.values[0]:>15.1f} {gain:>16.3f}")
    (outdir / f"sweep_{name}.csv").write_text(curve_to_csv(curve))

print("\nOrdering at 1 nm:",
      " > ".join(sorted(at_1nm, key=at_1nm.get, reverse=True)))
print("The rough sphere only about doubles the far-field total at contact-scale")
print(f"separations, for either touching distance.  Tables in {outdir}/.")
