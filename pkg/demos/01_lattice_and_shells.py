# 01_lattice_and_shells.py
#
# Discretize a scoring box into cubes and sort the cubes into concentric
# cylindrical shells around the vehicle origin.  Cubes whose footprint
# straddles every cylinder of a shell pair get that shell; cubes outside
# the outermost cylinder stay unassigned and are never scored.

import numpy as np

from lidarlayout import Roi, assign_shells, build_cylinders, build_lattice


def main():
    roi = Roi(
        x_range=(-8.5, 8.5),
        y_range=(-2.5, 2.5),
        z_range=(0.0, 5.0),
        cube_edge=0.5,
    )
    lattice = build_lattice(roi)
    print(f"lattice shape {lattice.shape}, {lattice.n_cubes} cubes")
    print(f"first center {lattice.centers[0]}")
    print(f"last center  {lattice.centers[-1]}")

    cylinders = build_cylinders(roi, radius_gap=1.0)
    print(f"\n{cylinders.radii.size} cylinder radii, gap {cylinders.radius_gap} m:")
    print(f"  {cylinders.radii}")

    shells = assign_shells(lattice, cylinders)
    assigned = shells.shell_of_cube >= 0
    print(f"\n{assigned.sum()} of {lattice.n_cubes} cubes assigned to a shell")

    counts = np.bincount(shells.shell_of_cube[assigned], minlength=len(shells.radii) - 1)
    for k, n in enumerate(counts):
        lo, hi = shells.radii[k], shells.radii[k + 1]
        print(f"  shell {k}: r in [{lo:5.2f}, {hi:5.2f}]  {n:4d} cubes")

    # shrinking the gap refines the shells but can only shed cubes per shell
    for gap in (2.0, 1.0, 0.5):
        fam = build_cylinders(roi, radius_gap=gap)
        asn = assign_shells(lattice, fam)
        n = int((asn.shell_of_cube >= 0).sum())
        print(f"gap {gap:3.1f} m -> {fam.radii.size} cylinders, {n} cubes assigned")


if __name__ == "__main__":
    main()
