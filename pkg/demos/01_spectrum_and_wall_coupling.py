"""Quantize the rectangular box and inspect the wall-displacement coupling.

The box spectrum is E = (pi^2/2m)(nx^2/Lx^2 + ny^2/Ly^2) with hbar = 1.
Displacing the wall at x = Lx couples only states that share the
transverse quantum number n_y, which is the origin of the sparsity of
the perturbation matrix.
"""

import numpy as np

from slrt import BasisSpec, BoxSpec, box_energy, dos, wall_matrix_element
from slrt.billiard import enumerate_modes

box = BoxSpec(length_x=40.0, length_y=39.0, mass=1.0)
print(f"box {box.length_x} x {box.length_y}, aspect ratio {box.aspect_ratio:.3f}")
print(f"ground state energy   E(1,1) = {box_energy((1, 1), box):.6e}")
print(f"mean density of states rho_E = {dos(box):.3f}  (spacing {1/dos(box):.3e})")

basis = BasisSpec.for_window(box, (0.0, 1.0), buffer_factor=1.5)
nx, ny, energies = enumerate_modes(box, basis)
print(f"\nretained modes below {basis.retain_below:.2f}: {energies.size}")
print("first five levels (energy, nx, ny):")
for k in range(5):
    print(f"  {energies[k]:.6f}  ({nx[k]}, {ny[k]})")

# empirical DOS check over a 200+ level window
window = (0.3, 1.0)
count = np.count_nonzero((energies >= window[0]) & (energies <= window[1]))
print(f"\nlevels in {window}: {count}, empirical DOS {count/(window[1]-window[0]):.1f} "
      f"vs bulk value {dos(box):.1f}")

print("\nwall coupling obeys the transverse selection rule:")
print(f"  <(2,3)|V|(5,3)> = {wall_matrix_element((2, 3), (5, 3), box):.4e}")
print(f"  <(2,3)|V|(5,4)> = {wall_matrix_element((2, 3), (5, 4), box):.4e}")
