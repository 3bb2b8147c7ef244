"""Mix the modes with a Gaussian bump and watch the coupling matrix fill in.

At zero deformation the squared wall coupling |V_nm|^2 is exactly zero
between different transverse modes.  A weak bump mixes the modes, so the
zeros become finite but tiny (proportional to u^2), producing a matrix
that is sparse in the log sense: a few large elements in a sea of small
ones.
"""

import numpy as np

from slrt import BasisSpec, BoxSpec, BumpSpec, build_perturbed_system, random_bump_position

box = BoxSpec(200.0, 10.05)
basis = BasisSpec.for_window(box, (0.0, 1.0), 1.5)
cx, cy = random_bump_position(box, seed=1)
print(f"bump position drawn from seed 1: ({cx:.2f}, {cy:.2f})")

for u in (0.0, 1e-3):
    bump = BumpSpec(strength=u, sigma_x=0.0, sigma_y=0.0, center_x=cx, center_y=cy)
    system = build_perturbed_system(box, bump, basis)
    idx = system.levels_in((0.40, 0.95))
    block = system.v_squared[np.ix_(idx, idx)]
    off = block[~np.eye(idx.size, dtype=bool)]
    nonzero = off[off > 0]
    print(f"\nu = {u:g}: window holds {idx.size} levels")
    print(f"  zero elements      : {np.mean(off == 0)*100:.1f}%")
    if nonzero.size:
        print(f"  largest |V|^2      : {nonzero.max():.3e}")
        print(f"  median  |V|^2 (>0) : {np.median(nonzero):.3e}")
        print(f"  log10 span         : {np.log10(nonzero.max()/nonzero.min()):.1f} decades")
