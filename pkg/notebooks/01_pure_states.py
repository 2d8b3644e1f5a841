"""
Nonfreeness of pure states
==========================

For a wavefunction the state entropy vanishes, so the nonfreeness is just the
entropy of the free state built from the natural occupations. Slater
determinants sit at zero; superposing two disjoint determinants costs two
bits per orbital.
"""

import numpy as np

from nonfreeness import models, nonfreeness, one_pdm

# %% A random Slater determinant: occupations are all 0 or 1
rng = np.random.default_rng(1)
psi = models.random_slater(6, rng, n=3)
report = nonfreeness(psi)
print("Slater occupations:", np.round(report.occupations, 12))
print("Slater nonfreeness: %.2e bits" % report.nonfreeness)

# %% (Phi + Psi)/sqrt2 with Phi, Psi filling disjoint sets of m orbitals
for m in (1, 2, 3, 4):
    r = nonfreeness(models.double_slater(m))
    print(f"m={m}: occupations {sorted({float(x) for x in np.round(r.occupations, 12)})}, "
          f"nonfreeness {r.nonfreeness:.6f} bits (rank {r.rank})")

# %% A generic wavefunction lies in between
psi = models.random_pure(6, rng, n=3)
r = nonfreeness(psi)
print("random 3-in-6 state: %.4f bits, bound %d" % (r.nonfreeness, r.rank))
print("trace of gamma = particle number:", np.trace(one_pdm(psi)).real.round(12))
