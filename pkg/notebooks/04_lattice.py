"""
Heisenberg antiferromagnet as lattice fermions
==============================================

Each site holds one electron whose spin follows the Heisenberg ground state.
The 1-PDM is half the identity, so the free state is maximally mixed and the
nonfreeness is two bits per site. Each single site contributes one bit; the
other half comes from correlations between sites.
"""

import numpy as np

from nonfreeness import density_from_pure, models, nonfreeness, one_pdm, restrict

# %%
for sites in (2, 4, 6, 8):
    spec = models.LatticeSpec(sites)
    psi = models.heisenberg_ground_fermionic(spec)
    dev = np.abs(one_pdm(psi) - 0.5 * np.eye(2 * sites)).max()
    print(f"{sites} sites: nonfreeness {nonfreeness(psi).nonfreeness:.8f} bits, |gamma - I/2| {dev:.1e}")

# %% Single-site restrictions on the 4-site ring
rho = density_from_pure(models.heisenberg_ground_fermionic(models.LatticeSpec(4)))
local = [nonfreeness(restrict(rho, models.site_bipartition(i, 4))).nonfreeness for i in range(4)]
print("per site:", np.round(local, 10), "sum:", round(sum(local), 10))
print("site density (empty, up, down, both):", np.round(np.diag(restrict(rho, models.site_bipartition(0, 4)).to_dense()).real, 10))
