"""
Mixed states and the two routes
===============================

The nonfreeness of a mixed state can be evaluated two ways: as the relative
entropy to the free state with the same 1-PDM, or as a difference of two
entropies. Both agree to round-off.
"""

import numpy as np

from nonfreeness import build_free_state, models, nonfreeness, one_pdm
from nonfreeness.states import DensityOperator

# %% The smallest interesting example: one particle in two modes, fully mixed
rho = DensityOperator(2, {1: np.diag([0.5, 0.5])})
r = nonfreeness(rho, cross_check=True, corr=True)
print(f"S(state) = {r.S_delta:.3f}, S(free) = {r.S_gamma:.3f}, difference = {r.nonfreeness:.3f}")
print(f"relative entropy route = {r.cross_check:.3f}, fidelity measure = {r.corr_fidelity:.3f}")

# %% The free state spreads weight over every particle number
G = build_free_state(one_pdm(rho))
for n in G.sectors:
    print(f"  sector n={n}: weight {np.trace(G.block(n)).real:.3f}")

# %% Route agreement on random ensembles
rng = np.random.default_rng(2)
gaps = []
for _ in range(50):
    r = nonfreeness(models.random_mixed(int(rng.integers(1, 6)), rng), cross_check=True)
    gaps.append(abs(r.cross_check - r.nonfreeness))
print("largest route disagreement over 50 states: %.1e bits" % max(gaps))

# %% Two modes admit a closed form; a rank-2 state never exceeds one bit
from nonfreeness import nonfreeness_rank2

p = np.linspace(0, 1, 5)
print("p1 = p2 = 0.5, q from 0 to 0.5:", np.round([nonfreeness_rank2(0.5, 0.5, q) for q in p / 2], 4))
