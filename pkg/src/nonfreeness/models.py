"""
Example states: Slater determinants, the double-Slater superposition, the
Heisenberg antiferromagnet embedded as a lattice-fermion state, and seeded
random ensembles for property tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from . import fock
from .errors import CapacityError, NumericalError, ValidationError
from .fock import Bipartition
from .states import (
    DensityOperator,
    PureState,
    density_from_ensemble,
    density_from_pure,
    tensor_product,
)

DEGENERACY_TOL = 1e-8


def slater_state(U: np.ndarray) -> PureState:
    """Slater determinant of the orthonormal columns of ``U`` (shape ``d x n``)."""
    U = np.asarray(U, dtype=complex)
    return PureState(U.shape[0], U.shape[1], fock.slater_amplitudes(U))


def double_slater(m: int) -> PureState:
    """``(Phi + Psi) / sqrt(2)`` with ``Phi`` filling modes ``0..m-1`` and ``Psi`` modes ``m..2m-1``."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    d = 2 * m
    if d > fock.D_MAX_PURE:
        raise CapacityError(f"double-Slater state with m={m} needs {d} modes")
    phi = fock.occupation(range(m))
    psi = fock.occupation(range(m, d))
    return PureState.from_dict(d, {phi: 1.0, psi: 1.0}, normalize=True)


# ---------------------------------------------------------------------------
# Heisenberg antiferromagnet
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeSpec:
    sites: int
    geometry: str = "ring"

    def __post_init__(self):
        if self.sites < 2 or self.sites % 2:
            raise ValidationError(f"number of sites must be even and >= 2, got {self.sites}")
        if self.geometry not in ("ring", "chain"):
            raise ValidationError(f"unknown geometry {self.geometry!r}")
        if 2 * self.sites > fock.D_MAX_PURE:
            raise CapacityError(f"{self.sites} sites need {2 * self.sites} spin-orbitals")

    @property
    def bonds(self) -> list[tuple[int, int]]:
        L = self.sites
        bonds = {(i, i + 1) for i in range(L - 1)}
        if self.geometry == "ring" and L > 2:
            bonds.add((0, L - 1))
        return sorted(bonds)


def heisenberg_hamiltonian(spec: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``sum S_i . S_j`` over bonds, in the total ``S_z = 0`` sector.

    Returns ``(H, configs)`` where bit ``i`` of ``configs[a]`` is set when
    site ``i`` carries spin up.
    """
    L = spec.sites
    configs = fock.sector_basis(L, L // 2)
    index = {int(c): a for a, c in enumerate(configs)}
    H = np.zeros((len(configs), len(configs)))
    for a, c in enumerate(configs):
        c = int(c)
        for i, j in spec.bonds:
            si, sj = c >> i & 1, c >> j & 1
            H[a, a] += 0.25 if si == sj else -0.25
            if si != sj:
                flipped = c ^ (1 << i) ^ (1 << j)
                H[index[flipped], a] += 0.5
    return H, configs


def heisenberg_ground_fermionic(spec: LatticeSpec) -> PureState:
    """Heisenberg ground state as a state of ``2 * sites`` fermion modes.

    Site ``i`` owns modes ``2i`` (spin up) and ``2i + 1`` (spin down); each
    spin configuration becomes the occupation with exactly one of those
    filled per site. The ground level must be nondegenerate.
    """
    H, configs = heisenberg_hamiltonian(spec)
    vals, vecs = np.linalg.eigh(H)
    if len(vals) > 1 and vals[1] - vals[0] < DEGENERACY_TOL:
        raise NumericalError(f"degenerate Heisenberg ground level on {spec}")
    ground = vecs[:, 0]
    ground = ground * np.sign(ground[np.argmax(np.abs(ground))])
    L = spec.sites
    amps = {}
    for c, amp in zip(configs, ground):
        c = int(c)
        occ = sum(1 << (2 * i + (0 if c >> i & 1 else 1)) for i in range(L))
        amps[occ] = amp
    return PureState.from_dict(2 * L, amps, normalize=True)


def site_bipartition(site: int, sites: int) -> Bipartition:
    return Bipartition((2 * site, 2 * site + 1), 2 * sites)


# ---------------------------------------------------------------------------
# random ensembles
# ---------------------------------------------------------------------------


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_orbitals(d: int, n: int, seed=None) -> np.ndarray:
    """First ``n`` columns of a Haar-random ``d x d`` unitary."""
    rng = _rng(seed)
    if d == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, n), dtype=complex)
    return unitary_group.rvs(d, random_state=rng)[:, :n]


def random_pure(d: int, seed=None, n: int | None = None, support=None) -> PureState:
    """Gaussian random wavefunction in one number sector.

    ``support`` optionally restricts to a boolean mask over ``sector_basis(d, n)``.
    """
    rng = _rng(seed)
    if n is None:
        n = int(rng.integers(0, d + 1))
    dim = fock.sector_dim(d, n)
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    if support is not None:
        vec = np.where(support, vec, 0)
    return PureState(d, n, vec / np.linalg.norm(vec))


def random_slater(d: int, seed=None, n: int | None = None) -> PureState:
    rng = _rng(seed)
    if n is None:
        n = int(rng.integers(0, d + 1))
    return slater_state(random_orbitals(d, n, rng))


def random_mixed(d: int, seed=None, max_members: int = 4) -> DensityOperator:
    rng = _rng(seed)
    k = int(rng.integers(1, max_members + 1))
    weights = rng.dirichlet(np.ones(k))
    return density_from_ensemble([(w, random_pure(d, rng)) for w in weights])


def random_bipartition(d: int, seed=None) -> Bipartition:
    """Random split with both parts nonempty (``d >= 2``)."""
    rng = _rng(seed)
    if d < 2:
        raise ValidationError("need at least two modes to bipartition")
    size = int(rng.integers(1, d))
    part1 = rng.choice(d, size=size, replace=False)
    return Bipartition(tuple(int(j) for j in part1), d)


def random_block_independent(d: int, seed=None, max_members: int = 4):
    """Mixed state whose part1 particle number is sharp.

    Such a state has a 1-PDM with no part1/part2 coupling, but is generally
    not a product. Returns ``(state, bipartition)``.
    """
    rng = _rng(seed)
    b = random_bipartition(d, rng)
    n1 = int(rng.integers(0, b.d1 + 1))
    mask1 = fock.occupation(b.part1)
    k = int(rng.integers(1, max_members + 1))
    weights = rng.dirichlet(np.ones(k))
    members = []
    for w in weights:
        n = n1 + int(rng.integers(0, b.d2 + 1))
        basis = fock.sector_basis(d, n)
        support = fock.popcount(basis & mask1) == n1
        members.append((w, random_pure(d, rng, n=n, support=support)))
    return density_from_ensemble(members), b


def random_rank2(d: int, seed=None) -> DensityOperator:
    """Random mixed state whose 1-PDM has rank two (modes outside a random
    2-dimensional orbital subspace stay empty)."""
    rng = _rng(seed)
    two = random_mixed(2, rng)
    if d == 2:
        core = two
    else:
        vac = DensityOperator(d - 2, {0: np.ones((1, 1))})
        core = tensor_product(two, vac)
    return rotate(core, random_orbitals(d, d, rng))


def rotate(rho: DensityOperator, U: np.ndarray) -> DensityOperator:
    """Apply the Fock-space lift of the one-particle unitary ``U`` to ``rho``."""
    blocks = {}
    for n, blk in rho.blocks.items():
        C = fock.compound_matrix(U, n)
        out = C @ blk @ C.conj().T
        blocks[n] = (out + out.conj().T) / 2
    return DensityOperator(rho.d, blocks)


KINDS = ("slater", "pure", "mixed", "block_independent")


def random_state(kind: str, d: int, seed=None):
    """Seeded random state of the given kind.

    Returns a :class:`DensityOperator`; for ``block_independent`` the
    bipartition is returned alongside it.
    """
    fock.check_capacity(d, dense=True)
    rng = _rng(seed)
    if kind == "slater":
        return density_from_pure(random_slater(d, rng))
    if kind == "pure":
        return density_from_pure(random_pure(d, rng))
    if kind == "mixed":
        return random_mixed(d, rng)
    if kind == "block_independent":
        return random_block_independent(d, rng)
    raise ValidationError(f"unknown random state kind {kind!r}; choose from {KINDS}")


__all__ = [
    "LatticeSpec", "double_slater", "heisenberg_ground_fermionic", "heisenberg_hamiltonian",
    "random_bipartition", "random_block_independent", "random_mixed", "random_orbitals",
    "random_pure", "random_rank2", "random_slater", "random_state", "rotate", "site_bipartition",
    "slater_state",
]
