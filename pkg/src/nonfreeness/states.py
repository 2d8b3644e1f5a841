"""
Pure and mixed number-conserving fermion states.

Mixed states are kept block-diagonal in the particle number: a
:class:`DensityOperator` holds one dense Hermitian matrix per sector, indexed
like :func:`nonfreeness.fock.sector_basis`. Coherences between sectors cannot
be represented, so every density operator commutes with the number operator
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import fock
from .errors import NumberSymmetryViolation, ValidationError
from .fock import Bipartition

EPS_NORM = 1e-10
EPS_HERM = 1e-10
EPS_PSD = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized ``n``-particle wavefunction on ``d`` modes."""

    d: int
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        fock.check_capacity(self.d, dense=False)
        amps = _frozen(self.amplitudes)
        if amps.shape != (fock.sector_dim(self.d, self.n),):
            raise ValidationError(
                f"expected {fock.sector_dim(self.d, self.n)} amplitudes for sector "
                f"n={self.n} on {self.d} modes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > EPS_NORM:
            raise ValidationError(f"pure state not normalized (norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_dict(cls, d: int, amps: Mapping[int, complex], normalize: bool = False) -> "PureState":
        """Build from ``{occupation: amplitude}``; all occupations must share one sector."""
        items = [(int(k), complex(v)) for k, v in amps.items() if v != 0]
        if not items:
            raise ValidationError("pure state has no nonzero amplitude")
        numbers = {fock.popcount(k) for k, _ in items}
        if len(numbers) > 1:
            raise NumberSymmetryViolation(
                f"pure state superposes particle numbers {sorted(numbers)}"
            )
        (n,) = numbers
        for k, _ in items:
            if k >> d:
                raise ValidationError(f"occupation {k:b} exceeds {d} modes")
        vec = np.zeros(fock.sector_dim(d, n), dtype=complex)
        vec[fock.sector_index(d, n, np.array([k for k, _ in items]))] = [v for _, v in items]
        if normalize:
            vec /= np.linalg.norm(vec)
        return cls(d, n, vec)

    @classmethod
    def basis(cls, d: int, modes: Iterable[int]) -> "PureState":
        return cls.from_dict(d, {fock.occupation(modes, d): 1.0})

    def as_dict(self) -> dict[int, complex]:
        basis = fock.sector_basis(self.d, self.n)
        return {int(b): complex(a) for b, a in zip(basis, self.amplitudes) if a != 0}


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Unit-trace positive operator on Fock space, one block per particle number."""

    d: int
    blocks: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        fock.check_capacity(self.d, dense=True)
        blocks = {}
        total = 0.0
        for n, blk in sorted(self.blocks.items()):
            n = int(n)
            blk = _frozen(blk)
            dim = fock.sector_dim(self.d, n) if 0 <= n <= self.d else -1
            if blk.shape != (dim, dim):
                raise ValidationError(f"block n={n} has shape {blk.shape}, expected {(dim, dim)}")
            if np.abs(blk - blk.conj().T).max(initial=0.0) > EPS_HERM:
                raise ValidationError(f"block n={n} is not Hermitian")
            if np.linalg.eigvalsh(blk).min(initial=0.0) < -EPS_PSD:
                raise ValidationError(f"block n={n} is not positive semidefinite")
            total += np.trace(blk).real
            blocks[n] = blk
        if abs(total - 1.0) > EPS_NORM:
            raise ValidationError(f"density operator has trace {total!r}, expected 1")
        object.__setattr__(self, "blocks", blocks)

    def block(self, n: int) -> np.ndarray:
        """Sector-``n`` block, zeros if absent."""
        if n in self.blocks:
            return self.blocks[n]
        dim = fock.sector_dim(self.d, n)
        return np.zeros((dim, dim), dtype=complex)

    def to_dense(self) -> np.ndarray:
        """Full ``2**d`` matrix indexed by occupation integers."""
        out = np.zeros((1 << self.d, 1 << self.d), dtype=complex)
        for n, blk in self.blocks.items():
            basis = fock.sector_basis(self.d, n)
            out[np.ix_(basis, basis)] = blk
        return out

    @classmethod
    def from_dense(cls, mat: np.ndarray, d: int, tol: float = EPS_HERM) -> "DensityOperator":
        """Split a full Fock-space matrix into number blocks.

        Raises :class:`NumberSymmetryViolation` if it couples different sectors.
        """
        mat = np.asarray(mat, dtype=complex)
        numbers = fock.popcount(np.arange(1 << d, dtype=np.int64))
        if np.abs(mat[numbers[:, None] != numbers[None, :]]).max(initial=0.0) > tol:
            raise NumberSymmetryViolation("operator does not commute with the number operator")
        blocks = {}
        for n in range(d + 1):
            basis = fock.sector_basis(d, n)
            blk = mat[np.ix_(basis, basis)]
            if np.any(blk != 0):
                blocks[n] = blk
        return cls(d, blocks)

    def distance(self, other: "DensityOperator") -> float:
        """Frobenius distance between two operators on the same modes."""
        if other.d != self.d:
            raise ValidationError("operators act on different mode counts")
        sq = 0.0
        for n in set(self.blocks) | set(other.blocks):
            sq += np.linalg.norm(self.block(n) - other.block(n)) ** 2
        return float(np.sqrt(sq))

    @property
    def sectors(self) -> list[int]:
        return sorted(self.blocks)


def density_from_pure(psi: PureState) -> DensityOperator:
    return DensityOperator(psi.d, {psi.n: np.outer(psi.amplitudes, psi.amplitudes.conj())})


def density_from_ensemble(members: Iterable[tuple[float, PureState | Mapping[int, complex]]],
                          d: int | None = None) -> DensityOperator:
    """Weighted mixture of sector-pure states.

    Members may be :class:`PureState` objects or ``{occupation: amplitude}``
    dicts (``d`` is then required); a dict that superposes several particle
    numbers raises :class:`NumberSymmetryViolation`.
    """
    acc: dict[int, np.ndarray] = {}
    total = 0.0
    for w, psi in members:
        if w < 0:
            raise ValidationError(f"negative ensemble weight {w}")
        if not isinstance(psi, PureState):
            if d is None:
                raise ValidationError("mode count required for dict ensemble members")
            psi = PureState.from_dict(d, psi, normalize=True)
        if d is None:
            d = psi.d
        elif psi.d != d:
            raise ValidationError("ensemble members act on different mode counts")
        total += w
        v = psi.amplitudes
        acc[psi.n] = acc.get(psi.n, 0) + w * np.outer(v, v.conj())
    if d is None:
        raise ValidationError("empty ensemble")
    if abs(total - 1.0) > EPS_NORM:
        raise ValidationError(f"ensemble weights sum to {total!r}, expected 1")
    return DensityOperator(d, acc)


def expected_particle_number(rho: DensityOperator) -> float:
    return float(sum(n * np.trace(b).real for n, b in rho.blocks.items()))


def tensor_product(rho1: DensityOperator, rho2: DensityOperator,
                   b: Bipartition | None = None) -> DensityOperator:
    """State of two independent subsystems as one state on ``d1 + d2`` modes.

    By default the modes of ``rho1`` come first. Passing a bipartition places
    ``rho1`` on ``b.part1`` and ``rho2`` on ``b.part2`` instead, with the
    fermionic reordering signs applied.
    """
    d = rho1.d + rho2.d
    fock.check_capacity(d, dense=True)
    if b is None:
        b = Bipartition(tuple(range(rho1.d)), d)
    elif (b.d1, b.d2) != (rho1.d, rho2.d):
        raise ValidationError("bipartition sizes do not match the factors")
    blocks = {}
    for n1, blk1 in rho1.blocks.items():
        for n2, blk2 in rho2.blocks.items():
            n = n1 + n2
            index, sign = fock.split_table(b, n)[n1]
            k = np.kron(blk1, blk2).reshape(index.shape * 2)
            k = k * sign[:, :, None, None] * sign[None, None, :, :]
            out = blocks.setdefault(n, np.zeros((fock.sector_dim(d, n),) * 2, dtype=complex))
            out[index[:, :, None, None], index[None, None, :, :]] += k
    return DensityOperator(d, blocks)


def restrict(rho: DensityOperator, b: Bipartition) -> DensityOperator:
    """Partial trace over the ``part2`` modes; the state of the ``part1`` subsystem."""
    if b.d != rho.d:
        raise ValidationError(f"bipartition covers {b.d} modes, state has {rho.d}")
    if b.d1 == 0:
        raise ValidationError("cannot restrict to an empty set of modes")
    out: dict[int, np.ndarray] = {}
    for n, blk in rho.blocks.items():
        for n1, (index, sign) in fock.split_table(b, n).items():
            sub = blk[index[:, :, None, None], index[None, None, :, :]]
            sub = sub * sign[:, :, None, None] * sign[None, None, :, :]
            part = np.einsum("acbc->ab", sub)
            out[n1] = out.get(n1, 0) + part
    return DensityOperator(b.d1, out)
