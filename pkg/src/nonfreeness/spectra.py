"""
One-particle density matrices and entropies of number-block operators.

All entropies are returned in bits unless ``base`` is given; ``base=np.e``
gives nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .errors import NumericalError, ValidationError
from .states import DensityOperator, PureState

EPS_ZERO = 1e-14
EPS_KER = 1e-12
EPS_SPECTRUM = 1e-8
EPS_SQRT = 1e-10


def one_pdm(state: DensityOperator | PureState) -> np.ndarray:
    """One-particle density matrix ``gamma[k, j] = Tr(rho a+_j a_k)``.

    Accepts a mixed state or a pure state (the latter avoids forming the
    projector, so it also works up to ``fock.D_MAX_PURE`` modes).
    """
    d = state.d
    re = np.zeros(d * d)
    im = np.zeros(d * d)
    if isinstance(state, PureState):
        items = [(state.n, None, state.amplitudes)]
    else:
        items = [(n, blk, None) for n, blk in state.blocks.items()]
    for n, blk, psi in items:
        j, k, src, dst, sign = fock.hopping_table(d, n)
        if psi is not None:
            vals = psi[src] * psi[dst].conj() * sign
        else:
            vals = blk[src, dst] * sign
        flat = k * d + j
        re += np.bincount(flat, weights=vals.real, minlength=d * d)
        im += np.bincount(flat, weights=vals.imag, minlength=d * d)
    gamma = (re + 1j * im).reshape(d, d)
    return (gamma + gamma.conj().T) / 2


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    idx = np.argmax(np.abs(vecs), axis=0)
    lead = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(lead) / np.where(lead == 0, 1, lead))


@dataclass(frozen=True, eq=False)
class NaturalSpectrum:
    """Natural occupations (descending) and orbitals (columns of ``orbitals``)."""

    occupations: np.ndarray
    orbitals: np.ndarray
    clip: float = 0.0

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.occupations > EPS_KER))


def natural_spectrum(gamma: np.ndarray) -> NaturalSpectrum:
    gamma = np.asarray(gamma, dtype=complex)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValidationError(f"1-PDM must be square, got shape {gamma.shape}")
    if np.abs(gamma - gamma.conj().T).max(initial=0.0) > 1e-10:
        raise ValidationError("1-PDM is not Hermitian")
    try:
        vals, vecs = np.linalg.eigh(gamma)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on 1-PDM: {exc}") from exc
    vals, vecs = vals[::-1], vecs[:, ::-1]
    clip = float(max(0.0, -vals.min(initial=0.0), vals.max(initial=0.0) - 1.0))
    if clip > EPS_SPECTRUM:
        raise NumericalError(f"natural occupation outside [0, 1] by {clip:.2e}")
    return NaturalSpectrum(np.clip(vals, 0.0, 1.0), _fix_phases(vecs), clip)


def _log(x, base):
    return np.log(x) / np.log(base)


def shannon(weights, base: float = 2) -> float:
    """``-sum w log w`` with zero contribution from weights below ``EPS_ZERO``."""
    w = np.asarray(weights, dtype=float).ravel()
    w = w[w >= EPS_ZERO]
    return float(-(w * _log(w, base)).sum())


def block_eigenvalues(rho: DensityOperator) -> np.ndarray:
    """All eigenvalues of ``rho`` (clipped at 0), concatenated over sectors."""
    parts = [np.linalg.eigvalsh(b) for b in rho.blocks.values()]
    vals = np.concatenate(parts) if parts else np.zeros(0)
    return np.clip(vals, 0.0, None)


def von_neumann_entropy(rho: DensityOperator, base: float = 2) -> float:
    return max(0.0, shannon(block_eigenvalues(rho), base))


def relative_entropy(D: DensityOperator, G: DensityOperator, base: float = 2) -> float:
    """Entropy of ``D`` relative to ``G``; ``inf`` if ``D`` leaves the support of ``G``.

    Evaluated sector by sector from the two eigendecompositions as

        sum_{j,k} |<phi_j|psi_k>|^2 (d_j log d_j - d_j log g_k + g_k - d_j)

    with ``k`` restricted to the range of ``G``.
    """
    if D.d != G.d:
        raise ValidationError(f"mode counts differ: {D.d} vs {G.d}")
    total = 0.0
    for n in set(D.blocks) | set(G.blocks):
        dv, phi = np.linalg.eigh(D.block(n))
        gv, psi = np.linalg.eigh(G.block(n))
        dv = np.clip(dv, 0.0, None)
        keep = gv > EPS_KER
        gv, psi = gv[keep], psi[:, keep]
        overlap = np.abs(phi.conj().T @ psi) ** 2
        outside = 1.0 - overlap.sum(axis=1)
        if np.any((dv > EPS_KER) & (outside > EPS_KER)):
            return float("inf")
        dlogd = np.where(dv > EPS_ZERO, dv * np.log(np.where(dv > 0, dv, 1)), 0.0)
        terms = dlogd[:, None] - dv[:, None] * np.log(gv)[None, :] + gv[None, :] - dv[:, None]
        total += float((overlap * terms).sum())
    return max(0.0, total / np.log(base))


def cross_entropy(D: DensityOperator, G: DensityOperator, base: float = 2) -> float:
    """``-Tr(D log G)`` over the support of ``G``; ``inf`` if it diverges."""
    total = 0.0
    for n, blk in D.blocks.items():
        gv, psi = np.linalg.eigh(G.block(n))
        weights = np.einsum("ik,ij,jk->k", psi.conj(), blk, psi).real
        keep = gv > EPS_KER
        if np.any(weights[~keep] > EPS_KER):
            return float("inf")
        total -= float((weights[keep] * np.log(gv[keep])).sum())
    return total / np.log(base)


def matrix_sqrt(M: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix, negative eigenvalues clipped."""
    M = np.asarray(M, dtype=complex)
    if np.abs(M - M.conj().T).max(initial=0.0) > 1e-10:
        raise ValidationError("matrix_sqrt needs a Hermitian matrix")
    vals, vecs = np.linalg.eigh(M)
    if vals.min(initial=0.0) < -1e-9:
        raise ValidationError(f"matrix not positive semidefinite (eigenvalue {vals.min():.2e})")
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    return (root + root.conj().T) / 2
