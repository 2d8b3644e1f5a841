"""
Nonfreeness of fermion states and the fidelity-based ``Corr`` measure.

The nonfreeness of a number-conserving state is its entropy relative to the
free state sharing its 1-PDM. It is computed here from the natural
occupations ``p`` as

    free_state_entropy(p) - S(rho)

and, on request, also directly as a relative entropy against the explicitly
assembled free state.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import fock, spectra
from .errors import NumericalError, ValidationError
from .spectra import NaturalSpectrum
from .states import DensityOperator, PureState, density_from_pure

EPS_CMP = 1e-9
EPS_XC = 1e-8


def free_state_entropy(p, base: float = 2) -> float:
    """``-sum p log p - sum (1-p) log(1-p)`` over the occupations ``p``."""
    p = np.asarray(p, dtype=float).ravel()
    if np.any((p < 0) | (p > 1)):
        raise ValidationError("occupations must lie in [0, 1]")
    return spectra.shannon(p, base) + spectra.shannon(1.0 - p, base)


def free_state_weights(p: np.ndarray, n: int) -> np.ndarray:
    """Weights ``prod_{i in s} p_i prod_{j not in s} (1 - p_j)`` for all ``|s| = n``."""
    d = len(p)
    subsets = fock.sector_basis(d, n)
    bits = (subsets[:, None] >> np.arange(d)[None, :]) & 1
    return np.prod(np.where(bits == 1, p[None, :], 1.0 - p[None, :]), axis=1)


def build_free_state(gamma: np.ndarray | NaturalSpectrum) -> DensityOperator:
    """Density operator of the free state with 1-PDM ``gamma``.

    It is diagonal in the Slater determinants of the natural orbitals, with
    product weights built from the natural occupations.
    """
    spec = gamma if isinstance(gamma, NaturalSpectrum) else spectra.natural_spectrum(gamma)
    p, U = spec.occupations, spec.orbitals
    d = len(p)
    fock.check_capacity(d, dense=True)
    blocks = {}
    for n in range(d + 1):
        w = free_state_weights(p, n)
        if not np.any(w > 0):
            continue
        keep = w > 0
        C = fock.compound_matrix(U, n)[:, keep]
        blk = (C * w[keep]) @ C.conj().T
        blocks[n] = (blk + blk.conj().T) / 2
    return DensityOperator(d, blocks)


@dataclass
class NonfreenessReport:
    """Everything computed for one state. Entropies are in units of ``log_base``."""

    occupations: list[float]
    S_delta: float
    S_gamma: float
    nonfreeness: float
    rank: int
    clip_magnitude: float
    kernel_condition_ok: bool | None = None
    cross_check: float | None = None
    corr_fidelity: float | None = None
    log_base: str = "2"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "NonfreenessReport":
        return cls(**data)


def _base_value(log_base) -> float:
    if log_base in ("e", np.e):
        return np.e
    if log_base in ("2", 2):
        return 2.0
    raise ValidationError(f"unsupported log base {log_base!r}")


def nonfreeness(state: DensityOperator | PureState, cross_check: bool = False,
                corr: bool = False, log_base="2") -> NonfreenessReport:
    """Nonfreeness of a pure or mixed state, with diagnostics.

    Parameters
    ----------
    state : DensityOperator or PureState
        The state. Pure states skip the density eigensolve.
    cross_check : bool
        Also evaluate the relative entropy against the assembled free state
        and require agreement within ``EPS_XC``.
    corr : bool
        Also evaluate :func:`corr_fidelity`.
    log_base : {"2", "e"}
        Unit of every entropy in the report.
    """
    base = _base_value(log_base)
    spec = spectra.natural_spectrum(spectra.one_pdm(state))
    S_gamma = free_state_entropy(spec.occupations, base)
    if isinstance(state, PureState):
        S_delta = 0.0
    else:
        S_delta = spectra.von_neumann_entropy(state, base)
    value = S_gamma - S_delta
    bound = spec.rank * np.log(2) / np.log(base)
    if value < -EPS_CMP or value > bound + EPS_CMP:
        raise NumericalError(f"nonfreeness {value!r} outside [0, rank={spec.rank}]")
    report = NonfreenessReport(
        occupations=[float(x) for x in spec.occupations],
        S_delta=float(S_delta),
        S_gamma=float(S_gamma),
        nonfreeness=float(max(0.0, value)),
        rank=spec.rank,
        clip_magnitude=spec.clip,
        log_base="e" if base == np.e else "2",
    )
    if cross_check or corr:
        rho = density_from_pure(state) if isinstance(state, PureState) else state
        free = build_free_state(spec)
    if cross_check:
        direct = spectra.relative_entropy(rho, free, base)
        report.cross_check = float(direct)
        report.kernel_condition_ok = bool(np.isfinite(direct))
        if not np.isfinite(direct):
            report.nonfreeness = float("inf")
        elif abs(direct - value) > EPS_XC:
            raise NumericalError(
                f"relative-entropy route {direct!r} disagrees with entropy difference {value!r}"
            )
    if corr:
        report.corr_fidelity = _corr(rho, free, base)
    return report


def nonfreeness_pure(psi: PureState, base: float = 2) -> float:
    """Nonfreeness of a wavefunction: ``free_state_entropy`` of its natural occupations."""
    spec = spectra.natural_spectrum(spectra.one_pdm(psi))
    return free_state_entropy(spec.occupations, base)


def nonfreeness_rank2(p1: float, p2: float, q: float, base: float = 2) -> float:
    """Closed form for a state on two modes.

    ``p1, p2`` are the natural occupations and ``q`` the probability of
    finding both modes filled.
    """
    tol = 1e-12
    weights = np.array([q, p1 - q, p2 - q, 1.0 - p1 - p2 + q])
    if np.any(weights < -tol) or not (0 <= p1 <= 1 and 0 <= p2 <= 1):
        raise ValidationError(f"(p1, p2, q) = {(p1, p2, q)} gives negative sector weights")
    weights = np.clip(weights, 0.0, None)
    return free_state_entropy([p1, p2], base) - spectra.shannon(weights, base)


def _corr(rho: DensityOperator, free: DensityOperator, base: float) -> float:
    fid = 0.0
    for n, blk in rho.blocks.items():
        lam, vecs = np.linalg.eigh(blk)
        # round-off eigenvalues would enter through their square roots
        keep = lam > spectra.EPS_ZERO
        vecs = vecs[:, keep] * np.sqrt(lam[keep])
        inner = vecs.conj().T @ free.block(n) @ vecs
        vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
        fid += np.sqrt(np.clip(vals, 0.0, None)).sum()
    if fid <= 0:
        raise NumericalError("state and its free state have zero fidelity")
    return float(max(0.0, -2.0 * np.log(fid) / np.log(base)))


def corr_fidelity(state: DensityOperator | PureState, base: float = 2) -> float:
    """``-2 log F(rho, Gamma)`` with ``F = Tr sqrt(sqrt(rho) Gamma sqrt(rho))``."""
    rho = density_from_pure(state) if isinstance(state, PureState) else state
    return _corr(rho, build_free_state(spectra.one_pdm(rho)), base)
