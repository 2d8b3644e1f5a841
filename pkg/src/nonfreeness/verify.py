"""
Randomized verification suites for the structural properties of nonfreeness.

Every trial draws from its own generator seeded by ``(seed, trial)`` and
produces one row with the frozen columns :data:`CSV_COLUMNS`:

``suite, trial, seed, modes, digest, lhs, rhs, margin, tolerance, ok``

``margin`` is signed so that a trial passes when ``margin >= -tolerance``
(for ``car`` the tolerance is exactly zero).
"""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass

import numpy as np

from . import fock, models, spectra, stateio
from .fock import Bipartition
from .measures import build_free_state, free_state_entropy, nonfreeness, nonfreeness_rank2
from .states import DensityOperator, restrict, tensor_product

CSV_COLUMNS = ("suite", "trial", "seed", "modes", "digest", "lhs", "rhs", "margin", "tolerance", "ok")


@dataclass
class TrialRow:
    suite: str
    trial: int
    seed: int
    modes: int
    digest: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    ok: bool


def state_digest(rho: DensityOperator) -> str:
    return stateio.digest(stateio.dumps_state(rho))[:16]


def _C(rho) -> float:
    return nonfreeness(rho).nonfreeness


def _modes(rng, lo: int, hi: int) -> int:
    return int(rng.integers(lo, max(lo, hi) + 1))


def _random_any(rng, d: int) -> DensityOperator:
    kind = models.KINDS[int(rng.integers(0, 3))]
    return models.random_state(kind, d, rng)


def trial_monotonicity(rng, max_modes):
    d = _modes(rng, 2, min(max_modes, 6))
    rho = _random_any(rng, d)
    b = models.random_bipartition(d, rng)
    whole, part = _C(rho), _C(restrict(rho, b))
    return d, rho, whole, part, whole - part, 1e-9, True


def trial_additivity(rng, max_modes):
    d = _modes(rng, 2, min(max_modes, 6))
    d1 = int(rng.integers(1, d))
    rho1, rho2 = _random_any(rng, d1), _random_any(rng, d - d1)
    # factor 1 on a random, generally interleaved, set of modes
    b = Bipartition(tuple(int(j) for j in rng.choice(d, size=d1, replace=False)), d)
    rho = tensor_product(rho1, rho2, b)
    lhs, rhs = _C(rho), _C(rho1) + _C(rho2)
    return d, rho, lhs, rhs, -abs(lhs - rhs), 1e-9, True


def trial_superadditivity(rng, max_modes):
    d = _modes(rng, 2, min(max_modes, 6))
    rho, b = models.random_block_independent(d, rng)
    rho1, rho2 = restrict(rho, b), restrict(rho, b.swapped())
    lhs, rhs = _C(rho), _C(rho1) + _C(rho2)
    gap = lhs - rhs
    product_distance = rho.distance(tensor_product(rho1, rho2, b))
    # equality exactly on products
    consistent = (abs(gap) <= 1e-8) == (product_distance <= 1e-8)
    return d, rho, lhs, rhs, gap, 1e-9, consistent


def trial_prop1(rng, max_modes):
    d = _modes(rng, 1, min(max_modes, 5))
    rho = models.random_mixed(d, rng)
    gamma = spectra.one_pdm(rho)
    direct = spectra.relative_entropy(rho, build_free_state(gamma))
    p = spectra.natural_spectrum(gamma).occupations
    difference = free_state_entropy(p) - spectra.von_neumann_entropy(rho)
    return d, rho, direct, difference, -abs(direct - difference), 1e-8, True


def rank2_state(p1: float, p2: float, q: float) -> DensityOperator:
    """Diagonal two-mode state with occupations ``p1, p2`` and double occupancy ``q``."""
    return DensityOperator(2, {
        0: np.array([[1.0 - p1 - p2 + q]]),
        1: np.diag([p1 - q, p2 - q]),
        2: np.array([[q]]),
    })


def random_rank2_triple(rng) -> tuple[float, float, float]:
    p1, p2 = rng.random(2)
    q = rng.uniform(max(0.0, p1 + p2 - 1.0), min(p1, p2))
    return float(p1), float(p2), float(q)


def trial_rank2(rng, max_modes):
    p1, p2, q = random_rank2_triple(rng)
    rho = rank2_state(p1, p2, q)
    closed, pipeline = nonfreeness_rank2(p1, p2, q), _C(rho)
    return 2, rho, closed, pipeline, -abs(closed - pipeline), 1e-10, True


def trial_bounds(rng, max_modes):
    d = _modes(rng, 2, min(max_modes, 6))
    if rng.random() < 0.25:
        rho = models.random_rank2(d, rng)
    else:
        rho = _random_any(rng, d)
    report = nonfreeness(rho)
    cap = report.rank if report.rank != 2 else 1
    margin = min(cap - report.nonfreeness, report.S_gamma - report.S_delta)
    return d, rho, report.nonfreeness, float(cap), margin, 1e-9, True


def car_residual(d: int) -> int:
    """Largest entry of any anticommutator deviation, in exact integer arithmetic."""
    create = [fock.creator_matrix(j, d) for j in range(d)]
    annihilate = [c.T for c in create]
    eye = np.eye(1 << d, dtype=np.int64)
    worst = 0
    for j in range(d):
        for k in range(d):
            mixed = create[j] @ annihilate[k] + annihilate[k] @ create[j] - (j == k) * eye
            pure = annihilate[j] @ annihilate[k] + annihilate[k] @ annihilate[j]
            worst = max(worst, int(np.abs(mixed).max()), int(np.abs(pure).max()))
    return worst


def trial_car(rng, max_modes):
    d = _modes(rng, 1, min(max_modes, 6))
    residual = car_residual(d)
    vac = DensityOperator(d, {0: np.ones((1, 1))})
    return d, vac, float(residual), 0.0, -float(residual), 0.0, True


SUITES = {
    "monotonicity": trial_monotonicity,
    "additivity": trial_additivity,
    "superadditivity": trial_superadditivity,
    "prop1": trial_prop1,
    "rank2": trial_rank2,
    "bounds": trial_bounds,
    "car": trial_car,
}


def run_suite(name: str, trials: int, seed: int = 0, max_modes: int = 6) -> list[TrialRow]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    rows = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        d, rho, lhs, rhs, margin, tol, extra_ok = fn(rng, max_modes)
        rows.append(TrialRow(
            suite=name, trial=t, seed=seed, modes=d, digest=state_digest(rho),
            lhs=float(lhs), rhs=float(rhs), margin=float(margin), tolerance=tol,
            ok=bool(margin >= -tol and extra_ok),
        ))
    return rows


def rows_to_csv(rows: list[TrialRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = asdict(row)
        for key in ("lhs", "rhs", "margin"):
            rec[key] = repr(rec[key])
        writer.writerow(rec)
    return buf.getvalue()
