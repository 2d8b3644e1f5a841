"""
Occupation-number basis of a finite fermion Fock space.

A basis vector is stored as a plain Python ``int`` whose bit ``j`` is set when
mode ``j`` is occupied (mode 0 is the least significant bit). Modes are
0-based throughout the library; the state-file format and the command line
use the 1-based labels printed in bitstrings.

The ordering convention for a basis vector with occupied modes
``s_1 < s_2 < ... < s_n`` is

    |s> = a+_{s_n} ... a+_{s_2} a+_{s_1} |vac>

so a creator or annihilator acting on mode ``j`` picks up the sign
``(-1)**(number of occupied modes above j)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import CapacityError, ValidationError

#: Largest mode count for pipelines that only touch pure-state amplitudes.
D_MAX_PURE = 16
#: Largest mode count when dense density-operator blocks are materialized.
D_MAX_DENSE = 12

EPS_ORTH = 1e-10


def _check_mode(j: int, d: int) -> None:
    if not 0 <= j < d:
        raise ValidationError(f"mode index {j} out of range for {d} modes")


def check_capacity(d: int, dense: bool = True) -> None:
    """Raise :class:`CapacityError` if ``d`` modes exceed the configured cap."""
    cap = D_MAX_DENSE if dense else D_MAX_PURE
    if d < 1:
        raise ValidationError(f"mode count must be positive, got {d}")
    if d > cap:
        kind = "dense density-operator" if dense else "pure-state"
        raise CapacityError(f"{d} modes exceeds the {kind} limit of {cap}")


def popcount(x):
    """Number of set bits; works on ints and integer arrays."""
    if isinstance(x, np.ndarray):
        return np.bitwise_count(x).astype(np.int64)
    return int(x).bit_count()


def occupation(modes, d: int | None = None) -> int:
    """Bit pattern with the given (0-based) modes occupied."""
    occ = 0
    for j in modes:
        if d is not None:
            _check_mode(j, d)
        if j < 0:
            raise ValidationError(f"negative mode index {j}")
        occ |= 1 << j
    return occ


def occupied_modes(occ: int) -> tuple[int, ...]:
    """Sorted tuple of the modes occupied in ``occ``."""
    out = []
    j = 0
    while occ:
        if occ & 1:
            out.append(j)
        occ >>= 1
        j += 1
    return tuple(out)


def to_bitstring(occ: int, d: int) -> str:
    """Render ``occ`` as a width-``d`` string, leftmost character = mode 0."""
    return "".join("1" if occ >> j & 1 else "0" for j in range(d))


def from_bitstring(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise ValidationError(f"malformed occupation bitstring {bits!r}")
    return sum(1 << j for j, c in enumerate(bits) if c == "1")


def _sign_above(occ: int, j: int) -> int:
    return -1 if (occ >> (j + 1)).bit_count() & 1 else 1


def apply_creator(j: int, occ: int, d: int) -> tuple[int, int] | None:
    """Act with ``a+_j`` on a basis vector.

    Returns ``(sign, new_occ)``, or ``None`` when mode ``j`` is already
    occupied (the result vanishes).
    """
    _check_mode(j, d)
    if occ >> j & 1:
        return None
    return _sign_above(occ, j), occ | (1 << j)


def apply_annihilator(j: int, occ: int, d: int) -> tuple[int, int] | None:
    """Act with ``a_j`` on a basis vector; ``None`` if mode ``j`` is empty."""
    _check_mode(j, d)
    if not occ >> j & 1:
        return None
    return _sign_above(occ, j), occ & ~(1 << j)


# ---------------------------------------------------------------------------
# number sectors
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def sector_basis(d: int, n: int) -> np.ndarray:
    """All ``n``-particle occupations on ``d`` modes, in ascending integer order."""
    if not 0 <= n <= d:
        raise ValidationError(f"particle number {n} impossible on {d} modes")
    states = [occupation(c) for c in combinations(range(d), n)]
    out = np.array(sorted(states), dtype=np.int64)
    out.flags.writeable = False
    return out


def sector_dim(d: int, n: int) -> int:
    return comb(d, n)


def sector_index(d: int, n: int, occ) -> np.ndarray | int:
    """Position of occupation(s) ``occ`` inside :func:`sector_basis`."""
    basis = sector_basis(d, n)
    idx = np.searchsorted(basis, occ)
    if np.any(np.asarray(idx) >= len(basis)) or np.any(basis[np.minimum(idx, len(basis) - 1)] != occ):
        raise ValidationError("occupation not in the requested number sector")
    return idx if isinstance(idx, np.ndarray) else int(idx)


@lru_cache(maxsize=64)
def hopping_table(d: int, n: int):
    """Nonzero matrix elements of every ``a+_j a_k`` inside sector ``n``.

    Returns arrays ``(j, k, src, dst, sign)`` meaning
    ``a+_j a_k |basis[src]> = sign |basis[dst]>``.
    """
    basis = sector_basis(d, n)
    js, ks, srcs, dsts, signs = [], [], [], [], []
    positions = np.arange(len(basis))
    for k in range(d):
        has_k = (basis >> k) & 1 == 1
        x = basis[has_k]
        src = positions[has_k]
        sign_k = 1 - 2 * (popcount(x >> (k + 1)) & 1)
        removed = x & ~(1 << k)
        for j in range(d):
            if j == k:
                ok = np.ones(len(x), dtype=bool)
                dst_occ = x
                sign = np.ones(len(x), dtype=np.int64)
            else:
                ok = (removed >> j) & 1 == 0
                r = removed[ok]
                dst_occ = r | (1 << j)
                sign = sign_k[ok] * (1 - 2 * (popcount(r >> (j + 1)) & 1))
            m = int(ok.sum())
            js.append(np.full(m, j))
            ks.append(np.full(m, k))
            srcs.append(src[ok])
            dsts.append(np.searchsorted(basis, dst_occ))
            signs.append(sign)
    tables = tuple(np.concatenate(a).astype(np.int64) for a in (js, ks, srcs, dsts, signs))
    for a in tables:
        a.flags.writeable = False
    return tables


# ---------------------------------------------------------------------------
# full-space operator matrices (for exact CAR checks)
# ---------------------------------------------------------------------------


def creator_matrix(j: int, d: int) -> np.ndarray:
    """Integer matrix of ``a+_j`` on the full ``2**d`` space indexed by occupation."""
    _check_mode(j, d)
    dim = 1 << d
    mat = np.zeros((dim, dim), dtype=np.int64)
    for x in range(dim):
        res = apply_creator(j, x, d)
        if res is not None:
            sign, y = res
            mat[y, x] = sign
    return mat


def annihilator_matrix(j: int, d: int) -> np.ndarray:
    return creator_matrix(j, d).T.copy()


def number_matrix(d: int) -> np.ndarray:
    """Total number operator, diagonal with entries popcount(occ)."""
    return np.diag(popcount(np.arange(1 << d, dtype=np.int64)))


# ---------------------------------------------------------------------------
# Slater determinants
# ---------------------------------------------------------------------------


def check_orthonormal(U: np.ndarray, tol: float = EPS_ORTH) -> None:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[1] > U.shape[0]:
        raise ValidationError(f"orbital matrix must be d x n with n <= d, got shape {U.shape}")
    err = np.abs(U.conj().T @ U - np.eye(U.shape[1])).max(initial=0.0)
    if err > tol:
        raise ValidationError(f"orbital columns are not orthonormal (deviation {err:.2e})")


def compound_matrix(U: np.ndarray, n: int | None = None, chunk: int = 1 << 15) -> np.ndarray:
    """The ``n``-th compound matrix of a ``d x m`` matrix ``U``.

    Entry ``[t, s]`` is the minor of ``U`` on the rows occupied in
    ``sector_basis(d, n)[t]`` and the columns occupied in
    ``sector_basis(m, n)[s]``, both in ascending order. Column ``s`` is the
    amplitude vector of ``a+_{u_{s_n}} ... a+_{u_{s_1}} |vac>``. ``n``
    defaults to ``m`` (a single column: the full Slater determinant).
    """
    U = np.asarray(U, dtype=complex)
    d, m = U.shape
    if n is None:
        n = m
    rows_b = sector_basis(d, n)
    cols_b = sector_basis(m, n)
    if n == 0:
        return np.ones((1, 1), dtype=complex)
    rows = np.array([occupied_modes(int(t)) for t in rows_b], dtype=np.int64)
    cols = np.array([occupied_modes(int(s)) for s in cols_b], dtype=np.int64)
    out = np.empty((len(rows), len(cols)), dtype=complex)
    # minors for one block of rows at a time: (R, C, n, n)
    step = max(1, chunk // len(cols))
    for start in range(0, len(rows), step):
        r = rows[start:start + step]
        sub = U[r[:, None, :, None], cols[None, :, None, :]]
        out[start:start + len(r)] = np.linalg.det(sub)
    return out


def slater_amplitudes(U: np.ndarray) -> np.ndarray:
    """Normalized amplitudes of the Slater determinant of the columns of ``U``.

    The vector lives in sector ``n = U.shape[1]`` and is indexed like
    :func:`sector_basis`.
    """
    U = np.asarray(U, dtype=complex)
    check_orthonormal(U)
    amps = compound_matrix(U)[:, 0]
    return amps / np.linalg.norm(amps)


# ---------------------------------------------------------------------------
# bipartitions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    """Split of ``d`` modes into ``part1`` and its complement ``part2``.

    Both parts are stored sorted. Inside each subsystem the modes are
    relabeled ``0, 1, ...`` in that sorted order.
    """

    part1: tuple[int, ...]
    d: int

    def __post_init__(self):
        p1 = tuple(sorted(int(j) for j in self.part1))
        if len(set(p1)) != len(p1):
            raise ValidationError(f"repeated modes in {self.part1}")
        for j in p1:
            _check_mode(j, self.d)
        object.__setattr__(self, "part1", p1)

    @property
    def part2(self) -> tuple[int, ...]:
        s = set(self.part1)
        return tuple(j for j in range(self.d) if j not in s)

    @property
    def d1(self) -> int:
        return len(self.part1)

    @property
    def d2(self) -> int:
        return self.d - len(self.part1)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.part2, self.d)


def _gather(occ: int, modes: tuple[int, ...]) -> int:
    out = 0
    for i, j in enumerate(modes):
        if occ >> j & 1:
            out |= 1 << i
    return out


def split_occupation(occ: int, b: Bipartition) -> tuple[int, int, int]:
    """Factor a basis vector across a bipartition.

    Returns ``(occ1, occ2, sign)`` with ``|occ> = sign |occ1> (x) |occ2>``,
    where ``sign`` is the parity of the permutation that moves the occupied
    part1 modes in front of the occupied part2 modes.
    """
    if occ >> b.d:
        raise ValidationError("occupation has bits beyond the bipartition's mode count")
    occ1 = _gather(occ, b.part1)
    occ2 = _gather(occ, b.part2)
    # count inversions: pairs (part2 mode, part1 mode) with part2 mode below
    inversions = 0
    seen2 = 0
    for j in range(b.d):
        if not occ >> j & 1:
            continue
        if j in b.part1:
            inversions += seen2
        else:
            seen2 += 1
    return occ1, occ2, -1 if inversions & 1 else 1


def join_occupation(occ1: int, occ2: int, b: Bipartition) -> tuple[int, int]:
    """Inverse of :func:`split_occupation`: returns ``(occ, sign)``."""
    occ = 0
    for i, j in enumerate(b.part1):
        if occ1 >> i & 1:
            occ |= 1 << j
    for i, j in enumerate(b.part2):
        if occ2 >> i & 1:
            occ |= 1 << j
    return occ, split_occupation(occ, b)[2]


@lru_cache(maxsize=256)
def split_table(b: Bipartition, n: int):
    """How sector ``n`` of the whole factors into subsystem sectors.

    Returns a dict ``n1 -> (index, sign)`` where ``index[a, c]`` is the
    position in ``sector_basis(d, n)`` of the state built from the ``a``-th
    part1 basis vector with ``n1`` particles and the ``c``-th part2 basis
    vector with ``n - n1`` particles, and ``sign`` the matching factor.
    """
    out = {}
    for n1 in range(max(0, n - b.d2), min(n, b.d1) + 1):
        n2 = n - n1
        b1 = sector_basis(b.d1, n1) if b.d1 else np.zeros(1, dtype=np.int64)
        b2 = sector_basis(b.d2, n2) if b.d2 else np.zeros(1, dtype=np.int64)
        occ = np.empty((len(b1), len(b2)), dtype=np.int64)
        sign = np.empty((len(b1), len(b2)), dtype=np.int64)
        for a, x1 in enumerate(b1):
            for c, x2 in enumerate(b2):
                occ[a, c], sign[a, c] = join_occupation(int(x1), int(x2), b)
        index = np.searchsorted(sector_basis(b.d, n), occ)
        index.flags.writeable = False
        sign.flags.writeable = False
        out[n1] = (index, sign)
    return out
