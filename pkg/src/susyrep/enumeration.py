"""Exhaustive search over BC_d for Garden Algebra tuples.

Every candidate ``L`` is a signed permutation matrix and ``R = L^T``, which
the ``I = J`` relation forces for orthogonal ``L``. A pair is compatible
when both ``L_a L_b^T`` and ``L_a^T L_b`` are antisymmetric; tuples are
grown one color at a time, keeping only candidates compatible with every
color already placed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import kernels
from .garden import GardenRep, decompose_sp, from_signed_perms
from .signed_perm import (
    Permutation,
    SignedPermutation,
    quartet_members,
    quartet_of,
    to_cycles,
)

MAX_D = 8
MAX_TUPLE_CANDIDATES = 5000


def _check_d(d: int, max_d: int) -> None:
    if d < 1 or d > max_d:
        raise ValueError(f"d must be in 1..{max_d}, got {d}")


def enumerate_bc(d: int, max_d: int = MAX_D) -> Iterator[SignedPermutation]:
    """Every element of BC_d exactly once.

    Order: permutations in lexicographic order of their image tuples; for
    each, sign vectors in ``itertools.product((1, -1), repeat=d)`` order.
    """
    _check_d(d, max_d)
    sign_vectors = list(itertools.product((1, -1), repeat=d))
    for images in itertools.permutations(range(d)):
        perm = Permutation(images)
        for signs in sign_vectors:
            yield SignedPermutation(perm, signs)


def count_distinct_matrices(d: int, max_d: int = MAX_D) -> int:
    """Number of distinct matrices produced by ``enumerate_bc``."""
    return len({sp.to_matrix().tobytes() for sp in enumerate_bc(d, max_d)})


def _row_structure(sps: list[SignedPermutation], transpose: bool):
    """Column index and sign of the nonzero in each row of ``M`` (or ``M^T``)."""
    n, d = len(sps), sps[0].d
    cols = np.empty((n, d), dtype=np.int64)
    signs = np.empty((n, d), dtype=np.int64)
    for a, sp in enumerate(sps):
        for j, i in enumerate(sp.perm.images):
            if transpose:
                cols[a, j], signs[a, j] = i, sp.signs[i]
            else:
                cols[a, i], signs[a, i] = j, sp.signs[i]
    return cols, signs


def compatibility_masks(sps: list[SignedPermutation]) -> list[int]:
    """Bit ``b`` of entry ``a`` is set iff candidates ``a`` and ``b`` satisfy
    the off-diagonal Garden relations as colors ``I != J``."""
    left = kernels.pair_compat(*_row_structure(sps, transpose=False))
    right = kernels.pair_compat(*_row_structure(sps, transpose=True))
    compat = (left & right).astype(bool)
    masks = []
    for row in compat:
        bits = np.flatnonzero(row)
        masks.append(sum(1 << int(b) for b in bits))
    return masks


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _extend(prefix: tuple[int, ...], allowed: int, remaining: int, masks: list[int]):
    if remaining == 0:
        yield prefix
        return
    for b in _bits(allowed):
        yield from _extend(prefix + (b,), allowed & masks[b], remaining - 1, masks)


def _search_chunk(args) -> list[tuple[int, ...]]:
    firsts, n_colors, masks = args
    out = []
    for a in firsts:
        out.extend(_extend((a,), masks[a], n_colors - 1, masks))
    return out


def _candidates(n_colors: int, d: int, max_candidates: int) -> list[SignedPermutation]:
    if n_colors < 1:
        raise ValueError("N must be positive")
    size = 2**d * math.factorial(d)
    if size > max_candidates:
        raise ValueError(
            f"BC_{d} has {size} elements, above the search guard of {max_candidates}"
        )
    return list(enumerate_bc(d))


def garden_index_tuples(
    n_colors: int, d: int, jobs: int = 1, max_candidates: int = MAX_TUPLE_CANDIDATES
) -> tuple[list[SignedPermutation], list[tuple[int, ...]]]:
    """Candidates and all valid ordered tuples as candidate indices."""
    sps = _candidates(n_colors, d, max_candidates)
    if n_colors == 1:
        return sps, [(a,) for a in range(len(sps))]
    masks = compatibility_masks(sps)
    firsts = list(range(len(sps)))
    if jobs <= 1:
        return sps, _search_chunk((firsts, n_colors, masks))
    size = math.ceil(len(firsts) / jobs)
    chunks = [(firsts[k : k + size], n_colors, masks) for k in range(0, len(firsts), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_search_chunk, chunks))
    return sps, [t for part in parts for t in part]


def enumerate_garden_tuples(
    n_colors: int, d: int, jobs: int = 1, max_candidates: int = MAX_TUPLE_CANDIDATES
) -> Iterator[GardenRep]:
    """Every ordered tuple of signed permutation ``L`` matrices forming an
    exact Garden rep with ``R_I = L_I^T``, in the order induced by
    ``enumerate_bc``."""
    sps, tuples = garden_index_tuples(n_colors, d, jobs, max_candidates)
    for t in tuples:
        yield from_signed_perms([sps[a] for a in t])


class ClosureResult(NamedTuple):
    ok: bool
    counterexample: GardenRep | None


def closure_quartet(rep: GardenRep, tol: float = 1e-6) -> int | None:
    """Quartet id shared by the four permutation parts, or None if they are
    not exactly the members of one quartet."""
    if rep.N != 4 or rep.d != 4:
        raise ValueError(f"quartet closure needs N = 4 and d = 4, got N = {rep.N}, d = {rep.d}")
    perms = {decompose_sp(m, tol).perm for m in rep.L}
    ids = {quartet_of(p) for p in perms}
    if len(ids) != 1:
        return None
    k = ids.pop()
    return k if perms == set(quartet_members(k)) else None


def verify_quartet_closure(reps: Iterable[GardenRep]) -> ClosureResult:
    for rep in reps:
        if closure_quartet(rep) is None:
            return ClosureResult(False, rep)
    return ClosureResult(True, None)


@dataclass
class EnumerationReport:
    d: int
    N: int
    total_elements: int
    valid_tuples: int
    orbit_reduced: int
    quartet_histogram: dict[int, int] | None = None
    closure_ok: bool | None = None
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "N": self.N,
            "total_elements": self.total_elements,
            "valid_tuples": self.valid_tuples,
            "orbit_reduced": self.orbit_reduced,
        }
        if self.quartet_histogram is not None:
            out["quartet_histogram"] = {str(k): v for k, v in sorted(self.quartet_histogram.items())}
        if self.closure_ok is not None:
            out["quartet_closure"] = self.closure_ok
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.notes:
            out["notes"] = self.notes
        return out


def _orbit_key(sps: list[SignedPermutation]) -> frozenset:
    # unordered colors, each color up to an overall sign
    key = []
    for sp in sps:
        signs = sp.signs if sp.signs[0] == 1 else tuple(-s for s in sp.signs)
        key.append((sp.perm.images, signs))
    return frozenset(key)


def enumeration_report(n_colors: int, d: int, jobs: int = 1) -> EnumerationReport:
    """Counts for the ``(N, d)`` search, plus quartet data when ``d = 4``."""
    total = count_distinct_matrices(d)
    sps, tuples = garden_index_tuples(n_colors, d, jobs)
    orbits = {_orbit_key([sps[a] for a in t]) for t in tuples}
    report = EnumerationReport(d, n_colors, total, len(tuples), len(orbits))
    report.notes.append(
        f"N=1 reading: all {total} elements of BC_{d} are single-color representations"
    )
    if d == 4:
        hist: dict[int, int] = {k: 0 for k in range(1, 7)}
        for t in tuples:
            hist[quartet_of(sps[t[0]].perm)] += 1
        report.quartet_histogram = hist
        if n_colors == 4:
            closure = verify_quartet_closure(from_signed_perms([sps[a] for a in t]) for t in tuples)
            report.closure_ok = closure.ok
            if closure.counterexample is not None:
                report.counterexample = {
                    "perms": [to_cycles(decompose_sp(m).perm) for m in closure.counterexample.L]
                }
    return report
