"""Garden Algebra residuals, verification and the Clifford construction.

A representation is a tuple of ``N`` pairs ``(L_I, R_I)`` of real ``d x d``
matrices satisfying, for all ``I, J``::

    L_I R_J + L_J R_I = 2 delta_IJ 1
    R_I L_J + R_J L_I = 2 delta_IJ 1

Two arithmetic backends share one residual definition. Integer or
``Fraction`` (object dtype) arrays are evaluated exactly; float arrays go
through the compiled kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .signed_perm import Permutation, SignedPermutation

DEFAULT_TOL = 1e-10


class NotSignedPermutation(ValueError):
    pass


def _as_stack(mats) -> np.ndarray:
    arr = np.asarray(mats)
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        return arr.astype(np.float64)
    if arr.dtype.kind == "O":
        return arr
    raise TypeError(f"unsupported matrix dtype {arr.dtype}")


@dataclass(frozen=True, eq=False)
class GardenRep:
    """``N`` pairs of ``d x d`` matrices, stored as ``(N, d, d)`` arrays.

    ``bosons`` and ``fermions`` optionally label the rows and columns of the
    ``L`` matrices. ``verified`` may only be set on reps whose residual is
    within ``DEFAULT_TOL`` (exactly zero for exact reps).
    """

    L: np.ndarray
    R: np.ndarray
    bosons: tuple[str, ...] | None = None
    fermions: tuple[str, ...] | None = None
    verified: bool = False
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        L, R = _as_stack(self.L), _as_stack(self.R)
        if L.ndim != 3 or L.shape[1] != L.shape[2]:
            raise ValueError(f"L must have shape (N, d, d), got {L.shape}")
        if L.shape != R.shape:
            raise ValueError(f"L and R shapes differ: {L.shape} vs {R.shape}")
        if L.shape[0] < 1 or L.shape[1] < 1:
            raise ValueError("N and d must be positive")
        if L.dtype != R.dtype:
            common = np.result_type(L.dtype, R.dtype)
            L, R = L.astype(common), R.astype(common)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "R", R)
        for name in ("bosons", "fermions"):
            labels = getattr(self, name)
            if labels is not None:
                labels = tuple(labels)
                if len(labels) != L.shape[1]:
                    raise ValueError(f"{name} needs {L.shape[1]} labels, got {len(labels)}")
                object.__setattr__(self, name, labels)
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.verified:
            res = garden_residual(self)
            if (res != 0) if self.exact else (res > DEFAULT_TOL):
                raise ValueError(f"rep flagged verified but residual is {res}")

    @property
    def N(self) -> int:
        return self.L.shape[0]

    @property
    def d(self) -> int:
        return self.L.shape[1]

    @property
    def exact(self) -> bool:
        return self.L.dtype.kind in "iO"

    def to_float(self) -> "GardenRep":
        return GardenRep(
            self.L.astype(np.float64), self.R.astype(np.float64), self.bosons, self.fermions
        )

    def swapped(self) -> "GardenRep":
        """The rep with the roles of every ``L_I`` and ``R_I`` exchanged."""
        return GardenRep(self.R, self.L, self.fermions, self.bosons)

    def __eq__(self, other):
        if not isinstance(other, GardenRep):
            return NotImplemented
        return (
            self.L.shape == other.L.shape
            and bool(np.all(self.L == other.L))
            and bool(np.all(self.R == other.R))
        )

    __hash__ = None

    def to_json(self) -> dict:
        out = {"N": self.N, "d": self.d, "L": _matrices_to_json(self.L), "R": _matrices_to_json(self.R)}
        if self.bosons is not None:
            out["bosons"] = list(self.bosons)
        if self.fermions is not None:
            out["fermions"] = list(self.fermions)
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GardenRep":
        L = _matrices_from_json(obj["L"])
        R = _matrices_from_json(obj["R"])
        rep = cls(L, R, obj.get("bosons"), obj.get("fermions"), notes=tuple(obj.get("notes", ())))
        if "N" in obj and obj["N"] != rep.N or "d" in obj and obj["d"] != rep.d:
            raise ValueError(f"declared N/d ({obj.get('N')}, {obj.get('d')}) do not match matrices")
        return rep


def _entry_to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.integer, int)):
        return int(x)
    return float(x)


def _matrices_to_json(arr: np.ndarray) -> list:
    return [[[_entry_to_json(x) for x in row] for row in m] for m in arr]


def _matrices_from_json(data) -> np.ndarray:
    flat = [x for m in data for row in m for x in row]
    if any(isinstance(x, str) for x in flat):
        arr = np.array([[[Fraction(x) for x in row] for row in m] for m in data], dtype=object)
    elif any(isinstance(x, float) for x in flat):
        arr = np.array(data, dtype=np.float64)
    else:
        arr = np.array(data, dtype=np.int64)
    if arr.ndim != 3:
        raise ValueError("matrix list must be a list of square row-major matrices")
    return arr


def from_signed_perms(sps: Sequence[SignedPermutation], **kwargs) -> GardenRep:
    """Exact rep with ``L_I = to_matrix(sp_I)`` and ``R_I = L_I^T``."""
    L = np.stack([sp.to_matrix() for sp in sps])
    return GardenRep(L, L.transpose(0, 2, 1).copy(), **kwargs)


def residual_blocks(rep: GardenRep) -> np.ndarray:
    """Residual blocks with shape ``(pairs, 2, d, d)`` in the kernel layout.

    Generic numpy evaluation, exact for integer and ``Fraction`` entries.
    """
    L, R = rep.L, rep.R
    n, d = rep.N, rep.d
    eye2 = 2 * np.eye(d, dtype=np.int64)
    blocks = []
    for i in range(n):
        for j in range(i, n):
            a = L[i] @ R[j] + L[j] @ R[i]
            b = R[i] @ L[j] + R[j] @ L[i]
            if i == j:
                a, b = a - eye2, b - eye2
            blocks.append(np.stack([a, b]))
    return np.stack(blocks)


def garden_residual(rep: GardenRep):
    """Sum over ``I <= J`` of the squared Frobenius norms of both relations.

    Zero exactly when the rep satisfies the Garden Algebra. Exact reps
    return an ``int`` or ``Fraction``; float reps return a ``float``.
    """
    if rep.exact:
        total = np.sum(residual_blocks(rep) ** 2)
        return Fraction(total) if isinstance(total, Fraction) else int(total)
    r = kernels.residual_vector(rep.L, rep.R)
    return float(r @ r)


def is_garden_rep(rep: GardenRep, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(garden_residual(rep) <= tol)


@dataclass(frozen=True)
class GammaHatSet:
    """``N`` block matrices ``[[0, L_I], [R_I, 0]]`` of size ``2d``."""

    gammas: np.ndarray

    @property
    def N(self) -> int:
        return self.gammas.shape[0]

    @property
    def size(self) -> int:
        return self.gammas.shape[1]


def build_gamma_hats(rep: GardenRep) -> GammaHatSet:
    n, d = rep.N, rep.d
    g = np.zeros((n, 2 * d, 2 * d), dtype=rep.L.dtype)
    g[:, :d, d:] = rep.L
    g[:, d:, :d] = rep.R
    return GammaHatSet(g)


def clifford_deviation(g: GammaHatSet):
    """``max_{I,J} |{g_I, g_J} - 2 delta_IJ 1|`` over all entries."""
    gs = g.gammas
    eye2 = 2 * np.eye(g.size, dtype=np.int64)
    worst = 0
    for i in range(g.N):
        for j in range(i, g.N):
            dev = gs[i] @ gs[j] + gs[j] @ gs[i]
            if i == j:
                dev = dev - eye2
            worst = max(worst, np.max(np.abs(dev)))
    return worst


def clifford_check(g: GammaHatSet, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(clifford_deviation(g) <= tol)


def clifford_tolerance(tol: float) -> float:
    """Max-entry tolerance matched to a residual tolerance.

    Every residual entry is bounded by the square root of the summed squares,
    so ``garden_residual <= tol`` implies ``clifford_check(.., sqrt(tol))``.
    """
    return math.sqrt(tol)


def decompose_sp(m, tol: float = 1e-6) -> SignedPermutation:
    """Split a near signed-permutation matrix into ``S @ P``.

    Raises ``NotSignedPermutation`` unless every row and column has exactly
    one entry within ``tol`` of +-1 and all others within ``tol`` of 0.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSignedPermutation(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    unit = np.abs(np.abs(m) - 1.0) <= tol
    zero = np.abs(m) <= tol
    images = [0] * d
    signs = [1] * d
    for j in range(d):
        rows = np.flatnonzero(unit[:, j])
        if len(rows) != 1 or not np.all(zero[np.arange(d) != rows[0], j]):
            raise NotSignedPermutation(f"column {j + 1} is not a signed unit vector")
        images[j] = int(rows[0])
        signs[rows[0]] = 1 if m[rows[0], j] > 0 else -1
    if sorted(images) != list(range(d)):
        raise NotSignedPermutation("two columns share the same nonzero row")
    return SignedPermutation(Permutation(tuple(images)), tuple(signs))
