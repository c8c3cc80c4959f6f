"""Permutations and signed permutations (the hyperoctahedral group BC_d).

Conventions used throughout the package:

* Cycles are read left to right: ``(234)`` sends 2 to 3, 3 to 4 and 4 to 2.
* ``compose(a, b)`` applies ``a`` first, then ``b``.
* ``to_matrix`` uses the column action ``M @ e_j = signs[s(j)] * e_{s(j)}``,
  so the signs sit on the rows, ``M = S @ P``. With these choices
  ``to_matrix(compose(a, b)) == to_matrix(b) @ to_matrix(a)``.

Indices are 0-based internally; cycle strings and JSON images are 1-based.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CycleParseError",
    "Permutation",
    "SignedPermutation",
    "QUARTETS",
    "STAR_QUARTET",
    "parse_cycles",
    "to_cycles",
    "compose",
    "inverse",
    "star",
    "quartet_of",
    "quartet_members",
    "star_quartet",
    "to_matrix",
    "identity",
    "all_permutations",
]


class CycleParseError(ValueError):
    """Raised for malformed cycle notation; ``token`` is the offending piece."""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message}: {token!r}")
        self.token = token


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0..d-1}`` stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"{images} is not a permutation of 0..{len(images) - 1}")
        object.__setattr__(self, "images", images)

    @classmethod
    def from_images1(cls, images: Iterable[int]) -> "Permutation":
        """Build from 1-based images, e.g. ``[1, 3, 4, 2]`` for (234)."""
        return cls(tuple(int(i) - 1 for i in images))

    @property
    def d(self) -> int:
        return len(self.images)

    @property
    def images1(self) -> list[int]:
        return [i + 1 for i in self.images]

    def __call__(self, j: int) -> int:
        return self.images[j]

    def __str__(self) -> str:
        return to_cycles(self)

    def is_identity(self) -> bool:
        return all(i == j for j, i in enumerate(self.images))


@dataclass(frozen=True)
class SignedPermutation:
    """A permutation together with one sign per row of its matrix."""

    perm: Permutation
    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != self.perm.d:
            raise ValueError("signs and permutation have different lengths")
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be +1 or -1, got {signs}")
        object.__setattr__(self, "signs", signs)

    @property
    def d(self) -> int:
        return self.perm.d

    def to_matrix(self) -> np.ndarray:
        return to_matrix(self)

    def to_json(self) -> dict:
        return {"perm": self.perm.images1, "signs": list(self.signs)}

    @classmethod
    def from_json(cls, obj: dict) -> "SignedPermutation":
        return cls(Permutation.from_images1(obj["perm"]), tuple(obj["signs"]))


def identity(d: int) -> Permutation:
    return Permutation(tuple(range(d)))


def all_permutations(d: int) -> list[Permutation]:
    """All of S_d in lexicographic order of the image tuples."""
    return [Permutation(p) for p in itertools.permutations(range(d))]


_TOKEN = re.compile(r"\(([^()]*)\)")


def _cycle_elements(body: str, d: int) -> list[int]:
    if body == "":
        return []
    if "," in body or " " in body.strip():
        parts = [p for p in re.split(r"[,\s]+", body.strip()) if p]
    else:
        # compact form: one character per element, only meaningful for d <= 9
        parts = list(body)
    out = []
    for part in parts:
        if not part.isdigit():
            raise CycleParseError("non-numeric cycle element", part)
        k = int(part)
        if not 1 <= k <= d:
            raise CycleParseError(f"element out of range 1..{d}", part)
        out.append(k - 1)
    return out


def parse_cycles(text: str, d: int) -> Permutation:
    """Parse a product of disjoint cycles such as ``"(12)(34)"``.

    ``"()"`` is the identity. Elements are single digits, or comma separated
    (``"(1,10,3)"``) when ``d > 9``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    text = text.strip()
    if not text:
        raise CycleParseError("empty cycle string", text)
    images = list(range(d))
    seen: set[int] = set()
    pos = 0
    for match in _TOKEN.finditer(text):
        if match.start() != pos:
            raise CycleParseError("unexpected characters", text[pos : match.start()])
        pos = match.end()
        cycle = _cycle_elements(match.group(1), d)
        for k in cycle:
            if k in seen:
                raise CycleParseError("element repeated across cycles", str(k + 1))
            seen.add(k)
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            images[a] = b
    if pos != len(text):
        raise CycleParseError("unexpected characters", text[pos:])
    return Permutation(tuple(images))


def _cycle_words(p: Permutation) -> list[list[int]]:
    words, seen = [], set()
    for start in range(p.d):
        if start in seen or p.images[start] == start:
            continue
        word, k = [], start
        while k not in seen:
            seen.add(k)
            word.append(k)
            k = p.images[k]
        words.append(word)
    return words


def to_cycles(p: Permutation) -> str:
    """Canonical cycle string: each cycle starts at its smallest element."""
    words = _cycle_words(p)
    if not words:
        return "()"
    sep = "," if p.d > 9 else ""
    return "".join("(" + sep.join(str(k + 1) for k in w) + ")" for w in words)


def compose(a, b):
    """Apply ``a`` first, then ``b``.

    Works on ``Permutation`` or ``SignedPermutation`` operands; for signed
    permutations the result satisfies
    ``to_matrix(compose(a, b)) == to_matrix(b) @ to_matrix(a)``.
    """
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} != {b.d}")
    if isinstance(a, SignedPermutation) and isinstance(b, SignedPermutation):
        perm = compose(a.perm, b.perm)
        b_inv = inverse(b.perm).images
        signs = tuple(b.signs[i] * a.signs[b_inv[i]] for i in range(a.d))
        return SignedPermutation(perm, signs)
    if isinstance(a, Permutation) and isinstance(b, Permutation):
        return Permutation(tuple(b.images[a.images[j]] for j in range(a.d)))
    raise TypeError("compose expects two Permutations or two SignedPermutations")


def inverse(p):
    """Group inverse; for signed permutations this is the matrix transpose."""
    if isinstance(p, SignedPermutation):
        return SignedPermutation(inverse(p.perm), tuple(p.signs[i] for i in p.perm.images))
    inv = [0] * p.d
    for j, i in enumerate(p.images):
        inv[i] = j
    return Permutation(tuple(inv))


def star(p: Permutation) -> Permutation:
    """Read every cycle word of ``p`` right to left.

    ``star(parse_cycles("(234)", 4))`` sends 2 to 4, 4 to 3 and 3 to 2.
    """
    images = list(range(p.d))
    for word in _cycle_words(p):
        rev = word[::-1]
        for a, b in zip(rev, rev[1:] + rev[:1]):
            images[a] = b
    return Permutation(tuple(images))


# Membership table of the six quartets of S_4, indexed 1..6.
_QUARTET_CYCLES = {
    1: ("(123)", "(134)", "(142)", "(243)"),
    2: ("(124)", "(132)", "(143)", "(234)"),
    3: ("(14)", "(23)", "(1243)", "(1342)"),
    4: ("(13)", "(24)", "(1234)", "(1432)"),
    5: ("(12)", "(34)", "(1324)", "(1423)"),
    6: ("()", "(12)(34)", "(13)(24)", "(14)(23)"),
}

QUARTETS: dict[int, frozenset[Permutation]] = {
    k: frozenset(parse_cycles(c, 4) for c in cycles) for k, cycles in _QUARTET_CYCLES.items()
}

STAR_QUARTET = {1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6}

_QUARTET_LOOKUP = {p: k for k, members in QUARTETS.items() for p in members}


def quartet_members(k: int) -> frozenset[Permutation]:
    if k not in QUARTETS:
        raise ValueError(f"quartet id must be in 1..6, got {k}")
    return QUARTETS[k]


def quartet_of(p: Permutation) -> int:
    """Quartet id (1..6) of an element of S_4."""
    if p.d != 4:
        raise ValueError(f"quartets are defined for d = 4 only, got d = {p.d}")
    return _QUARTET_LOOKUP[p]


def star_quartet(k: int) -> int:
    if k not in STAR_QUARTET:
        raise ValueError(f"quartet id must be in 1..6, got {k}")
    return STAR_QUARTET[k]


def to_matrix(sp: SignedPermutation | Permutation) -> np.ndarray:
    """Integer matrix with ``M[s(j), j] = signs[s(j)]``."""
    if isinstance(sp, Permutation):
        sp = SignedPermutation(sp, (1,) * sp.d)
    d = sp.d
    m = np.zeros((d, d), dtype=np.int64)
    for j, i in enumerate(sp.perm.images):
        m[i, j] = sp.signs[i]
    return m


def signed_from_lists(images1: Sequence[int], signs: Sequence[int]) -> SignedPermutation:
    return SignedPermutation(Permutation.from_images1(images1), tuple(signs))
