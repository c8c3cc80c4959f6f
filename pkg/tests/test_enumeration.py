import math

import numpy as np
import pytest

from susyrep.enumeration import (
    closure_quartet,
    count_distinct_matrices,
    enumerate_bc,
    enumerate_garden_tuples,
    enumeration_report,
    garden_index_tuples,
    verify_quartet_closure,
)
from susyrep.garden import decompose_sp, from_signed_perms, garden_residual
from susyrep.signed_perm import (
    SignedPermutation,
    parse_cycles,
    quartet_of,
    star,
    star_quartet,
    all_permutations,
)

from conftest import ORBIT_REDUCED_N4_D4, VALID_TUPLES


def brute_force_count(n_colors, d):
    """Nested search over BC_d using plain matrix products, pruning any
    partial tuple that already violates a pairwise relation."""
    mats = np.stack([sp.to_matrix() for sp in enumerate_bc(d)])
    k = len(mats)

    def compatible(a):
        x = np.einsum("ij,bkj->bik", mats[a], mats)  # L_a L_b^T
        y = np.einsum("ji,bjk->bik", mats[a], mats)  # L_a^T L_b
        return set(
            np.flatnonzero(
                np.all(x + x.transpose(0, 2, 1) == 0, axis=(1, 2))
                & np.all(y + y.transpose(0, 2, 1) == 0, axis=(1, 2))
            ).tolist()
        )

    partners = [compatible(a) for a in range(k)]

    def grow(allowed, remaining):
        if remaining == 0:
            return 1
        return sum(grow(allowed & partners[b], remaining - 1) for b in allowed)

    return sum(grow(partners[a], n_colors - 1) for a in range(k))


@pytest.mark.parametrize("d, count", [(1, 2), (2, 8), (3, 48), (4, 384)])
def test_bc_counts(d, count):
    elems = list(enumerate_bc(d))
    assert len(elems) == count == 2**d * math.factorial(d)
    assert len(set(elems)) == count
    assert count_distinct_matrices(d) == count


def test_bc_order_is_documented():
    elems = list(enumerate_bc(2))
    assert [(e.perm.images, e.signs) for e in elems[:5]] == [
        ((0, 1), (1, 1)),
        ((0, 1), (1, -1)),
        ((0, 1), (-1, 1)),
        ((0, 1), (-1, -1)),
        ((1, 0), (1, 1)),
    ]


def test_bc_guard():
    with pytest.raises(ValueError):
        next(enumerate_bc(9))
    with pytest.raises(ValueError):
        next(enumerate_bc(0))
    with pytest.raises(ValueError):
        next(enumerate_garden_tuples(2, 6))


def test_singletons_all_valid():
    for d in (1, 2, 3):
        assert sum(1 for _ in enumerate_garden_tuples(1, d)) == 2**d * math.factorial(d)


def test_n2_d1_has_no_tuples():
    # the 4 candidate pairs of +-1 all fail the off-diagonal relation
    pairs = [(a, b) for a in (1, -1) for b in (1, -1)]
    assert all(2 * a * b != 0 for a, b in pairs)
    assert list(enumerate_garden_tuples(2, 1)) == []
    assert brute_force_count(2, 1) == 0


@pytest.mark.parametrize("n_colors", [2, 3, 4])
def test_counts_match_brute_force_fixture(n_colors):
    _, tuples = garden_index_tuples(n_colors, 4)
    assert len(tuples) == VALID_TUPLES[(n_colors, 4)]


def test_brute_force_oracle_reproduces_fixture():
    assert brute_force_count(4, 4) == VALID_TUPLES[(4, 4)]
    assert brute_force_count(2, 4) == VALID_TUPLES[(2, 4)]


def test_every_yielded_tuple_is_exact(bc4_tuples):
    sps, tuples = bc4_tuples
    for t in tuples[::97]:
        rep = from_signed_perms([sps[a] for a in t])
        assert garden_residual(rep) == 0


def test_deterministic():
    a = [r.L.tobytes() for r in enumerate_garden_tuples(3, 4)]
    b = [r.L.tobytes() for r in enumerate_garden_tuples(3, 4)]
    assert a == b


def test_parallel_matches_serial():
    _, serial = garden_index_tuples(3, 4)
    _, parallel = garden_index_tuples(3, 4, jobs=2)
    assert serial == parallel


def test_quartet_closure_examples():
    q1 = ["(123)", "(134)", "(142)", "(243)"]
    assert verify_quartet_closure([]).ok
    good = None
    for rep in enumerate_garden_tuples(4, 4):
        if closure_quartet(rep) == 1:
            good = rep
            break
    assert good is not None
    assert {decompose_sp(m).perm for m in good.L} == {parse_cycles(c, 4) for c in q1}
    assert verify_quartet_closure([good]) == (True, None)

    mixed_perms = ["(123)", "(124)", "(134)", "(142)"]
    mixed = from_signed_perms([SignedPermutation(parse_cycles(c, 4), (1,) * 4) for c in mixed_perms])
    result = verify_quartet_closure([good, mixed])
    assert not result.ok and result.counterexample is mixed
    # (124) sits in quartet 2, so no choice of signs makes this tuple valid
    assert garden_residual(mixed) > 0


def test_full_closure_and_histogram():
    report = enumeration_report(4, 4)
    assert report.total_elements == 384
    assert report.valid_tuples == VALID_TUPLES[(4, 4)]
    assert report.orbit_reduced == ORBIT_REDUCED_N4_D4
    assert report.closure_ok is True and report.counterexample is None
    assert sum(report.quartet_histogram.values()) == report.valid_tuples
    assert set(report.quartet_histogram) == set(range(1, 7))


@pytest.mark.parametrize("p", all_permutations(4), ids=str)
def test_hodge_consistency(p):
    assert quartet_of(star(p)) == star_quartet(quartet_of(p))


def test_star_of_valid_tuple_lands_in_dual_quartet(bc4_tuples):
    sps, tuples = bc4_tuples
    for t in tuples[::500]:
        perms = [sps[a].perm for a in t]
        k = quartet_of(perms[0])
        starred = {star(p) for p in perms}
        assert {quartet_of(p) for p in starred} == {star_quartet(k)}
