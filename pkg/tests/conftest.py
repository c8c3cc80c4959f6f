import math

import numpy as np
import pytest

from susyrep import dimred, kernels
from susyrep.enumeration import garden_index_tuples
from susyrep.garden import from_signed_perms

# Pinned once from the brute-force oracle in test_enumeration.py.
VALID_TUPLES = {(1, 4): 384, (2, 4): 4608, (3, 4): 18432, (4, 4): 36864, (2, 1): 0}
ORBIT_REDUCED_N4_D4 = 96

# Quartet ids observed for the reduced multiplets (column-action convention).
CHIRAL_QUARTET = 2
VECTOR_QUARTET = 3


def oracle_cost(L, R):
    """Loop-based re-computation of the Garden residual, independent of the
    kernels; summed with fsum."""
    n, d, _ = np.shape(L)
    terms = []
    for i in range(n):
        for j in range(i, n):
            for a, b in ((L, R), (R, L)):
                m = np.asarray(a[i]) @ np.asarray(b[j]) + np.asarray(a[j]) @ np.asarray(b[i])
                m = m - 2 * (i == j) * np.eye(d)
                terms.extend((m * m).ravel().tolist())
    return math.fsum(terms)


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


@pytest.fixture(scope="session")
def conventions():
    return dimred.load_conventions()


@pytest.fixture(scope="session")
def chiral(conventions):
    return dimred.reduce_chiral(conventions)


@pytest.fixture(scope="session")
def vector(conventions):
    return dimred.reduce_vector(conventions)


@pytest.fixture(scope="session")
def bc4_tuples():
    return garden_index_tuples(4, 4)


@pytest.fixture(scope="session")
def sample_valid_reps(bc4_tuples):
    sps, tuples = bc4_tuples
    rng = np.random.default_rng(7)
    picks = rng.choice(len(tuples), size=40, replace=False)
    return [from_signed_perms([sps[a] for a in tuples[k]]) for k in picks]


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))
