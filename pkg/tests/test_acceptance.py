"""End-to-end acceptance checks, one per numbered criterion.

Each test prints a single ``[Cn] PASS|FAIL`` line (visible even without
``-s``) and then asserts the same condition.
"""

import io
import time

import numpy as np
import pytest

from susyrep import adinkra
from susyrep.cli import main
from susyrep.enumeration import closure_quartet, enumeration_report, garden_index_tuples
from susyrep.garden import (
    GardenRep,
    build_gamma_hats,
    clifford_check,
    clifford_tolerance,
    garden_residual,
)
from susyrep.signed_perm import (
    all_permutations,
    parse_cycles,
    quartet_of,
    star,
    star_quartet,
)
from susyrep.solver import SolveProblem, cost_gradient, minimize

from conftest import VALID_TUPLES, random_orthogonal

# Quartet table typed out independently of signed_perm.QUARTETS.
QUARTET_TABLE = {
    1: ["(123)", "(134)", "(142)", "(243)"],
    2: ["(124)", "(132)", "(143)", "(234)"],
    3: ["(14)", "(23)", "(1243)", "(1342)"],
    4: ["(13)", "(24)", "(1234)", "(1432)"],
    5: ["(12)", "(34)", "(1324)", "(1423)"],
    6: ["()", "(12)(34)", "(13)(24)", "(14)(23)"],
}
STAR_TABLE = {1: 2, 2: 1, 3: 3, 4: 4, 5: 5, 6: 6}


@pytest.fixture
def verdict(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{tag}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def test_c1_bc4_count(verdict):
    buf = io.StringIO()
    t0 = time.perf_counter()
    code = main(["enumerate", "--d", "4", "--count-only"], stdout=buf)
    elapsed = time.perf_counter() - t0
    ok = code == 0 and buf.getvalue() == "384\n" and elapsed < 1.0
    verdict("C1", ok, f"count={buf.getvalue().strip()} exit={code} t={elapsed:.3f}s")


def test_c2_quartet_partition(verdict):
    seen = []
    mismatches = []
    for k, cycles in QUARTET_TABLE.items():
        for c in cycles:
            p = parse_cycles(c, 4)
            seen.append(p)
            if quartet_of(p) != k:
                mismatches.append(c)
    ok = not mismatches and len(set(seen)) == 24 and set(seen) == set(all_permutations(4))
    verdict("C2", ok, f"24 elements in 6 quartets, mismatches={mismatches}")


def test_c3_star_table(verdict):
    bad = [p for p in all_permutations(4) if quartet_of(star(p)) != star_quartet(quartet_of(p))]
    table_ok = all(star_quartet(k) == v for k, v in STAR_TABLE.items())
    verdict("C3", not bad and table_ok, f"violations={len(bad)} table_ok={table_ok}")


def test_c4_quartet_closure(verdict):
    t0 = time.perf_counter()
    report = enumeration_report(4, 4)
    elapsed = time.perf_counter() - t0
    ok = report.closure_ok is True and report.counterexample is None and elapsed < 60
    verdict("C4", ok, f"closure={report.closure_ok} tuples={report.valid_tuples} t={elapsed:.1f}s")


def test_c5_enumeration_fixture(verdict):
    counts = {key: len(garden_index_tuples(*key)[1]) for key in VALID_TUPLES}
    ok = counts == VALID_TUPLES
    verdict("C5", ok, f"(N=4,d=4) count={counts[(4, 4)]} pinned={VALID_TUPLES[(4, 4)]}")


def test_c6_chiral_tables(verdict, chiral):
    def row(boson, color):
        return chiral.L[color, chiral.bosons.index(boson)].tolist()

    d1b = row("B", 0)
    daf = [row("F", a) for a in range(4)]
    expected_daf = [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    ok = d1b == [0, 0, 0, 1] and daf == expected_daf and chiral.exact
    verdict("C6", ok, f"D1B={d1b} DaF={daf}")


def test_c7_reduced_multiplets(verdict, chiral, vector):
    parts = []
    ok = True
    for name, rep in (("chiral", chiral), ("vector", vector)):
        res = garden_residual(rep)
        cliff = clifford_check(build_gamma_hats(rep), 0)
        report = adinkra.validate(adinkra.from_rep(rep))
        ok &= res == 0 and cliff and report.ok
        parts.append(f"{name}: residual={res} clifford={cliff} violations={len(report.violations)}")
    verdict("C7", ok, "; ".join(parts))


def test_c8_garden_clifford_equivalence(verdict, sample_valid_reps):
    rng = np.random.default_rng(2024)
    tol = 1e-12
    mismatches = valid = 0
    for k in range(500):
        base = sample_valid_reps[k % len(sample_valid_reps)]
        if k % 4 == 0:
            a, b = random_orthogonal(rng, 4), random_orthogonal(rng, 4)
            L, R = a @ base.L @ b, b.T @ base.R @ a.T
        else:
            # well-conditioned general linear change of basis
            a = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
            b = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
            L, R = a @ base.L @ b, np.linalg.inv(b) @ base.R @ np.linalg.inv(a)
        if k % 2:
            scale = 10 ** rng.uniform(-5, -1)
            target = L if rng.random() < 0.5 else R
            target += rng.normal(scale=scale, size=target.shape)
        rep = GardenRep(L, R)
        lhs = garden_residual(rep) <= tol
        rhs = clifford_check(build_gamma_hats(rep), clifford_tolerance(tol))
        valid += lhs
        mismatches += lhs != rhs
    ok = mismatches == 0 and 0 < valid < 500
    verdict("C8", ok, f"500 reps ({valid} within tol), mismatches={mismatches}")


def _batched_cost(L, R):
    """Cost of a batch of (N, d, d) pairs via einsum; independent of the kernels."""
    n, d = L.shape[1], L.shape[2]
    eye = np.eye(d)
    iu, ju = np.triu_indices(n)
    total = 0.0
    for a, b in ((L, R), (R, L)):
        p = np.einsum("bixy,bjyz->bijxz", a, b)
        s = p + p.transpose(0, 2, 1, 3, 4)
        s[:, np.arange(n), np.arange(n)] -= 2 * eye
        total = total + (s[:, iu, ju] ** 2).sum(axis=(1, 2, 3))
    return total


def test_c9_gradient_check(verdict):
    rng = np.random.default_rng(99)
    h = 1e-6
    worst = 0.0
    count = 0
    t0 = time.perf_counter()
    for n in range(1, 5):
        for d in range(1, 5):
            for _ in range(63):
                L, R = rng.uniform(-1, 1, size=(2, n, d, d))
                x = np.concatenate([L.ravel(), R.ravel()])
                m = x.size
                steps = np.concatenate([np.eye(m) * h, -np.eye(m) * h])
                xs = x + steps
                half = n * d * d
                c = _batched_cost(xs[:, :half].reshape(-1, n, d, d), xs[:, half:].reshape(-1, n, d, d))
                fd = (c[:m] - c[m:]) / (2 * h)
                gL, gR = cost_gradient(GardenRep(L, R))
                g = np.concatenate([gL.ravel(), gR.ravel()])
                rel = np.abs(g - fd) / np.maximum(np.abs(fd), 1.0)
                worst = max(worst, float(rel.max()))
                count += 1
    elapsed = time.perf_counter() - t0
    ok = count >= 1000 and worst < 1e-6 and elapsed < 30
    verdict("C9", ok, f"instances={count} worst_rel={worst:.2e} t={elapsed:.1f}s")


def test_c10_solver_recovery(verdict):
    reached = rounded = verified = closed = 0
    slowest = 0.0
    best = np.inf
    for seed in range(100):
        rep = minimize(SolveProblem(4, 4, seed=seed))
        slowest = max(slowest, rep.seconds)
        best = min(best, rep.final_cost)
        if rep.final_cost < 1e-9:
            reached += 1
            if rep.rounded is not None:
                rounded += 1
                verified += garden_residual(rep.rounded) == 0 and rep.verified
                closed += closure_quartet(rep.rounded) is not None
    ok = reached >= 1 and verified == rounded and closed == rounded and slowest < 5
    verdict(
        "C10",
        ok,
        f"reached={reached}/100 best={best:.1e} rounded={rounded} verified={verified} "
        f"closed={closed} slowest={slowest:.2f}s",
    )


def test_c11_masked_solve(verdict, sample_valid_reps):
    target = sample_valid_reps[0]
    results = []
    for _ in range(2):
        rep = minimize(
            SolveProblem(4, 4, fixed_L=np.ones((4, 4, 4), bool), values_L=target.L.astype(float), seed=11)
        )
        results.append(rep.iterate.R)
    err = float(np.abs(results[0] - target.L.transpose(0, 2, 1)).max())
    ok = err < 1e-9 and np.array_equal(results[0], results[1])
    verdict("C11", ok, f"max|R - L^T|={err:.1e} deterministic={np.array_equal(results[0], results[1])}")
