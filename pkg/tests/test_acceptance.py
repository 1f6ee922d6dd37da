"""Acceptance criteria, one test per criterion.

Every criterion is exact (integer dimension comparisons or matrix
identities over exact fields); the oracles are independent of the code
paths they certify: periodic free resolutions and Kuenneth counts for
Tor, the James tensor-algebra count for loop spaces, full-group
relation elimination for composition products, and a last-letter
recursion for shuffles.  Each test prints one PASS line.
"""

import time

from opbar.linalg import CoeffField
from opbar.verify import (
    suite_bar_module,
    suite_commutative_identity,
    suite_compose_oracle,
    suite_extension,
    suite_loops,
    suite_module_functor,
    suite_shuffle,
    suite_stasheff,
)

Q = CoeffField.rationals()
F2 = CoeffField.prime(2)


def _assert_all(results, label, budget, elapsed):
    for name, ok, details in results:
        assert ok, "%s: %s failed: %s" % (label, name, details)
    assert elapsed < budget, "%s exceeded budget: %.1fs > %ds" % (label, elapsed, budget)
    print("PASS %s (%d checks, %.1fs)" % (label, len(results), elapsed))


def test_criterion_1_stasheff_consistency():
    t0 = time.time()
    results = suite_stasheff(arity=7)
    _assert_all(results, "criterion-1 stasheff arity-7 + eps dg-morphism", 30, time.time() - t0)


def test_criterion_2_bar_differential():
    t0 = time.time()
    results = suite_bar_module(arity=4, seed=2024, max_degree=12)
    _assert_all(
        results, "criterion-2 (delta+partial)^2=0: 10 random dgas + B_K arity 4", 60, time.time() - t0
    )


def test_criterion_3_module_functor_correspondence():
    t0 = time.time()
    results = suite_module_functor(arity=3, max_weight=3)
    _assert_all(
        results, "criterion-3 Sym_R(B_R, A) ~ B(A), R in {As, Com, K}, 2 fixtures each", 120, time.time() - t0
    )


def test_criterion_4_extension_isomorphisms():
    t0 = time.time()
    results = suite_extension(arity=3)
    _assert_all(
        results, "criterion-4 B_K o_K As ~ B_As and B_As o_As Com ~ B_Com (arity 3)", 60, time.time() - t0
    )


def test_criterion_5_shuffle_structure():
    t0 = time.time()
    results = suite_shuffle(seed=7, count=10, max_degree=10)
    _assert_all(
        results,
        "criterion-5 shuffle comm/assoc/derivation on 10 fixtures + independent shuffle",
        60,
        time.time() - t0,
    )


def test_criterion_6_categorical_identity():
    t0 = time.time()
    results = suite_commutative_identity(max_degree=10)
    _assert_all(
        results, "criterion-6 B(A) ~ N(C(A)) as dg-algebras + N(C_Com) ~ B_Com", 120, time.time() - t0
    )


def test_criterion_7_loop_space_spot_checks():
    t0 = time.time()
    results = suite_loops(max_degree=8)
    keep = [r for r in results if not r[0].startswith("loops.quasi")]
    _assert_all(
        keep, "criterion-7 James S^2 / Gamma[y_2] for S^3 / iterated B^2 tables", 300, time.time() - t0
    )


def test_criterion_8_quasi_isomorphism_invariance():
    t0 = time.time()
    results = [r for r in suite_loops(max_degree=8) if r[0].startswith("loops.quasi")]
    _assert_all(
        results, "criterion-8 minimal vs boundary S^2 models give identical tables [1,8]", 120, time.time() - t0
    )


def test_criterion_9_brute_force_oracles():
    t0 = time.time()
    results = suite_compose_oracle(seed=11, count=20)
    _assert_all(
        results, "criterion-9 composition/tensor dims vs exhaustive enumeration (20 fixtures)", 60, time.time() - t0
    )
