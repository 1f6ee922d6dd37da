import pytest

from opbar import trees
from opbar.linalg import CoeffField
from opbar.operads import (
    OperadMorphism,
    alpha_to_com,
    associative_operad,
    check_operad,
    commutative_operad,
    compose_morphisms,
    eps_kills_stasheff_differential,
    eps_to_assoc,
    identity_morphism,
    operad_morphism_check,
    stasheff_d_squared_vanishes,
    stasheff_generator_diff,
    stasheff_operad,
    stasheff_sign,
    stasheff_unique_sign_convention,
    free_operad,
)

Q = CoeffField.rationals()
F2 = CoeffField.prime(2)


def test_basic_dims():
    As = associative_operad(Q, 3)
    Com = commutative_operad(Q, 3)
    assert As.component(3).total_dim() == 6
    assert Com.component(3).total_dim() == 1


def test_structural_checks_as_com():
    check_operad(associative_operad(Q, 4), 4, deep=True)
    check_operad(commutative_operad(F2, 4), 4, deep=True)


def test_com_all_products_hit_generator():
    Com = commutative_operad(Q, 3)
    for s in (1, 2):
        for t in (1, 2):
            if s + t - 1 > 3:
                continue
            for p in Com.basis_triples(s):
                for q in Com.basis_triples(t):
                    for i in range(1, s + 1):
                        assert Com.compose_partial(p, i, q) == {"e": Q.one()}


def test_free_operad_binary_dims():
    # one binary generator: arity 3 has 2 shapes x 6 labelings = 12
    op = free_operad(Q, {2: [("m", 0)]}, 3)
    assert op.component(3).total_dim() == 12
    check_operad(op, 3, deep=True)


def test_grafting_distinct_and_unit():
    op = free_operad(Q, {2: [("m", 0)]}, 3)
    m2 = trees.corolla("m", 2)
    left = op.compose_partial((2, 0, m2), 1, (2, 0, m2))
    right = op.compose_partial((2, 0, m2), 2, (2, 0, m2))
    assert left != right
    unit = op.unit_triple()
    assert op.compose_partial((2, 0, m2), 1, unit) == {m2: Q.one()}
    assert op.compose_partial(unit, 1, (2, 0, m2)) == {m2: Q.one()}


def test_stasheff_derivative_small():
    # d(mu_2) = 0
    assert stasheff_generator_diff(Q, 2) == {}
    # d(mu_3) = -(m2 o_1 m2) + (m2 o_2 m2)
    d3 = stasheff_generator_diff(Q, 3)
    t1 = trees.graft(trees.corolla(("mu", 2), 2), 1, trees.corolla(("mu", 2), 2), {("mu", 2): 0})[1]
    t2 = trees.graft(trees.corolla(("mu", 2), 2), 2, trees.corolla(("mu", 2), 2), {("mu", 2): 0})[1]
    assert d3 == {t1: Q.of_int(-1), t2: Q.one()}


def test_stasheff_d_squared_arity7():
    assert stasheff_d_squared_vanishes(Q, 7)
    assert stasheff_d_squared_vanishes(F2, 7)


def test_sign_convention_unique_up_to_global_sign():
    sols = stasheff_unique_sign_convention(Q, 5)
    families = {s[:6] for s in sols}
    assert len(families) == 2
    pinned = (1, 0, 1, 1, 0, 0)  # i + t + it + s "+ t": exponent i(t+1)+s+t
    # the pinned convention must be among the solutions
    found = any(
        all(stasheff_sign(s, t, i) == (a * i + b * s + c * t + d * i * t + e * i * s + f * s * t + g) % 2
            for s in range(2, 5) for t in range(2, 5) for i in range(1, s + 1))
        for (a, b, c, d, e, f, g) in sols
    )
    assert found


def test_stasheff_operad_checks():
    K = stasheff_operad(Q, 4)
    check_operad(K, 3, deep=True)
    check_operad(K, 4)
    dims = {n: K.component(n).total_dim() for n in K.sigma.arities()}
    assert dims == {1: 1, 2: 2, 3: 18, 4: 264}


def test_morphisms():
    K = stasheff_operad(Q, 4)
    As = associative_operad(Q, 4)
    Com = commutative_operad(Q, 4)
    eps = eps_to_assoc(K, As)
    alpha = alpha_to_com(As, Com)
    assert operad_morphism_check(eps, 4)
    assert operad_morphism_check(alpha, 4)
    assert operad_morphism_check(compose_morphisms(alpha, eps), 4)
    assert operad_morphism_check(identity_morphism(As), 4)
    assert eps_kills_stasheff_differential(Q, 7)


def test_eta_sends_higher_generators_to_zero():
    K = stasheff_operad(Q, 4)
    As = associative_operad(Q, 4)
    Com = commutative_operad(Q, 4)
    eta = compose_morphisms(alpha_to_com(As, Com), eps_to_assoc(K, As))
    mu2 = trees.corolla(("mu", 2), 2)
    mu3 = trees.corolla(("mu", 3), 3)
    assert eta.apply_triple((2, 0, mu2)) == {"e": Q.one()}
    assert eta.apply_triple((3, 1, mu3)) == {}


def test_broken_morphism_detected():
    K = stasheff_operad(Q, 3)
    As = associative_operad(Q, 3)
    eps = eps_to_assoc(K, As)

    def broken_rule(triple):
        n, d, t = triple
        # correct everywhere except one composite tree, breaking o_i compatibility
        if n == 3 and d == 0 and t == trees.graft(
            trees.corolla(("mu", 2), 2), 1, trees.corolla(("mu", 2), 2), {("mu", 2): 0}
        )[1]:
            return {}
        return eps.apply_triple(triple)

    bad = OperadMorphism(K, As, broken_rule)
    ok, failures = operad_morphism_check(bad, 3, report=True)
    assert not ok and failures


def test_d_squared_enforced_at_construction():
    from opbar.errors import CompositionNotZero

    gens = {2: [("a", 0), ("b", 1), ("c", 2)]}
    bad_diff = {
        "c": {trees.corolla("b", 2): Q.one()},
        "b": {trees.corolla("a", 2): Q.one()},
    }
    with pytest.raises(CompositionNotZero):
        free_operad(Q, gens, 2, bad_diff)
    # an honest acyclic pair passes
    good = free_operad(Q, {2: [("a", 0), ("b", 1)]}, 3, {"b": {trees.corolla("a", 2): Q.one()}})
    check_operad(good, 3)
