"""Seidel kit tests: elements, lifts, identities, and the reduction map."""

import random
from fractions import Fraction

from toriclg.fan import BUILTIN_NAMES, builtin
from toriclg.mirror import CorrectionTerms, correction_terms
from toriclg.seidel import (batyrev_elements, check_degeneration, check_fano_triviality,
                            check_frks_identity, check_linear_relations,
                            check_route_agreement, check_vertex_vanishing,
                            check_w_relations, coboundary, frks, project_lift,
                            reduce_mod_relations, relation_generators,
                            run_verification, seidel_elements, seidel_lifts_closed,
                            seidel_lifts_jacobi)
from toriclg.series import TruncatedSeries

FANO_BUILTINS = ("p1", "p2", "f0", "f1", "p1xp2")


def units(tv, order):
    one = TruncatedSeries.one(tv.q_ring, order)
    zero = TruncatedSeries.zero(tv.q_ring, order)
    return one, zero


# ---------------------------------------------------------------------------
# Elements and lifts
# ---------------------------------------------------------------------------

def test_f2_lift_matrix_matches_inverse_jacobi_golden():
    tv = builtin("f2")
    order = 8
    one, zero = units(tv, order)
    q1 = TruncatedSeries.variable(tv.q_ring, order, 0)
    geo = (one - q1).inverse()          # 1/(1-q1)
    neg = -(q1 * geo)                   # -q1/(1-q1)
    lifts = seidel_lifts_jacobi(tv, order)
    assert lifts[0] == (one, zero, zero, zero)
    assert lifts[1] == (zero, geo, zero, zero)
    assert lifts[2] == (zero, neg, one, zero)
    assert lifts[3] == (zero, neg, zero, one)


def test_fano_lifts_are_divisors():
    for name in FANO_BUILTINS:
        tv = builtin(name)
        one, zero = units(tv, 4)
        for j, lift in enumerate(seidel_lifts_closed(tv, 4)):
            assert lift == tuple(one if i == j else zero for i in range(tv.m)), name


def test_route_agreement_all_builtins():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        assert seidel_lifts_closed(tv, 6) == seidel_lifts_jacobi(tv, 6), name


def test_f2_seidel_and_batyrev_elements():
    tv = builtin("f2")
    order = 6
    one, zero = units(tv, order)
    q1 = TruncatedSeries.variable(tv.q_ring, order, 0)
    bat = batyrev_elements(tv, order)
    sei = seidel_elements(tv, order)
    # S~_2 = D_2 / (1 - q1) in the p-basis, D~_2 = (1 + q1) S~_2
    geo = (one - q1).inverse()
    assert sei[1] == ((-2) * geo, geo)
    assert bat[1] == tuple(c * (one + q1) for c in sei[1])
    # vertex rays have f_j = 1, so Batyrev and Seidel elements coincide there
    for j in (0, 2, 3):
        assert bat[j] == sei[j]
    # and the element of the first ray happens to be undeformed
    assert bat[0] == (zero, one)


def test_unit_relation_f_times_seidel_is_batyrev():
    for name in ("f2", "p1xf2", "p2"):
        tv = builtin(name)
        corr = correction_terms(tv, 6)
        bat = batyrev_elements(tv, 6)
        sei = seidel_elements(tv, 6)
        for j in range(tv.m):
            assert tuple(c * corr.series[j] for c in sei[j]) == bat[j], (name, j)


def test_lift_projection_is_seidel_element():
    for name in ("f2", "p1xf2", "f1"):
        tv = builtin(name)
        sei = seidel_elements(tv, 6)
        for j, lift in enumerate(seidel_lifts_closed(tv, 6)):
            assert project_lift(tv, lift) == sei[j], (name, j)


def test_linear_relations_for_batyrev_elements():
    for name in BUILTIN_NAMES:
        assert check_linear_relations(builtin(name), 6).passed, name


# ---------------------------------------------------------------------------
# Degeneration identity and negative control
# ---------------------------------------------------------------------------

def test_degeneration_identity_all_builtins():
    for name in BUILTIN_NAMES:
        result = check_degeneration(builtin(name), 6)
        assert result.passed, (name, result.failures[:3])


def test_degeneration_negative_control():
    """Corrupting f_2 := 1 + 2 q1 must fail with a located discrepancy at q1 z_j."""
    tv = builtin("f2")
    order = 6
    corr = correction_terms(tv, order)
    mutated = CorrectionTerms(tuple(
        TruncatedSeries.from_terms(tv.q_ring, order, [((0, 0), 1), ((1, 0), 2)])
        if j == 1 else s for j, s in enumerate(corr.series)))
    result = check_degeneration(tv, order, corrections=mutated)
    assert not result.passed
    q1z2 = [0, -1, 1, 1]  # iota(fibre) + e_2
    located = [f for f in result.failures if f["exp"] == q1z2]
    assert located, result.failures[:5]
    assert any(f["j"] == 2 and f["k"] == 2 for f in located)


def test_degeneration_report_schema():
    rep = run_verification(builtin("f2"), 4)
    data = rep.as_dict()
    assert set(data) == {"fan_hash", "order", "checks"}
    assert [c["name"] for c in data["checks"]] == [
        "degeneration", "w_relations", "linear_relations", "frks_identity",
        "route_agreement", "vertex_vanishing", "fano_triviality"]
    assert all(c["pass"] for c in data["checks"])


# ---------------------------------------------------------------------------
# Kodaira-Spencer identities
# ---------------------------------------------------------------------------

def test_frks_of_lifts_is_unit_vector():
    for name in ("f2", "p1xf2"):
        tv = builtin(name)
        one, zero = units(tv, 6)
        lifts = seidel_lifts_closed(tv, 6)
        for j in range(tv.m):
            image = frks(tv, lifts[j], 6)
            assert image == tuple(one if k == j else zero for k in range(tv.m)), (name, j)


def test_frks_of_scaled_lift_is_class_of_w():
    tv = builtin("f2")
    corr = correction_terms(tv, 6)
    lifts = seidel_lifts_closed(tv, 6)
    zero = TruncatedSeries.zero(tv.q_ring, 6)
    for j in range(tv.m):
        scaled = tuple(c * corr.series[j] for c in lifts[j])
        image = frks(tv, scaled, 6)
        expected = tuple(corr.series[j] if k == j else zero for k in range(tv.m))
        assert image == expected


def test_frks_of_coboundary():
    """frks(delta phi)_j = <phi, b_j> f_j: the exact relation-span identity."""
    for name in ("f2", "p2", "p1xf2"):
        tv = builtin(name)
        corr = correction_terms(tv, 6)
        for t in range(tv.n):
            phi = tuple(1 if s == t else 0 for s in range(tv.n))
            image = frks(tv, coboundary(tv, phi, 6), 6)
            expected = tuple(corr.series[j] * tv.fan.rays[j][t] for j in range(tv.m))
            assert image == expected, (name, t)


def test_frks_identity_check_all_builtins():
    for name in BUILTIN_NAMES:
        assert check_frks_identity(builtin(name), 6).passed, name


def random_vector(tv, order, rng):
    out = []
    points = list(tv.enumerate_ne(order))
    for _ in range(tv.m):
        terms = [(rng.choice(points), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
                 for _ in range(3)]
        out.append(TruncatedSeries.from_terms(tv.q_ring, order, terms))
    return tuple(out)


def test_reduce_kills_relation_generators():
    for name in ("p2", "f2", "p1xf2"):
        tv = builtin(name)
        for gen in relation_generators(tv, 5):
            reduced = reduce_mod_relations(tv, gen, 5)
            assert all(s.is_zero() for s in reduced), name


def test_reduce_is_idempotent_and_quotient_well_defined():
    rng = random.Random(11)
    for name in ("p2", "f2"):
        tv = builtin(name)
        gens = relation_generators(tv, 5)
        for _ in range(10):
            vec = random_vector(tv, 5, rng)
            reduced = reduce_mod_relations(tv, vec, 5)
            again = reduce_mod_relations(tv, reduced, 5)
            assert again == reduced
            # shifting by a random span element does not change the result
            coeffs = random_vector(tv, 5, rng)[:tv.n]
            shifted = list(vec)
            for t, gen in enumerate(gens):
                for j in range(tv.m):
                    shifted[j] = shifted[j] + coeffs[t] * gen[j]
            assert reduce_mod_relations(tv, tuple(shifted), 5) == reduced


def test_reduce_of_units_survive():
    """Classes of the lifts stay nonzero: degree-0 part is a coordinate vector."""
    for name in ("p2", "f2", "p1xf2"):
        tv = builtin(name)
        lifts = seidel_lifts_closed(tv, 5)
        for j in range(tv.m):
            reduced = reduce_mod_relations(tv, frks(tv, lifts[j], 5), 5)
            constants = [s.constant_term for s in reduced]
            assert sum(1 for c in constants if c) >= 1, (name, j)
            assert any(c == 1 for c in constants), (name, j, constants)


def test_reduce_fixes_nonpivot_unit_vectors():
    tv = builtin("f2")
    one, zero = units(tv, 5)
    # rays 1 and 2 are parallel, so the lex-first independent pivots are {1, 3}
    # (0-based {0, 2}) and the complement coordinates pass through unchanged
    for j in (1, 3):
        vec = tuple(one if k == j else zero for k in range(tv.m))
        assert reduce_mod_relations(tv, vec, 5) == vec


# ---------------------------------------------------------------------------
# Remaining named checks
# ---------------------------------------------------------------------------

def test_w_relations_all_builtins():
    for name in BUILTIN_NAMES:
        assert check_w_relations(builtin(name), 6).passed, name


def test_vertex_vanishing_check():
    for name in BUILTIN_NAMES:
        assert check_vertex_vanishing(builtin(name), 6).passed, name


def test_fano_triviality_check():
    for name in BUILTIN_NAMES:
        assert check_fano_triviality(builtin(name), 6).passed, name


def test_route_agreement_check_result():
    result = check_route_agreement(builtin("f2"), 6)
    assert result.passed and result.name == "route_agreement"


# ---------------------------------------------------------------------------
# Non-builtin fans through the auto-derivation path
# ---------------------------------------------------------------------------

def test_del_pezzo_surfaces_full_suite():
    """Blowups of P^2 at 2 and 3 points: auto-derived bases, non-simplicial
    cones in the degree-6 case, everything verified end to end."""
    from toriclg.fan import Fan, ToricVariety

    dp7 = ToricVariety.build(Fan(2, ((1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)),
                                 ((0, 1), (1, 2), (2, 3), (3, 4), (4, 0))))
    assert dp7.fano and len(dp7.cones.mori_generators) == 3
    assert run_verification(dp7, 6).passed

    dp6 = ToricVariety.build(Fan(2, ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)),
                                 ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0))))
    assert dp6.fano and len(dp6.cones.mori_generators) == 6
    assert run_verification(dp6, 5).passed
