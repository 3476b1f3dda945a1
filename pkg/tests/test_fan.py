"""Fan combinatorics tests: gates, walls, cones, enumeration, coordinates."""

import math
import random
from fractions import Fraction

import pytest

from toriclg import lattice
from toriclg.fan import (BUILTIN_NAMES, Fan, FanError, FanGateError, ToricVariety,
                         builtin, divisor_basis, moment_polytope, opcl_decompose,
                         validate, wall_curves)


def f2_fan() -> Fan:
    return Fan(2, ((0, 1), (0, -1), (1, 0), (-1, -2)),
               ((0, 2), (2, 1), (1, 3), (3, 0)))


# ---------------------------------------------------------------------------
# Structural validation
# ---------------------------------------------------------------------------

def test_fan_structural_errors():
    with pytest.raises(FanError, match="not primitive"):
        Fan(2, ((2, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (2, 0)))
    with pytest.raises(FanError, match="distinct"):
        Fan(2, ((1, 0), (1, 0), (0, 1)), ((0, 2), (1, 2)))
    with pytest.raises(FanError, match="length"):
        Fan(2, ((1, 0, 0), (0, 1)), ((0, 1),))
    with pytest.raises(FanError, match="missing ray"):
        Fan(2, ((1, 0), (0, 1)), ((0, 5),))
    with pytest.raises(FanError, match="zero"):
        Fan(2, ((0, 0), (0, 1)), ((0, 1),))


def test_validate_flags():
    report = validate(builtin("p2").fan)
    assert report.as_dict() == {"smooth": True, "complete": True,
                                "projective": True, "semi_positive": True}
    report = validate(f2_fan())
    assert report.all_ok
    # index-2 cone: smooth fails
    report = validate(Fan(2, ((1, 0), (1, 2)), ((0, 1),)))
    assert not report.smooth and not report.complete


def test_f2_is_not_fano_but_semi_positive():
    tv = builtin("f2")
    assert tv.semi_positive and not tv.fano
    # the fibre wall class is the boundary case <c1, C> = 0
    assert (0, -2, 1, 1) in tv.wall_classes
    assert sum((0, -2, 1, 1)) == 0


# ---------------------------------------------------------------------------
# Wall curve classes
# ---------------------------------------------------------------------------

def test_wall_curves_p2():
    assert set(wall_curves(builtin("p2").fan)) == {(1, 1, 1)}


def test_wall_curves_f2():
    classes = set(wall_curves(f2_fan()))
    assert (0, -2, 1, 1) in classes  # fibre
    assert (1, 1, 0, 0) in classes   # section


def test_wall_curves_product():
    assert set(wall_curves(builtin("f0").fan)) == {(1, 1, 0, 0), (0, 0, 1, 1)}


def test_wall_relation_annihilates_rays():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        for ell in tv.wall_classes:
            for k in range(tv.n):
                assert sum(ell[i] * tv.fan.rays[i][k] for i in range(tv.m)) == 0


def test_wall_curves_requires_gates():
    with pytest.raises(FanGateError):
        wall_curves(Fan(2, ((1, 0), (0, 1)), ((0, 1),)))


# ---------------------------------------------------------------------------
# Divisor matrix
# ---------------------------------------------------------------------------

def test_divisor_matrix_user_f2_accepted():
    basis = divisor_basis(f2_fan(), [[0, -2, 1, 1], [1, 1, 0, 0]])
    assert basis.matrix == ((0, -2, 1, 1), (1, 1, 0, 0))
    ident = lattice.matmul_int([list(r) for r in basis.matrix],
                               [list(r) for r in basis.right_inverse])
    assert ident == lattice.identity_matrix(2)


def test_divisor_matrix_user_f2_rejected_not_nef():
    with pytest.raises(FanError, match="not nef"):
        divisor_basis(f2_fan(), [[0, -2, 1, 1], [-1, -1, 0, 0]])


def test_divisor_matrix_user_bad_shapes():
    with pytest.raises(FanError, match="annihilate"):
        divisor_basis(f2_fan(), [[0, -2, 1, 0], [1, 1, 0, 0]])
    with pytest.raises(FanError, match="2x4"):
        divisor_basis(f2_fan(), [[1, 1, 0, 0]])


def test_divisor_matrix_auto_p2():
    assert divisor_basis(builtin("p2").fan).matrix == ((1, 1, 1),)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_divisor_matrix_auto_derivation_valid(name):
    """Auto-derivation yields a matrix passing all user-matrix checks."""
    fan = builtin(name).fan
    auto = divisor_basis(fan)
    revalidated = divisor_basis(fan, [list(row) for row in auto.matrix])
    assert revalidated.matrix == auto.matrix


def test_divisor_row_ray_orthogonality():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        for row in tv.basis.matrix:
            for k in range(tv.n):
                assert sum(row[i] * tv.fan.rays[i][k] for i in range(tv.m)) == 0


# ---------------------------------------------------------------------------
# Cones and enumeration
# ---------------------------------------------------------------------------

def test_cones_p2_and_f2():
    assert builtin("p2").cones.mori_generators == ((1,),)
    assert builtin("p2").cones.nef_generators == ((1,),)
    f2 = builtin("f2")
    assert set(f2.cones.mori_generators) == {(1, 0), (0, 1)}
    assert set(f2.cones.nef_generators) == {(1, 0), (0, 1)}


def test_mori_nef_duality():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        for g in tv.cones.mori_generators:
            pairings = [lattice.dot(f, g) for f in tv.cones.nef_generators]
            assert all(p >= 0 for p in pairings)
            assert any(p > 0 for p in pairings)


def test_enumerate_ne_examples():
    assert builtin("p2").enumerate_ne(2) == ((0,), (1,), (2,))
    assert builtin("f2").enumerate_ne(1) == ((0, 0), (0, 1), (1, 0))


@pytest.mark.parametrize("name,order", [("p2", 4), ("f2", 4), ("f1", 4), ("p1xf2", 3)])
def test_enumerate_ne_exhaustive_against_lp_oracle(name, order):
    """Inequality filtering agrees with the rational-cone membership oracle."""
    tv = builtin(name)
    listed = set(tv.enumerate_ne(order))
    import itertools
    for d in itertools.product(range(order + 1), repeat=tv.r):
        if sum(d) > order:
            continue
        assert (d in listed) == tv.ne_contains_lp(d), d


def test_every_enumerated_class_satisfies_inequalities():
    tv = builtin("p1xf2")
    for d in tv.enumerate_ne(4):
        for g in tv.cones.nef_generators:
            assert lattice.dot(g, d) >= 0


# ---------------------------------------------------------------------------
# Fan polytope vertices
# ---------------------------------------------------------------------------

def test_fan_polytope_vertices():
    assert builtin("p2").vertex_rays == {0, 1, 2}
    assert builtin("f0").vertex_rays == {0, 1, 2, 3}
    f2 = builtin("f2")
    assert f2.vertex_rays == {0, 2, 3}  # b2 = midpoint of b3 and b4
    b2, b3, b4 = f2.fan.rays[1], f2.fan.rays[2], f2.fan.rays[3]
    assert tuple(x + y for x, y in zip(b3, b4)) == tuple(2 * x for x in b2)


# ---------------------------------------------------------------------------
# z-ring weights and membership
# ---------------------------------------------------------------------------

def test_z_weights_are_ample_and_aligned():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        w, c = tv.z_weights
        assert all(x >= 1 for x in w) and c >= 1
        for row in tv.basis.matrix:
            assert sum(row[i] * w[i] for i in range(tv.m)) == c
        # grading of q^d is c * nef degree
        for d in tv.enumerate_ne(3):
            assert lattice.dot(w, tv.iota(d)) == c * sum(d)


def test_z_membership():
    f2 = builtin("f2")
    member = f2.z_ring.membership
    assert member((0, -1, 1, 1))      # q1 z2
    assert member((0, -2, 1, 1))      # q1 (pure curve class)
    assert member((1, 0, 0, 0))       # z1
    assert member((0, 0, 0, 0))
    assert not member((0, -1, 0, 0))
    assert not member((-1, 0, 0, 0) )


# ---------------------------------------------------------------------------
# Momentum polytope and open-closed coordinates
# ---------------------------------------------------------------------------

def test_moment_polytope_p2_simplex():
    tv = builtin("p2")
    poly = moment_polytope(tv, (-1, -1, -1))
    assert poly.halfspaces == (((1, 0), Fraction(1)), ((0, 1), Fraction(1)),
                               ((-1, -1), Fraction(1)))


def test_moment_polytope_f2():
    tv = builtin("f2")
    # kappa(-c) = (1, 1): strictly inside the nef cone
    poly = moment_polytope(tv, (-1, 0, -1, 0))
    assert len(poly.halfspaces) == 4
    assert [h[0] for h in poly.halfspaces] == list(tv.fan.rays)
    assert [h[1] for h in poly.halfspaces] == [Fraction(1), Fraction(0),
                                               Fraction(1), Fraction(0)]


def test_moment_polytope_boundary_lift_rejected():
    tv = builtin("f2")
    # kappa(-c) = fibre-degenerate class (0, 1): on the nef boundary
    with pytest.raises(FanGateError, match="Kaehler"):
        moment_polytope(tv, (-1, 0, 0, 0))


def test_opcl_decompose_uniform():
    tv = builtin("p2")
    e = math.e
    point = opcl_decompose(tv, (1 / e, 1 / e, 1 / e))
    assert all(abs(x - 1.0) < 1e-12 for x in point.eta)
    assert all(abs(h - 1.0) < 1e-12 for h in point.h)


def test_opcl_decompose_f2_monomials():
    tv = builtin("f2")
    z = (0.3, 0.5, 0.7, 0.2)
    point = opcl_decompose(tv, z)
    assert abs(point.q[0] - z[1] ** -2 * z[2] * z[3]) < 1e-12
    assert abs(point.q[1] - z[0] * z[1]) < 1e-12


def test_opcl_decompose_reconstruction():
    tv = builtin("f2")
    rng = random.Random(7)
    for _ in range(25):
        z = [rng.uniform(0.05, 0.95) * complex(math.cos(t := rng.uniform(0, 6.28)),
                                               math.sin(t))
             for _ in range(tv.m)]
        point = opcl_decompose(tv, z)
        for zi, eta, h in zip(z, point.eta, point.h):
            assert abs(zi - math.exp(-eta) * h) < 1e-12


def test_opcl_decompose_rejects_bad_modulus():
    tv = builtin("p2")
    with pytest.raises(ValueError, match="lie in"):
        opcl_decompose(tv, (0.5, 1.5, 0.5))


# ---------------------------------------------------------------------------
# Misc derived data
# ---------------------------------------------------------------------------

def test_kernel_vectors_are_divisor_relations():
    for name in BUILTIN_NAMES:
        tv = builtin(name)
        kernel = tv.kernel_vectors()
        assert len(kernel) == tv.n
        for c in kernel:
            for row in tv.basis.matrix:
                assert lattice.dot(row, c) == 0


def test_semi_positive_flags():
    expected = {"p1": True, "p2": True, "f0": True, "f1": True, "f2": True,
                "p1xp2": True, "p1xf2": True}
    for name, flag in expected.items():
        assert builtin(name).semi_positive == flag


def test_f3_is_not_semi_positive():
    fan = Fan(2, ((0, 1), (0, -1), (1, 0), (-1, -3)),
              ((0, 2), (2, 1), (1, 3), (3, 0)))
    report = validate(fan)
    assert report.smooth and report.complete and report.projective
    assert not report.semi_positive


def test_fan_hash_distinguishes_bases():
    fan = f2_fan()
    a = ToricVariety.build(fan, [[0, -2, 1, 1], [1, 1, 0, 0]])
    b = ToricVariety.build(fan, [[1, 1, 0, 0], [0, -2, 1, 1]])  # swapped nef basis
    assert len(a.fan_hash) == 16
    assert a.fan_hash != b.fan_hash
