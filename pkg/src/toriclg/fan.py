"""Fan combinatorics for smooth projective toric surfaces and small 3-folds.

The central object is :class:`ToricVariety`: a validated complete regular fan
together with a nef integral basis of the divisor class lattice (the divisor
matrix), from which wall curve classes, Mori/nef cones, effective-class
enumeration and the series ring descriptors are derived.  Everything is exact;
the only floating-point code is the open-closed coordinate split at the end.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice
from .series import RingDescriptor

IntVector = tuple[int, ...]


class FanError(ValueError):
    """Structurally malformed fan data."""


class FanGateError(ValueError):
    """A semantic gate (smooth/complete/projective/semi-positive) failed."""

    def __init__(self, message: str, report: Optional["ValidationReport"] = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class ValidationReport:
    smooth: bool
    complete: bool
    projective: bool
    semi_positive: bool

    @property
    def all_ok(self) -> bool:
        return self.smooth and self.complete and self.projective and self.semi_positive

    def as_dict(self) -> dict:
        return {"smooth": self.smooth, "complete": self.complete,
                "projective": self.projective, "semi_positive": self.semi_positive}


@dataclass(frozen=True)
class Fan:
    """Ray generators and maximal cones (0-based ray indices, each of size dim)."""

    dim: int
    rays: tuple[IntVector, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise FanError("fan dimension must be positive")
        for i, ray in enumerate(self.rays):
            if len(ray) != self.dim:
                raise FanError(f"ray {i + 1} has length {len(ray)}, expected {self.dim}")
            if not any(ray):
                raise FanError(f"ray {i + 1} is zero")
            if math.gcd(*(abs(x) for x in ray)) != 1:
                raise FanError(f"ray {i + 1} not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise FanError("rays are not pairwise distinct")
        for cone in self.max_cones:
            if len(cone) != self.dim or len(set(cone)) != self.dim:
                raise FanError(f"maximal cone {cone} must consist of {self.dim} distinct rays")
            if any(not 0 <= i < len(self.rays) for i in cone):
                raise FanError(f"maximal cone {cone} references a missing ray")
        if len({frozenset(c) for c in self.max_cones}) != len(self.max_cones):
            raise FanError("maximal cones are not pairwise distinct")
        if not self.max_cones:
            raise FanError("fan has no maximal cones")

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    def cone_determinant(self, cone: Sequence[int]) -> Fraction:
        return lattice.det_fraction([self.rays[i] for i in cone])

    def walls(self) -> dict[frozenset, list[tuple[int, ...]]]:
        """(dim-1)-subsets of maximal cones, mapped to the cones containing them."""
        out: dict[frozenset, list[tuple[int, ...]]] = {}
        for cone in self.max_cones:
            for wall in itertools.combinations(sorted(cone), self.dim - 1):
                out.setdefault(frozenset(wall), []).append(cone)
        return out

    def is_smooth(self) -> bool:
        return all(abs(self.cone_determinant(c)) == 1 for c in self.max_cones)

    def is_complete_proxy(self) -> bool:
        """Every wall shared by exactly two maximal cones and every ray used."""
        used = {i for cone in self.max_cones for i in cone}
        if used != set(range(self.num_rays)):
            return False
        return all(len(cones) == 2 for cones in self.walls().values())


def wall_curves(fan: Fan) -> list[IntVector]:
    """One curve class per wall, as the vector of intersection numbers with D_i.

    For a wall w = sigma cap sigma' with opposite rays u, u', the class pairs
    to 1 with D_u and D_{u'}, to the wall-crossing coefficients with the wall
    rays, and to 0 elsewhere; the defining relation sum_i <D_i,C> b_i = 0 is
    asserted exactly.
    """
    if not fan.is_smooth() or not fan.is_complete_proxy():
        raise FanGateError("wall curve classes require a smooth complete fan")
    classes = []
    for wall, cones in sorted(fan.walls().items(), key=lambda kv: sorted(kv[0])):
        if len(cones) != 2:
            raise FanGateError(f"wall {sorted(wall)} is shared by {len(cones)} cones")
        (u,) = set(cones[0]) - wall
        (u2,) = set(cones[1]) - wall
        wall_list = sorted(wall)
        basis = [fan.rays[u]] + [fan.rays[v] for v in wall_list]
        sol = lattice.solve_affine(list(zip(*basis)), fan.rays[u2])
        if sol is None or sol[1]:
            raise FanError(f"rays of cone {cones[0]} do not form a lattice basis")
        coeffs = sol[0]
        if any(c.denominator != 1 for c in coeffs):
            raise FanError(f"non-integral relation across wall {sorted(wall)}")
        if coeffs[0] != -1:
            raise FanError(f"cones {cones[0]} and {cones[1]} overlap across wall "
                           f"{sorted(wall)}; input is not a fan")
        ell = [0] * fan.num_rays
        ell[u] = ell[u2] = 1
        for v, c in zip(wall_list, coeffs[1:]):
            ell[v] = -int(c)
        total = [sum(ell[i] * fan.rays[i][k] for i in range(fan.num_rays))
                 for k in range(fan.dim)]
        assert not any(total), "wall relation does not annihilate the rays"
        classes.append(tuple(ell))
    return classes


# ---------------------------------------------------------------------------
# Divisor matrix (nef integral basis presentation)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorBasis:
    """r x m integer matrix writing each toric divisor in a nef basis."""

    matrix: tuple[IntVector, ...]
    right_inverse: tuple[IntVector, ...]  # m x r, matrix @ right_inverse = I

    @property
    def r(self) -> int:
        return len(self.matrix)

    @property
    def m(self) -> int:
        return len(self.matrix[0])

    def divisor_column(self, i: int) -> IntVector:
        return tuple(row[i] for row in self.matrix)

    def curve_coordinates(self, ell: Sequence[int]) -> IntVector:
        """Coordinates <p_a, C> of a curve class given its divisor pairings."""
        return tuple(lattice.dot([row[a] for row in self.right_inverse], ell)
                     for a in range(self.r))


def _check_annihilates(fan: Fan, matrix: Sequence[Sequence[int]]) -> bool:
    for row in matrix:
        for k in range(fan.dim):
            if sum(row[i] * fan.rays[i][k] for i in range(fan.num_rays)) != 0:
                return False
    return True


def divisor_basis(fan: Fan, user_matrix: Optional[Sequence[Sequence[int]]] = None) -> DivisorBasis:
    """Validate a user-supplied divisor matrix, or derive a nef integral basis.

    Derivation: present the divisor class lattice via Smith normal form of the
    ray pairing matrix, dualize the wall classes to get the nef cone, then
    search small nonnegative combinations of its generators for a unimodular
    row set.  The search is bounded; failure asks for an explicit matrix.
    """
    walls = wall_curves(fan)
    m, n = fan.num_rays, fan.dim
    r = m - n
    if user_matrix is not None:
        matrix = tuple(tuple(int(x) for x in row) for row in user_matrix)
        if len(matrix) != r or any(len(row) != m for row in matrix):
            raise FanError(f"divisor matrix must be {r}x{m}")
        if not _check_annihilates(fan, matrix):
            raise FanError("divisor matrix rows must annihilate the rays")
        right = lattice.integer_right_inverse([list(row) for row in matrix])
        if right is None:
            raise FanError("divisor matrix is not a split surjection over Z")
        basis = DivisorBasis(matrix, tuple(tuple(row) for row in right))
        for ell in walls:
            d = basis.curve_coordinates(ell)
            for a, coord in enumerate(d):
                if coord < 0:
                    raise FanError(f"divisor matrix row {a + 1} is not nef "
                                   f"(pairs to {coord} with wall class {list(ell)})")
        return basis

    # initial (not necessarily nef) basis from the Smith normal form of B^T
    bt = [[fan.rays[i][k] for k in range(n)] for i in range(m)]
    u, s, _ = lattice.smith_normal_form(bt)
    if any(s[t][t] != 1 for t in range(n)):
        raise FanError("divisor class group has torsion; fan cannot be smooth")
    m0 = [u[i] for i in range(n, m)]
    g0 = lattice.integer_right_inverse(m0)
    assert g0 is not None
    d0 = [tuple(lattice.dot([row[a] for row in g0], ell) for a in range(r))
          for ell in walls]
    nef0 = lattice.dual_cone_generators(sorted(set(d0)), r)
    if not nef0:
        raise FanGateError("fan is not projective; no nef basis exists")
    transform = _unimodular_nef_rows(nef0, d0, r)
    if transform is None:
        raise FanError("no unimodular nef basis found within the search bound; "
                       "supply a divisor matrix explicitly")
    s_inv = lattice.invert_fraction_matrix(transform)
    assert all(x.denominator == 1 for row in s_inv for x in row)  # unimodular
    new_matrix = [[sum(int(s_inv[k][a]) * m0[k][i] for k in range(r))
                   for i in range(m)] for a in range(r)]
    return divisor_basis(fan, new_matrix)


def _unimodular_nef_rows(nef_gens: list[IntVector], wall_coords: list[IntVector],
                         r: int, height: int = 8) -> Optional[list[list[int]]]:
    """Rows from small nonnegative combinations of nef generators with det +-1."""
    candidates = set()
    for combo in itertools.product(range(height + 1), repeat=len(nef_gens)):
        if not 0 < sum(combo) <= height:
            continue
        vec = tuple(sum(t * g[a] for t, g in zip(combo, nef_gens)) for a in range(r))
        if any(vec):
            candidates.add(lattice.primitive_vector(vec))
    ordered = sorted(candidates, key=lambda v: (sum(abs(x) for x in v), v))

    def extend(rows: list[IntVector], start: int) -> Optional[list[list[int]]]:
        if len(rows) == r:
            det = lattice.det_fraction(rows)
            return [list(row) for row in rows] if abs(det) == 1 else None
        for idx in range(start, len(ordered)):
            rows.append(ordered[idx])
            if lattice.rank_of(rows) == len(rows):
                found = extend(rows, idx + 1)
                if found is not None:
                    return found
            rows.pop()
        return None

    return extend([], 0)


# ---------------------------------------------------------------------------
# Cone pair (Mori and nef) with membership predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConePair:
    mori_generators: tuple[IntVector, ...]
    nef_generators: tuple[IntVector, ...]

    def in_mori(self, d: Sequence[int]) -> bool:
        return all(lattice.dot(g, d) >= 0 for g in self.nef_generators)

    def in_nef(self, phi: Sequence) -> bool:
        return all(lattice.dot(phi, d) >= 0 for d in self.mori_generators)

    def in_nef_interior(self, phi: Sequence) -> bool:
        return all(lattice.dot(phi, d) > 0 for d in self.mori_generators)


# ---------------------------------------------------------------------------
# The assembled toric variety
# ---------------------------------------------------------------------------

class ToricVariety:
    """Validated fan + divisor basis + derived cones and ring descriptors."""

    def __init__(self, fan: Fan, basis: DivisorBasis, name: Optional[str] = None):
        self.fan = fan
        self.basis = basis
        self.name = name

    # -- construction --------------------------------------------------------

    @staticmethod
    def build(fan: Fan, divisor_matrix: Optional[Sequence[Sequence[int]]] = None,
              name: Optional[str] = None) -> "ToricVariety":
        if not fan.is_smooth():
            raise FanGateError("fan gate failed: fan is not smooth (a maximal cone "
                               "has |det| != 1)", validate(fan))
        if not fan.is_complete_proxy():
            raise FanGateError("fan gate failed: fan is not complete (a wall is not "
                               "shared by exactly two maximal cones)", validate(fan))
        basis = divisor_basis(fan, divisor_matrix)  # raises if non-projective
        return ToricVariety(fan, basis, name=name)

    # -- basic data -----------------------------------------------------------

    @property
    def n(self) -> int:
        return self.fan.dim

    @property
    def m(self) -> int:
        return self.fan.num_rays

    @property
    def r(self) -> int:
        return self.basis.r

    @functools.cached_property
    def wall_classes(self) -> tuple[IntVector, ...]:
        return tuple(wall_curves(self.fan))

    @functools.cached_property
    def wall_classes_d(self) -> tuple[IntVector, ...]:
        return tuple(self.basis.curve_coordinates(ell) for ell in self.wall_classes)

    @functools.cached_property
    def cones(self) -> ConePair:
        try:
            mori = lattice.extremal_rays(sorted(set(self.wall_classes_d)), self.r)
            nef = lattice.dual_cone_generators(mori, self.r)
        except ValueError as exc:
            raise FanGateError(f"fan gate failed: {exc}") from exc
        if not nef or lattice.fm_sample(
                [(d, 1) for d in self.wall_classes_d], self.r) is None:
            raise FanGateError("fan gate failed: fan is not projective")
        return ConePair(tuple(mori), tuple(nef))

    @functools.cached_property
    def semi_positive(self) -> bool:
        return all(sum(ell) >= 0 for ell in self.wall_classes)

    @functools.cached_property
    def fano(self) -> bool:
        return all(sum(ell) > 0 for ell in self.wall_classes)

    @functools.cached_property
    def vertex_rays(self) -> frozenset[int]:
        """Ray indices that are vertices of the fan polytope conv(b_1..b_m)."""
        return frozenset(lattice.convex_hull_vertex_indices(self.fan.rays))

    @functools.cached_property
    def fan_hash(self) -> str:
        payload = json.dumps({"dim": self.fan.dim,
                              "rays": [list(rr) for rr in self.fan.rays],
                              "cones": [list(c) for c in self.fan.max_cones],
                              "matrix": [list(row) for row in self.basis.matrix]},
                             sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # -- pairings -------------------------------------------------------------

    def divisor_pairing(self, i: int, d: Sequence[int]) -> int:
        """<D_i, d> for an effective class in nef-basis coordinates."""
        return lattice.dot(self.basis.divisor_column(i), d)

    def c1_pairing(self, d: Sequence[int]) -> int:
        return sum(self.divisor_pairing(i, d) for i in range(self.m))

    def iota(self, d: Sequence[int]) -> IntVector:
        """Embed H_2(X) into the disc exponent lattice: (<D_i, d>)_i."""
        return tuple(self.divisor_pairing(i, d) for i in range(self.m))

    def kernel_vectors(self) -> list[IntVector]:
        """Integer basis of the relations sum_j c_j D_j = 0."""
        return lattice.integer_kernel([list(row) for row in self.basis.matrix])

    # -- effective classes ----------------------------------------------------

    def ne_contains(self, d: Sequence[int]) -> bool:
        return self.cones.in_mori(d)

    def ne_contains_lp(self, d: Sequence[int]) -> bool:
        """Independent membership oracle: nonnegative combination of wall classes."""
        return lattice.feasible_nonneg_combination(list(self.wall_classes_d), d)

    @functools.lru_cache(maxsize=None)
    def _ne_points(self, order: int) -> tuple[IntVector, ...]:
        out = []
        for d in itertools.product(range(order + 1), repeat=self.r):
            if sum(d) <= order and self.ne_contains(d):
                out.append(d)
        return tuple(sorted(out))

    def enumerate_ne(self, order: int) -> tuple[IntVector, ...]:
        """All effective classes of total nef degree <= order, lex-sorted."""
        return self._ne_points(order)

    # -- ring descriptors -----------------------------------------------------

    @functools.cached_property
    def q_ring(self) -> RingDescriptor:
        return self._curve_ring("q")

    @functools.cached_property
    def y_ring(self) -> RingDescriptor:
        return self._curve_ring("y")

    def _curve_ring(self, label: str) -> RingDescriptor:
        cones = self.cones

        def member(exp):
            return all(e >= 0 for e in exp) and cones.in_mori(exp)

        return RingDescriptor(label, (1,) * self.r, member)

    @functools.cached_property
    def z_weights(self) -> tuple[IntVector, int]:
        """Weights w > 0 with sum_i w_i D_i = c * (1,..,1) in the nef basis.

        Aligning the induced grading of q^d with c * (nef degree of d) keeps
        the q-ring and z-ring truncations commensurable; such weights exist
        because the sum of a nef lattice basis is ample.
        """
        rows = [list(row) for row in self.basis.matrix]
        for c in [*range(1, 17), 32, 64, 128, 256, 512, 1024, 2048, 4096]:
            sol = lattice.solve_affine(rows, [c] * self.r)
            if sol is None:
                continue
            particular, kernel = sol
            if not kernel:
                sample = particular if all(x >= 1 for x in particular) else None
            else:
                ineqs = [([vec[i] for vec in kernel], 1 - particular[i])
                         for i in range(self.m)]
                ts = lattice.fm_sample(ineqs, len(kernel))
                sample = None if ts is None else [
                    particular[i] + sum(t * vec[i] for t, vec in zip(ts, kernel))
                    for i in range(self.m)]
            if sample is None:
                continue
            scale = math.lcm(*(x.denominator for x in sample))
            w = [int(x * scale) for x in sample]
            cc = c * scale
            g = math.gcd(*w, cc)
            return tuple(x // g for x in w), cc // g
        raise FanGateError("no positive ample weight vector found; fan is likely "
                           "not projective")

    @functools.cached_property
    def z_ring(self) -> RingDescriptor:
        weights, _ = self.z_weights
        member = functools.lru_cache(maxsize=None)(self._z_exponent_in_cone)
        return RingDescriptor("z", weights, member)

    def _z_exponent_in_cone(self, exp: IntVector) -> bool:
        """exp = iota(d) + k with d effective and k >= 0, by bounded search."""
        weights, degree_scale = self.z_weights
        budget = lattice.dot(weights, exp)
        if budget < 0:
            return False
        for d in self.enumerate_ne(budget // degree_scale):
            if all(a <= b for a, b in zip(self.iota(d), exp)):
                return True
        return False

    # -- reports ---------------------------------------------------------------

    def validation_report(self) -> ValidationReport:
        return validate(self.fan)


def validate(fan: Fan) -> ValidationReport:
    """Gate flags for an arbitrary structurally well-formed fan."""
    smooth = fan.is_smooth()
    complete = fan.is_complete_proxy()
    projective = False
    semi_positive = False
    if smooth and complete:
        walls = wall_curves(fan)
        semi_positive = all(sum(ell) >= 0 for ell in walls)
        m, n = fan.num_rays, fan.dim
        bt = [[fan.rays[i][k] for k in range(n)] for i in range(m)]
        kernel = lattice.integer_kernel([list(col) for col in zip(*bt)])
        coords = [tuple(lattice.dot(ell, k) for k in kernel) for ell in walls]
        # projective iff some functional is >= 1 on every wall class
        projective = lattice.fm_sample([(d, 1) for d in coords], len(kernel)) is not None
    return ValidationReport(smooth, complete, projective, semi_positive)


# ---------------------------------------------------------------------------
# Momentum polytope and open-closed coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentPolytope:
    """Halfspace presentation {v : <b_i, v> <= offset_i}."""

    halfspaces: tuple[tuple[IntVector, Fraction], ...]


def moment_polytope(tv: ToricVariety, lift: Sequence) -> MomentPolytope:
    """Momentum polytope of the Kaehler class determined by a lift.

    The polytope {<b_i, v> <= -c_i} is nonempty and full-dimensional exactly
    when kappa(-c) is ample, which is what we validate.
    """
    c = [Fraction(x) for x in lift]
    if len(c) != tv.m:
        raise FanError(f"lift must have {tv.m} entries")
    kappa_neg = [-sum(row[i] * c[i] for i in range(tv.m)) for row in tv.basis.matrix]
    if not tv.cones.in_nef_interior(kappa_neg):
        raise FanGateError("lift does not define a Kaehler class (not in the nef "
                           "cone interior)")
    return MomentPolytope(tuple((tv.fan.rays[i], -c[i]) for i in range(tv.m)))


@dataclass(frozen=True)
class OpenClosedPoint:
    q: tuple[complex, ...]
    eta: tuple[float, ...]
    h: tuple[complex, ...]


def opcl_decompose(tv: ToricVariety, z: Sequence[complex]) -> OpenClosedPoint:
    """Split z into (q, eta, h) with z_i = exp(-eta_i) h_i and q_a = prod z_i^{m_ai}.

    Floating point (binary64); the caller contract is 0 < |z_i| < 1.
    """
    if len(z) != tv.m:
        raise FanError(f"expected {tv.m} coordinates")
    zs = [complex(x) for x in z]
    for i, zi in enumerate(zs):
        if not 0 < abs(zi) < 1:
            raise ValueError(f"|z_{i + 1}| must lie in (0, 1), got {abs(zi)}")
    eta = tuple(-math.log(abs(zi)) for zi in zs)
    h = tuple(zi / abs(zi) for zi in zs)
    q = tuple(
        functools.reduce(lambda acc, iz: acc * iz[1] ** row[iz[0]], enumerate(zs), 1 + 0j)
        for row in tv.basis.matrix)
    return OpenClosedPoint(q, eta, h)


# ---------------------------------------------------------------------------
# Built-in fans (ray realizations pinned so divisor matrices match the
# standard nef bases used throughout the test-suite)
# ---------------------------------------------------------------------------

def product(a: ToricVariety, b: ToricVariety, name: Optional[str] = None) -> ToricVariety:
    """Product fan with block-diagonal divisor matrix."""
    dim = a.n + b.n
    rays = [ray + (0,) * b.n for ray in a.fan.rays]
    rays += [(0,) * a.n + ray for ray in b.fan.rays]
    cones = []
    for ca in a.fan.max_cones:
        for cb in b.fan.max_cones:
            cones.append(tuple(ca) + tuple(i + a.m for i in cb))
    matrix = [list(row) + [0] * b.m for row in a.basis.matrix]
    matrix += [[0] * a.m + list(row) for row in b.basis.matrix]
    fan = Fan(dim, tuple(rays), tuple(cones))
    return ToricVariety.build(fan, matrix, name=name)


def _projective_line() -> ToricVariety:
    fan = Fan(1, ((1,), (-1,)), ((0,), (1,)))
    return ToricVariety.build(fan, [[1, 1]], name="p1")


def _projective_plane() -> ToricVariety:
    fan = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (2, 0)))
    return ToricVariety.build(fan, [[1, 1, 1]], name="p2")


def _hirzebruch(a: int, name: str) -> ToricVariety:
    # b1 = infinity-section ray, b2 = (-a)-section ray, b3/b4 = fibre rays
    fan = Fan(2, ((0, 1), (0, -1), (1, 0), (-1, -a)),
              ((0, 2), (2, 1), (1, 3), (3, 0)))
    matrix = [[0, -a, 1, 1], [1, 1, 0, 0]]
    return ToricVariety.build(fan, matrix, name=name)


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> ToricVariety:
    key = name.lower()
    if key == "p1":
        return _projective_line()
    if key == "p2":
        return _projective_plane()
    if key == "f0":
        return product(_projective_line(), _projective_line(), name="f0")
    if key == "f1":
        return _hirzebruch(1, "f1")
    if key == "f2":
        return _hirzebruch(2, "f2")
    if key == "p1xp2":
        return product(_projective_line(), _projective_plane(), name="p1xp2")
    if key == "p1xf2":
        return product(_projective_line(), _hirzebruch(2, "f2"), name="p1xf2")
    raise KeyError(f"unknown builtin fan {name!r}; known: {', '.join(BUILTIN_NAMES)}")


BUILTIN_NAMES = ("p1", "p2", "f0", "f1", "f2", "p1xp2", "p1xf2")
