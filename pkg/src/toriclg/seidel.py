"""Batyrev elements, Seidel elements, their relative lifts, and identity checks.

Two independent constructions of the lifted elements are kept side by side:
the inverse of the Jacobi matrix of the potential, and the closed
hypergeometric formula pushed through the mirror map.  Their agreement, the
divisor-action identity <S^_j, dw_k> = delta_jk z_j, and the multiplicative /
linear relations of the Batyrev elements form the verification suite exposed
to the CLI.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lattice
from .fan import ToricVariety
from .mirror import (CorrectionTerms, correction_terms, embed_curve_series, g0_series,
                     jacobi_matrix, mirror_map, w_term)
from .series import SeriesMatrix, TruncatedSeries

H2Element = tuple[TruncatedSeries, ...]       # coordinates in the nef basis p_a
LiftedElement = tuple[TruncatedSeries, ...]   # coordinates in the divisor basis D_i


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def batyrev_elements(tv: ToricVariety, order: int) -> tuple[H2Element, ...]:
    """Mirror-transformed divisor classes D~_j = sum_a m_aj p~_a over the q-ring.

    p~_a = sum_b (d log q_b / d log y_a) p_b, with the Jacobi matrix of the
    mirror transformation rewritten in the q-coordinates.
    """
    mm = mirror_map(tv, order)
    ring = tv.q_ring
    delta = SeriesMatrix.identity(ring, order, tv.r)
    jac = [[delta[a, b] + mm.to_q(mm.forward[b].log_derivative(a), ring)
            for b in range(tv.r)] for a in range(tv.r)]
    out = []
    for j in range(tv.m):
        col = tv.basis.divisor_column(j)
        coords = []
        for b in range(tv.r):
            acc = TruncatedSeries.zero(ring, order)
            for a in range(tv.r):
                if col[a]:
                    acc = acc + jac[a][b] * col[a]
            coords.append(acc)
        out.append(tuple(coords))
    return tuple(out)


@functools.lru_cache(maxsize=64)
def seidel_elements(tv: ToricVariety, order: int) -> tuple[H2Element, ...]:
    """S~_j = exp(-g0^{(j)}(y(q))) D~_j = D~_j / f_j."""
    corr = correction_terms(tv, order)
    out = []
    for j, element in enumerate(batyrev_elements(tv, order)):
        inv = corr.series[j].inverse()
        out.append(tuple(coord * inv for coord in element))
    return tuple(out)


@functools.lru_cache(maxsize=64)
def seidel_lifts_jacobi(tv: ToricVariety, order: int) -> tuple[LiftedElement, ...]:
    """Lifts from the inverse Jacobi matrix: S^_j = sum_i (A^{-1})_{i,j} D_i."""
    inv = jacobi_matrix(tv, order).inverse()
    return tuple(tuple(inv[i, j] for i in range(tv.m)) for j in range(tv.m))


@functools.lru_cache(maxsize=64)
def seidel_lifts_closed(tv: ToricVariety, order: int) -> tuple[LiftedElement, ...]:
    """Lifts from the closed hypergeometric formula, pushed through the mirror map.

    S^_j = e^{-g0^{(j)}(y)} (D_j - sum_i c_i(y) D_i) with

        c_i(y) = sum_d (-1)^{<D_i,d>} <D_j,d> (-<D_i,d>-1)! / prod_{k!=i} <D_k,d>! y^d

    summed over effective d with <c_1,d> = 0, <D_i,d> < 0 and <D_k,d> >= 0 for
    k != i.  The sign follows the inverse-Jacobi derivation: it is attached to
    the index i whose pairing is negative, exactly as in g0^{(i)}.
    """
    mm = mirror_map(tv, order)
    y_ring, q_ring = tv.y_ring, tv.q_ring
    # inner sums depend on (i, d); collect them once, scaled per j by <D_j, d>
    inner_terms: dict[int, list[tuple[tuple[int, ...], Fraction]]] = {}
    for d in tv.enumerate_ne(order):
        pairings = [tv.divisor_pairing(i, d) for i in range(tv.m)]
        if sum(pairings) != 0 or not any(d):
            continue
        negatives = [i for i in range(tv.m) if pairings[i] < 0]
        if len(negatives) != 1:
            continue
        i = negatives[0]
        li = pairings[i]
        num = (-1 if li % 2 else 1) * math.factorial(-li - 1)
        den = math.prod(math.factorial(pairings[k]) for k in range(tv.m) if k != i)
        inner_terms.setdefault(i, []).append((d, Fraction(num, den)))

    out = []
    for j in range(tv.m):
        factor = (-g0_series(tv, j, order)).exp()
        coords = []
        for i in range(tv.m):
            base = TruncatedSeries.constant(y_ring, order, 1 if i == j else 0)
            scaled = [(d, -c * tv.divisor_pairing(j, d)) for d, c in inner_terms.get(i, [])]
            inner = TruncatedSeries.from_terms(y_ring, order, scaled)
            coords.append(mm.to_q(factor * (base + inner), q_ring))
        out.append(tuple(coords))
    return tuple(out)


def project_lift(tv: ToricVariety, lift: LiftedElement) -> H2Element:
    """Image of a relative class under D_i -> sum_a m_ai p_a."""
    coords = []
    for a in range(tv.r):
        acc = TruncatedSeries.zero(lift[0].ring, lift[0].order)
        for i in range(tv.m):
            c = tv.basis.matrix[a][i]
            if c:
                acc = acc + lift[i] * c
        coords.append(acc)
    return tuple(coords)


# ---------------------------------------------------------------------------
# Kodaira-Spencer machinery over K
# ---------------------------------------------------------------------------

def frks(tv: ToricVariety, element: Sequence[TruncatedSeries], order: int
         ) -> tuple[TruncatedSeries, ...]:
    """Divisor-action image of sum_i c_i D_i: the j-th output is sum_i c_i A_{j,i}.

    This is the K-coefficient of z_j in sum_i c_i z_i dw_j/dz_i.
    """
    a_matrix = jacobi_matrix(tv, order)
    out = []
    for j in range(tv.m):
        acc = TruncatedSeries.zero(tv.q_ring, order)
        for i in range(tv.m):
            acc = acc + element[i] * a_matrix[j, i]
        out.append(acc)
    return tuple(out)


def coboundary(tv: ToricVariety, phi: Sequence[int], order: int
               ) -> tuple[TruncatedSeries, ...]:
    """delta(phi) = (<phi, b_i>)_i as a constant vector over K."""
    return tuple(TruncatedSeries.constant(tv.q_ring, order,
                                          lattice.dot(phi, tv.fan.rays[i]))
                 for i in range(tv.m))


@functools.lru_cache(maxsize=64)
def _relation_data(tv: ToricVariety, order: int):
    """Relation-span generators over K and the pivot bookkeeping for reduction.

    Generators: v_t = (<e_t, b_j> f_j)_j for the standard basis of the dual
    lattice; pivot columns are the lexicographically first ray indices on
    which the constant parts are linearly independent.
    """
    corr = correction_terms(tv, order)
    gens = [[corr.series[j] * tv.fan.rays[j][t] for j in range(tv.m)]
            for t in range(tv.n)]
    pivots: list[int] = []
    chosen: list[list[int]] = []
    for j in range(tv.m):
        column = [tv.fan.rays[j][t] for t in range(tv.n)]
        if lattice.rank_of(chosen + [column]) > len(chosen):
            pivots.append(j)
            chosen.append(column)
        if len(pivots) == tv.n:
            break
    pivot_block = SeriesMatrix.from_rows([[gens[t][j] for j in pivots]
                                          for t in range(tv.n)])
    return gens, tuple(pivots), pivot_block.inverse()


def relation_generators(tv: ToricVariety, order: int) -> tuple[tuple[TruncatedSeries, ...], ...]:
    gens, _, _ = _relation_data(tv, order)
    return tuple(tuple(row) for row in gens)


def reduce_mod_relations(tv: ToricVariety, vector: Sequence[TruncatedSeries],
                         order: int) -> tuple[TruncatedSeries, ...]:
    """Canonical representative of a vector in (+)_j K z_j modulo the relation span.

    Subtracts the unique span combination that zeroes the pivot coordinates;
    idempotent, K-linear, and kills exactly the relation span because the
    pivot block is invertible over K.
    """
    gens, pivots, pivot_inv = _relation_data(tv, order)
    coeffs = []
    for t in range(tv.n):
        acc = TruncatedSeries.zero(tv.q_ring, order)
        for s in range(tv.n):
            acc = acc + vector[pivots[s]] * pivot_inv[s, t]
        coeffs.append(acc)
    out = []
    for j in range(tv.m):
        acc = vector[j]
        for t in range(tv.n):
            acc = acc - coeffs[t] * gens[t][j]
        out.append(acc)
    return tuple(out)


# ---------------------------------------------------------------------------
# Identity checks and the verification report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    failures: tuple[dict, ...] = ()

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed,
                "failures": [dict(f) for f in self.failures]}


def _series_failures(diff: TruncatedSeries, **labels) -> list[dict]:
    return [{**labels, "exp": list(exp), "coeff": str(coeff)}
            for exp, coeff in diff.terms()]


def check_degeneration(tv: ToricVariety, order: int,
                       corrections: Optional[CorrectionTerms] = None) -> CheckResult:
    """<S^_j, dw_k> = delta_jk z_j in the disc ring, using closed-formula lifts.

    The lifts never see ``corrections``, so feeding a corrupted potential here
    is a genuine negative control.
    """
    corr = corrections if corrections is not None else correction_terms(tv, order)
    lifts = seidel_lifts_closed(tv, order)
    weights, scale = tv.z_weights
    failures = []
    for k in range(tv.m):
        z_order = scale * order + weights[k]
        wk = w_term(tv, corr, k, z_order)
        log_derivs = [wk.log_derivative(i) for i in range(tv.m)]
        for j in range(tv.m):
            acc = TruncatedSeries.zero(tv.z_ring, z_order)
            for i in range(tv.m):
                if not log_derivs[i].is_zero():
                    acc = acc + embed_curve_series(tv, lifts[j][i], z_order) * log_derivs[i]
            if j == k:
                shift = tuple(1 if i == j else 0 for i in range(tv.m))
                acc = acc - TruncatedSeries.monomial(tv.z_ring, z_order, shift)
            failures.extend(_series_failures(acc, j=j + 1, k=k + 1))
    return CheckResult("degeneration", not failures, tuple(failures))


def check_w_relations(tv: ToricVariety, order: int) -> CheckResult:
    """prod_j f_j^{<D_j,d>} = y^d / q^d for every Mori generator d.

    Negative powers are moved across, so both sides are honest power series:
    prod_{l_j > 0} f_j^{l_j} = (prod_a u_a^{d_a}) * prod_{l_j < 0} f_j^{-l_j}.
    """
    corr = correction_terms(tv, order)
    units = mirror_map(tv, order).inverse_units
    failures = []
    for d in tv.cones.mori_generators:
        ell = tv.iota(d)
        lhs = TruncatedSeries.one(tv.q_ring, order)
        rhs = TruncatedSeries.one(tv.q_ring, order)
        for a in range(tv.r):
            rhs = rhs * units[a].pow(d[a])
        for j in range(tv.m):
            if ell[j] > 0:
                lhs = lhs * corr.series[j].pow(ell[j])
            elif ell[j] < 0:
                rhs = rhs * corr.series[j].pow(-ell[j])
        failures.extend(_series_failures(lhs - rhs, d=list(d)))
    return CheckResult("w_relations", not failures, tuple(failures))


def check_linear_relations(tv: ToricVariety, order: int) -> CheckResult:
    """sum_j c_j D~_j = 0 for every integer kernel vector c of the divisor matrix."""
    elements = batyrev_elements(tv, order)
    failures = []
    for c in tv.kernel_vectors():
        for b in range(tv.r):
            acc = TruncatedSeries.zero(tv.q_ring, order)
            for j in range(tv.m):
                if c[j]:
                    acc = acc + elements[j][b] * c[j]
            failures.extend(_series_failures(acc, kernel=list(c), coord=b + 1))
    return CheckResult("linear_relations", not failures, tuple(failures))


def check_frks_identity(tv: ToricVariety, order: int) -> CheckResult:
    """sum_i <phi,b_i> z_i dw_j/dz_i = <phi,b_j> w_j in the disc ring."""
    corr = correction_terms(tv, order)
    weights, scale = tv.z_weights
    failures = []
    for j in range(tv.m):
        z_order = scale * order + weights[j]
        wj = w_term(tv, corr, j, z_order)
        for t in range(tv.n):
            acc = TruncatedSeries.zero(tv.z_ring, z_order)
            for i in range(tv.m):
                pairing = tv.fan.rays[i][t]
                if pairing:
                    acc = acc + wj.log_derivative(i) * pairing
            acc = acc - wj * tv.fan.rays[j][t]
            failures.extend(_series_failures(acc, j=j + 1, phi=t + 1))
    return CheckResult("frks_identity", not failures, tuple(failures))


def check_route_agreement(tv: ToricVariety, order: int) -> CheckResult:
    """Closed-formula lifts equal inverse-Jacobi lifts coefficient for coefficient."""
    closed = seidel_lifts_closed(tv, order)
    via_jacobi = seidel_lifts_jacobi(tv, order)
    failures = []
    for j in range(tv.m):
        for i in range(tv.m):
            diff = closed[j][i] - via_jacobi[j][i]
            failures.extend(_series_failures(diff, j=j + 1, k=i + 1))
    return CheckResult("route_agreement", not failures, tuple(failures))


def check_vertex_vanishing(tv: ToricVariety, order: int) -> CheckResult:
    """f_j = 1 whenever b_j is a vertex of the fan polytope."""
    corr = correction_terms(tv, order)
    one = TruncatedSeries.one(tv.q_ring, order)
    failures = []
    for j in sorted(tv.vertex_rays):
        failures.extend(_series_failures(corr.series[j] - one, j=j + 1))
    return CheckResult("vertex_vanishing", not failures, tuple(failures))


def check_fano_triviality(tv: ToricVariety, order: int) -> CheckResult:
    """For Fano fans the whole package collapses: g = 0, f = 1, S^_j = D_j."""
    if not tv.fano:
        return CheckResult("fano_triviality", True, ())
    mm = mirror_map(tv, order)
    corr = correction_terms(tv, order)
    one = TruncatedSeries.one(tv.q_ring, order)
    failures = []
    if not mm.is_identity:
        failures.append({"detail": "mirror map is not the identity"})
    if mm.has_h0_defect:
        failures.append({"detail": "scalar asymptotics defect is nonzero"})
    for j in range(tv.m):
        failures.extend(_series_failures(corr.series[j] - one, j=j + 1))
    for j, lift in enumerate(seidel_lifts_closed(tv, order)):
        for i in range(tv.m):
            target = one if i == j else TruncatedSeries.zero(tv.q_ring, order)
            failures.extend(_series_failures(lift[i] - target, j=j + 1, k=i + 1))
    return CheckResult("fano_triviality", not failures, tuple(failures))


ALL_CHECKS = (check_degeneration, check_w_relations, check_linear_relations,
              check_frks_identity, check_route_agreement, check_vertex_vanishing,
              check_fano_triviality)


@dataclass(frozen=True)
class VerificationReport:
    fan_hash: str
    order: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"fan_hash": self.fan_hash, "order": self.order,
                "checks": [c.as_dict() for c in self.checks]}


def run_verification(tv: ToricVariety, order: int) -> VerificationReport:
    """Run the full identity suite at the given truncation order."""
    results = tuple(check(tv, order) for check in ALL_CHECKS)
    return VerificationReport(tv.fan_hash, order, results)
