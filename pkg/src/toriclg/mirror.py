"""Mirror transformation, correction terms and the Landau-Ginzburg potential.

The hypergeometric series here are expanded per effective curve class in a
tiny quotient ring (cohomological degree <= 2, tracked Laurent powers of the
equivariant parameter), which is all the asymptotic extraction ever needs:
products of two degree-2 classes cannot contribute to the degree-<=2 window.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .fan import FanGateError, ToricVariety
from .series import RingDescriptor, SeriesMatrix, TruncatedSeries


class OutOfModelError(ValueError):
    """The requested invariant is not encoded by the correction terms."""


def _require_semi_positive(tv: ToricVariety):
    if not tv.semi_positive:
        raise FanGateError(
            "fan gate failed: the anticanonical class pairs negatively with a wall "
            "curve class; mirror-map and potential computations assume a "
            "semi-positive first Chern class")


# ---------------------------------------------------------------------------
# I-function asymptotics in the (H^0 + H^2) x Laurent-z window
# ---------------------------------------------------------------------------

_Window = dict[int, tuple[Fraction, tuple[Fraction, ...]]]


def _window_one(r: int) -> _Window:
    return {0: (Fraction(1), (Fraction(0),) * r)}


def _window_mul(a: _Window, b: _Window, r: int) -> _Window:
    out: _Window = {}
    for za, (sa, va) in a.items():
        for zb, (sb, vb) in b.items():
            z = za + zb
            s, v = out.get(z, (Fraction(0), (Fraction(0),) * r))
            s = s + sa * sb
            v = tuple(x + sa * y2 + sb * y1 for x, y1, y2 in zip(v, va, vb))
            out[z] = (s, v)
    return {z: sv for z, sv in out.items() if sv[0] or any(sv[1])}


def _hypergeometric_factor(pairing: int, divisor: Sequence[int], r: int) -> _Window:
    """The factor prod_{k<=0}(D+kz) / prod_{k<=pairing}(D+kz) for one divisor.

    In the window D^2 = 0: for pairing l >= 0 this is (1 - H_l D/z) / (l! z^l)
    with H_l the harmonic number; for l < 0 it is the polynomial
    (-1)^{l+1} (-l-1)! z^{-l-1} D.
    """
    vec = tuple(Fraction(x) for x in divisor)
    zero = (Fraction(0),) * r
    if pairing == 0:
        return _window_one(r)
    if pairing > 0:
        inv_fact = Fraction(1, math.factorial(pairing))
        harmonic = sum(Fraction(1, k) for k in range(1, pairing + 1))
        return {-pairing: (inv_fact, zero),
                -pairing - 1: (Fraction(0), tuple(-harmonic * inv_fact * x for x in vec))}
    sign = -1 if (pairing + 1) % 2 else 1
    scale = Fraction(sign * math.factorial(-pairing - 1))
    return {-pairing - 1: (Fraction(0), tuple(scale * x for x in vec))}


@dataclass(frozen=True)
class IAsymptotics:
    """z^{-1} data of the I-function: H^2 part g_a and scalar part g00."""

    forward: tuple[TruncatedSeries, ...]
    h0_defect: TruncatedSeries


def ifunction_asymptotics(tv: ToricVariety, order: int) -> IAsymptotics:
    """Expand the I-function over effective classes of nef degree <= order."""
    _require_semi_positive(tv)
    ring = tv.y_ring
    r = tv.r
    g_terms: list[list] = [[] for _ in range(r)]
    g00_terms: list = []
    for d in tv.enumerate_ne(order):
        if not any(d):
            continue
        window = _window_one(r)
        for i in range(tv.m):
            factor = _hypergeometric_factor(tv.divisor_pairing(i, d),
                                            tv.basis.divisor_column(i), r)
            window = _window_mul(window, factor, r)
        scalar, vec = window.get(-1, (Fraction(0), (Fraction(0),) * r))
        if scalar:
            g00_terms.append((d, scalar))
        for a, coeff in enumerate(vec):
            if coeff:
                g_terms[a].append((d, coeff))
    forward = tuple(TruncatedSeries.from_terms(ring, order, terms) for terms in g_terms)
    h0 = TruncatedSeries.from_terms(ring, order, g00_terms)
    return IAsymptotics(forward, h0)


def g0_series(tv: ToricVariety, j: int, order: int) -> TruncatedSeries:
    """Hypergeometric series attached to ray j (0-based), over the y-ring.

    Sums over effective d with <c_1,d> = 0, <D_j,d> < 0 and <D_i,d> >= 0 for
    i != j, with coefficient (-1)^{<D_j,d>} (-<D_j,d>-1)! / prod_{i!=j} <D_i,d>!.
    """
    _require_semi_positive(tv)
    terms = []
    for d in tv.enumerate_ne(order):
        pairings = [tv.divisor_pairing(i, d) for i in range(tv.m)]
        lj = pairings[j]
        if lj >= 0 or sum(pairings) != 0:
            continue
        if any(pairings[i] < 0 for i in range(tv.m) if i != j):
            continue
        num = (-1 if lj % 2 else 1) * math.factorial(-lj - 1)
        den = math.prod(math.factorial(pairings[i]) for i in range(tv.m) if i != j)
        terms.append((d, Fraction(num, den)))
    return TruncatedSeries.from_terms(tv.y_ring, order, terms)


# ---------------------------------------------------------------------------
# Mirror map
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MirrorMap:
    """log q_a = log y_a + g_a(y) together with its order-by-order inverse."""

    forward: tuple[TruncatedSeries, ...]       # g_a over the y-ring, g_a(0) = 0
    inverse_units: tuple[TruncatedSeries, ...]  # u_a over the q-ring, y_a = q_a u_a
    h0_defect: TruncatedSeries                  # scalar z^{-1} part, expected 0

    @property
    def order(self) -> int:
        return self.h0_defect.order

    @property
    def has_h0_defect(self) -> bool:
        return not self.h0_defect.is_zero()

    @property
    def is_identity(self) -> bool:
        return all(g.is_zero() for g in self.forward)

    def to_q(self, series_y: TruncatedSeries, q_ring: RingDescriptor) -> TruncatedSeries:
        """Rewrite a y-ring series over the q-ring via y_a = q_a u_a(q)."""
        return series_y.substitute(q_ring, self.inverse_units)


@functools.lru_cache(maxsize=64)
def mirror_map(tv: ToricVariety, order: int) -> MirrorMap:
    """Extract g from the I-function and invert it by fixed-point iteration."""
    asym = ifunction_asymptotics(tv, order)
    if not asym.h0_defect.is_zero():
        warnings.warn("I-function has a nonzero scalar z^{-1} part; the mirror map "
                      "uses only the degree-2 part", stacklevel=2)
    q_ring = tv.q_ring
    units = tuple(TruncatedSeries.one(q_ring, order) for _ in range(tv.r))
    for _ in range(order):
        new_units = tuple((-g.substitute(q_ring, units)).exp() for g in asym.forward)
        if new_units == units:
            break
        units = new_units
    mm = MirrorMap(asym.forward, units, asym.h0_defect)
    _check_round_trip(tv, mm)
    return mm


def _check_round_trip(tv: ToricVariety, mm: MirrorMap):
    # q_a = y_a exp(g_a(y)) composed with y_a = q_a u_a(q) must be the identity,
    # i.e. u_a * exp(g_a(y(q))) = 1 for every a.
    one = TruncatedSeries.one(tv.q_ring, mm.order)
    for a in range(tv.r):
        composed = mm.inverse_units[a] * mm.to_q(mm.forward[a], tv.q_ring).exp()
        assert composed == one, f"mirror map round trip failed in variable {a + 1}"


# ---------------------------------------------------------------------------
# Correction terms, potential, open invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrectionTerms:
    """Unit series f_j over the q-ring; f_j(0) = 1."""

    series: tuple[TruncatedSeries, ...]

    @property
    def order(self) -> int:
        return self.series[0].order


@functools.lru_cache(maxsize=64)
def correction_terms(tv: ToricVariety, order: int) -> CorrectionTerms:
    """f_j = exp(g0^{(j)}(y)) rewritten in the q-coordinates."""
    mm = mirror_map(tv, order)
    out = []
    for j in range(tv.m):
        g0_q = mm.to_q(g0_series(tv, j, order), tv.q_ring)
        out.append(g0_q.exp())
    return CorrectionTerms(tuple(out))


def embed_curve_series(tv: ToricVariety, series_q: TruncatedSeries,
                       z_order: int, shift: Sequence[int] = ()) -> TruncatedSeries:
    """Embed a q-ring series into the z-ring via q^d -> z^{iota(d)} (+ shift).

    ``shift`` adds a fixed disc exponent, so f_j * z_j is the embedding of f_j
    with shift e_j.
    """
    shift_exp = tuple(shift) if shift else (0,) * tv.m
    terms = []
    for d, c in series_q.coeffs.items():
        exp = tuple(x + y for x, y in zip(tv.iota(d), shift_exp))
        terms.append((exp, c))
    return TruncatedSeries.from_terms(tv.z_ring, z_order, terms)


def w_term(tv: ToricVariety, corrections: CorrectionTerms, j: int,
           z_order: int) -> TruncatedSeries:
    """w_j = f_j(q) z_j as an element of the disc ring at the given order."""
    shift = tuple(1 if i == j else 0 for i in range(tv.m))
    return embed_curve_series(tv, corrections.series[j], z_order, shift)


@dataclass(frozen=True)
class Potential:
    """Correction terms plus the assembled potential W = sum_j f_j z_j."""

    corrections: CorrectionTerms
    w_terms: tuple[TruncatedSeries, ...]
    total: TruncatedSeries


@functools.lru_cache(maxsize=64)
def potential(tv: ToricVariety, order: int) -> Potential:
    """Assemble W over the z-ring, truncated so every kept coefficient is exact."""
    corr = correction_terms(tv, order)
    weights, scale = tv.z_weights
    z_order = scale * order + min(weights)
    terms = tuple(w_term(tv, corr, j, z_order) for j in range(tv.m))
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    return Potential(corr, terms, total)


def open_gw(tv: ToricVariety, i: int, d: Sequence[int], order: int = None) -> Fraction:
    """Open Gromov-Witten invariant n_{beta_i + d} (i 0-based).

    Only classes beta_i + d with d effective and <c_1, d> = 0 are encoded by
    the correction terms; anything else raises :class:`OutOfModelError`.
    """
    d = tuple(int(x) for x in d)
    if len(d) != tv.r:
        raise OutOfModelError(f"class must have {tv.r} coordinates")
    if not tv.ne_contains(d):
        raise OutOfModelError(f"{list(d)} is not an effective curve class: out of model")
    if tv.c1_pairing(d) != 0:
        raise OutOfModelError(
            f"{list(d)} pairs to {tv.c1_pairing(d)} with c_1; the invariant is not "
            "encoded by the correction terms: out of model")
    if order is None:
        order = max(sum(d), 1)
    if sum(d) > order:
        raise OutOfModelError(f"nef degree of {list(d)} exceeds the truncation order")
    return correction_terms(tv, order).series[i].coefficient(d)


# ---------------------------------------------------------------------------
# Jacobi matrix of the potential
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=64)
def jacobi_matrix(tv: ToricVariety, order: int) -> SeriesMatrix:
    """A_{k,i} with z_i dw_k/dz_i = A_{k,i} z_k, an m x m matrix over the q-ring.

    A_{k,i} = delta_{ik} f_k + sum_a m_{ai} q_a df_k/dq_a; its constant part is
    the identity because every f_k is 1 + O(q).
    """
    corr = correction_terms(tv, order)
    ring = tv.q_ring
    rows = []
    for k in range(tv.m):
        f_k = corr.series[k]
        log_derivs = [f_k.log_derivative(a) for a in range(tv.r)]
        row = []
        for i in range(tv.m):
            col = tv.basis.divisor_column(i)
            entry = TruncatedSeries.zero(ring, order)
            for a in range(tv.r):
                if col[a]:
                    entry = entry + log_derivs[a] * col[a]
            if i == k:
                entry = entry + f_k
            row.append(entry)
        rows.append(row)
    return SeriesMatrix.from_rows(rows)
