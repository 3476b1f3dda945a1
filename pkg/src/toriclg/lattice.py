"""Small exact linear algebra over Z and Q.

Everything here works on plain lists/tuples of ``int`` or ``Fraction`` and is
sized for fans with at most a handful of rays: clarity over asymptotics.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Optional, Sequence

IntMatrix = list[list[int]]
IntVector = tuple[int, ...]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def primitive_vector(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = math.gcd(*(abs(x) for x in v)) if any(v) else 1
    return tuple(x // g for x in v)


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul_int(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def det_fraction(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


# ---------------------------------------------------------------------------
# Smith normal form and consequences
# ---------------------------------------------------------------------------

def smith_normal_form(matrix: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular (U, S, V) with U @ A @ V = S diagonal.

    Diagonal entries are nonnegative and satisfy the divisibility chain.
    """
    a = [list(row) for row in matrix]
    rows, cols = len(a), len(a[0])
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # move a minimal-magnitude nonzero entry of the trailing block to (t, t)
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows)
                   for j in range(t, cols) if a[i][j] != 0]
        if not entries:
            break
        _, pi, pj = min(entries)
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = False
        for i in range(t + 1, rows):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                dirty = dirty or a[i][t] != 0
        for j in range(t + 1, cols):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                dirty = dirty or a[t][j] != 0
        if dirty:
            continue
        # enforce divisibility of the remaining block by the pivot
        bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                    if a[i][j] % a[t][t] != 0), None)
        if bad is not None:
            add_row(t, bad[0], 1)
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def integer_kernel(matrix: Sequence[Sequence[int]]) -> list[IntVector]:
    """Basis of the saturated lattice {x in Z^cols : A x = 0}."""
    _, s, v = smith_normal_form(matrix)
    cols = len(v)
    rank = sum(1 for t in range(min(len(s), cols)) if s[t][t] != 0)
    return [tuple(v[i][j] for i in range(cols)) for j in range(rank, cols)]


def integer_right_inverse(matrix: Sequence[Sequence[int]]) -> Optional[IntMatrix]:
    """G with A @ G = I over Z, or None if A is not a split surjection."""
    r, m = len(matrix), len(matrix[0])
    u, s, v = smith_normal_form(matrix)
    if any(t >= m or s[t][t] != 1 for t in range(r)):
        return None
    embed = [[1 if i == j else 0 for j in range(r)] for i in range(m)]
    return matmul_int(v, matmul_int(embed, u))


# ---------------------------------------------------------------------------
# Rational solving
# ---------------------------------------------------------------------------

def solve_affine(eq_rows: Sequence[Sequence], rhs: Sequence) -> Optional[tuple[list[Fraction], list[list[Fraction]]]]:
    """Solve A x = b over Q; return (particular, kernel basis) or None.

    The kernel basis spans the rational solution space of the homogeneous
    system, so the full solution set is particular + span(kernel).
    """
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(eq_rows, rhs, strict=True)]
    ncols = len(eq_rows[0]) if eq_rows else len(rhs) * 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows[r:]):
        return None
    free = [c for c in range(ncols) if c not in pivots]
    particular = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        particular[c] = rows[i][-1]
    kernel = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        kernel.append(vec)
    return particular, kernel


def invert_fraction_matrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse of a square matrix over Q; raises ValueError if singular."""
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    for c in range(n):
        pr = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pr is None:
            raise ValueError("matrix is singular over Q")
        aug[c], aug[pr] = aug[pr], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# Fourier-Motzkin feasibility
# ---------------------------------------------------------------------------

def _normalize_ineq(coeffs: tuple[Fraction, ...], rhs: Fraction):
    denom = math.lcm(*(x.denominator for x in coeffs), rhs.denominator)
    ints = [int(x * denom) for x in coeffs] + [int(rhs * denom)]
    g = math.gcd(*(abs(x) for x in ints)) or 1
    return tuple(x // g for x in ints)


def fm_sample(ineqs: Sequence[tuple[Sequence, object]], nvars: int) -> Optional[list[Fraction]]:
    """Find x in Q^nvars with coeffs . x >= rhs for every inequality.

    Plain Fourier-Motzkin elimination with duplicate pruning; fine for the
    handful-of-variables systems arising from fans.  Returns None when the
    system is infeasible.
    """
    system = set()
    for coeffs, rhs in ineqs:
        row = _normalize_ineq(tuple(Fraction(c) for c in coeffs), Fraction(rhs))
        if not any(row[:-1]):
            if row[-1] > 0:
                return None
            continue
        system.add(row)
    return _fm_eliminate(system, nvars)


def _fm_eliminate(system: set[tuple[int, ...]], nvars: int) -> Optional[list[Fraction]]:
    if nvars == 0:
        return []
    k = nvars - 1
    lowers, uppers, rest = [], [], set()
    for row in system:
        c = row[k]
        coeffs, rhs = row[:k], row[-1]
        if c > 0:
            lowers.append((c, coeffs, rhs))   # x >= (rhs - coeffs.y)/c
        elif c < 0:
            uppers.append((c, coeffs, rhs))   # x <= (rhs - coeffs.y)/c
        else:
            rest.add(row[:k] + (rhs,))
    for (cl, al, bl), (cu, au, bu) in itertools.product(lowers, uppers):
        # (bl - al.y)/cl <= (bu - au.y)/cu  with cl > 0 > cu; clearing the
        # denominators flips the sense once, giving (cl.au - cu.al).y >= cl.bu - cu.bl
        coeffs = tuple(cl * y - cu * x for x, y in zip(al, au))
        rhs = cl * bu - cu * bl
        row = _normalize_ineq(tuple(Fraction(c) for c in coeffs), Fraction(rhs))
        if not any(row[:-1]):
            if row[-1] > 0:
                return None
            continue
        rest.add(row)
    inner = _fm_eliminate(rest, k)
    if inner is None:
        return None
    lo = max(((Fraction(bl) - dot(al, inner)) / cl for cl, al, bl in lowers), default=None)
    hi = min(((Fraction(bu) - dot(au, inner)) / cu for cu, au, bu in uppers), default=None)
    if lo is None and hi is None:
        x = Fraction(0)
    elif lo is None:
        x = hi - 1
    elif hi is None:
        x = lo + 1 if not lowers else lo
    else:
        x = (lo + hi) / 2
    return inner + [x]


def feasible_nonneg_combination(generators: Sequence[Sequence[int]], target: Sequence) -> bool:
    """Is target a nonnegative rational combination of the generators?"""
    if not any(target):
        return True
    if not generators:
        return False
    dim = len(target)
    cols = list(zip(*generators))
    sol = solve_affine([list(cols[i]) for i in range(dim)], list(target))
    if sol is None:
        return False
    particular, kernel = sol
    if not kernel:
        return all(x >= 0 for x in particular)
    # lambda = particular + kernel.t >= 0, solve for t
    ineqs = []
    for i in range(len(generators)):
        ineqs.append(([vec[i] for vec in kernel], -particular[i]))
    return fm_sample(ineqs, len(kernel)) is not None


# ---------------------------------------------------------------------------
# Cone duality at desk scale
# ---------------------------------------------------------------------------

def rank_of(rows: Sequence[Sequence]) -> int:
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        inv = 1 / mat[rank][c]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def dual_cone_generators(generators: Sequence[IntVector], dim: int) -> list[IntVector]:
    """Extreme rays of {y : y . g >= 0 for all g}, for a full-dimensional cone.

    Facet enumeration over (dim-1)-subsets of the generators; exact and
    quadratic-ish, which is plenty below dimension ~6.
    """
    gens = [tuple(g) for g in generators]
    if rank_of(gens) < dim:
        raise ValueError("cone is not full-dimensional; dual has no unique ray description")
    if dim == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens if g[0]}
        if len(signs) != 1:
            return []
        return [(signs.pop(),)]
    found = set()
    for subset in itertools.combinations(gens, dim - 1):
        sol = solve_affine(list(subset), [0] * (dim - 1))
        if sol is None or len(sol[1]) != 1:
            continue
        normal = sol[1][0]
        denom = math.lcm(*(x.denominator for x in normal))
        candidate = primitive_vector([int(x * denom) for x in normal])
        for vec in (candidate, tuple(-x for x in candidate)):
            if all(dot(vec, g) >= 0 for g in gens):
                found.add(vec)
    return sorted(found)


def extremal_rays(generators: Sequence[IntVector], dim: int) -> list[IntVector]:
    """Subset of generators spanning the extreme rays (one per ray, primitive)."""
    gens = sorted({primitive_vector(g) for g in generators if any(g)})
    if dim == 1:
        return gens
    facets = dual_cone_generators(gens, dim)
    out = []
    for g in gens:
        active = [f for f in facets if dot(f, g) == 0]
        if active and rank_of(active) == dim - 1:
            out.append(g)
    return out


def convex_hull_vertex_indices(points: Sequence[IntVector]) -> set[int]:
    """Indices of points that are vertices of the convex hull of the set."""
    out = set()
    for i, p in enumerate(points):
        others = [q for j, q in enumerate(points) if j != i]
        if not others:
            out.add(i)
            continue
        dim = len(p)
        eq_rows = [[q[c] for q in others] for c in range(dim)]
        eq_rows.append([1] * len(others))
        sol = solve_affine(eq_rows, list(p) + [1])
        if sol is None:
            out.add(i)
            continue
        particular, kernel = sol
        if not kernel:
            if not all(x >= 0 for x in particular):
                out.add(i)
            continue
        ineqs = [([vec[j] for vec in kernel], -particular[j]) for j in range(len(others))]
        if fm_sample(ineqs, len(kernel)) is None:
            out.add(i)
    return out
