"""Truncated multivariate power series with exact rational coefficients.

A series lives in a ring described by a :class:`RingDescriptor`: a fixed
number of variables, a strictly positive integer grading weight per variable,
and an optional support-cone membership predicate.  All arithmetic truncates
at a fixed grading order and never stores zero coefficients, so equality of
coefficient maps is equality of series-mod-order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

Exponent = tuple[int, ...]


class SeriesError(ValueError):
    """Raised on ring/order mismatches and domain violations."""


@dataclass(frozen=True)
class RingDescriptor:
    """Ambient ring of a truncated series.

    ``weights`` grade the exponent lattice; ``membership`` (optional) tests
    that an exponent lies in the allowed support cone.  Two descriptors are
    interchangeable iff label and weights agree.
    """

    label: str
    weights: tuple[int, ...]
    membership: Optional[Callable[[Exponent], bool]] = field(
        default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if not self.weights or any(w <= 0 for w in self.weights):
            raise SeriesError("grading weights must be positive integers")

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def grading(self, exponent: Exponent) -> int:
        return sum(w * e for w, e in zip(self.weights, exponent))

    def contains(self, exponent: Exponent) -> bool:
        return self.membership is None or self.membership(exponent)

    def var_name(self, i: int) -> str:
        return f"{self.label}{i + 1}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise SeriesError(f"coefficients must be exact rationals, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Finitely supported exponent->coefficient map, exact mod grading > order."""

    ring: RingDescriptor
    order: int
    coeffs: dict[Exponent, Fraction]

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingDescriptor, order: int) -> "TruncatedSeries":
        return cls(ring, order, {})

    @classmethod
    def constant(cls, ring: RingDescriptor, order: int, value) -> "TruncatedSeries":
        value = _as_fraction(value)
        zero_exp = (0,) * ring.nvars
        return cls(ring, order, {zero_exp: value} if value else {})

    @classmethod
    def one(cls, ring: RingDescriptor, order: int) -> "TruncatedSeries":
        return cls.constant(ring, order, 1)

    @classmethod
    def monomial(cls, ring: RingDescriptor, order: int, exponent: Sequence[int],
                 coefficient=1) -> "TruncatedSeries":
        return cls.from_terms(ring, order, [(tuple(exponent), coefficient)])

    @classmethod
    def variable(cls, ring: RingDescriptor, order: int, index: int) -> "TruncatedSeries":
        exp = tuple(1 if i == index else 0 for i in range(ring.nvars))
        return cls.from_terms(ring, order, [(exp, 1)])

    @classmethod
    def from_terms(cls, ring: RingDescriptor, order: int,
                   terms: Iterable[tuple[Sequence[int], object]]) -> "TruncatedSeries":
        """Build a series from (exponent, coefficient) pairs, validating support."""
        coeffs: dict[Exponent, Fraction] = {}
        for exponent, value in terms:
            exp = tuple(exponent)
            if len(exp) != ring.nvars:
                raise SeriesError(f"exponent {exp} has wrong length for {ring.label}-ring")
            if ring.grading(exp) > order:
                raise SeriesError(f"exponent {exp} exceeds truncation order {order}")
            if any(exp) and ring.grading(exp) <= 0:
                raise SeriesError(f"exponent {exp} has nonpositive grading")
            if not ring.contains(exp):
                raise SeriesError(f"exponent {exp} lies outside the support cone")
            value = _as_fraction(value)
            total = coeffs.get(exp, Fraction(0)) + value
            if total:
                coeffs[exp] = total
            else:
                coeffs.pop(exp, None)
        return cls(ring, order, coeffs)

    # -- basic queries -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.order, frozenset(self.coeffs.items())))

    @property
    def zero_exponent(self) -> Exponent:
        return (0,) * self.ring.nvars

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.coeffs.get(tuple(exponent), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get(self.zero_exponent, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms sorted lexicographically by exponent (the canonical order)."""
        return sorted(self.coeffs.items())

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.ring != other.ring or self.order != other.order:
            raise SeriesError(
                f"ring/order mismatch: ({self.ring.label}, N={self.order}) vs "
                f"({other.ring.label}, N={other.order})")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        coeffs = dict(self.coeffs)
        for exp, c in other.coeffs.items():
            total = coeffs.get(exp, Fraction(0)) + c
            if total:
                coeffs[exp] = total
            else:
                del coeffs[exp]
        return TruncatedSeries(self.ring, self.order, coeffs)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.order,
                               {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        weights = self.ring.weights
        order = self.order
        out: dict[Exponent, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                if sum(w * e for w, e in zip(weights, exp)) > order:
                    continue
                total = out.get(exp, Fraction(0)) + ca * cb
                if total:
                    out[exp] = total
                else:
                    del out[exp]
        return TruncatedSeries(self.ring, self.order, out)

    __rmul__ = __mul__

    def scale(self, value) -> "TruncatedSeries":
        value = _as_fraction(value)
        if not value:
            return TruncatedSeries.zero(self.ring, self.order)
        return TruncatedSeries(self.ring, self.order,
                               {e: c * value for e, c in self.coeffs.items()})

    def truncate(self, order: int) -> "TruncatedSeries":
        """Re-truncate to a lower (or equal) order."""
        if order > self.order:
            raise SeriesError("cannot raise the truncation order of a computed series")
        grading = self.ring.grading
        return TruncatedSeries(self.ring, order,
                               {e: c for e, c in self.coeffs.items() if grading(e) <= order})

    def pow(self, k: int) -> "TruncatedSeries":
        """Integer power; negative powers require a unit."""
        if k < 0:
            return self.inverse().pow(-k)
        result = TruncatedSeries.one(self.ring, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- transcendental / unit operations ------------------------------------

    def exp(self) -> "TruncatedSeries":
        """exp of a series with zero constant term (truncated Taylor sum)."""
        if self.constant_term != 0:
            raise SeriesError("exp requires zero constant term")
        result = TruncatedSeries.one(self.ring, self.order)
        term = TruncatedSeries.one(self.ring, self.order)
        for k in range(1, self.order + 1):
            term = term * self * Fraction(1, k)
            if term.is_zero():
                break
            result = result + term
        return result

    def log(self) -> "TruncatedSeries":
        """log of a series with constant term exactly 1."""
        if self.constant_term != 1:
            raise SeriesError("log requires constant term 1")
        x = self - TruncatedSeries.one(self.ring, self.order)
        result = TruncatedSeries.zero(self.ring, self.order)
        term = TruncatedSeries.one(self.ring, self.order)
        for k in range(1, self.order + 1):
            term = term * x
            if term.is_zero():
                break
            result = result + term * Fraction((-1) ** (k + 1), k)
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse of a unit (nonzero constant term)."""
        c = self.constant_term
        if c == 0:
            raise SeriesError("cannot invert a series with zero constant term")
        x = self * (1 / c) - TruncatedSeries.one(self.ring, self.order)
        result = TruncatedSeries.one(self.ring, self.order)
        term = TruncatedSeries.one(self.ring, self.order)
        for _ in range(self.order):
            term = term * x
            if term.is_zero():
                break
            term = -term
            result = result + term
        return result * (1 / c)

    def substitute(self, target_ring: RingDescriptor,
                   units: Sequence["TruncatedSeries"]) -> "TruncatedSeries":
        """Apply the unit-monomial substitution  x_a -> t_a * units[a].

        The target ring must have the same variable count and gradings, and
        every image factor must be a unit; this is exactly the shape of a
        mirror-transformation change of variables.
        """
        if target_ring.weights != self.ring.weights:
            raise SeriesError("substitution requires matching variable gradings")
        if len(units) != self.ring.nvars:
            raise SeriesError("one unit factor per variable is required")
        for u in units:
            if u.ring != target_ring or u.order != self.order:
                raise SeriesError("unit factors must live in the target ring at the same order")
            if u.constant_term == 0:
                raise SeriesError("image is not of unit-monomial shape (factor not a unit)")
        power_cache: list[dict[int, TruncatedSeries]] = [
            {0: TruncatedSeries.one(target_ring, self.order)} for _ in units]

        def unit_power(a: int, k: int) -> TruncatedSeries:
            cache = power_cache[a]
            if k not in cache:
                if k < 0:
                    cache[k] = units[a].inverse().pow(-k)
                else:
                    cache[k] = unit_power(a, k - 1) * units[a]
            return cache[k]

        result = TruncatedSeries.zero(target_ring, self.order)
        for exp, c in self.coeffs.items():
            term = TruncatedSeries.monomial(target_ring, self.order, exp, c)
            for a, k in enumerate(exp):
                if k:
                    term = term * unit_power(a, k)
            result = result + term
        return result

    def log_derivative(self, index: int) -> "TruncatedSeries":
        """x_i d/dx_i: scales each monomial by its i-th exponent entry."""
        if not 0 <= index < self.ring.nvars:
            raise SeriesError(f"variable index {index} out of range")
        out = {}
        for exp, c in self.coeffs.items():
            if exp[index]:
                out[exp] = c * exp[index]
        return TruncatedSeries(self.ring, self.order, out)

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exp, c in self.terms():
            factors = [f"{self.ring.var_name(i)}^{e}" if e not in (0, 1)
                       else self.ring.var_name(i)
                       for i, e in enumerate(exp) if e]
            mon = "*".join(factors)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append(f"-{mon}")
            else:
                parts.append(f"{c}*{mon}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.ring.label!r}, N={self.order}, {self})"


def exp_newton(s: TruncatedSeries) -> TruncatedSeries:
    """Order-raising Newton iteration for exp; cross-checks the Taylor route.

    Iterates u <- u * (1 + s - log u), which doubles the agreement order each
    step, starting from u = 1.
    """
    if s.constant_term != 0:
        raise SeriesError("exp requires zero constant term")
    one = TruncatedSeries.one(s.ring, s.order)
    u = one
    agreement = 1
    while agreement <= s.order:
        u = u * (one + s - u.log())
        agreement *= 2
    return u


def geometric_inverse_check(u: TruncatedSeries) -> bool:
    """u * u^{-1} == 1, used as a self-test hook."""
    return u * u.inverse() == TruncatedSeries.one(u.ring, u.order)


# ---------------------------------------------------------------------------
# Matrices of series
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SeriesMatrix:
    """Rectangular matrix with TruncatedSeries entries over a common ring/order."""

    entries: tuple[tuple[TruncatedSeries, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise SeriesError("matrix must be nonempty")
        first = self.entries[0][0]
        for row in self.entries:
            if len(row) != len(self.entries[0]):
                raise SeriesError("matrix rows must have equal length")
            for s in row:
                first._check_compatible(s)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[TruncatedSeries]]) -> "SeriesMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def identity(cls, ring: RingDescriptor, order: int, n: int) -> "SeriesMatrix":
        one = TruncatedSeries.one(ring, order)
        zero = TruncatedSeries.zero(ring, order)
        return cls.from_rows([[one if i == j else zero for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0])

    @property
    def ring(self) -> RingDescriptor:
        return self.entries[0][0].ring

    @property
    def order(self) -> int:
        return self.entries[0][0].order

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __getitem__(self, pos: tuple[int, int]) -> TruncatedSeries:
        return self.entries[pos[0]][pos[1]]

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix(tuple(zip(*self.entries)))

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if self.ncols != other.nrows:
            raise SeriesError("matrix shapes do not compose")
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = TruncatedSeries.zero(self.ring, self.order)
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(row)
        return SeriesMatrix.from_rows(rows)

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise SeriesError("matrix shapes do not match")
        return SeriesMatrix.from_rows(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)])

    def constant_part(self) -> list[list[Fraction]]:
        return [[s.constant_term for s in row] for row in self.entries]

    def inverse(self) -> "SeriesMatrix":
        """Invert a square matrix whose constant part is invertible over Q.

        Inverts the constant part exactly, then sums the Neumann series of the
        strictly-positive-grading remainder; the series terminates at the
        truncation order.
        """
        from .lattice import invert_fraction_matrix

        if self.nrows != self.ncols:
            raise SeriesError("only square matrices can be inverted")
        n = self.nrows
        try:
            c_inv = invert_fraction_matrix(self.constant_part())
        except ValueError as exc:
            raise SeriesError("constant part of the matrix is singular") from exc
        ring, order = self.ring, self.order
        c_inv_mat = SeriesMatrix.from_rows(
            [[TruncatedSeries.constant(ring, order, c_inv[i][j]) for j in range(n)]
             for i in range(n)])
        identity = SeriesMatrix.identity(ring, order, n)
        y = identity - c_inv_mat * self  # entries have grading >= 1
        result = identity
        power = identity
        for _ in range(order):
            power = power * y
            if all(s.is_zero() for row in power.entries for s in row):
                break
            result = _matrix_add(result, power)
        return result * c_inv_mat

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(s) for s in row) + "]" for row in self.entries)


def _matrix_add(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    return SeriesMatrix.from_rows(
        [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)])


# ---------------------------------------------------------------------------
# Serialization (stable format shared with the CLI)
# ---------------------------------------------------------------------------

def series_to_obj(series: TruncatedSeries) -> list[dict]:
    """JSON-ready list of terms, sorted lexicographically by exponent."""
    return [{"exp": list(exp), "num": str(c.numerator), "den": str(c.denominator)}
            for exp, c in series.terms()]


def series_from_obj(ring: RingDescriptor, order: int, data: Iterable[dict]) -> TruncatedSeries:
    terms = [(tuple(item["exp"]), Fraction(int(item["num"]), int(item["den"])))
             for item in data]
    return TruncatedSeries.from_terms(ring, order, terms)
