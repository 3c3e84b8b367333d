"""Exact dense linear algebra over the Gaussian rationals.

Scalars are complex numbers whose real and imaginary parts are rationals
kept in lowest terms; matrices are dense, immutable and row-major.  Every
operation is exact: there is no floating point anywhere in this module,
and equality always means structural equality of reduced fractions.

Randomness is only available through explicit seeds, so any value produced
here can be regenerated bit for bit on any platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .errors import DomainError, ShapeError

_ZERO = Fraction(0)


def _fraction(value) -> Fraction:
    """Coerce an int, string or Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if "." in value or "e" in value.lower():
            raise DomainError(f"decimal literal {value!r} is not an exact rational")
        return Fraction(value)
    if isinstance(value, float):
        raise DomainError(f"float {value!r} rejected: arithmetic here is exact")
    raise DomainError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Scalar:
    """A Gaussian rational: re + im*i with both parts reduced fractions."""

    re: Fraction
    im: Fraction = _ZERO

    def __post_init__(self):
        object.__setattr__(self, "re", _fraction(self.re))
        object.__setattr__(self, "im", _fraction(self.im))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    @staticmethod
    def _coerce(value):
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction, str)):
            return Scalar(_fraction(value))
        return None

    def __add__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __mul__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise DomainError("division by zero")
        return Scalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = Scalar._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = f"{self.im}i"
        if not self.re:
            return im
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{im}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)

#: A vector is a plain tuple of scalars; helpers below keep usage terse.
Vector = tuple[Scalar, ...]


def scalar(re, im=0) -> Scalar:
    return Scalar(_fraction(re), _fraction(im))


def _entry(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, tuple) and len(value) == 2:
        return Scalar(_fraction(value[0]), _fraction(value[1]))
    return Scalar(_fraction(value))


def vector(values: Iterable) -> Vector:
    return tuple(_entry(v) for v in values)


def zero_vector(dim: int) -> Vector:
    return (ZERO,) * dim


def basis_vector(dim: int, index: int) -> Vector:
    return tuple(ONE if j == index else ZERO for j in range(dim))


def vec_add(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ShapeError("vector lengths differ")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise ShapeError("vector lengths differ")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Scalar, u: Vector) -> Vector:
    c = _entry(c)
    return tuple(c * a for a in u)


def vec_is_zero(u: Vector) -> bool:
    return all(a.is_zero for a in u)


def vec_dot(u: Vector, v: Vector) -> Scalar:
    """Bilinear pairing sum(u_i * v_i), no conjugation."""
    if len(u) != len(v):
        raise ShapeError("vector lengths differ")
    total = ZERO
    for a, b in zip(u, v):
        total = total + a * b
    return total


@dataclass(frozen=True)
class Matrix:
    """A dense matrix of scalars with exact arithmetic.

    Immutable; all binary operations require exactly matching shapes.
    """

    entries: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ShapeError("matrices must have at least one row and column")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise ShapeError("ragged rows")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "Matrix":
        return cls(tuple(tuple(_entry(v) for v in row) for row in rows))

    @classmethod
    def from_columns(cls, cols: Sequence[Vector]) -> "Matrix":
        if not cols:
            raise ShapeError("no columns given")
        depth = len(cols[0])
        return cls.from_rows([[cols[j][i] for j in range(len(cols))] for i in range(depth)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls(((ZERO,) * cols,) * rows)

    @classmethod
    def identity(cls, dim: int) -> "Matrix":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)))

    @classmethod
    def unit(cls, dim: int, i: int, j: int) -> "Matrix":
        """The square matrix unit with a single 1 at (i, j), zero-indexed."""
        return cls(
            tuple(
                tuple(ONE if (r, c) == (i, j) else ZERO for c in range(dim))
                for r in range(dim)
            )
        )

    @classmethod
    def diagonal(cls, values: Iterable) -> "Matrix":
        vals = [_entry(v) for v in values]
        d = len(vals)
        return cls(tuple(tuple(vals[i] if i == j else ZERO for j in range(d)) for i in range(d)))

    # -- shape and access ---------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def entry(self, i: int, j: int) -> Scalar:
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(tuple(self.column(j) for j in range(self.cols)))

    def vectorize(self) -> Vector:
        """Row-major flattening, the bridge between matrices and vectors."""
        return tuple(e for row in self.entries for e in row)

    # -- arithmetic ----------------------------------------------------

    @cached_property
    def _int_form(self):
        """(den, re_grid, im_grid) with self == (re_grid + i*im_grid)/den.

        Lets matrix products run on plain integers; one fraction
        normalization per output entry instead of one per flop.
        """
        den = 1
        for row in self.entries:
            for s in row:
                den = lcm(den, s.re.denominator, s.im.denominator)
        re_g = [[int(s.re * den) for s in row] for row in self.entries]
        im_g = [[int(s.im * den) for s in row] for row in self.entries]
        return den, re_g, im_g

    def _same_shape(self, other: "Matrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeError(f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same_shape(other)
        return Matrix(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries))
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._same_shape(other)
        return Matrix(
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries))
        )

    def __neg__(self):
        return Matrix(tuple(tuple(-a for a in row) for row in self.entries))

    def __mul__(self, other):
        c = Scalar._coerce(other)
        if c is None:
            return NotImplemented
        return Matrix(tuple(tuple(c * a for a in row) for row in self.entries))

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, tuple):
            if self.cols != len(other):
                raise ShapeError("matrix-vector length mismatch")
            return tuple(vec_dot(row, other) for row in self.entries)
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        da, ra, ia = self._int_form
        db, rb, ib = other._int_form
        den = da * db
        inner = self.cols
        out = []
        for i in range(self.rows):
            ar, ai = ra[i], ia[i]
            row_out = []
            for j in range(other.cols):
                acc_re = 0
                acc_im = 0
                for t in range(inner):
                    x = ar[t]
                    y = ai[t]
                    u = rb[t][j]
                    v = ib[t][j]
                    acc_re += x * u - y * v
                    acc_im += x * v + y * u
                row_out.append(Scalar(Fraction(acc_re, den), Fraction(acc_im, den)))
            out.append(tuple(row_out))
        return Matrix(tuple(out))

    def power(self, k: int) -> "Matrix":
        if not self.is_square:
            raise ShapeError("powers need a square matrix")
        if k < 0:
            raise DomainError("negative matrix powers are not supported")
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base if k > 1 else base
            k >>= 1
        return result

    def to_text(self) -> str:
        """Fixed row-major layout with reduced fractions, for reports."""
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)

    def __repr__(self) -> str:
        body = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)
        return f"Matrix({body})"


def matrix_units(dim: int) -> list[Matrix]:
    """All dim*dim matrix units, row-major order."""
    return [Matrix.unit(dim, i, j) for i in range(dim) for j in range(dim)]


def trace(m: Matrix) -> Scalar:
    if not m.is_square:
        raise ShapeError("trace needs a square matrix")
    total = ZERO
    for i in range(m.rows):
        total = total + m.entries[i][i]
    return total


# -- row reduction and everything built on it -------------------------


def rref(rows: Sequence[Vector]) -> tuple[list[Vector], list[int]]:
    """Reduced row echelon form of a list of row vectors.

    Returns (nonzero reduced rows, pivot column indices).  Exact Gaussian
    elimination with leading entries normalized to 1.
    """
    work = [list(r) for r in rows]
    if not work:
        return [], []
    width = len(work[0])
    pivots: list[int] = []
    out: list[list[Scalar]] = []
    r = 0
    for col in range(width):
        pivot_row = None
        for i in range(r, len(work)):
            if not work[i][col].is_zero:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        inv = ONE / work[r][col]
        work[r] = [inv * x for x in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][col].is_zero:
                factor = work[i][col]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    out = [tuple(row) for row in work[:r]]
    return out, pivots


def rank(m: Matrix) -> int:
    return len(rref(m.entries)[0])


def kernel_basis(m: Matrix) -> list[Vector]:
    """Exact basis of the right kernel {v : m v = 0}.

    Each basis vector is normalized so its first nonzero entry is 1; the
    list is ordered by the free column it corresponds to.
    """
    reduced, pivots = rref(m.entries)
    width = m.cols
    free = [c for c in range(width) if c not in pivots]
    basis: list[Vector] = []
    for fc in free:
        v = [ZERO] * width
        v[fc] = ONE
        for r_idx, pc in enumerate(pivots):
            v[pc] = -reduced[r_idx][fc]
        first = next(x for x in v if not x.is_zero)
        if first != ONE:
            inv = ONE / first
            v = [inv * x for x in v]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """One exact solution X of a @ X = b, or None if inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    if a.rows != b.rows:
        raise ShapeError("row counts differ")
    augmented = [a.entries[i] + b.entries[i] for i in range(a.rows)]
    reduced, pivots = rref(augmented)
    n = a.cols
    for row_idx, pc in enumerate(pivots):
        if pc >= n:
            return None
    sol = [[ZERO] * b.cols for _ in range(n)]
    for row_idx, pc in enumerate(pivots):
        for j in range(b.cols):
            sol[pc][j] = reduced[row_idx][n + j]
    return Matrix(tuple(tuple(row) for row in sol))


def solve_vec(a: Matrix, v: Vector) -> Vector | None:
    res = solve(a, Matrix.from_columns([v]))
    if res is None:
        return None
    return res.column(0)


def solve_left(a: Matrix, b: Matrix) -> Matrix | None:
    """One exact solution X of X @ a = b, or None."""
    res = solve(a.transpose(), b.transpose())
    return None if res is None else res.transpose()


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ShapeError("only square matrices can be inverted")
    d = m.rows
    eye = Matrix.identity(d)
    augmented = [m.entries[i] + eye.entries[i] for i in range(d)]
    reduced, pivots = rref(augmented)
    if pivots != list(range(d)):
        raise DomainError("matrix is singular")
    return Matrix(tuple(row[d:] for row in reduced))


def outer(column: Vector, functional: Vector) -> Matrix:
    """The rank-one (or zero) matrix column * functional^T."""
    return Matrix(tuple(tuple(c * f for f in functional) for c in column))


# -- polynomials -------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    """Coefficients lowest degree first; () is the zero polynomial."""

    coefficients: tuple[Scalar, ...]

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        while coeffs and coeffs[-1].is_zero:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def of(cls, values: Iterable) -> "Polynomial":
        return cls(tuple(_entry(v) for v in values))

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise DomainError("the zero polynomial has no degree")
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Scalar:
        if self.is_zero:
            raise DomainError("the zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    def monic(self) -> "Polynomial":
        inv = ONE / self.leading
        return Polynomial(tuple(inv * c for c in self.coefficients))

    def derivative(self) -> "Polynomial":
        if self.is_zero or self.degree == 0:
            return Polynomial(())
        return Polynomial(
            tuple(Scalar(Fraction(k)) * c for k, c in enumerate(self.coefficients) if k > 0)
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coefficients):
            if c.is_zero:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                lead = "" if c == ONE else f"({c})"
                parts.append(f"{lead}t^{k}" if k > 1 else f"{lead}t")
        return " + ".join(reversed(parts))


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero or q.is_zero:
        return Polynomial(())
    out = [ZERO] * (len(p.coefficients) + len(q.coefficients) - 1)
    for i, a in enumerate(p.coefficients):
        for j, b in enumerate(q.coefficients):
            out[i + j] = out[i + j] + a * b
    return Polynomial(tuple(out))


def poly_mod(p: Polynomial, q: Polynomial) -> Polynomial:
    if q.is_zero:
        raise DomainError("polynomial division by zero")
    rem = list(p.coefficients)
    dq = q.degree
    lead_inv = ONE / q.leading
    while len(rem) - 1 >= dq and rem:
        factor = rem[-1] * lead_inv
        shift = len(rem) - 1 - dq
        for i, c in enumerate(q.coefficients):
            rem[shift + i] = rem[shift + i] - factor * c
        while rem and rem[-1].is_zero:
            rem.pop()
    return Polynomial(tuple(rem))


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd via the Euclidean algorithm, exact at every step."""
    a, b = p, q
    while not b.is_zero:
        a, b = b, poly_mod(a, b)
    if a.is_zero:
        return a
    return a.monic()


def lambda_power(d: int) -> Polynomial:
    """The polynomial t^d, the characteristic polynomial of any nilpotent
    matrix of side d."""
    return Polynomial((ZERO,) * d + (ONE,))


def char_poly(m: Matrix) -> Polynomial:
    """Characteristic polynomial det(tI - m), monic of degree = side.

    Uses the trace recurrence on adjugate iterates; every division is by
    an integer and therefore exact.
    """
    if not m.is_square:
        raise ShapeError("characteristic polynomial needs a square matrix")
    d = m.rows
    eye = Matrix.identity(d)
    coeffs_high = [ONE]  # coefficient of t^d
    iterate = eye
    for k in range(1, d + 1):
        am = m @ iterate
        c = -(trace(am) / Scalar(k))
        coeffs_high.append(c)
        if k < d:
            iterate = am + c * eye
    return Polynomial(tuple(reversed(coeffs_high)))


def distinct_eigenvalue_count(p: Polynomial) -> int:
    """Number of distinct complex roots: deg p - deg gcd(p, p')."""
    if p.is_zero:
        raise DomainError("the zero polynomial has no root count")
    if p.degree == 0:
        return 0
    g = poly_gcd(p, p.derivative())
    return p.degree - (0 if g.is_zero else g.degree)


def is_nilpotent_matrix(m: Matrix) -> bool:
    """Fast exact nilpotency test via squared powers; equivalent to
    char_poly(m) == t^d."""
    if not m.is_square:
        raise ShapeError("nilpotency needs a square matrix")
    power = m
    steps = 1
    while steps < m.rows:
        power = power @ power
        steps *= 2
    return power.is_zero


# -- seeded sampling ---------------------------------------------------


def derive_seed(seed: int, salt: int) -> int:
    """Deterministic sub-seed derivation, stable across platforms."""
    return (seed * 1_000_003 + salt + 1) % (2**63)


def random_scalar(rng: random.Random, height: int) -> Scalar:
    num = rng.randint(-height, height)
    den = rng.randint(1, height)
    return Scalar(Fraction(num, den))


def random_vector(dim: int, seed: int, height: int) -> Vector:
    if height < 1:
        raise DomainError("sampling height must be at least 1")
    rng = random.Random(seed)
    return tuple(random_scalar(rng, height) for _ in range(dim))


def random_matrix(dim: int, seed: int, height: int) -> Matrix:
    """Seeded matrix with reduced rational entries of numerator and
    denominator magnitude at most height.  Same arguments, same matrix,
    on every platform."""
    if height < 1:
        raise DomainError("sampling height must be at least 1")
    rng = random.Random(seed)
    return Matrix(
        tuple(tuple(random_scalar(rng, height) for _ in range(dim)) for _ in range(dim))
    )


def random_invertible(dim: int, seed: int, height: int) -> Matrix:
    for attempt in range(64):
        m = random_matrix(dim, derive_seed(seed, attempt), height)
        if rank(m) == dim:
            return m
    raise DomainError("could not sample an invertible matrix")  # pragma: no cover


def random_nonzero_vector(dim: int, seed: int, height: int) -> Vector:
    for attempt in range(64):
        v = random_vector(dim, derive_seed(seed, attempt), height)
        if not vec_is_zero(v):
            return v
    raise DomainError("could not sample a nonzero vector")  # pragma: no cover
