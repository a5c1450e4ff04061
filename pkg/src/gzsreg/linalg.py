"""Exact rational dense linear algebra.

Everything here works over ``fractions.Fraction``. Heavy routines (rank,
kernels, characteristic polynomials) clear denominators row by row and run
fraction-free integer elimination, so intermediate numbers stay integral and
no rounding can occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fraction


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational entry")


class RationalMatrix:
    """Immutable dense matrix of exact rationals.

    Indexing is 0-based (``m[r, c]``). Helpers that mirror mathematical
    notation, such as :meth:`elementary`, take 1-based indices.
    """

    __slots__ = ("_rows", "_shape", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged matrix rows")
        self._rows = data
        self._shape = (len(data), ncols)
        self._hash = None

    @classmethod
    def _trusted(cls, data: tuple) -> "RationalMatrix":
        obj = cls.__new__(cls)
        obj._rows = data
        obj._shape = (len(data), len(data[0]) if data else 0)
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "RationalMatrix":
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._trusted(tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence) -> "RationalMatrix":
        vals = [to_fraction(v) for v in values]
        n = len(vals)
        z = Fraction(0)
        return cls._trusted(
            tuple(tuple(vals[r] if r == c else z for c in range(n)) for r in range(n))
        )

    @classmethod
    def elementary(cls, n: int, i: int, j: int) -> "RationalMatrix":
        """E_ij in gl(n), 1-based."""
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"E_{i}{j} out of range for size {n}")
        return cls.from_entries(n, {(i - 1, j - 1): 1})

    @classmethod
    def from_entries(cls, n: int, entries: dict, cols: int | None = None) -> "RationalMatrix":
        """Sparse constructor; keys are 0-based (row, col)."""
        cols = n if cols is None else cols
        rows = [[Fraction(0)] * cols for _ in range(n)]
        for (r, c), v in entries.items():
            rows[r][c] = to_fraction(v)
        return cls._trusted(tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "RationalMatrix":
        return cls(zip(*columns)) if columns else cls.zeros(0, 0)

    @classmethod
    def from_flat(cls, flat: Sequence, rows: int, cols: int) -> "RationalMatrix":
        if len(flat) != rows * cols:
            raise ValueError("flat vector has the wrong length")
        return cls(flat[r * cols:(r + 1) * cols] for r in range(rows))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "RationalMatrix":
        """Matrix P with P e_k = e_{perm[k]}; ``perm`` is 1-based, listed for k = 1..n."""
        n = len(perm)
        return cls.from_entries(n, {(perm[k] - 1, k): 1 for k in range(n)})

    # basic protocol

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def nrows(self) -> int:
        return self._shape[0]

    @property
    def ncols(self) -> int:
        return self._shape[1]

    @property
    def size(self) -> int:
        """Side length of a square matrix."""
        self.require_square()
        return self._shape[0]

    def require_square(self) -> None:
        if self._shape[0] != self._shape[1]:
            raise ValueError(f"expected a square matrix, got shape {self._shape}")

    def __getitem__(self, key):
        r, c = key
        return self._rows[r][c]

    def rows(self) -> tuple:
        return self._rows

    def row(self, r: int) -> Vector:
        return self._rows[r]

    def column(self, c: int) -> Vector:
        return tuple(row[c] for row in self._rows)

    def columns(self) -> list[Vector]:
        return [self.column(c) for c in range(self.ncols)]

    def flatten(self) -> Vector:
        return tuple(v for row in self._rows for v in row)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    # arithmetic

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows))
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix._trusted(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self._rows, other._rows))
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(tuple(-a for a in row) for row in self._rows))

    def __mul__(self, scalar) -> "RationalMatrix":
        s = to_fraction(scalar)
        return RationalMatrix._trusted(tuple(tuple(s * a for a in row) for row in self._rows))

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        z = Fraction(0)
        return RationalMatrix._trusted(
            tuple(
                tuple(sum((a * b for a, b in zip(row, col) if a and b), z) for col in cols)
                for row in self._rows
            )
        )

    def _same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def apply(self, vec: Sequence) -> Vector:
        z = Fraction(0)
        return tuple(sum((a * b for a, b in zip(row, vec) if a and b), z) for row in self._rows)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix._trusted(tuple(zip(*self._rows)) if self._rows else ())

    def trace(self) -> Fraction:
        self.require_square()
        return sum((self._rows[k][k] for k in range(self.nrows)), Fraction(0))

    def __pow__(self, k: int) -> "RationalMatrix":
        self.require_square()
        if k < 0:
            return self.inverse() ** (-k)
        result = RationalMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def commutator(self, other: "RationalMatrix") -> "RationalMatrix":
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return not any(v for row in self._rows for v in row)

    def is_diagonal(self) -> bool:
        return all(not v or r == c for r, row in enumerate(self._rows) for c, v in enumerate(row))

    def is_upper_triangular(self, strict: bool = False) -> bool:
        return all(
            not v or (c > r if strict else c >= r)
            for r, row in enumerate(self._rows)
            for c, v in enumerate(row)
        )

    def support(self) -> frozenset:
        """0-based positions of nonzero entries."""
        return frozenset(
            (r, c) for r, row in enumerate(self._rows) for c, v in enumerate(row) if v
        )

    # block helpers

    def leading(self, i: int) -> "RationalMatrix":
        """Upper-left i x i block."""
        self.require_square()
        if not 0 <= i <= self.nrows:
            raise IndexError(f"leading block {i} out of range for size {self.nrows}")
        return RationalMatrix._trusted(tuple(row[:i] for row in self._rows[:i]))

    def padded(self, n: int) -> "RationalMatrix":
        """Embed as the upper-left corner of an n x n zero matrix."""
        r, c = self.shape
        if r > n or c > n:
            raise ValueError("cannot pad to a smaller size")
        z = Fraction(0)
        rows = [tuple(row) + (z,) * (n - c) for row in self._rows]
        rows += [(z,) * n for _ in range(n - r)]
        return RationalMatrix._trusted(tuple(rows))

    def det(self) -> Fraction:
        self.require_square()
        n = self.nrows
        if n == 0:
            return Fraction(1)
        ints, scales = _integer_rows(self._rows)
        d = bareiss_det(ints)
        return Fraction(d, reduce(lambda a, b: a * b, scales, 1))

    def inverse(self) -> "RationalMatrix":
        self.require_square()
        n = self.nrows
        aug = [list(row) + [Fraction(int(r == c)) for c in range(n)] for r, row in enumerate(self._rows)]
        ints, _ = _integer_rows(aug)
        red, den, pivots = rref_den(ints)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ZeroDivisionError("matrix is singular")
        return RationalMatrix._trusted(
            tuple(tuple(Fraction(red[r][n + c], den) for c in range(n)) for r in range(n))
        )


# ---------------------------------------------------------------------------
# fraction-free integer kernels


def _integer_rows(rows) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators.

    Returns integer rows and the per-row scale factors. Row scaling changes
    neither the row space nor the right kernel.
    """
    out, scales = [], []
    for row in rows:
        den = reduce(lcm, (v.denominator for v in row), 1)
        out.append([int(v * den) for v in row])
        scales.append(den)
    return out, scales


def rref_den(m: list[list[int]]) -> tuple[list[list[int]], int, list[int]]:
    """Fraction-free Gauss-Jordan elimination on an integer matrix.

    Returns ``(R, den, pivots)`` where ``R / den`` is the reduced row echelon
    form of ``m``: every pivot entry of ``R`` equals ``den`` and all other
    entries in pivot columns vanish. Each update divides exactly by the
    previous pivot (Sylvester's identity). Pivots are chosen as the first
    nonzero entry scanning columns left to right, so output is deterministic.
    """
    a = [list(row) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    den = 1
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        if prow == nrows:
            break
        piv = next((r for r in range(prow, nrows) if a[r][col]), None)
        if piv is None:
            continue
        if piv != prow:
            a[prow], a[piv] = a[piv], a[prow]
        p = a[prow][col]
        prow_vals = a[prow]
        for r in range(nrows):
            if r == prow:
                continue
            row = a[r]
            f = row[col]
            if f:
                for c in range(ncols):
                    row[c] = (p * row[c] - f * prow_vals[c]) // den
            elif p != den:
                for c in range(ncols):
                    if row[c]:
                        row[c] = (p * row[c]) // den
        den = p
        pivots.append(col)
        prow += 1
    return a, den, pivots


def bareiss_det(m: list[list[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _echelon_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank via Bareiss forward elimination (no back substitution)."""
    if not rows:
        return 0
    a, _ = _integer_rows(rows)
    nrows, ncols = len(a), len(a[0])
    prev, prow = 1, 0
    for col in range(ncols):
        if prow == nrows:
            break
        piv = next((r for r in range(prow, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[prow], a[piv] = a[piv], a[prow]
        p = a[prow][col]
        for r in range(prow + 1, nrows):
            row, f = a[r], a[r][col]
            for c in range(col + 1, ncols):
                row[c] = (p * row[c] - f * a[prow][c]) // prev
            row[col] = 0
        # rows above the pivot are untouched, so the exact-division chain
        # only ever involves leading principal minors of the pivot block
        prev = p
        prow += 1
    return prow


# ---------------------------------------------------------------------------
# public operations


def rank(m: RationalMatrix) -> int:
    return _echelon_rank(m.rows())


def vectors_rank(vectors: Sequence[Sequence]) -> int:
    return _echelon_rank([tuple(to_fraction(v) for v in vec) for vec in vectors])


def kernel_basis(m: RationalMatrix) -> list[Vector]:
    """Basis of the right null space, one vector per free column.

    Each vector has a 1 in its free coordinate and zeros in the other free
    coordinates.
    """
    ncols = m.ncols
    if m.nrows == 0:
        return [tuple(Fraction(int(k == c)) for k in range(ncols)) for c in range(ncols)]
    ints, _ = _integer_rows(m.rows())
    red, den, pivots = rref_den(ints)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = Fraction(-red[r][free], den)
        basis.append(tuple(vec))
    return basis


def span_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    """A basis (reduced echelon rows) of the span of the given vectors."""
    vecs = [tuple(to_fraction(v) for v in vec) for vec in vectors]
    if not vecs:
        return []
    ints, _ = _integer_rows(vecs)
    red, den, pivots = rref_den(ints)
    return [tuple(Fraction(v, den) for v in red[r]) for r in range(len(pivots))]


def in_span(vec: Sequence, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return not any(vec)
    return vectors_rank(list(basis) + [vec]) == vectors_rank(basis)


def is_nilpotent(m: RationalMatrix) -> bool:
    return charpoly(m) == Polynomial.monomial(m.size)


def is_squarefree_charpoly(m: RationalMatrix) -> bool:
    chi = charpoly(m)
    return chi.gcd(chi.derivative()).degree == 0


def commutator_operator(m: RationalMatrix) -> RationalMatrix:
    """Matrix of Y -> mY - Ym acting on row-major flattened k x k matrices."""
    k = m.size
    rows = []
    for a in range(k):
        for b in range(k):
            row = [Fraction(0)] * (k * k)
            for c in range(k):
                if m[a, c]:
                    row[c * k + b] += m[a, c]
                if m[c, b]:
                    row[a * k + c] -= m[c, b]
            rows.append(row)
    return RationalMatrix._trusted(tuple(tuple(r) for r in rows))


def centralizer_dimension(m: RationalMatrix) -> int:
    k = m.size
    return k * k - rank(commutator_operator(m))


def centralizer_basis(m: RationalMatrix) -> list[RationalMatrix]:
    k = m.size
    return [RationalMatrix.from_flat(v, k, k) for v in kernel_basis(commutator_operator(m))]


def common_centralizer(mats: Sequence[RationalMatrix], size: int) -> list[RationalMatrix]:
    """Basis of matrices commuting with every element of ``mats``."""
    rows = []
    for m in mats:
        rows.extend(commutator_operator(m).rows())
    op = RationalMatrix._trusted(tuple(rows)) if rows else RationalMatrix.zeros(0, size * size)
    return [RationalMatrix.from_flat(v, size, size) for v in kernel_basis(op)]


def subspace_intersection(
    bas_a: Sequence[RationalMatrix], bas_b: Sequence[RationalMatrix]
) -> list[RationalMatrix]:
    """Basis of span(bas_a) ∩ span(bas_b); matrices are treated as flat vectors."""
    if not bas_a or not bas_b:
        return []
    shape = bas_a[0].shape
    if any(m.shape != shape for m in list(bas_a) + list(bas_b)):
        raise ValueError("all matrices must share one shape")
    va = [m.flatten() for m in bas_a]
    vb = [m.flatten() for m in bas_b]
    # solve sum(alpha * a) - sum(beta * b) = 0
    cols = va + [tuple(-x for x in v) for v in vb]
    system = RationalMatrix.from_columns(cols)
    hits = []
    for coeffs in kernel_basis(system):
        vec = [Fraction(0)] * len(va[0])
        for c, a in zip(coeffs[: len(va)], va):
            if c:
                for t, x in enumerate(a):
                    vec[t] += c * x
        if any(vec):
            hits.append(vec)
    return [RationalMatrix.from_flat(v, *shape) for v in span_basis(hits)]


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = [to_fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "Polynomial":
        return cls((0,) * k + (coeff,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-to_fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        a = a + (Fraction(0),) * (n - len(a))
        b = b + (Fraction(0),) * (n - len(b))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            s = to_fraction(other)
            return Polynomial(tuple(s * c for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            for j, y in enumerate(other.coefficients):
                out[i + j] += x * y
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coefficients)
        quot = [Fraction(0)] * max(len(rem) - other.degree, 1)
        lead = other.leading()
        while len(rem) - 1 >= other.degree and any(rem):
            shift = len(rem) - 1 - other.degree
            f = rem[-1] / lead
            quot[shift] = f
            for k, c in enumerate(other.coefficients):
                rem[shift + k] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(tuple(quot)), Polynomial(tuple(rem))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd (zero if both are zero)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, divmod(a, b)[1]
        if a.is_zero():
            return a
        return a * (1 / a.leading())

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coefficients))[1:])

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m: RationalMatrix) -> RationalMatrix:
        """Horner evaluation at a square matrix."""
        n = m.size
        acc = RationalMatrix.zeros(n)
        ident = RationalMatrix.identity(n)
        for c in reversed(self.coefficients):
            acc = acc @ m + ident * c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if mag == 1 else f"{mag}*{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def charpoly(m: RationalMatrix) -> Polynomial:
    """det(tI - m) by Faddeev-LeVerrier on the integer matrix D*m.

    With D the common denominator, the k-th coefficient of D*m is D^k times
    that of m, and every division by k in the recurrence is exact over Z.
    """
    n = m.size
    if n == 0:
        return Polynomial((1,))
    den = reduce(lcm, (v.denominator for v in m.flatten()), 1)
    a = [[int(v * den) for v in row] for row in m.rows()]
    # c[k] is the coefficient of t^(n-k)
    c = [1] + [0] * n
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # mk <- a @ mk + c[k-1] * I
        prod = [[sum(a[r][t] * mk[t][col] for t in range(n)) for col in range(n)] for r in range(n)]
        for r in range(n):
            prod[r][r] += c[k - 1]
        mk = prod
        tr = sum(sum(a[r][t] * mk[t][r] for t in range(n)) for r in range(n))
        q, rem = divmod(-tr, k)
        assert rem == 0, "Faddeev-LeVerrier division must be exact over Z"
        c[k] = q
    coeffs = [Fraction(c[n - d], den ** (n - d)) for d in range(n + 1)]
    return Polynomial(tuple(coeffs))
