"""Flags, Borel subalgebras, and orbits of K = GL(n) x GL(1) on the flag variety.

Conventions: the ambient space is Q^N with N = n + 1, indices in the public
API are 1-based, and K is the block-diagonal subgroup fixing the last
coordinate line and the hyperplane spanned by e_1..e_n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Sequence

from .gz import cutoff, is_regular
from .linalg import (
    RationalMatrix,
    centralizer_basis,
    common_centralizer,
    in_span,
    is_nilpotent,
    kernel_basis,
    rank,
    span_basis,
    subspace_intersection,
    vectors_rank,
)


class InvariantViolation(AssertionError):
    """A computed object contradicts a theorem the library relies on."""


# ---------------------------------------------------------------------------
# flags and orbit classes


@dataclass(frozen=True)
class Flag:
    """Full flag V_1 ⊂ ... ⊂ V_N, V_k spanned by the first k basis columns."""

    basis: RationalMatrix

    def __post_init__(self):
        self.basis.require_square()
        if rank(self.basis) != self.basis.nrows:
            raise ValueError("flag basis is singular")

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence]) -> "Flag":
        return cls(RationalMatrix.from_columns(vectors))

    @classmethod
    def standard(cls, n_plus_1: int) -> "Flag":
        return cls(RationalMatrix.identity(n_plus_1))

    @classmethod
    def reversed_standard(cls, n_plus_1: int) -> "Flag":
        return cls(RationalMatrix.permutation(list(range(n_plus_1, 0, -1))))

    @property
    def n_plus_1(self) -> int:
        return self.basis.nrows

    def vectors(self) -> list[tuple]:
        return self.basis.columns()

    def same_as(self, other: "Flag") -> bool:
        """Equal as flags: the change of basis is upper triangular."""
        return (self.basis.inverse() @ other.basis).is_upper_triangular()

    def transformed(self, g: RationalMatrix) -> "Flag":
        return Flag(g @ self.basis)


def unit_vector(n: int, k: int) -> tuple:
    """e_k in Q^n, 1-based."""
    return tuple(Fraction(int(t == k - 1)) for t in range(n))


def flag_from_chain(chain: Sequence[Sequence[Sequence]]) -> Flag:
    """Adapted basis for a chain of spanning sets of V_1 ⊂ V_2 ⊂ ... ⊂ V_N."""
    picked: list = []
    for spanning in chain:
        for v in spanning:
            if vectors_rank(picked + [v]) > len(picked):
                picked.append(tuple(v))
                break
        else:
            raise ValueError("chain does not grow by one dimension per step")
    return Flag.from_vectors(picked)


@dataclass(frozen=True)
class OrbitClass:
    """Closed(i) or NonClosed(i, j) K-orbit label."""

    kind: str
    i: int
    j: int | None = None

    def __post_init__(self):
        if self.kind == "closed":
            if self.j is not None or self.i < 1:
                raise ValueError(f"bad closed orbit label {self}")
        elif self.kind == "nonclosed":
            if self.j is None or not 1 <= self.i < self.j:
                raise ValueError(f"bad non-closed orbit label i={self.i}, j={self.j}")
        else:
            raise ValueError(f"unknown orbit kind {self.kind!r}")

    @classmethod
    def closed(cls, i: int) -> "OrbitClass":
        return cls("closed", i)

    @classmethod
    def nonclosed(cls, i: int, j: int) -> "OrbitClass":
        return cls("nonclosed", i, j)

    @property
    def is_closed(self) -> bool:
        return self.kind == "closed"

    def check_range(self, n_plus_1: int) -> None:
        top = self.i if self.is_closed else self.j
        if top > n_plus_1:
            raise ValueError(f"{self} out of range for gl({n_plus_1})")

    def sign(self, n_plus_1: int) -> str | None:
        """'+' for the upper-triangular orbit, '-' for the lower one."""
        if not self.is_closed:
            return None
        if self.i == n_plus_1:
            return "+"
        if self.i == 1:
            return "-"
        return None

    def to_json(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j}

    @classmethod
    def from_json(cls, data: dict) -> "OrbitClass":
        return cls(data["kind"], int(data["i"]), None if data.get("j") is None else int(data["j"]))

    def __str__(self) -> str:
        return f"Closed({self.i})" if self.is_closed else f"NonClosed({self.i},{self.j})"


def all_orbit_classes(n_plus_1: int) -> list[OrbitClass]:
    closed = [OrbitClass.closed(i) for i in range(1, n_plus_1 + 1)]
    nonclosed = [OrbitClass.nonclosed(i, j) for i, j in combinations(range(1, n_plus_1 + 1), 2)]
    return closed + nonclosed


def classify_korbit(flag: Flag) -> OrbitClass:
    """Classify by a = first k with V_k not inside <e_1..e_n>, b = first k with e_N in V_k.

    Both numbers are preserved by K, and they separate the listed orbit
    representatives, so (a, b) is a complete invariant.
    """
    n1 = flag.n_plus_1
    vecs = flag.vectors()
    a = next(k for k in range(1, n1 + 1) if vecs[k - 1][n1 - 1] != 0)
    last = unit_vector(n1, n1)
    b = next(k for k in range(1, n1 + 1) if vectors_rank(vecs[:k] + [last]) == k)
    return OrbitClass.closed(a) if a == b else OrbitClass.nonclosed(a, b)


def representative_flag(c: OrbitClass, n_plus_1: int) -> Flag:
    """Explicit representative flag of the orbit class."""
    c.check_range(n_plus_1)
    n1 = n_plus_1
    e = lambda k: unit_vector(n1, k)  # noqa: E731
    if c.is_closed:
        # e_1 ⊂ ... ⊂ e_{i-1} ⊂ e_N ⊂ e_i ⊂ ... ⊂ e_n
        order = list(range(1, c.i)) + [n1] + list(range(c.i, n1))
        return Flag.from_vectors([e(k) for k in order])
    i, j = c.i, c.j
    mixed = tuple(x + y for x, y in zip(e(i), e(n1)))
    vecs = [e(k) for k in range(1, i)] + [mixed]
    vecs += [e(k) for k in range(i + 1, j)] + [e(i)]
    vecs += [e(k) for k in range(j, n1)]
    return Flag.from_vectors(vecs)


# ---------------------------------------------------------------------------
# Borel subalgebras


@dataclass(frozen=True)
class BorelSubalgebra:
    """The Borel g * (upper triangulars) * g^-1, i.e. the stabilizer of the flag of g's columns."""

    conjugator: RationalMatrix
    _inverse: RationalMatrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.conjugator.require_square()
        object.__setattr__(self, "_inverse", self.conjugator.inverse())

    @classmethod
    def upper(cls, n_plus_1: int) -> "BorelSubalgebra":
        return cls(RationalMatrix.identity(n_plus_1))

    @classmethod
    def lower(cls, n_plus_1: int) -> "BorelSubalgebra":
        return cls(Flag.reversed_standard(n_plus_1).basis)

    @property
    def size(self) -> int:
        return self.conjugator.nrows

    def conjugate(self, y: RationalMatrix) -> RationalMatrix:
        """g y g^-1."""
        return self.conjugator @ y @ self._inverse

    def pullback(self, x: RationalMatrix) -> RationalMatrix:
        """g^-1 x g."""
        return self._inverse @ x @ self.conjugator

    def basis(self) -> list[RationalMatrix]:
        n = self.size
        return [
            self.conjugate(RationalMatrix.from_entries(n, {(r, c): 1}))
            for r in range(n)
            for c in range(r, n)
        ]

    def nilradical_basis(self) -> list[RationalMatrix]:
        n = self.size
        return [
            self.conjugate(RationalMatrix.from_entries(n, {(r, c): 1}))
            for r in range(n)
            for c in range(r + 1, n)
        ]

    def contains(self, x: RationalMatrix) -> bool:
        return self.pullback(x).is_upper_triangular()

    def contains_in_nilradical(self, x: RationalMatrix) -> bool:
        return self.pullback(x).is_upper_triangular(strict=True)

    def flag(self) -> Flag:
        return Flag(self.conjugator)

    def k_conjugate(self, k: RationalMatrix) -> "BorelSubalgebra":
        return BorelSubalgebra(k @ self.conjugator)


def stabilizer_borel(flag: Flag) -> BorelSubalgebra:
    return BorelSubalgebra(flag.basis)


def stabilizer_by_equations(flag: Flag) -> list[RationalMatrix]:
    """Basis of {X : X V_k ⊆ V_k for all k}, solved directly as a linear system.

    Used as an independent check on :func:`stabilizer_borel`.
    """
    n = flag.n_plus_1
    vecs = flag.vectors()
    rows = []
    for k in range(1, n + 1):
        # annihilators of V_k: kernel of the matrix whose rows are v_1..v_k
        annihilators = kernel_basis(RationalMatrix(vecs[:k]))
        v = vecs[k - 1]
        for alpha in annihilators:
            # alpha^T X v = sum_{r,c} alpha_r X_rc v_c
            rows.append([alpha[r] * v[c] for r in range(n) for c in range(n)])
    if not rows:
        return [RationalMatrix.from_entries(n, {(r, c): 1}) for r in range(n) for c in range(n)]
    return [RationalMatrix.from_flat(v, n, n) for v in kernel_basis(RationalMatrix(rows))]


def same_span(a: Sequence[RationalMatrix], b: Sequence[RationalMatrix]) -> bool:
    va = [m.flatten() for m in a]
    vb = [m.flatten() for m in b]
    ra = vectors_rank(va)
    return ra == vectors_rank(vb) == vectors_rank(va + vb)


def bracket_span(a: Sequence[RationalMatrix], b: Sequence[RationalMatrix]) -> list[RationalMatrix]:
    if not a or not b:
        return []
    n = a[0].nrows
    brackets = [x.commutator(y).flatten() for x in a for y in b]
    return [RationalMatrix.from_flat(v, n, n) for v in span_basis(brackets)]


def subspace_basis(mats: Sequence[RationalMatrix]) -> list[RationalMatrix]:
    if not mats:
        return []
    n, m = mats[0].shape
    return [RationalMatrix.from_flat(v, n, m) for v in span_basis([x.flatten() for x in mats])]


def is_borel_subalgebra(basis: Sequence[RationalMatrix], size: int) -> bool:
    """Dimension (size+1 choose 2), closed under brackets, and solvable.

    A solvable subalgebra lies in some Borel, so matching dimension forces equality.
    """
    basis = subspace_basis(basis)
    if len(basis) != comb(size + 1, 2):
        return False
    flat = [m.flatten() for m in basis]
    dim = len(flat)
    for x, y in combinations(basis, 2):
        if vectors_rank(flat + [x.commutator(y).flatten()]) != dim:
            return False
    derived = basis
    for _ in range(size + 1):
        derived = bracket_span(derived, derived)
        if not derived:
            return True
    return False


def borel_flag(basis: Sequence[RationalMatrix], size: int) -> Flag:
    """Recover the flag stabilized by a Borel subalgebra given by a spanning set.

    With nil = [b, b] the nilradical, nil^t applied to Q^N is V_{N-t}.
    """
    nil = bracket_span(basis, basis)
    images = [unit_vector(size, k) for k in range(1, size + 1)]
    chain = [images]
    for _ in range(size - 1):
        images = span_basis([x.apply(v) for x in nil for v in images])
        chain.append(images)
    chain.reverse()
    return flag_from_chain(chain)


def projected_subalgebra(b: BorelSubalgebra, i: int) -> list[RationalMatrix]:
    """Basis of the cutoff image π_i(b) ⊆ gl(i)."""
    return subspace_basis([cutoff(m, i) for m in b.basis()])


def kernel_flag(x: RationalMatrix) -> Flag:
    """ker x ⊂ ker x^2 ⊂ ...; for regular nilpotent x this is the unique flag whose stabilizer contains x."""
    n = x.size
    chain = []
    power = x
    for _ in range(n):
        chain.append(kernel_basis(power))
        power = power @ x
    return flag_from_chain(chain)


def borel_of_regular_nilpotent(x: RationalMatrix) -> BorelSubalgebra:
    return stabilizer_borel(kernel_flag(x))


# ---------------------------------------------------------------------------
# the involution and the Cayley element


def theta_matrix(n_plus_1: int) -> RationalMatrix:
    return RationalMatrix.diagonal([1] * (n_plus_1 - 1) + [-1])


def theta(x: RationalMatrix) -> RationalMatrix:
    """Conjugation by diag(1, ..., 1, -1): negates the last row and column off the corner."""
    n = x.size
    return RationalMatrix(
        [
            [-v if (r == n - 1) != (c == n - 1) else v for c, v in enumerate(row)]
            for r, row in enumerate(x.rows())
        ]
    )


def pi_k(x: RationalMatrix) -> RationalMatrix:
    """Projection onto the fixed points of theta: (x + theta(x)) / 2."""
    return (x + theta(x)) * Fraction(1, 2)


def cycle_permutation(n_plus_1: int, cycle: Sequence[int]) -> RationalMatrix:
    """Permutation matrix of the cycle (c_1 c_2 ... c_m): c_1 -> c_2 -> ... -> c_m -> c_1."""
    perm = list(range(1, n_plus_1 + 1))
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        perm[a - 1] = b
    return RationalMatrix.permutation(perm)


def cayley_matrix(n_plus_1: int, i: int) -> RationalMatrix:
    """u: e_i -> e_i + e_{i+1}, e_{i+1} -> -e_i + e_{i+1}, identity elsewhere."""
    entries = {(k, k): 1 for k in range(n_plus_1)}
    a, b = i - 1, i
    entries[(b, a)] = 1
    entries[(a, b)] = -1
    return RationalMatrix.from_entries(n_plus_1, entries)


def v_element(i: int, j: int, n_plus_1: int) -> RationalMatrix:
    """v = w u sigma with w the cycle (N, N-1, ..., i) and sigma the cycle (i+1, ..., j).

    v carries the standard flag to the representative flag of NonClosed(i, j).
    """
    if not 1 <= i < j <= n_plus_1:
        raise ValueError(f"need 1 <= i < j <= {n_plus_1}, got ({i}, {j})")
    w = cycle_permutation(n_plus_1, list(range(n_plus_1, i - 1, -1)))
    sigma = cycle_permutation(n_plus_1, list(range(i + 1, j + 1)))
    return w @ cayley_matrix(n_plus_1, i) @ sigma


def transposition_matrix(n_plus_1: int, i: int, j: int) -> RationalMatrix:
    return cycle_permutation(n_plus_1, [i, j])


@dataclass(frozen=True)
class VIdentity:
    holds: bool
    product: RationalMatrix  # v^-1 theta(v)
    t: RationalMatrix | None  # extracted diagonal factor, when it is diagonal


def v_identity(i: int, j: int, n_plus_1: int) -> VIdentity:
    """Compute v^-1 theta(v) and split it as (transposition (i j)) * t."""
    v = v_element(i, j, n_plus_1)
    product = v.inverse() @ theta(v)
    t = transposition_matrix(n_plus_1, i, j).inverse() @ product
    if not t.is_diagonal():
        return VIdentity(False, product, None)
    ok = t @ t == RationalMatrix.identity(n_plus_1)
    return VIdentity(ok, product, t)


def check_v_identity(i: int, j: int, n_plus_1: int) -> bool:
    return v_identity(i, j, n_plus_1).holds


def theta_prime(i: int, j: int, x: RationalMatrix) -> RationalMatrix:
    """Ad(v^-1 theta(v)) composed with theta."""
    m = v_identity(i, j, x.size).product
    return m @ theta(x) @ m.inverse()


# ---------------------------------------------------------------------------
# sampling


def _nonzero(rng: random.Random, bound: int = 5) -> int:
    return rng.choice([k for k in range(-bound, bound + 1) if k])


def sample_nplus_reg(n_plus_1: int, rng: random.Random) -> RationalMatrix:
    """sum a_i E_{i,i+1} + z with all a_i nonzero and z supported above the superdiagonal."""
    entries = {}
    for r in range(n_plus_1):
        for c in range(r + 1, n_plus_1):
            entries[(r, c)] = _nonzero(rng) if c == r + 1 else rng.randint(-5, 5)
    return RationalMatrix.from_entries(n_plus_1, entries)


def sample_regular_nilpotent(b: BorelSubalgebra, rng: random.Random) -> RationalMatrix:
    return b.conjugate(sample_nplus_reg(b.size, rng))


def random_k_element(n_plus_1: int, rng: random.Random, bound: int = 3) -> RationalMatrix:
    """Random invertible element of GL(n) x GL(1)."""
    n = n_plus_1 - 1
    while True:
        block = RationalMatrix(
            [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        ) if n else None
        if n == 0 or block.det() != 0:
            break
    entries = {(r, c): block[r, c] for r in range(n) for c in range(n)} if n else {}
    entries[(n, n)] = _nonzero(rng, bound)
    return RationalMatrix.from_entries(n_plus_1, entries)


def random_invertible(n: int, rng: random.Random, bound: int = 3) -> RationalMatrix:
    while True:
        g = RationalMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if g.det() != 0:
            return g


# ---------------------------------------------------------------------------
# projection checks


@dataclass
class NilpsinkReport:
    orbit: OrbitClass
    n_plus_1: int
    trials: int
    expect_nilpotent: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "orbit": self.orbit.to_json(),
            "n_plus_1": self.n_plus_1,
            "trials": self.trials,
            "expect_pi_k_nilpotent": self.expect_nilpotent,
            "failures": len(self.failures),
        }


def nilpsink_check(c: OrbitClass, n_plus_1: int, trials: int, rng: random.Random) -> NilpsinkReport:
    """Sample regular nilpotents in the representative Borel and test pi_k for nilpotency.

    For non-closed orbits pi_k(x) is never nilpotent; for closed orbits it
    always is (there pi_k(x) = x_n + 0 and x_n is nilpotent). Any sample
    breaking the expectation is recorded as a failure.
    """
    b = stabilizer_borel(representative_flag(c, n_plus_1))
    report = NilpsinkReport(c, n_plus_1, trials, expect_nilpotent=c.is_closed)
    for _ in range(trials):
        x = sample_regular_nilpotent(b, rng)
        if is_nilpotent(pi_k(x)) != c.is_closed:
            report.failures.append(x)
    return report


def open_orbit_conjugator(n_plus_1: int) -> RationalMatrix:
    """g = I + E_{N,1}; g b_+ g^-1 stabilizes e_1 + e_N ⊂ e_2 ⊂ ... ⊂ e_n ⊂ e_N."""
    return RationalMatrix.identity(n_plus_1) + RationalMatrix.elementary(n_plus_1, n_plus_1, 1)


def bordered_open_form(y: RationalMatrix) -> RationalMatrix:
    """The closed form of g y g^-1 for y strictly upper triangular.

    Column 1 is minus the last column of y, the last row repeats the first row.
    """
    n1 = y.size
    rows = [list(row) for row in y.rows()]
    for r in range(n1):
        rows[r][0] = -y[r, n1 - 1]
    rows[n1 - 1] = list(rows[0])
    return RationalMatrix(rows)


def open_orbit_determinant_check(n_plus_1: int, rng: random.Random) -> tuple[bool, Fraction, Fraction]:
    """Compare det of the n x n corner of pi_k(x) with (-1)^n prod a_{i,i+1}."""
    n = n_plus_1 - 1
    y = sample_nplus_reg(n_plus_1, rng)
    x = BorelSubalgebra(open_orbit_conjugator(n_plus_1)).conjugate(y)
    det = pi_k(x).leading(n).det()
    expected = (-1) ** n * prod((y[k, k + 1] for k in range(n)), start=Fraction(1))
    return det == expected, det, expected


def common_centralizer_witness(c: OrbitClass, n_plus_1: int) -> RationalMatrix | None:
    """Nonzero element of z_{g_n}(n_n) ∩ z_g(n) for the Closed(i) representative, if any.

    n = [b, b] is the nilradical and n_n its cutoff image. Returns None when
    the intersection is zero, which happens exactly for i = 1 and i = N.
    """
    basis = closed_centralizer_intersection(c, n_plus_1)
    return basis[0] if basis else None


def closed_centralizer_intersection(c: OrbitClass, n_plus_1: int) -> list[RationalMatrix]:
    if not c.is_closed:
        raise ValueError("defined for closed orbits only")
    n = n_plus_1 - 1
    b = stabilizer_borel(representative_flag(c, n_plus_1))
    nil = b.nilradical_basis()
    z_top = common_centralizer(nil, n_plus_1)
    nil_n = subspace_basis([cutoff(m, n) for m in nil]) if n else []
    z_low = [m.padded(n_plus_1) for m in common_centralizer(nil_n, n)] if n else []
    return subspace_intersection(z_low, z_top)


def beta_root_vector(n_plus_1: int) -> RationalMatrix:
    """Root vector of alpha_1 + ... + alpha_{n-1}, i.e. E_{1,n}."""
    return RationalMatrix.elementary(n_plus_1, 1, n_plus_1 - 1)


def converse_check(x: RationalMatrix) -> bool:
    """For regular nilpotent x: x_n regular nilpotent and z(x_n) ∩ z(x) = 0."""
    n1 = x.size
    xn = cutoff(x, n1 - 1)
    if not (is_nilpotent(xn) and is_regular(xn)):
        return False
    low = [m.padded(n1) for m in centralizer_basis(xn)]
    return not subspace_intersection(low, centralizer_basis(x))


def projection_is_borel_inside(b: BorelSubalgebra) -> bool:
    """π_n(b) is a Borel subalgebra of gl(n) and, padded, lies inside b."""
    n1 = b.size
    n = n1 - 1
    proj = projected_subalgebra(b, n)
    if not is_borel_subalgebra(proj, n):
        return False
    return all(b.contains(m.padded(n1)) for m in proj)


def in_subspace(x: RationalMatrix, basis: Sequence[RationalMatrix]) -> bool:
    return in_span(x.flatten(), [m.flatten() for m in basis])
