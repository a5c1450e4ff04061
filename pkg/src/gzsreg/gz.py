"""Gelfand-Zeitlin data of a matrix: cutoffs, trace invariants, the
Kostant-Wallach map and the two strong-regularity tests."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .linalg import (
    Polynomial,
    RationalMatrix,
    centralizer_basis,
    centralizer_dimension,
    charpoly,
    subspace_intersection,
    vectors_rank,
)


def cutoff(x: RationalMatrix, i: int) -> RationalMatrix:
    """The i x i upper-left corner x_i (1 <= i <= size)."""
    n = x.size
    if not 1 <= i <= n:
        raise IndexError(f"level {i} out of range 1..{n}")
    return x.leading(i)


def gz_trace(x: RationalMatrix, i: int, j: int) -> Fraction:
    """Tr((x_i)^j)."""
    if not 1 <= j <= i:
        raise IndexError(f"need 1 <= j <= i, got i={i}, j={j}")
    return (cutoff(x, i) ** j).trace()


@dataclass(frozen=True)
class GZSpectrum:
    """Level characteristic polynomials; entry k is charpoly of the (k+1)-cutoff.

    Two matrices have the same spectrum exactly when all their trace
    invariants Tr(x_i^j) agree, so this stands in for the moment map value
    without extracting roots.
    """

    level_polys: tuple

    @property
    def n_plus_1(self) -> int:
        return len(self.level_polys)

    def is_zero(self) -> bool:
        return all(p == Polynomial.monomial(k + 1) for k, p in enumerate(self.level_polys))

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in p.coefficients] for p in self.level_polys]

    @classmethod
    def from_json(cls, data) -> "GZSpectrum":
        return cls(tuple(Polynomial(tuple(Fraction(c) for c in row)) for row in data))

    def __str__(self) -> str:
        return "(" + ", ".join(str(p) for p in self.level_polys) + ")"


def kw_map(x: RationalMatrix) -> GZSpectrum:
    return GZSpectrum(tuple(charpoly(cutoff(x, i)) for i in range(1, x.size + 1)))


def trace_vector(x: RationalMatrix) -> list[Fraction]:
    """The raw moment-map coordinates (f_11, f_21, f_22, ..., f_{N,N})."""
    return [gz_trace(x, i, j) for i in range(1, x.size + 1) for j in range(1, i + 1)]


def is_regular(x: RationalMatrix) -> bool:
    return centralizer_dimension(x) == x.size


def padded_centralizer(x: RationalMatrix, size: int) -> list[RationalMatrix]:
    return [y.padded(size) for y in centralizer_basis(x)]


@dataclass(frozen=True)
class LevelDiagnostic:
    level: int
    regular: bool
    centralizer_dim: int
    # dim of z(x_i) ∩ z(x_{i+1}); None on the top level
    intersection_dim: int | None

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "regular": self.regular,
            "centralizer_dim": self.centralizer_dim,
            "intersection_dim": self.intersection_dim,
        }


def level_diagnostics(x: RationalMatrix) -> list[LevelDiagnostic]:
    """Per-level regularity and consecutive centralizer intersection dimensions."""
    n = x.size
    bases = [centralizer_basis(cutoff(x, i)) for i in range(1, n + 1)]
    out = []
    for i in range(1, n + 1):
        inter = None
        if i < n:
            lower = [y.padded(i + 1) for y in bases[i - 1]]
            inter = len(subspace_intersection(lower, bases[i]))
        dim = len(bases[i - 1])
        out.append(LevelDiagnostic(i, dim == i, dim, inter))
    return out


def is_sreg_centralizer(x: RationalMatrix) -> bool:
    """Every cutoff regular and z(x_i) ∩ z(x_{i+1}) = 0 for all i."""
    n = x.size
    prev = None
    for i in range(1, n + 1):
        xi = cutoff(x, i)
        if centralizer_dimension(xi) != i:
            return False
        basis = centralizer_basis(xi)
        if prev is not None:
            if subspace_intersection([y.padded(i) for y in prev], basis):
                return False
        prev = basis
    return True


def gz_gradients(x: RationalMatrix) -> list[RationalMatrix]:
    """Trace-form gradients j * (x_i)^(j-1), zero-padded, for all 1 <= j <= i <= N."""
    n = x.size
    grads = []
    for i in range(1, n + 1):
        xi = cutoff(x, i)
        power = RationalMatrix.identity(i)
        for j in range(1, i + 1):
            grads.append((power * j).padded(n))
            power = power @ xi
    return grads


def is_sreg_differentials(x: RationalMatrix) -> bool:
    """The (N+1 choose 2) differentials of the trace functions are independent."""
    grads = gz_gradients(x)
    return vectors_rank([g.flatten() for g in grads]) == comb(x.size + 1, 2)


def is_nilfibre(x: RationalMatrix) -> bool:
    return kw_map(x).is_zero()


def is_nilfibre_sreg(x: RationalMatrix) -> bool:
    return is_nilfibre(x) and is_sreg_centralizer(x)


# ---------------------------------------------------------------------------
# test inputs

SAMPLE_KINDS = ("dense", "triangular", "sparse", "small", "patterned")


def sample_matrix(size: int, rng: random.Random, kind: str | None = None) -> RationalMatrix:
    """Random rational matrix from a mixture that hits both sides of strong regularity.

    Dense draws are almost always strongly regular, so the mixture adds
    triangular ones with repeated diagonal values, sparse {-1, 0, 1}
    matrices, and nilpotent or block patterns with small entries.
    """
    kind = kind or rng.choice(SAMPLE_KINDS)
    n = size
    if kind == "dense":
        return RationalMatrix(
            [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        )
    if kind == "triangular":
        diag = [rng.randint(1, 3) for _ in range(n)]
        lower = rng.random() < 0.5
        return RationalMatrix.from_entries(
            n,
            {
                (r, c): diag[r] if r == c else rng.randint(-2, 2)
                for r in range(n)
                for c in range(n)
                if (c <= r if lower else c >= r)
            },
        )
    if kind == "sparse":
        return RationalMatrix([[rng.choice((-1, 0, 0, 0, 1)) for _ in range(n)] for _ in range(n)])
    if kind == "small":
        return RationalMatrix([[rng.randint(1, 4) for _ in range(n)] for _ in range(n)])
    if kind == "patterned":
        # strictly triangular plus a few flipped entries, or a scalar block
        base = {(r, c): rng.randint(-1, 1) for r in range(n) for c in range(r + 1, n)}
        for _ in range(rng.randint(0, 2)):
            r, c = rng.randrange(n), rng.randrange(n)
            base[(max(r, c), min(r, c))] = rng.randint(-1, 1)
        if rng.random() < 0.3:
            lam = rng.randint(-2, 2)
            for k in range(rng.randint(1, n)):
                base[(k, k)] = lam
        return RationalMatrix.from_entries(n, base)
    raise ValueError(f"unknown sample kind {kind!r}")
