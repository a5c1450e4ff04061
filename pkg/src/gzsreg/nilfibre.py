"""Borel subalgebras built from towers of closed orbits, and the components
of the strongly regular nilfibre."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb
from typing import Iterable, Sequence

from .gz import cutoff, is_nilfibre_sreg, is_regular
from .korbits import (
    BorelSubalgebra,
    InvariantViolation,
    OrbitClass,
    borel_flag,
    classify_korbit,
    is_borel_subalgebra,
    kernel_flag,
    projected_subalgebra,
)
from .linalg import (
    Polynomial,
    RationalMatrix,
    centralizer_basis,
    charpoly,
    is_nilpotent,
    kernel_basis,
    subspace_intersection,
)

MINUS_CHARS = {"-": "-", "−": "-", "+": "+"}


@dataclass(frozen=True)
class SignSequence:
    """Word over {+, -} of length N whose first letter is '+' by convention."""

    signs: str

    def __post_init__(self):
        try:
            norm = "".join(MINUS_CHARS[ch] for ch in self.signs)
        except KeyError as exc:
            raise ValueError(f"bad sign character in {self.signs!r}") from exc
        if not norm or norm[0] != "+":
            raise ValueError("sign sequences are non-empty and start with '+'")
        object.__setattr__(self, "signs", norm)

    @property
    def n_plus_1(self) -> int:
        return len(self.signs)

    def orbit_sequence(self) -> "ClosedOrbitSequence":
        # '+' at level i is the orbit of upper triangulars, Closed(i); '-' is Closed(1)
        return ClosedOrbitSequence(
            tuple(1 if k == 1 else (k if s == "+" else 1) for k, s in enumerate(self.signs, 1))
        )

    def __str__(self) -> str:
        return self.signs


def all_sign_sequences(n_plus_1: int) -> list[SignSequence]:
    return [SignSequence("+" + "".join(t)) for t in product("+-", repeat=n_plus_1 - 1)]


@dataclass(frozen=True)
class ClosedOrbitSequence:
    """Entry k (1-based) is the index of a closed K_k-orbit on the flags of Q^k."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(v) for v in self.indices)
        if not idx:
            raise ValueError("empty orbit sequence")
        for level, v in enumerate(idx, 1):
            if not 1 <= v <= level:
                raise ValueError(f"orbit index {v} out of range at level {level}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def parse(cls, text: str) -> "ClosedOrbitSequence":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @property
    def n_plus_1(self) -> int:
        return len(self.indices)

    def orbits(self) -> list[OrbitClass]:
        return [OrbitClass.closed(i) for i in self.indices]

    def signs(self) -> SignSequence | None:
        """The sign word, if every level is the upper or lower triangular orbit."""
        out = "+"
        for level, v in enumerate(self.indices[1:], 2):
            if v == level:
                out += "+"
            elif v == 1:
                out += "-"
            else:
                return None
        return SignSequence(out)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.indices)


def all_closed_orbit_sequences(n_plus_1: int) -> list[ClosedOrbitSequence]:
    return [
        ClosedOrbitSequence(t)
        for t in product(*(range(1, k + 1) for k in range(1, n_plus_1 + 1)))
    ]


@dataclass(frozen=True)
class BorelPattern:
    """Borel subalgebra containing the diagonal, stored as the order of its flag.

    ``order = (o_1, ..., o_N)`` means the Borel stabilizes
    e_{o_1} ⊂ e_{o_2} ⊂ ...; position (r, c) is allowed iff r comes no later
    than c in that order.
    """

    order: tuple

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError(f"{order} is not a permutation")
        object.__setattr__(self, "order", order)

    @classmethod
    def from_positions(cls, size: int, positions: Iterable[tuple]) -> "BorelPattern":
        pos = set(positions)
        # in a Borel pattern, the k-th flag index owns N - k positions in its row
        counts = {r: sum(1 for (a, _) in pos if a == r) for r in range(1, size + 1)}
        order = tuple(sorted(counts, key=lambda r: -counts[r]))
        pattern = cls(order)
        if pattern.positions != frozenset(pos):
            raise ValueError("positions do not form a Borel pattern")
        return pattern

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def positions(self) -> frozenset:
        """Off-diagonal allowed positions (1-based)."""
        o = self.order
        return frozenset((o[a], o[b]) for a in range(len(o)) for b in range(a + 1, len(o)))

    @property
    def simple_positions(self) -> list[tuple]:
        o = self.order
        return [(o[k], o[k + 1]) for k in range(len(o) - 1)]

    def conjugator(self) -> RationalMatrix:
        return RationalMatrix.permutation(self.order)

    def borel(self) -> BorelSubalgebra:
        return BorelSubalgebra(self.conjugator())

    def contains(self, x: RationalMatrix) -> bool:
        allowed = self.positions
        return all(
            r == c or (r + 1, c + 1) in allowed for (r, c) in x.support()
        )

    def contains_in_nilradical(self, x: RationalMatrix) -> bool:
        allowed = self.positions
        return all((r + 1, c + 1) in allowed for (r, c) in x.support())

    def display(self) -> list[str]:
        n = self.size
        allowed = self.positions
        return [
            " ".join("h" if r == c else ("*" if (r, c) in allowed else "0") for c in range(1, n + 1))
            for r in range(1, n + 1)
        ]

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "order": list(self.order),
            "positions": sorted([list(p) for p in self.positions]),
            "simple_positions": [list(p) for p in self.simple_positions],
            "pattern": self.display(),
        }


def standard_borels(n_plus_1: int) -> list[BorelPattern]:
    return [BorelPattern(p) for p in permutations(range(1, n_plus_1 + 1))]


def build_bq(s: SignSequence) -> BorelPattern:
    """Borel b_Q for a sign word: '+' at level i adds column i above the
    diagonal, '-' adds row i left of the diagonal."""
    order = [1]
    for level, sign in enumerate(s.signs[1:], 2):
        if sign == "+":
            order.append(level)
        else:
            order.insert(0, level)
    pattern = BorelPattern(tuple(order))
    expected = set()
    for level, sign in enumerate(s.signs[1:], 2):
        for k in range(1, level):
            expected.add((k, level) if sign == "+" else (level, k))
    if pattern.positions != frozenset(expected):
        raise InvariantViolation(f"pattern for {s} is not closed under the tower rule")
    return pattern


# ---------------------------------------------------------------------------
# towers of cutoff projections


@dataclass(frozen=True)
class TowerBreak:
    level: int
    reason: str


def tower_orbits(b: BorelSubalgebra) -> list[OrbitClass] | TowerBreak:
    """K_i-orbit of the projection π_i(b) at each level i = 1..N.

    Returns a :class:`TowerBreak` at the first level where π_i(b) is not a
    Borel subalgebra of gl(i).
    """
    n1 = b.size
    out = [None] * n1
    out[n1 - 1] = classify_korbit(b.flag())
    for i in range(n1 - 1, 0, -1):
        proj = projected_subalgebra(b, i)
        if not is_borel_subalgebra(proj, i):
            return TowerBreak(i, f"projection to gl({i}) is not a Borel subalgebra")
        out[i - 1] = classify_korbit(borel_flag(proj, i))
    return out


def first_mismatch(b: BorelSubalgebra, q: ClosedOrbitSequence) -> TowerBreak | None:
    if q.n_plus_1 != b.size:
        raise ValueError("orbit sequence length differs from the Borel size")
    tower = tower_orbits(b)
    if isinstance(tower, TowerBreak):
        return tower
    for level, (got, want) in enumerate(zip(tower, q.orbits()), 1):
        if got != want:
            return TowerBreak(level, f"level {level} lies in {got}, wanted {want}")
    return None


def xq_membership(b: BorelSubalgebra, q: ClosedOrbitSequence) -> bool:
    """True iff π_i(b) lies in the orbit Q_i at every level."""
    return first_mismatch(b, q) is None


def tower_sequence(b: BorelSubalgebra) -> ClosedOrbitSequence | None:
    tower = tower_orbits(b)
    if isinstance(tower, TowerBreak) or not all(c.is_closed for c in tower):
        return None
    return ClosedOrbitSequence(tuple(c.i for c in tower))


# ---------------------------------------------------------------------------
# components


def nq_reg_sample(s: SignSequence, rng: random.Random, budget: int = 20) -> RationalMatrix:
    """Random regular element of the nilradical of b_Q.

    Simple-root positions of the pattern get nonzero entries in ±{1..5},
    the other nilradical positions integers in [-5, 5].
    """
    pattern = build_bq(s)
    simple = set(pattern.simple_positions)
    n1 = s.n_plus_1
    for _ in range(budget):
        entries = {}
        for (r, c) in pattern.positions:
            if (r, c) in simple:
                entries[(r - 1, c - 1)] = rng.choice([k for k in range(-5, 6) if k])
            else:
                entries[(r - 1, c - 1)] = rng.randint(-5, 5)
        x = RationalMatrix.from_entries(n1, entries)
        if is_nilpotent(x) and is_regular(x):
            return x
    raise RuntimeError(f"no regular nilpotent sampled for {s} within {budget} draws")


def component_of(x: RationalMatrix) -> SignSequence:
    """Sign word of the component containing a strongly regular nilfibre element."""
    if not is_nilfibre_sreg(x):
        raise ValueError("matrix is not a strongly regular element of the nilfibre")
    signs = "+"
    for i in range(2, x.size + 1):
        c = classify_korbit(kernel_flag(cutoff(x, i)))
        sign = c.sign(i)
        if sign is None:
            raise InvariantViolation(f"level {i} cutoff lies in {c}, not a triangular orbit")
        signs += sign
    return SignSequence(signs)


@dataclass
class CensusReport:
    n: int
    components: list = field(default_factory=list)
    cross_hits: int = 0
    distinct_patterns: bool = True

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def failures(self) -> int:
        return sum(c["failures"] for c in self.components) + self.cross_hits

    @property
    def ok(self) -> bool:
        return self.failures == 0 and self.distinct_patterns and self.count == 2 ** self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "count": self.count,
            "expected": 2 ** self.n,
            "cross_hits": self.cross_hits,
            "distinct_patterns": self.distinct_patterns,
            "components": self.components,
        }


def component_census(n: int, samples_per_component: int, rng: random.Random) -> CensusReport:
    """Sample every component n_Q^reg of the nilfibre in gl(n+1).

    Checks that each sample is strongly regular in the nilfibre, classifies
    back to its own sign word, and lies in no other b_Q's nilradical.
    """
    n1 = n + 1
    seqs = all_sign_sequences(n1)
    patterns = {str(s): build_bq(s) for s in seqs}
    report = CensusReport(n)
    report.distinct_patterns = len({p.order for p in patterns.values()}) == len(seqs)
    for s in seqs:
        sub = random.Random(rng.getrandbits(64))
        failures = 0
        for _ in range(samples_per_component):
            x = nq_reg_sample(s, sub)
            if not is_nilfibre_sreg(x) or component_of(x) != s:
                failures += 1
            report.cross_hits += sum(
                1 for key, p in patterns.items() if key != str(s) and p.contains_in_nilradical(x)
            )
        pattern = patterns[str(s)]
        report.components.append(
            {
                "sequence": str(s),
                "samples": samples_per_component,
                "failures": failures,
                "pattern": pattern.display(),
                "simple_positions": [list(p) for p in pattern.simple_positions],
            }
        )
    return report


# ---------------------------------------------------------------------------
# bordered extensions


def bordered(y: RationalMatrix, b: Sequence, c: Sequence, d) -> RationalMatrix:
    """[[y, b], [c, d]] with b a column and c a row."""
    rows = [list(row) + [b[k]] for k, row in enumerate(y.rows())]
    rows.append(list(c) + [d])
    return RationalMatrix(rows)


def krylov_matrix(y: RationalMatrix, b: Sequence) -> RationalMatrix:
    """Columns b, yb, ..., y^(i-1) b."""
    cols = [tuple(Fraction(v) for v in b)]
    for _ in range(y.size - 1):
        cols.append(y.apply(cols[-1]))
    return RationalMatrix.from_columns(cols)


def bordered_charpoly(y: RationalMatrix, b: Sequence, c: Sequence, d) -> Polynomial:
    """Closed form of det(tI - [[y, b], [c, d]]) for nilpotent y:
    (t - d) t^i - sum_k (c y^k b) t^(i-1-k)."""
    i = y.size
    coeffs = [Fraction(0)] * (i + 2)
    coeffs[i + 1] = Fraction(1)
    coeffs[i] = -Fraction(d)
    vec = tuple(Fraction(v) for v in b)
    for k in range(i):
        coeffs[i - 1 - k] -= sum((ci * vi for ci, vi in zip(c, vec)), Fraction(0))
        vec = y.apply(vec)
    return Polynomial(tuple(coeffs))


@dataclass(frozen=True)
class Extension:
    matrix: RationalMatrix
    b: tuple
    c: tuple
    d: Fraction
    regular: bool
    intersection_zero: bool
    orbit: OrbitClass | None  # K-orbit of the unique Borel containing it, when regular

    @property
    def strongly_regular(self) -> bool:
        return self.regular and self.intersection_zero


def extension_solutions_oracle(
    y: RationalMatrix,
    b_grid: Iterable[Sequence],
    coeff_range: Sequence[int] = range(-2, 3),
    d_values: Sequence[int] = (0, 1, -1),
) -> list[Extension]:
    """All nilpotent bordered extensions of y over a finite rational grid.

    For each column b, admissible rows c are combinations of a kernel basis
    of the transposed Krylov matrix (so c y^k b = 0 for all k). Every
    candidate is accepted only after its exact characteristic polynomial is
    checked to be t^(i+1).
    """
    i = y.size
    if not (is_nilpotent(y) and is_regular(y)):
        raise ValueError("y must be regular nilpotent")
    y_cent = [m.padded(i + 1) for m in centralizer_basis(y)]
    target = Polynomial.monomial(i + 1)
    out = []
    for b in b_grid:
        b = tuple(Fraction(v) for v in b)
        kappa = kernel_basis(krylov_matrix(y, b).T)
        for coeffs in product(coeff_range, repeat=len(kappa)):
            c = tuple(
                sum((Fraction(a) * vec[t] for a, vec in zip(coeffs, kappa)), Fraction(0))
                for t in range(i)
            )
            for d in d_values:
                x = bordered(y, b, c, d)
                if charpoly(x) != target:
                    continue
                reg = is_regular(x)
                inter_zero = not subspace_intersection(y_cent, centralizer_basis(x))
                orbit = classify_korbit(kernel_flag(x)) if reg else None
                out.append(Extension(x, b, c, Fraction(d), reg, inter_zero, orbit))
    return out


def integer_grid(dim: int, bound: int = 2) -> list[tuple]:
    return list(product(range(-bound, bound + 1), repeat=dim))


@dataclass
class OracleReport:
    size: int
    candidates_accepted: int = 0
    regular: int = 0
    strongly_regular: int = 0
    signs: dict = field(default_factory=dict)
    exceptions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.exceptions

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "accepted": self.candidates_accepted,
            "regular": self.regular,
            "strongly_regular": self.strongly_regular,
            "signs": dict(sorted(self.signs.items())),
            "exceptions": len(self.exceptions),
        }


def oracle_agreement(y: RationalMatrix, bound: int = 2) -> OracleReport:
    """Run the grid oracle and compare with the orbit classification.

    For every accepted regular extension: its orbit is closed, d = 0, and the
    centralizer condition holds exactly when the orbit is Closed(1) or
    Closed(i+1).
    """
    i = y.size
    exts = extension_solutions_oracle(y, integer_grid(i, bound), range(-bound, bound + 1))
    report = OracleReport(i + 1, candidates_accepted=len(exts))
    for e in exts:
        if e.d != 0:
            report.exceptions.append(("nonzero corner", e))
        if not e.regular:
            continue
        report.regular += 1
        if not e.orbit.is_closed:
            report.exceptions.append(("non-closed orbit", e))
            continue
        triangular = e.orbit.sign(i + 1) is not None
        if e.strongly_regular != triangular:
            report.exceptions.append(("classification disagrees", e))
        if e.strongly_regular:
            report.strongly_regular += 1
            key = e.orbit.sign(i + 1)
            report.signs[key] = report.signs.get(key, 0) + 1
    return report


def principal_jordan(size: int, lower: bool = False) -> RationalMatrix:
    entries = {((k + 1, k) if lower else (k, k + 1)): 1 for k in range(size - 1)}
    return RationalMatrix.from_entries(size, entries)


def dimension_census(s: SignSequence) -> tuple[int, int]:
    """(free nilradical coordinates, coordinates required nonzero)."""
    pattern = build_bq(s)
    return len(pattern.positions), len(pattern.simple_positions)


def expected_dimensions(n: int) -> tuple[int, int]:
    return comb(n + 1, 2), n
