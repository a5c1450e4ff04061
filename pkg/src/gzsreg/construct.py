"""Strongly regular elements inside Borel subalgebras.

The inductive construction works level by level inside a standard Borel
b_Q: diagonalize the previous level inside its Borel subgroup, build a
bordered element in the closed-orbit representative Borel with unit entries
on the border roots, then move it into b_Q with a Weyl element of K.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .gz import cutoff, is_sreg_centralizer, is_sreg_differentials, kw_map
from .korbits import (
    BorelSubalgebra,
    InvariantViolation,
    OrbitClass,
    classify_korbit,
    random_invertible,
    representative_flag,
    stabilizer_borel,
)
from .linalg import (
    Polynomial,
    RationalMatrix,
    is_squarefree_charpoly,
    kernel_basis,
)
from .nilfibre import BorelPattern, ClosedOrbitSequence, tower_sequence


def closed_rep_borel(i: int, n_plus_1: int) -> BorelSubalgebra:
    """Stabilizer of e_1 ⊂ ... ⊂ e_{i-1} ⊂ e_N ⊂ e_i ⊂ ... ⊂ e_n."""
    if not 1 <= i <= n_plus_1:
        raise ValueError(f"closed orbit index {i} out of range 1..{n_plus_1}")
    return stabilizer_borel(representative_flag(OrbitClass.closed(i), n_plus_1))


def closed_rep_pattern(i: int, n_plus_1: int) -> BorelPattern:
    order = list(range(1, i)) + [n_plus_1] + list(range(i, n_plus_1))
    return BorelPattern(tuple(order))


def gamma_positions(i: int, n_plus_1: int) -> list[tuple]:
    """Border root positions of the Closed(i) representative: last column
    rows 1..i-1 and bottom row columns i..n (1-based)."""
    n = n_plus_1 - 1
    return [(k, n_plus_1) for k in range(1, i)] + [(n_plus_1, k) for k in range(i, n + 1)]


def weyl_k_align(m: BorelPattern, b: BorelPattern) -> tuple:
    """Permutation w (1-based images, w[k-1] = w(k)) fixing N with w·m·w^-1 = b.

    w must send the flag order of m onto that of b, so it is unique; if it
    moves N the two Borels are not in the same K-orbit.
    """
    if m.size != b.size:
        raise ValueError("patterns of different sizes")
    w = [0] * m.size
    for src, dst in zip(m.order, b.order):
        w[src - 1] = dst
    if w[-1] != m.size:
        raise InvariantViolation("no Weyl element of K aligns these Borels")
    return tuple(w)


def conjugate_pattern(w: tuple, m: BorelPattern) -> BorelPattern:
    return BorelPattern(tuple(w[k - 1] for k in m.order))


def weyl_k_align_search(m: BorelPattern, b: BorelPattern) -> list[tuple]:
    """Every w fixing N with w·m = b, by exhaustive search."""
    n1 = m.size
    hits = []
    for head in permutations(range(1, n1)):
        w = tuple(head) + (n1,)
        mapped = frozenset((w[r - 1], w[c - 1]) for r, c in m.positions)
        if mapped == b.positions:
            hits.append(w)
    return hits


def diagonalizing_conjugator(y: RationalMatrix, pattern: BorelPattern) -> RationalMatrix:
    """P in the Borel subgroup of ``pattern`` with P^-1 y P = diag(y).

    Column o_k is the eigenvector for the diagonal entry y[o_k, o_k],
    normalised to 1 at e_{o_k}. For distinct eigenvalues it is supported on
    earlier flag indices, so P lies in the Borel subgroup.
    """
    n = y.size
    cols = [None] * n
    for idx in pattern.order:
        lam = y[idx - 1, idx - 1]
        kern = kernel_basis(y - RationalMatrix.identity(n) * lam)
        if len(kern) != 1:
            raise InvariantViolation("eigenvalue is not simple")
        vec = kern[0]
        if vec[idx - 1] == 0:
            raise InvariantViolation("eigenvector does not reach its flag index")
        cols[idx - 1] = tuple(v / vec[idx - 1] for v in vec)
    p = RationalMatrix.from_columns(cols)
    if not pattern.contains(p):
        raise InvariantViolation("diagonalizing matrix left the Borel subgroup")
    return p


def tower_pattern(q: ClosedOrbitSequence) -> BorelPattern:
    """The standard Borel whose projection tower realizes q.

    Built level by level: at level k with orbit index j, the new index k is
    inserted into the previous flag order at position j.
    """
    order: list[int] = []
    for level, j in enumerate(q.indices, 1):
        order.insert(j - 1, level)
    return BorelPattern(tuple(order))


@dataclass
class LevelStep:
    level: int
    orbit_index: int
    weyl: tuple
    z: RationalMatrix
    corner: Fraction

    def border_entries(self) -> dict:
        n1 = self.level
        out = {}
        for k in range(n1 - 1):
            if self.z[k, n1 - 1]:
                out[(k + 1, n1)] = self.z[k, n1 - 1]
            if self.z[n1 - 1, k]:
                out[(n1, k + 1)] = self.z[n1 - 1, k]
        return out


@dataclass
class Construction:
    orbits: ClosedOrbitSequence
    pattern: BorelPattern
    x: RationalMatrix
    eigenvalues: list
    steps: list = field(default_factory=list)


def default_eigenvalue(level: int) -> Fraction:
    return Fraction(level)


def construct_sreg_trace(q: ClosedOrbitSequence, eigenvalue=default_eigenvalue) -> Construction:
    """Run the construction and keep every intermediate level."""
    n1 = q.n_plus_1
    first = eigenvalue(1)
    y = RationalMatrix([[first]])
    eigs = [first]
    steps = []
    for level in range(2, n1 + 1):
        sub_q = ClosedOrbitSequence(q.indices[:level])
        prev_pattern = tower_pattern(ClosedOrbitSequence(q.indices[: level - 1]))
        target = tower_pattern(sub_q)
        j = q.indices[level - 1]
        rep = closed_rep_pattern(j, level)
        w = weyl_k_align(rep, target)

        p = diagonalizing_conjugator(y, prev_pattern)  # p = b^-1
        h = [y[k, k] for k in range(level - 1)]
        corner = eigenvalue(level)
        if corner in h:
            raise InvariantViolation("corner eigenvalue collides with an earlier one")

        # z = Ad(w^-1) h on the top block, 1 on every border root, corner last
        entries = {(k, k): h[w[k] - 1] for k in range(level - 1)}
        for r, c in gamma_positions(j, level):
            entries[(r - 1, c - 1)] = 1
        entries[(level - 1, level - 1)] = corner
        z = RationalMatrix.from_entries(level, entries)

        # x = Ad(b^-1 w) z with b^-1 = p padded by 1
        p_full = RationalMatrix.from_entries(
            level,
            {**{(r, c): p[r, c] for r in range(level - 1) for c in range(level - 1)}, (level - 1, level - 1): 1},
        )
        k_elem = p_full @ RationalMatrix.permutation(w)
        x = k_elem @ z @ k_elem.inverse()
        if cutoff(x, level - 1) != y:
            raise InvariantViolation("construction changed the previous level")
        steps.append(LevelStep(level, j, w, z, corner))
        y = x
        eigs.append(corner)
    return Construction(q, tower_pattern(q), y, eigs, steps)


def verify_construction(c: Construction) -> dict:
    """Postconditions: x in b_Q, both sreg criteria, split squarefree level spectra."""
    x = c.x
    n1 = x.size
    spectrum = kw_map(x)
    ladder_ok = all(
        spectrum.level_polys[k] == Polynomial.from_roots(c.eigenvalues[: k + 1]) for k in range(n1)
    )
    return {
        "in_borel": c.pattern.contains(x),
        "tower_matches": tower_sequence(c.pattern.borel()) == c.orbits,
        "sreg_centralizer": is_sreg_centralizer(x),
        "sreg_differentials": is_sreg_differentials(x),
        "levels_regular_semisimple": all(is_squarefree_charpoly(cutoff(x, i)) for i in range(1, n1 + 1)),
        "spectra_match_ladder": ladder_ok,
    }


def construct_sreg_in_standard(q: ClosedOrbitSequence) -> RationalMatrix:
    """Strongly regular element of the standard Borel attached to q; every postcondition is asserted."""
    c = construct_sreg_trace(q)
    checks = verify_construction(c)
    failed = [k for k, ok in checks.items() if not ok]
    if failed:
        raise InvariantViolation(f"construction for {q} failed: {', '.join(failed)}")
    return c.x


class SamplingBudgetExhausted(RuntimeError):
    """No strongly regular element found within the sampling budget (statistical, not a disproof)."""


def find_sreg_in_borel(g: RationalMatrix, max_trials: int, rng: random.Random) -> RationalMatrix:
    """Sample g y g^-1 with y random upper triangular (integer entries in [-9, 9]) until strongly regular."""
    b = BorelSubalgebra(g)
    n1 = b.size
    for _ in range(max_trials):
        y = RationalMatrix.from_entries(
            n1, {(r, c): rng.randint(-9, 9) for r in range(n1) for c in range(r, n1)}
        )
        x = b.conjugate(y)
        if is_sreg_centralizer(x):
            return x
    raise SamplingBudgetExhausted(f"no strongly regular element after {max_trials} samples")


def random_borel_sweep(n_plus_1: int, borels: int, budget: int, rng: random.Random) -> dict:
    """Search random conjugated Borels for strongly regular elements."""
    found, exhausted, orbits = 0, 0, {}
    for _ in range(borels):
        g = random_invertible(n_plus_1, rng)
        try:
            x = find_sreg_in_borel(g, budget, rng)
        except SamplingBudgetExhausted:
            exhausted += 1
            continue
        if not BorelSubalgebra(g).contains(x):
            raise InvariantViolation("sampled element left its Borel")
        found += 1
        key = str(classify_korbit(BorelSubalgebra(g).flag()))
        orbits[key] = orbits.get(key, 0) + 1
    return {"borels": borels, "found": found, "exhausted": exhausted, "orbits": dict(sorted(orbits.items()))}
