"""Named verification suites with deterministic JSON reports.

Every assertion group draws from its own RNG seeded by ``f"{seed}:{key}"``,
so reports depend only on (suite, n, seed, trials). Timing is left to the
caller and never enters a report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb, factorial

from .construct import (
    SamplingBudgetExhausted,
    closed_rep_pattern,
    conjugate_pattern,
    construct_sreg_trace,
    find_sreg_in_borel,
    tower_pattern,
    verify_construction,
    weyl_k_align,
    weyl_k_align_search,
)
from .gz import is_sreg_centralizer, is_sreg_differentials, sample_matrix
from .io import digest, matrix_to_json
from .korbits import (
    BorelSubalgebra,
    all_orbit_classes,
    classify_korbit,
    closed_centralizer_intersection,
    converse_check,
    is_borel_subalgebra,
    nilpsink_check,
    open_orbit_conjugator,
    open_orbit_determinant_check,
    random_invertible,
    random_k_element,
    representative_flag,
    same_span,
    sample_regular_nilpotent,
    stabilizer_borel,
    stabilizer_by_equations,
    v_identity,
)
from .linalg import RationalMatrix, charpoly
from .nilfibre import (
    all_closed_orbit_sequences,
    all_sign_sequences,
    bordered,
    bordered_charpoly,
    build_bq,
    component_census,
    dimension_census,
    expected_dimensions,
    oracle_agreement,
    principal_jordan,
    standard_borels,
    tower_sequence,
)

SUITES = ("korbits", "nilfibre", "sreg")
MAX_N = 5


@dataclass
class Record:
    tag: str
    inputs: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"tag": self.tag, "inputs_digest": self.inputs, "verdict": "pass" if self.ok else "fail", **self.detail}


@dataclass
class SuiteReport:
    suite: str
    n: int
    seed: int
    trials: int
    records: list = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.records)

    @property
    def failed(self) -> int:
        return len(self.records) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.ok]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "failed": self.failed,
            "records": [r.to_json() for r in self.records],
        }


class _Recorder:
    def __init__(self, report: SuiteReport):
        self.report = report

    def rng(self, key: str) -> random.Random:
        return random.Random(f"{self.report.seed}:{key}")

    def add(self, tag: str, ok: bool, inputs: dict | None = None, **detail) -> None:
        r = self.report
        payload = {"suite": r.suite, "n": r.n, "seed": r.seed, "trials": r.trials, "tag": tag, **(inputs or {})}
        r.records.append(Record(tag, digest(payload), bool(ok), detail))


# ---------------------------------------------------------------------------
# korbits


def korbits_suite(rec: _Recorder, n: int, trials: int) -> None:
    n1 = n + 1
    classes = all_orbit_classes(n1)
    closed = [c for c in classes if c.is_closed]
    rec.add(
        "orbit-census",
        len(closed) == n1 and len(classes) - len(closed) == comb(n1, 2),
        closed=len(closed),
        nonclosed=len(classes) - len(closed),
    )
    bad = [str(c) for c in classes if classify_korbit(representative_flag(c, n1)) != c]
    rec.add("representative-roundtrip", not bad, failures=bad)

    bad = []
    for c in classes:
        flag = representative_flag(c, n1)
        b = stabilizer_borel(flag)
        by_eq = stabilizer_by_equations(flag)
        if not (same_span(b.basis(), by_eq) and is_borel_subalgebra(by_eq, n1)):
            bad.append(str(c))
    rec.add("stabilizer-oracle", not bad, failures=bad)

    rng = rec.rng("k-invariance")
    bad = 0
    for _ in range(trials):
        c = rng.choice(classes)
        k = random_k_element(n1, rng)
        if classify_korbit(representative_flag(c, n1).transformed(k)) != c:
            bad += 1
    rec.add("k-invariance", bad == 0, {"trials": trials}, failures=bad)

    bad = []
    for c in classes:
        if c.is_closed:
            continue
        vi = v_identity(c.i, c.j, n1)
        if not vi.holds:
            bad.append(str(c))
    rec.add("cayley-identity", not bad, pairs=comb(n1, 2), failures=bad)

    for c in classes:
        r = nilpsink_check(c, n1, trials, rec.rng(f"nilpsink:{c}"))
        rec.add("projection-nilpotency", r.ok, {"orbit": str(c)}, **r.to_json())

    rng = rec.rng("open-orbit-det")
    bad = 0
    for _ in range(trials):
        ok, _, _ = open_orbit_determinant_check(n1, rng)
        bad += not ok
    rec.add("open-orbit-determinant", bad == 0, failures=bad)

    for c in closed:
        inter = closed_centralizer_intersection(c, n1)
        interior = 1 < c.i < n1
        if interior:
            rec.add("closed-centralizer-witness", bool(inter), {"orbit": str(c)}, orbit=str(c), dim=len(inter))
        else:
            rng = rec.rng(f"closed-sample:{c}")
            b = stabilizer_borel(representative_flag(c, n1))
            bad = sum(not converse_check(sample_regular_nilpotent(b, rng)) for _ in range(trials))
            rec.add(
                "closed-centralizer-zero",
                not inter and bad == 0,
                {"orbit": str(c)},
                orbit=str(c),
                dim=len(inter),
                sample_failures=bad,
            )


# ---------------------------------------------------------------------------
# nilfibre


def nilfibre_suite(rec: _Recorder, n: int, trials: int) -> None:
    n1 = n + 1
    census = component_census(n, trials, rec.rng("census"))
    rec.add(
        "component-census",
        census.ok,
        count=census.count,
        expected=2**n,
        failures=census.failures,
        components={c["sequence"]: c["pattern"] for c in census.components},
    )

    dims = {str(s): dimension_census(s) for s in all_sign_sequences(n1)}
    rec.add("component-dimension", all(d == expected_dimensions(n) for d in dims.values()), expected=list(expected_dimensions(n)))

    towers = {p.order: tower_sequence(p.borel()) for p in standard_borels(n1)}
    seqs = [t for t in towers.values() if t is not None]
    bijective = len(seqs) == factorial(n1) and len(set(seqs)) == len(seqs)
    rec.add("tower-uniqueness", bijective, borels=len(towers), distinct_sequences=len(set(seqs)))
    bad = [str(s) for s in all_sign_sequences(n1) if towers[build_bq(s).order] != s.orbit_sequence()]
    rec.add("tower-sign-patterns", not bad, failures=bad)

    rng = rec.rng("bordered-charpoly")
    bad = 0
    for _ in range(trials):
        y = random_nilpotent(n, rng)
        b = [rng.randint(-3, 3) for _ in range(n)]
        c = [rng.randint(-3, 3) for _ in range(n)]
        d = rng.randint(-3, 3)
        bad += bordered_charpoly(y, b, c, d) != charpoly(bordered(y, b, c, d))
    rec.add("bordered-charpoly", bad == 0, failures=bad)

    for i in range(2, min(n, 3) + 1):
        r = oracle_agreement(principal_jordan(i))
        rec.add("bordered-oracle", r.ok, {"size": i}, **r.to_json())


def random_nilpotent(size: int, rng: random.Random) -> RationalMatrix:
    """g u g^-1 with u strictly upper triangular."""
    u = RationalMatrix.from_entries(
        size, {(r, c): rng.randint(-2, 2) for r in range(size) for c in range(r + 1, size)}
    )
    return BorelSubalgebra(random_invertible(size, rng, bound=2)).conjugate(u)


# ---------------------------------------------------------------------------
# sreg


def sreg_suite(rec: _Recorder, n: int, trials: int) -> None:
    n1 = n + 1
    rng = rec.rng("criteria")
    disagree, sreg = 0, 0
    for _ in range(trials):
        x = sample_matrix(n1, rng)
        a = is_sreg_centralizer(x)
        disagree += a != is_sreg_differentials(x)
        sreg += a
    rec.add("criterion-equivalence", disagree == 0, {"trials": trials}, samples=trials, sreg=sreg, disagreements=disagree)

    bad = []
    for q in all_closed_orbit_sequences(n1):
        rep = closed_rep_pattern(q.indices[-1], n1)
        target = tower_pattern(q)
        w = weyl_k_align(rep, target)
        ok = conjugate_pattern(w, rep) == target and w[-1] == n1
        if n1 <= 4:
            ok = ok and weyl_k_align_search(rep, target) == [w]
        if not ok:
            bad.append(str(q))
    rec.add("weyl-alignment", not bad, failures=bad)

    bad = []
    for q in all_closed_orbit_sequences(n1):
        checks = verify_construction(construct_sreg_trace(q))
        if not all(checks.values()):
            bad.append({"orbits": str(q), **checks})
    rec.add("construct-standard", not bad, borels=factorial(n1), failures=bad)

    rng = rec.rng("arbitrary-borels")
    exhausted = 0
    for _ in range(trials):
        g = random_invertible(n1, rng)
        try:
            x = find_sreg_in_borel(g, 50, rng)
        except SamplingBudgetExhausted:
            exhausted += 1
            continue
        if not BorelSubalgebra(g).contains(x):
            exhausted += 1
    rec.add("arbitrary-borels", exhausted == 0, {"budget": 50}, borels=trials, exhausted=exhausted)

    g = open_orbit_conjugator(n1)
    orbit = classify_korbit(BorelSubalgebra(g).flag())
    try:
        x = find_sreg_in_borel(g, 50, rec.rng("open-borel"))
        rec.add("open-orbit-borel", True, orbit=str(orbit), witness=matrix_to_json(x))
    except SamplingBudgetExhausted:
        rec.add("open-orbit-borel", False, orbit=str(orbit))


_RUNNERS = {"korbits": korbits_suite, "nilfibre": nilfibre_suite, "sreg": sreg_suite}


def run_suite(suite: str, n: int = 3, seed: int = 0, trials: int = 100) -> SuiteReport:
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}")
    report = SuiteReport(suite, n, seed, trials)
    _RUNNERS[suite](_Recorder(report), n, trials)
    return report


def run_suites(suite: str, n: int = 3, seed: int = 0, trials: int = 100) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    return [run_suite(s, n, seed, trials) for s in names]
