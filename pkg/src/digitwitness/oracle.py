"""Brute-force ground truth for digit-sum residue counts and witness checking.

Everything here is deliberately independent of the construction: counts come
from enumerating [0, N) and summing digits directly, and witness verification
re-evaluates p(n) from scratch.  Enumeration advances p(n) with an exact
finite-difference table (h additions per step); per-n Horner evaluation is
kept around as the dumber cross-check path.

Ranges may be partitioned across processes; tallies are exact integers, so
any partition merges to identical results.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from .construction import Witness, build_cubic
from .digits import _sum_table, _TABLE_CAP, digit_sum
from .intpoly import IntPolynomial, poly_eval


def polynomial_values(p: IntPolynomial, start: int, stop: int) -> Iterator[int]:
    """Yield p(start), p(start+1), ..., p(stop-1) by finite differences."""
    if stop <= start:
        return
    h = max(p.degree, 0)
    diffs = [poly_eval(p, start + i) for i in range(h + 1)]
    for level in range(1, h + 1):
        for idx in range(h, level - 1, -1):
            diffs[idx] -= diffs[idx - 1]
    for _ in range(stop - start):
        yield diffs[0]
        for i in range(h):
            diffs[i] += diffs[i + 1]


def tally_range(
    q: int, m: int, coeffs: Sequence[int], start: int, stop: int
) -> list[int]:
    """Per-residue counts of s_q(p(n)) mod m for n in [start, stop)."""
    p = IntPolynomial.from_coeffs(coeffs)
    counts = [0] * m
    if q <= _TABLE_CAP:
        table, block = _sum_table(q)
        for value in polynomial_values(p, start, stop):
            if value < 0:
                raise ValueError(f"polynomial takes negative value {value}")
            s = 0
            while value:
                value, r = divmod(value, block)
                s += table[r]
            counts[s % m] += 1
    else:
        for value in polynomial_values(p, start, stop):
            counts[digit_sum(value, q) % m] += 1
    return counts


def _tally_chunk(args: tuple[int, int, tuple[int, ...], int, int]) -> list[int]:
    return tally_range(*args)


def _tally_parallel(
    q: int, m: int, p: IntPolynomial, n_limit: int, workers: int
) -> list[int]:
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    if n_limit < 1:
        raise ValueError(f"N must be >= 1, got {n_limit}")
    if workers == 1:
        return tally_range(q, m, p.coeffs, 0, n_limit)
    cuts = [n_limit * i // workers for i in range(workers + 1)]
    jobs = [
        (q, m, p.coeffs, cuts[i], cuts[i + 1])
        for i in range(workers)
        if cuts[i] < cuts[i + 1]
    ]
    counts = [0] * m
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_tally_chunk, jobs):
            for r, c in enumerate(part):
                counts[r] += c
    return counts


def brute_force_count(
    q: int, m: int, g: int, p: IntPolynomial, n_limit: int, workers: int = 1
) -> int:
    """#{0 <= n < N : s_q(p(n)) = g (mod m)} by direct enumeration.

    No coprimality is assumed here; p must be nonnegative on [0, N).
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return _tally_parallel(q, m, p, n_limit, workers)[g % m]


@dataclass(frozen=True)
class DensityTable:
    """Residue tallies of s_q(p(n)) mod m over [0, N), with exact densities."""

    q: int
    m: int
    p: IntPolynomial
    n_limit: int
    counts: tuple[int, ...]
    densities: tuple[Fraction, ...]

    def __post_init__(self):
        if sum(self.counts) != self.n_limit:
            raise ValueError("counts must sum to N")
        if sum(self.densities, Fraction(0)) != 1:
            raise ValueError("densities must sum to 1")


def density_table(
    q: int, m: int, p: IntPolynomial, n_limit: int, workers: int = 1
) -> DensityTable:
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    counts = _tally_parallel(q, m, p, n_limit, workers)
    return DensityTable(
        q=q,
        m=m,
        p=p,
        n_limit=n_limit,
        counts=tuple(counts),
        densities=tuple(Fraction(c, n_limit) for c in counts),
    )


def polynomial_residue_count(d: int, g: int, p: IntPolynomial) -> int:
    """#{0 <= n < d : p(n) = g (mod d)}, the main-term correction factor."""
    if d < 1:
        raise ValueError(f"modulus must be >= 1, got {d}")
    g %= d
    return sum(1 for n in range(d) if poly_eval(p, n) % d == g)


@dataclass(frozen=True)
class ComparisonRow:
    residue: int
    count: int
    density: Fraction
    prediction: Fraction
    deviation: Fraction


@dataclass(frozen=True)
class ComparisonReport:
    """Observed densities next to the equidistribution main term Q*(g,d)/m."""

    table: DensityTable
    d: int
    rows: tuple[ComparisonRow, ...]

    @property
    def max_deviation(self) -> Fraction:
        return max(row.deviation for row in self.rows)


def compare_to_main_term(table: DensityTable) -> ComparisonReport:
    d = gcd(table.m, table.q - 1)
    rows = []
    for residue, (count, density) in enumerate(zip(table.counts, table.densities)):
        prediction = Fraction(
            polynomial_residue_count(d, residue, table.p), table.m
        )
        rows.append(
            ComparisonRow(
                residue=residue,
                count=count,
                density=density,
                prediction=prediction,
                deviation=abs(density - prediction),
            )
        )
    return ComparisonReport(table=table, d=d, rows=tuple(rows))


@dataclass(frozen=True)
class WitnessFailure:
    index: int
    message: str


@dataclass(frozen=True)
class VerificationReport:
    total: int
    failures: tuple[WitnessFailure, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def passed(self) -> int:
        return self.total - len({f.index for f in self.failures})


def verify_witnesses(
    witnesses: Iterable[Witness], q: int, m: int, g: int, p: IntPolynomial
) -> VerificationReport:
    """Recheck every witness from first principles; failures are collected.

    Each witness has s_q(p(n)) recomputed by direct evaluation and digit
    expansion, its provenance (n rebuilt from the quadruple and k) replayed,
    and its residue compared against g; duplicate n across the collection are
    also flagged.  Nothing raises: the report lists what failed and why.
    """
    g %= m
    failures: list[WitnessFailure] = []
    seen: dict[int, int] = {}
    total = 0
    for index, w in enumerate(witnesses):
        total += 1
        problems = []
        rebuilt = poly_eval(build_cubic(w.params), q**w.k) + w.e
        if rebuilt != w.n:
            problems.append(f"n does not match its quadruple: {rebuilt} != {w.n}")
        if w.sq_value != w.k * (q - 1) + w.offset:
            problems.append(
                f"sq {w.sq_value} inconsistent with k*(q-1)+offset "
                f"{w.k * (q - 1) + w.offset}"
            )
        recomputed = digit_sum(poly_eval(p, w.n), q)
        if recomputed != w.sq_value:
            problems.append(f"recomputed digit sum {recomputed} != {w.sq_value}")
        if recomputed % m != g:
            problems.append(f"digit sum residue {recomputed % m} != target {g}")
        if w.residue != g:
            problems.append(f"declared residue {w.residue} != target {g}")
        if w.n in seen:
            problems.append(f"duplicate n, first seen at index {seen[w.n]}")
        else:
            seen[w.n] = index
        failures.extend(WitnessFailure(index, msg) for msg in problems)
    return VerificationReport(total=total, failures=tuple(failures))
