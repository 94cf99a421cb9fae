"""Row-latin rectangles: transversal search, equivalence classification, and the
exhaustive verifier for the unique transversal-free 4x3 rectangle.

A k x m row-latin rectangle has every row a permutation of the symbols
0..m-1.  A transversal is a set of min(k, m) cells hitting each row, column,
and symbol at most once.  Equivalence is by row, column, and symbol
permutations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Optional, Sequence

from .errors import CapacityError, InputError, ValidationError

#: Cap on m!**k for class enumeration.
CLASS_ENUM_CAP = 10 ** 7

#: The unique transversal-free 4x3 rectangle (0-based symbols).
T_RECTANGLE = ((0, 1, 2), (0, 1, 2), (1, 2, 0), (1, 2, 0))

#: Ten pairwise-inequivalent 4x3 row-latin tables, one per equivalence
#: class; the verifier checks its enumeration against them.
REFERENCE_CLASS_TABLES = (
    ((0, 1, 2), (0, 1, 2), (0, 1, 2), (0, 1, 2)),
    ((0, 1, 2), (0, 1, 2), (0, 1, 2), (0, 2, 1)),
    ((0, 1, 2), (0, 1, 2), (0, 1, 2), (1, 2, 0)),
    ((0, 1, 2), (0, 1, 2), (0, 2, 1), (0, 2, 1)),
    ((0, 1, 2), (0, 1, 2), (0, 2, 1), (1, 2, 0)),
    ((0, 1, 2), (0, 1, 2), (0, 2, 1), (1, 0, 2)),
    T_RECTANGLE,
    ((0, 1, 2), (0, 1, 2), (1, 2, 0), (2, 0, 1)),
    ((0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 0, 1)),
    ((0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 1, 0)),
)


class RowLatinRectangle:
    """Immutable k x m table whose rows are permutations of 0..m-1."""

    __slots__ = ("k", "m", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(c) for c in r) for r in rows)
        if not rows:
            raise InputError("rectangle needs at least one row")
        m = len(rows[0])
        for r in rows:
            if sorted(r) != list(range(m)):
                raise ValidationError(f"row {r} is not a permutation of 0..{m - 1}")
        self.k = len(rows)
        self.m = m
        self.rows = rows

    def __eq__(self, other):
        return isinstance(other, RowLatinRectangle) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return f"RowLatinRectangle({self.rows})"

    def to_text(self) -> str:
        lines = [f"rlr {self.k} {self.m}"]
        lines += [" ".join(map(str, r)) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RowLatinRectangle":
        tokens = text.split()
        if len(tokens) < 3 or tokens[0] != "rlr":
            raise ValidationError("not an rlr text: missing 'rlr <k> <m>' header")
        k, m = int(tokens[1]), int(tokens[2])
        body = [int(t) for t in tokens[3:]]
        if len(body) != k * m:
            raise ValidationError(f"rlr body has {len(body)} cells, expected {k * m}")
        return cls([body[r * m: (r + 1) * m] for r in range(k)])


def find_transversal(rows: Sequence[Sequence[int]]) -> Optional[frozenset]:
    """min(k, m) cells, no two sharing a row, column, or symbol, else None.

    Accepts arbitrary symbol tables (rows need not be permutations): the
    perturbation checks feed non-row-latin tables through here.
    """
    rows = [tuple(r) for r in rows]
    k = len(rows)
    m = len(rows[0]) if rows else 0
    target = min(k, m)
    chosen: list[tuple[int, int]] = []

    def rec(r: int, used_cols: int, used_syms: int) -> bool:
        if len(chosen) == target:
            return True
        if r == k or k - r < target - len(chosen):
            return False
        for c in range(m):
            if used_cols >> c & 1:
                continue
            s = rows[r][c]
            if not 0 <= s < m or used_syms >> s & 1:
                continue
            chosen.append((r, c))
            if rec(r + 1, used_cols | 1 << c, used_syms | 1 << s):
                return True
            chosen.pop()
        return rec(r + 1, used_cols, used_syms)

    if rec(0, 0, 0):
        return frozenset(chosen)
    return None


def _transforms(k: int, m: int):
    """All (row gather, column gather, symbol map) triples, lexicographic."""
    return product(
        permutations(range(k)), permutations(range(m)), permutations(range(m))
    )


def _apply(rows, rperm, cperm, sperm):
    return tuple(
        tuple(sperm[rows[r][c]] for c in cperm) for r in rperm
    )


def canonical_form(rect: RowLatinRectangle) -> RowLatinRectangle:
    """Lexicographically least table over all row/column/symbol permutations."""
    best = min(
        _apply(rect.rows, rp, cp, sp) for rp, cp, sp in _transforms(rect.k, rect.m)
    )
    return RowLatinRectangle(best)


def enumerate_classes(k: int, m: int, cap: int = CLASS_ENUM_CAP) -> list[RowLatinRectangle]:
    """One canonical representative per equivalence class, sorted.

    Walks all m!**k row-latin tables, expanding whole orbits at once so each
    class is canonicalized exactly once.
    """
    raw = math.factorial(m) ** k
    if raw > cap:
        raise CapacityError(f"m!**k = {raw} exceeds the cap {cap}")
    perm_list = list(permutations(range(m)))
    seen: set = set()
    reps = []
    for combo in product(perm_list, repeat=k):
        if combo in seen:
            continue
        orbit = {
            _apply(combo, rp, cp, sp) for rp, cp, sp in _transforms(k, m)
        }
        seen.update(orbit)
        reps.append(RowLatinRectangle(min(orbit)))
    reps.sort()
    return reps


@dataclass
class Lemma1Report:
    """Outcome of the exhaustive 4x3 rectangle check."""

    raw_tables: int = 0
    classes: int = 0
    transversal_free: int = 0
    matches_T: bool = False
    matches_reference: bool = False
    perturbations_total: int = 0
    perturbations_with_transversal: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.classes == 10
            and self.transversal_free == 1
            and self.matches_T
            and self.matches_reference
            and self.perturbations_with_transversal == self.perturbations_total
            and not self.violations
        )

    def render(self) -> str:
        lines = [
            f"raw_tables: {self.raw_tables}",
            f"classes: {self.classes}",
            f"transversal_free: {self.transversal_free}",
            f"matches_T: {str(self.matches_T).lower()}",
            f"matches_reference: {str(self.matches_reference).lower()}",
            f"perturbations_ok: {self.perturbations_with_transversal}/{self.perturbations_total}",
            f"violations: {len(self.violations)}",
        ]
        lines += [f"violation: {v}" for v in self.violations]
        return "\n".join(lines)


def verify_lemma1() -> Lemma1Report:
    """Exhaustively confirm the two properties of the rectangle T_RECTANGLE:
    it is the unique 4x3 row-latin rectangle without a transversal up to
    equivalence, and changing any single symbol yields a table with one.
    """
    report = Lemma1Report(raw_tables=6 ** 4)
    reps = enumerate_classes(4, 3)
    report.classes = len(reps)
    t_canon = canonical_form(RowLatinRectangle(T_RECTANGLE))
    free = [r for r in reps if find_transversal(r.rows) is None]
    report.transversal_free = len(free)
    report.matches_T = len(free) == 1 and free[0] == t_canon
    if not report.matches_T:
        report.violations.append(
            f"transversal-free classes {free} do not match the canonical T"
        )
    reference = {
        canonical_form(RowLatinRectangle(rows)) for rows in REFERENCE_CLASS_TABLES
    }
    report.matches_reference = reference == set(reps)
    if not report.matches_reference:
        report.violations.append(
            "enumerated classes do not match the ten reference representatives"
        )
    for r in range(4):
        for c in range(3):
            for sym in range(3):
                if sym == T_RECTANGLE[r][c]:
                    continue
                report.perturbations_total += 1
                mutated = [list(row) for row in T_RECTANGLE]
                mutated[r][c] = sym
                if find_transversal(mutated) is not None:
                    report.perturbations_with_transversal += 1
                else:
                    report.violations.append(
                        f"perturbation ({r},{c})->{sym} has no transversal"
                    )
    return report
