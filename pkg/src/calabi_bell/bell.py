"""Partial and complete exponential Bell polynomials over exact rationals.

The partial Bell polynomial B_{r,j}(x_1, ..., x_{r-j+1}) collects the ways
an r-th derivative of a composition distributes over partitions of r into
j blocks:

    B_{r,j} = sum over s_1 + 2 s_2 + ... = r, s_1 + s_2 + ... = j of
              r! / (s_1! s_2! ... ) * (x_1/1!)^{s_1} (x_2/2!)^{s_2} ...

Two independent algorithms are provided. ``partial_bell_partition`` is the
defining sum over integer partitions, kept as a cross-check oracle (its
cost grows with the partition count, so keep r modest). The production
path is the binomial recurrence

    B_{r,j} = sum_{i=1}^{r-j+1} C(r-1, i-1) * x_i * B_{r-i, j-1}

with B_{0,0} = 1, which ``BellTable`` memoizes row by row so that long
scans reuse every previously computed entry.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from fractions import Fraction

from .rationals import Rational, binomial, factorial

__all__ = [
    "BellConsistencyError",
    "partial_bell_partition",
    "partial_bell_recurrence",
    "BellTable",
    "build_bell_table",
    "complete_bell",
]


class BellConsistencyError(ArithmeticError):
    """The recurrence-built table disagreed with the defining partition sum."""


def _check_indices(r: int, j: int) -> None:
    if not (isinstance(r, int) and isinstance(j, int)):
        raise TypeError("r and j must be integers")
    if r < 1 or j < 1 or j > r:
        raise ValueError(f"require 1 <= j <= r, got r={r}, j={j}")


def _coerce(values: Sequence[Rational | int], needed: int) -> list[Fraction]:
    if len(values) < needed:
        raise ValueError(f"need at least {needed} input values, got {len(values)}")
    return [Fraction(v) for v in values[:needed]]


def partial_bell_partition(r: int, j: int, values: Sequence[Rational | int]) -> Rational:
    """B_{r,j} by direct enumeration of partition multiplicity vectors.

    Enumerates all (s_1, ..., s_{r-j+1}) with sum s_i = j and
    sum i*s_i = r; each contributes r!/(prod s_i! (i!)^{s_i}) prod x_i^{s_i}.
    Exponential in r; this is the oracle, not the fast path.
    """
    _check_indices(r, j)
    largest = r - j + 1
    xs = _coerce(values, largest)
    total = Fraction(0)

    def factor(part: int, count: int) -> Fraction:
        if count == 0:
            return Fraction(1)
        return (xs[part - 1] ** count) / (factorial(count) * factorial(part) ** count)

    # Choose the multiplicity s_part for each part size in turn, pruning on
    # the weight still achievable with the remaining block count.
    def descend(part: int, weight_left: int, blocks_left: int, coeff: Fraction) -> None:
        nonlocal total
        if part > largest:
            if weight_left == 0 and blocks_left == 0:
                total += coeff
            return
        if weight_left < part * blocks_left or weight_left > largest * blocks_left:
            return
        for count in range(min(blocks_left, weight_left // part) + 1):
            descend(
                part + 1,
                weight_left - part * count,
                blocks_left - count,
                coeff * factor(part, count),
            )

    descend(1, r, j, Fraction(factorial(r)))
    return total


def partial_bell_recurrence(r: int, j: int, values: Sequence[Rational | int]) -> Rational:
    """B_{r,j} by the binomial recurrence, memoized on (r, j).

    Only entries with the same index gap r-j or smaller are visited, so the
    input needs exactly r-j+1 values, same contract as the partition sum.
    """
    _check_indices(r, j)
    xs = _coerce(values, r - j + 1)
    memo: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(1)}

    def entry(rr: int, jj: int) -> Fraction:
        if jj == 0 or rr < jj:
            return Fraction(1) if rr == jj == 0 else Fraction(0)
        cached = memo.get((rr, jj))
        if cached is not None:
            return cached
        acc = Fraction(0)
        for i in range(1, rr - jj + 2):
            acc += binomial(rr - 1, i - 1) * xs[i - 1] * entry(rr - i, jj - 1)
        memo[(rr, jj)] = acc
        return acc

    return entry(r, j)


class BellTable:
    """Incrementally built triangle of partial Bell polynomial values.

    ``terms`` is either a finite sequence (x_1, x_2, ...) or a callable
    mapping l >= 1 to x_l, for sequences defined by a formula. Rows are
    built on demand by ``extend`` / ``value`` and never recomputed, which
    is what makes r-by-r sign scans cheap.

    Construction is single-writer. Once extended to the r you need, the
    table is safe to read from multiple threads; if readers might trigger
    further extension, pre-extend before sharing.
    """

    def __init__(self, terms: Sequence[Rational | int] | Callable[[int], Rational]):
        if callable(terms):
            self._term = terms
            self._limit: int | None = None
        else:
            seq = [Fraction(v) for v in terms]
            self._term = lambda l: seq[l - 1]
            self._limit = len(seq)
        self._xs: list[Fraction] = []
        # _rows[r] holds (B_{r,1}, ..., B_{r,r}); row index 0 is a stub.
        self._rows: list[list[Fraction]] = [[]]

    @property
    def r_max(self) -> int:
        return len(self._rows) - 1

    @property
    def source_prefix(self) -> tuple[Fraction, ...]:
        """The input values consumed so far, (x_1, ..., x_{r_max})."""
        return tuple(self._xs)

    def extend(self, r_max: int) -> None:
        if self._limit is not None and r_max > self._limit:
            raise ValueError(f"input sequence has only {self._limit} terms, cannot extend to r={r_max}")
        while self.r_max < r_max:
            r = self.r_max + 1
            self._xs.append(Fraction(self._term(r)))
            row = []
            for j in range(1, r + 1):
                if j == 1:
                    row.append(self._xs[r - 1])
                    continue
                acc = Fraction(0)
                for i in range(1, r - j + 2):
                    below = self._rows[r - i]
                    acc += binomial(r - 1, i - 1) * self._xs[i - 1] * below[j - 2]
                row.append(acc)
            self._rows.append(row)

    def value(self, r: int, j: int) -> Rational:
        _check_indices(r, j)
        self.extend(r)
        return self._rows[r][j - 1]

    def row(self, r: int) -> tuple[Rational, ...]:
        """(B_{r,1}, ..., B_{r,r})."""
        if r < 1:
            raise ValueError("row index must be >= 1")
        self.extend(r)
        return tuple(self._rows[r])


def build_bell_table(values: Sequence[Rational | int], r_max: int) -> BellTable:
    """Build the full triangle up to r_max and spot-check it.

    Rows r <= 8 are cross-validated against the defining partition sum at
    j in {1, ceil(r/2), r}; a disagreement means corrupted arithmetic and
    raises ``BellConsistencyError``.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if len(values) < r_max:
        raise ValueError(f"need at least {r_max} input values, got {len(values)}")
    table = BellTable(values)
    table.extend(r_max)
    xs = table.source_prefix
    for r in range(1, min(8, r_max) + 1):
        for j in {1, (r + 1) // 2, r}:
            expected = partial_bell_partition(r, j, xs)
            if table.value(r, j) != expected:
                raise BellConsistencyError(
                    f"table entry B({r},{j}) = {table.value(r, j)} disagrees with partition sum {expected}"
                )
    return table


def complete_bell(r: int, values: Sequence[Rational | int]) -> Rational:
    """Complete Bell polynomial Y_r = sum_{j=1}^{r} B_{r,j}(x_1..x_{r-j+1}).

    r must be >= 1; the r = 0 convention is deliberately not offered.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError("complete Bell polynomial requires integer r >= 1")
    xs = _coerce(values, r)
    table = BellTable(xs)
    return sum(table.row(r), Fraction(0))
