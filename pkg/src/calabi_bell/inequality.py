"""Sign scan of the alternating Bell-polynomial sums that obstruct
projectively induced metrics.

The potential's derivatives, stripped of scale, give the normalized
sequence x_l = (1/l) prod_{s=1}^{l-1} (n s - 1); for a twist ratio q > 0

    S(n, q, r) = (-1)^r sum_{j=1}^{r} (-q)^j B_{r,j}(x_1, ..., x_r).

S(n, q, r) carries (up to the positive factor (c k0)^r / r!) the sign of
the block-scale constant h_r at m/k0 = q, so a negative S at some r is
exactly a negative block. ``min_negative_r`` scans r = 1, 2, ... and
reports the first sign failure with the full row history.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .bell import BellTable
from .rationals import Rational, format_rational, parse_rational

__all__ = [
    "normalized_term",
    "normalized_sequence",
    "alternating_bell_sum",
    "ScanReport",
    "min_negative_r",
    "scan_grid",
    "q_decomposition",
]


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")


def _check_q(q: Rational | int) -> Fraction:
    if isinstance(q, float):
        raise TypeError("q must be exact (int, Fraction, or 'p/q'), not float")
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    return q


def normalized_term(n: int, l: int) -> Fraction:
    """x_l = (1/l) prod_{s=1}^{l-1} (n s - 1); x_1 = 1 for every n."""
    _check_n(n)
    if l < 1:
        raise ValueError("l must be >= 1")
    prod = 1
    for s in range(1, l):
        prod *= n * s - 1
    return Fraction(prod, l)


def normalized_sequence(n: int, length: int) -> tuple[Fraction, ...]:
    """(x_1, ..., x_length): strictly positive, exact."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return tuple(normalized_term(n, l) for l in range(1, length + 1))


def alternating_bell_sum(
    n: int, q: Rational | int, r: int, table: BellTable | None = None
) -> Fraction:
    """S(n, q, r) = (-1)^r sum_{j=1}^{r} (-q)^j B_{r,j}(x_1..x_r).

    Pass a ``table`` built over ``normalized_term(n, .)`` to amortize the
    Bell triangle across many r (what the scanner does).
    """
    _check_n(n)
    q = _check_q(q)
    if r < 1:
        raise ValueError("r must be >= 1")
    if table is None:
        table = BellTable(lambda l: normalized_term(n, l))
    acc = Fraction(0)
    power = Fraction(1)
    for j in range(1, r + 1):
        power *= -q
        acc += power * table.value(r, j)
    return acc if r % 2 == 0 else -acc


@dataclass(frozen=True)
class ScanReport:
    """Result of scanning S(n, q, r) for r = 1..(first negative or r_max).

    ``rows`` holds every value computed, in order; ``min_negative_r`` is
    the first r with S < 0, or None if the scan exhausted r_max without
    finding one (rows then cover all of 1..r_max).
    """

    n: int
    q: Fraction
    r_max: int
    rows: tuple[tuple[int, Fraction], ...]
    min_negative_r: int | None

    def to_dict(self) -> dict:
        payload = {
            "n": self.n,
            "q": format_rational(self.q),
            "r_max": self.r_max,
            "rows": [{"r": r, "S": format_rational(s)} for r, s in self.rows],
        }
        if self.min_negative_r is not None:
            payload["min_negative_r"] = self.min_negative_r
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "ScanReport":
        return cls(
            n=int(payload["n"]),
            q=parse_rational(str(payload["q"])),
            r_max=int(payload["r_max"]),
            rows=tuple(
                (int(row["r"]), parse_rational(str(row["S"]))) for row in payload["rows"]
            ),
            min_negative_r=(
                int(payload["min_negative_r"]) if "min_negative_r" in payload else None
            ),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ScanReport":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["r", "S"])
        for r, s in self.rows:
            writer.writerow([r, format_rational(s)])
        return buffer.getvalue()


def min_negative_r(n: int, q: Rational | int, r_max: int = 200) -> ScanReport:
    """Scan r = 1, 2, ... for the first negative S(n, q, r).

    Stops at the witness (inclusive) or at r_max. Exact arithmetic
    throughout; the returned rows are the full audit trail.
    """
    _check_n(n)
    q = _check_q(q)
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    table = BellTable(lambda l: normalized_term(n, l))
    rows = []
    witness = None
    for r in range(1, r_max + 1):
        value = alternating_bell_sum(n, q, r, table)
        rows.append((r, value))
        if value < 0:
            witness = r
            break
    return ScanReport(n=n, q=q, r_max=r_max, rows=tuple(rows), min_negative_r=witness)


def scan_grid(
    n: int, qs: list[Rational | int], r_max: int = 200, max_workers: int | None = None
) -> list[ScanReport]:
    """Independent scans for several q values, concurrently, order kept.

    Each scan owns its Bell table, so there is no shared state beyond the
    immutable inputs.
    """
    from concurrent.futures import ThreadPoolExecutor

    checked = [_check_q(q) for q in qs]
    if not checked:
        return []
    with ThreadPoolExecutor(max_workers=max_workers or min(8, len(checked))) as pool:
        return list(pool.map(lambda q: min_negative_r(n, q, r_max), checked))


def q_decomposition(q: Rational | int) -> tuple[int, int]:
    """The minimal (m, k0) with m/k0 = q, m a positive integer, k0/2 a
    positive integer.

    Writing q = a/b in lowest terms, every integral representation is
    (a t, b t); the smallest t making b t even is 1 or 2.
    """
    q = _check_q(q)
    a, b = q.numerator, q.denominator
    if b % 2 == 0:
        return a, b
    return 2 * a, 2 * b
