"""Partitions, Young diagrams and reverse semistandard tableaux.

Boxes are addressed 1-based as ``(i, j)`` = (row, column), matching the
usual Young-diagram conventions.  A *reverse* tableau has entries weakly
decreasing along rows and strictly decreasing down columns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence


class Partition(tuple):
    """Weakly decreasing tuple of positive integers (trailing zeros dropped)."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"parts must be nonnegative: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def length(self) -> int:
        return len(self)

    def size(self) -> int:
        return sum(self)

    def part(self, i: int) -> int:
        """1-based part lookup, zero beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def boxes(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise ValueError(f"{self!r} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def arm(self, i: int, j: int) -> int:
        return self.part(i) - j

    def leg(self, i: int, j: int) -> int:
        return transpose(self).part(j) - i

    def to_json(self) -> str:
        return json.dumps(list(self))

    @classmethod
    def from_json(cls, text: str) -> "Partition":
        return cls(json.loads(text))


def n_stat(lam: Partition) -> int:
    """sum over rows of (i - 1) * lambda_i."""
    return sum(i * p for i, p in enumerate(lam))


@lru_cache(maxsize=None)
def _transpose(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= j) for j in range(1, parts[0] + 1))


def transpose(lam: Partition) -> Partition:
    return Partition(_transpose(tuple(lam)))


def contains(lam: Partition, mu: Partition) -> bool:
    """True iff the diagram of ``lam`` contains the diagram of ``mu``."""
    if len(mu) > len(lam):
        return False
    return all(m <= l for l, m in zip(lam, mu))


def partitions_of(n: int, max_length: int | None = None, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n

    def rec(rest: int, cap: int, slots: int | None) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first, None if slots is None else slots - 1):
                yield (first,) + tail

    for parts in rec(n, max_part, max_length):
        yield Partition(parts)


def partitions_up_to(size: int, max_length: int | None = None) -> list[Partition]:
    out: list[Partition] = []
    for n in range(size + 1):
        out.extend(partitions_of(n, max_length))
    return out


def subpartitions(lam: Partition) -> list[Partition]:
    """All partitions ``mu`` with ``mu`` contained in ``lam`` (including both ends)."""
    out: list[Partition] = []

    def rec(i: int, cap: int, acc: list[int]) -> None:
        if i == len(lam):
            out.append(Partition(acc))
            return
        for v in range(min(cap, lam[i]), -1, -1):
            rec(i + 1, v, acc + [v])

    rec(0, lam[0] if lam else 0, [])
    return out


def dominates(lam: Partition, mu: Partition) -> bool:
    """Dominance order for partitions of equal size."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam.part(i + 1)
        b += mu.part(i + 1)
        if a < b:
            return False
    return True


def is_horizontal_strip(lam: Partition, mu: Partition) -> bool:
    """lam / mu is a horizontal strip (interlacing lam_1 >= mu_1 >= lam_2 >= ...)."""
    if not contains(lam, mu):
        return False
    return all(mu.part(i) >= lam.part(i + 1) for i in range(1, len(lam) + 1))


@dataclass(frozen=True)
class ReverseTableau:
    """Filling of ``shape`` by 1..N, rows weakly decreasing, columns strictly decreasing."""

    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __getitem__(self, box: tuple[int, int]) -> int:
        i, j = box
        return self.rows[i - 1][j - 1]

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return {(i, j): v for i, row in enumerate(self.rows, 1) for j, v in enumerate(row, 1)}

    def items(self) -> Iterator[tuple[int, int, int]]:
        for i, row in enumerate(self.rows, 1):
            for j, v in enumerate(row, 1):
                yield i, j, v

    def level_shape(self, k: int) -> Partition:
        """Shape occupied by entries >= k."""
        return Partition([sum(1 for v in row if v >= k) for row in self.rows])

    def is_valid(self, n: int) -> bool:
        for i, row in enumerate(self.rows):
            if len(row) != self.shape[i]:
                return False
            for j, v in enumerate(row):
                if not 1 <= v <= n:
                    return False
                if j and row[j - 1] < v:
                    return False
                if i and self.rows[i - 1][j] <= v:
                    return False
        return True


def enumerate_reverse_tableaux(mu: Partition, n: int) -> Iterator[ReverseTableau]:
    """Lazily yield every reverse tableau of shape ``mu`` with entries in 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = Partition(mu)
    if len(mu) > n:
        return
    conj = transpose(mu)
    boxes = list(mu.boxes())
    grid: dict[tuple[int, int], int] = {}

    def rec(k: int) -> Iterator[ReverseTableau]:
        if k == len(boxes):
            yield ReverseTableau(mu, tuple(tuple(grid[i, j] for j in range(1, r + 1))
                                           for i, r in enumerate(mu, 1)))
            return
        i, j = boxes[k]
        hi = n
        if j > 1:
            hi = min(hi, grid[i, j - 1])
        if i > 1:
            hi = min(hi, grid[i - 1, j] - 1)
        # room for the strictly smaller entries further down this column
        lo = conj[j - 1] - i + 1
        for v in range(hi, lo - 1, -1):
            grid[i, j] = v
            yield from rec(k + 1)
        grid.pop((i, j), None)

    yield from rec(0)


def _b(lam: Partition, lam_conj: Partition, i: int, j: int, q, t):
    if j > lam.part(i):
        return 1
    a = lam.part(i) - j
    l = lam_conj.part(j) - i
    return (1 - q**a * t ** (l + 1)) / (1 - q ** (a + 1) * t**l)


def strip_weight(lam: Partition, mu: Partition, q, t):
    """One-row weight psi_{lam/mu}(q, t) of a horizontal strip.

    Product of b_mu(s) / b_lam(s) over boxes s lying in a row that meets the
    strip but in no column that meets it.
    """
    lam_conj, mu_conj = transpose(lam), transpose(mu)
    rows = {i for i in range(1, len(lam) + 1) if lam.part(i) > mu.part(i)}
    cols = {j for j in range(1, (lam[0] if lam else 0) + 1) if lam_conj.part(j) > mu_conj.part(j)}
    w = 1
    for i in rows:
        for j in range(1, mu.part(i) + 1):
            if j not in cols:
                w = w * _b(mu, mu_conj, i, j, q, t) / _b(lam, lam_conj, i, j, q, t)
    return w


def tableau_weight(tab: ReverseTableau, q, t, n: int | None = None):
    """psi_T(q, t): product of strip weights along the entry level sets.

    The boxes holding entries >= k form a partition for every k; successive
    shapes differ by horizontal strips.
    """
    top = max((v for _, _, v in tab.items()), default=0)
    if n is not None:
        top = max(top, n)
    w = 1
    prev = Partition()
    for k in range(top, 0, -1):
        cur = tab.level_shape(k)
        if cur != prev:
            w = w * strip_weight(cur, prev, q, t)
            prev = cur
    return w
