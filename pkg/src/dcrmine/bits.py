"""Helpers for bit vectors stored as Python ints.

Bit ``i`` of a vector stands for activity (or event) ``i``. Python ints are
arbitrary width, so a vector over ``n`` elements is any int in ``[0, 2**n)``.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def bit(i: int) -> int:
    return 1 << i


def full(n: int) -> int:
    """Vector with the lowest ``n`` bits set."""
    return (1 << n) - 1


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> set[int]:
    return set(iter_bits(mask))


def has(mask: int, i: int) -> bool:
    return (mask >> i) & 1 == 1


def rows_to_pairs(rows: Iterable[int]) -> set[tuple[int, int]]:
    """``rows[a]`` has bit ``b`` -> pair ``(a, b)``."""
    return {(a, b) for a, row in enumerate(rows) for b in iter_bits(row)}


def pairs_to_rows(pairs: Iterable[tuple[int, int]], n: int) -> list[int]:
    rows = [0] * n
    for a, b in pairs:
        rows[a] |= 1 << b
    return rows


def transpose(rows: list[int]) -> list[int]:
    out = [0] * len(rows)
    for a, row in enumerate(rows):
        for b in iter_bits(row):
            out[b] |= 1 << a
    return out
