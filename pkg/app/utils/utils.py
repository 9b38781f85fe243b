from typing import Iterable, Iterator


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of mask, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices: Iterable[int]) -> int:
    """Pack vertex indices into a bitset."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def lowest(mask: int) -> int:
    """Index of the lowest set bit; -1 for the empty set."""
    return (mask & -mask).bit_length() - 1


def to_sorted(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))
