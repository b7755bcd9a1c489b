"""Partitions of {0..n-1} in canonical least-representative form.

A partition is stored as the array ``reps`` where ``reps[x]`` is the least
element of the block containing ``x``.  Two partitions are equal exactly when
their arrays are equal, which is what every deduplication in the package
relies on.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


def canonical_reps(labels: np.ndarray) -> np.ndarray:
    """Map arbitrary block labels to least-element representatives."""
    labels = np.asarray(labels)
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    return first[inverse.reshape(-1)].astype(np.int64)


def merge_reps(reps: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Join the canonical partition ``reps`` with the pairs ``(a[i], b[i])``.

    Union by hooking the larger root onto the smaller, then pointer jumping,
    so every block keeps its least element as root.
    """
    lab = np.array(reps, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    while True:
        la, lb = lab[a], lab[b]
        diff = la != lb
        if not diff.any():
            return lab
        la, lb = la[diff], lb[diff]
        np.minimum.at(lab, np.maximum(la, lb), np.minimum(la, lb))
        while True:
            nxt = lab[lab]
            if np.array_equal(nxt, lab):
                break
            lab = nxt


@dataclass(frozen=True)
class Partition:
    reps: tuple[int, ...]

    def __post_init__(self):
        reps = self.reps
        for x, r in enumerate(reps):
            if not (0 <= r <= x) or reps[r] != r:
                raise ValueError(f"not a canonical partition array: {reps}")

    @classmethod
    def from_labels(cls, labels: Sequence[int] | np.ndarray) -> "Partition":
        if len(labels) == 0:
            raise ValueError("partitions of the empty set are not supported")
        return cls._trusted(canonical_reps(np.asarray(labels)))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = np.arange(n)
        seen = set()
        for block in blocks:
            block = sorted(block)
            for x in block:
                if not 0 <= x < n or x in seen:
                    raise ValueError(f"bad block element {x}")
                seen.add(x)
                labels[x] = block[0]
        return cls.from_labels(labels)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Partition":
        """Equivalence relation generated by ``pairs``."""
        pairs = list(pairs)
        a = np.array([p[0] for p in pairs], dtype=np.int64)
        b = np.array([p[1] for p in pairs], dtype=np.int64)
        return cls._trusted(merge_reps(np.arange(n), a, b))

    @classmethod
    def zero(cls, n: int) -> "Partition":
        return cls._trusted(np.arange(n))

    @classmethod
    def one(cls, n: int) -> "Partition":
        return cls._trusted(np.zeros(n, dtype=np.int64))

    @classmethod
    def _trusted(cls, reps: np.ndarray) -> "Partition":
        p = object.__new__(cls)
        object.__setattr__(p, "reps", tuple(int(r) for r in reps))
        return p

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.reps, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    @property
    def size(self) -> int:
        return len(self.reps)

    @property
    def num_blocks(self) -> int:
        return sum(1 for x, r in enumerate(self.reps) if x == r)

    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.reps):
            out.setdefault(r, []).append(x)
        return [tuple(b) for b in out.values()]

    def block_of(self, x: int) -> tuple[int, ...]:
        r = self.reps[x]
        return tuple(y for y, s in enumerate(self.reps) if s == r)

    def relates(self, a: int, b: int) -> bool:
        return self.reps[a] == self.reps[b]

    def pairs(self) -> list[tuple[int, int]]:
        """All related pairs, lexicographically."""
        return [(a, b) for a in range(self.size) for b in range(self.size)
                if self.reps[a] == self.reps[b]]

    def is_zero(self) -> bool:
        return all(x == r for x, r in enumerate(self.reps))

    def is_one(self) -> bool:
        return not any(self.reps)

    def __le__(self, other: "Partition") -> bool:
        if self.size != other.size:
            raise ValueError("size mismatch")
        q = other.array
        return bool(np.all(q[self.array] == q))

    def __lt__(self, other: "Partition") -> bool:
        return self != other and self <= other

    def __ge__(self, other: "Partition") -> bool:
        return other <= self

    def __gt__(self, other: "Partition") -> bool:
        return other < self

    def __and__(self, other: "Partition") -> "Partition":
        return meet(self, other)

    def __str__(self) -> str:
        return "|".join(",".join(map(str, b)) for b in self.blocks())

    def __repr__(self) -> str:
        return f"Partition({self})"


def meet(p: Partition, q: Partition) -> Partition:
    """Block-wise intersection."""
    if p.size != q.size:
        raise ValueError("size mismatch")
    return Partition._trusted(canonical_reps(p.array * p.size + q.array))


def partition_join(p: Partition, q: Partition) -> Partition:
    """Join in the lattice of all equivalence relations."""
    if p.size != q.size:
        raise ValueError("size mismatch")
    n = p.size
    return Partition._trusted(merge_reps(p.array.copy(), np.arange(n), q.array))


def parse_partition(text: str, n: int) -> Partition:
    """Read ``0``, ``1`` or block notation such as ``0,2|1,3``."""
    text = text.strip()
    if text == "0":
        return Partition.zero(n)
    if text == "1":
        return Partition.one(n)
    blocks = []
    for chunk in text.split("|"):
        items = chunk.replace(",", " ").split()
        if not items:
            raise ValueError(f"empty block in {text!r}")
        blocks.append([int(x) for x in items])
    return Partition.from_blocks(n, blocks)


def all_partitions(n: int) -> Iterable[Partition]:
    """Every partition of {0..n-1}, via restricted growth strings."""
    labels = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield Partition.from_labels(labels)
            return
        for v in range(top + 2):
            labels[i] = v
            yield from rec(i + 1, max(top, v))

    if n == 0:
        return
    yield from rec(1, 0)
