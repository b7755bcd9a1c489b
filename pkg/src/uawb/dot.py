"""Graphviz export of congruence lattices."""
from __future__ import annotations

import numpy as np

from .congruence import CongruenceLattice


def ranks(L: CongruenceLattice) -> list[int]:
    """Length of the longest chain from 0 up to each element."""
    order = np.argsort(L.leq.sum(axis=0), kind="stable")
    depth = [0] * len(L)
    for j in order:
        below = np.flatnonzero(L.covers[:, j])
        if below.size:
            depth[j] = max(depth[i] for i in below) + 1
    return depth


def export_dot(L: CongruenceLattice, name: str = "Con") -> str:
    """Hasse diagram with 0 at the bottom; nodes are labelled by their blocks."""
    depth = ranks(L)
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=box, fontname=monospace];"]
    for i, p in enumerate(L.elements):
        lines.append(f'  n{i} [label="{p}"];')
    for r in sorted(set(depth)):
        members = " ".join(f"n{i};" for i in range(len(L)) if depth[i] == r)
        lines.append(f"  {{ rank=same; {members} }}")
    for i, j in zip(*np.nonzero(L.covers)):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
