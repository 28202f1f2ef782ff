"""Rooted trees with block-coloured leaves and the counting bounds built on them.

Trees are counted up to relabelling of leaves inside each block, which is
the same as colouring every leaf by its block. Non-root internal vertices
have at least two children; the root has at least one.

A subtree is stored once in a :class:`TreeTable` and referred to by an
integer id, so a canonical form is just the sorted tuple of child ids.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod


def multinomial(counts) -> int:
    counts = list(counts)
    out = factorial(sum(counts))
    for c in counts:
        out //= factorial(c)
    return out


def catalan(k: int) -> int:
    return comb(2 * k, k) // (k + 1)


def fox_neuwirth_cells(d: int, parts) -> int:
    """Cells of the coloured configuration space: multinomial(d; parts) * 2^d."""
    if sum(parts) != d:
        raise ValueError("parts must sum to d")
    return multinomial(parts) * 2**d


class TreeTable:
    """All non-root subtrees whose leaf colour counts are at most ``colors``."""

    def __init__(self, m: int):
        self.m = m
        self.nodes: list[tuple] = []  # id -> ("leaf", colour) or ("node", children ids)
        self.color_of: list[tuple] = []
        self.by_colors: dict = {}
        self._planar: list[int] = []

    def _add(self, node, colors) -> int:
        idx = len(self.nodes)
        self.nodes.append(node)
        self.color_of.append(colors)
        self.by_colors.setdefault(colors, []).append(idx)
        if node[0] == "leaf":
            self._planar.append(1)
        else:
            kids = node[1]
            self._planar.append(multinomial(Counter(kids).values()) * prod(self._planar[k] for k in kids))
        return idx

    def subtrees(self, colors: tuple) -> list[int]:
        """Ids of non-root subtrees with exactly these colour counts."""
        if colors in self.by_colors:
            return self.by_colors[colors]
        self.by_colors[colors] = []
        total = sum(colors)
        if total == 1:
            self._add(("leaf", colors.index(1)), colors)
        elif total > 1:
            for kids in self._child_multisets(colors, 2):
                self._add(("node", kids), colors)
        return self.by_colors[colors]

    def _smaller(self, colors):
        """All nonzero colour vectors componentwise <= colors, in a fixed order."""
        ranges = [range(c + 1) for c in colors]
        return [v for v in itertools.product(*ranges) if any(v)]

    def _child_multisets(self, colors: tuple, min_children: int):
        """Sorted id tuples of at least ``min_children`` subtrees with colour sum ``colors``."""
        candidates = []
        for v in self._smaller(colors):
            if v == colors and min_children >= 2:
                continue
            candidates.extend(self.subtrees(v))
        candidates.sort()
        out = []

        def rec(start, remaining, chosen):
            if not any(remaining):
                if len(chosen) >= min_children:
                    out.append(tuple(chosen))
                return
            for pos in range(start, len(candidates)):
                idx = candidates[pos]
                c = self.color_of[idx]
                if all(a <= b for a, b in zip(c, remaining)):
                    chosen.append(idx)
                    rec(pos, tuple(b - a for a, b in zip(c, remaining)), chosen)
                    chosen.pop()

        rec(0, colors, [])
        return out

    def planar(self, idx: int) -> int:
        return self._planar[idx]


@dataclass(frozen=True)
class RootedTree:
    """A tree of the family: the root's children as subtree ids in a shared table."""

    table: TreeTable
    children: tuple

    def _walk(self):
        """(number of children, is_root) for every non-leaf vertex."""
        stack = [(self.children, True)]
        while stack:
            kids, is_root = stack.pop()
            yield len(kids), is_root
            for k in kids:
                node = self.table.nodes[k]
                if node[0] == "node":
                    stack.append((node[1], False))

    def stats(self) -> dict:
        nonleaf = 0
        valence = 0
        inner = 0
        max_valence = 0
        for nkids, is_root in self._walk():
            nonleaf += 1
            v = nkids if is_root else nkids + 1
            valence += v
            max_valence = max(max_valence, v)
            if not is_root:
                inner += 1
        return {
            "non_leaf": nonleaf,
            "valence_sum": valence,
            "valence_minus_inner": valence - inner,
            "max_valence": max_valence,
        }

    def planar_count(self) -> int:
        """Planar embeddings: multinomial of child classes at every non-leaf vertex."""
        t = self.table
        return multinomial(Counter(self.children).values()) * prod(t.planar(k) for k in self.children)

    def cell_sum(self) -> int:
        """prod over non-root v of binom(d(v)-1; .) 2^{d(v)-1}, times binom(d(root); .) 2^{d(root)}."""
        total = 1
        stack = [(self.children, True)]
        t = self.table
        while stack:
            kids, is_root = stack.pop()
            parts = list(Counter(kids).values())
            total *= fox_neuwirth_cells(len(kids), parts) if is_root else multinomial(parts) * 2 ** len(kids)
            for k in kids:
                node = t.nodes[k]
                if node[0] == "node":
                    stack.append((node[1], False))
        return total


def enumerate_trees(degrees, table: TreeTable | None = None) -> list[RootedTree]:
    """One tree per orbit, for leaf colour counts ``degrees``."""
    colors = tuple(degrees)
    if sum(colors) < 1:
        raise ValueError("need at least one leaf")
    table = table or TreeTable(len(colors))
    return [RootedTree(table, kids) for kids in table._child_multisets(colors, 1)]


# ---------------------------------------------------------------------------
# brute-force oracles

def _planar_sequences(colors: tuple, min_children: int):
    """All ordered child sequences (as nested tuples) with the given colour counts."""
    nonzero = [
        v for v in itertools.product(*[range(c + 1) for c in colors])
        if any(v) and not (min_children >= 2 and v == colors)
    ]

    def rec(remaining):
        if not any(remaining):
            yield ()
            return
        for v in nonzero:
            if all(a <= b for a, b in zip(v, remaining)):
                rest = tuple(b - a for a, b in zip(v, remaining))
                for sub in planar_subtrees(v):
                    for tail in rec(rest):
                        yield (sub,) + tail

    for seq in rec(colors):
        if len(seq) >= min_children:
            yield seq


@lru_cache(maxsize=None)
def planar_subtrees(colors: tuple) -> tuple:
    """Every planar non-root subtree, as nested tuples with leaves ("leaf", colour)."""
    if sum(colors) == 1:
        return (("leaf", colors.index(1)),)
    return tuple(("node",) + seq for seq in _planar_sequences(colors, 2))


def planar_trees(degrees) -> list:
    """Every planar tree of the family (explicit list; small sizes only)."""
    return [("root",) + seq for seq in _planar_sequences(tuple(degrees), 1)]


def _canonical(tree):
    if tree[0] == "leaf":
        return tree
    kids = sorted((_canonical(c) for c in tree[1:]), key=repr)
    return (tree[0],) + tuple(kids)


def brute_force_counts(degrees) -> dict:
    """Planar trees and their orbit classes, counted by explicit generation."""
    trees = planar_trees(degrees)
    return {"planar": len(trees), "orbits": len({repr(_canonical(t)) for t in trees})}


@lru_cache(maxsize=None)
def _shape_count(leaves: int, root: bool) -> int:
    """Planar shapes with this many leaves (non-root vertices need >= 2 children)."""
    if leaves == 1 and not root:
        return 1
    # sequences of subtrees with total leaves = leaves
    @lru_cache(maxsize=None)
    def seqs(total, k_min):
        # number of ordered sequences of >= k_min subtrees with total leaves
        if total == 0:
            return 1 if k_min <= 0 else 0
        acc = 0
        for first in range(1, total + 1):
            if not root and first == leaves:
                continue
            acc += _shape_count(first, False) * seqs(total - first, k_min - 1)
        return acc

    return seqs(leaves, 1 if root else 2)


def planar_total(degrees) -> int:
    """Sum of planar counts over all orbits, by the shape recursion (no enumeration)."""
    r = sum(degrees)
    return _shape_count(r, True) * multinomial(degrees)


# ---------------------------------------------------------------------------
# bounds

def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def catalan_bound(degrees, top_offset: int = -1) -> int:
    """multinomial(r; d) (C_r + ... + C_{2r + top_offset})."""
    r = sum(degrees)
    return multinomial(degrees) * sum(catalan(k) for k in range(r, 2 * r + top_offset + 1))


def degree_table(degrees, enumerate_limit: int = 6) -> dict:
    """Per-degree-vector row: orbit count, planar sum, cell sum and Catalan bounds."""
    r = sum(degrees)
    row = {"degrees": list(degrees), "r": r}
    if r <= enumerate_limit:
        trees = enumerate_trees(degrees)
        row["orbits"] = len(trees)
        row["planar_sum"] = sum(t.planar_count() for t in trees)
        row["cell_sum"] = sum(t.cell_sum() for t in trees)
    else:
        row["planar_sum"] = planar_total(degrees)
    row["catalan_bound"] = catalan_bound(degrees)
    row["catalan_bound_2r"] = catalan_bound(degrees, 0)
    return row


def cohomology_bound(r: int, m: int, enumerate_limit: int = 6) -> int:
    """B(r, m) = max over degree vectors of 2^{2r-1} * sum of planar counts."""
    if r == 0:
        return 1
    best = 0
    for degs in compositions(r, m):
        planar = degree_table(degs, enumerate_limit)["planar_sum"] if r <= enumerate_limit else planar_total(degs)
        best = max(best, planar)
    return 2 ** (2 * r - 1) * best


def kappa(m: int, r_max: int = 8) -> float:
    """Smallest constant with B(r, m) <= kappa (64 m)^r for 0 <= r <= r_max."""
    return max(cohomology_bound(r, m) / (64 * m) ** r for r in range(r_max + 1))


def bounds_table(r: int, m: int) -> dict:
    """Row for the ``bounds`` report."""
    best = None
    for degs in compositions(r, m):
        row = degree_table(degs)
        if best is None or row["planar_sum"] > best["planar_sum"]:
            best = row
    B = cohomology_bound(r, m)
    return {
        "r": r,
        "m": m,
        "worst_degrees": best["degrees"],
        "orbits": best.get("orbits"),
        "planar_sum": best["planar_sum"],
        "catalan_bound": best["catalan_bound"],
        "catalan_bound_2r": best["catalan_bound_2r"],
        "B": B,
        "power_bound": (64 * m) ** r,
    }
