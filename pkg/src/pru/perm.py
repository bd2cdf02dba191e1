"""Permutation groups given by generators, with a stabilizer chain.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``.  Products
follow function composition: ``mul(p, q)`` applies ``q`` first.

>>> G = PermGroup(4, [(1, 0, 2, 3), (0, 2, 1, 3)])
>>> G.order()
6
>>> G.contains((2, 1, 0, 3))
True
>>> G.contains((0, 1, 3, 2))
False
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence


def identity(n: int) -> tuple:
    return tuple(range(n))


def mul(p: Sequence[int], q: Sequence[int]) -> tuple:
    return tuple(p[i] for i in q)


def inv(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == j for i, j in enumerate(p))


def transposition(n: int, i: int, j: int) -> tuple:
    p = list(range(n))
    p[i], p[j] = j, i
    return tuple(p)


def cycle(n: int, points: Sequence[int]) -> tuple:
    p = list(range(n))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        p[a] = b
    return tuple(p)


def check_perm(p: Sequence[int], n: int):
    if len(p) != n or set(p) != set(range(n)):
        raise ValueError(f"not a permutation of degree {n}: {p!r}")


def cycles(p: Sequence[int]) -> list:
    """Non-trivial cycles of ``p``."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append(c)
    return out


class _Level:
    __slots__ = ("base", "gens", "trans", "done")

    def __init__(self, base, n):
        self.base = base
        self.gens = []
        self.trans = {base: identity(n)}
        self.done = set()


class PermGroup:
    """Subgroup of Sym(degree) generated by ``gens``.

    The stabilizer chain is built on first use by the deterministic
    Schreier-Sims algorithm, taking base points among moved points only.
    """

    def __init__(self, degree: int, gens: Iterable[Sequence[int]] = ()):
        self.degree = degree
        self.gens = []
        for g in gens:
            g = tuple(g)
            check_perm(g, degree)
            if not is_identity(g):
                self.gens.append(g)
        self._levels = None
        self._block_of = None

    @classmethod
    def block_stabilizer(cls, degree: int, blocks: Iterable[Sequence[int]]) -> "PermGroup":
        """All permutations fixing each block setwise, with its chain written down directly.

        Generators are the adjacent transpositions inside each block.
        """
        blocks = [sorted(b) for b in blocks]
        gens = [transposition(degree, b[k], b[k + 1]) for b in blocks for k in range(len(b) - 1)]
        group = cls(degree, gens)
        levels = []
        for b in blocks:
            for m in range(len(b) - 1):
                lvl = _Level(b[m], degree)
                for j in b[m + 1:]:
                    lvl.trans[j] = transposition(degree, b[m], j)
                lvl.gens = [transposition(degree, b[m], j) for j in b[m + 1:]]
                levels.append(lvl)
        group._levels = levels
        block_of = list(range(degree))
        for b in blocks:
            for x in b:
                block_of[x] = b[0]
        group._block_of = block_of
        return group

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.gens)})"

    # -- chain -----------------------------------------------------------------

    @property
    def levels(self):
        if self._levels is None:
            self._levels = []
            for g in self.gens:
                h, j = self._sift(g, 0)
                if not is_identity(h):
                    self._extend(0, j, h)
        return self._levels

    def _sift(self, g, start):
        levels = self._levels
        for i in range(start, len(levels)):
            lvl = levels[i]
            beta = g[lvl.base]
            u = lvl.trans.get(beta)
            if u is None:
                return g, i
            g = mul(inv(u), g)
        return g, len(levels)

    def _extend(self, lo, j, h):
        """Add strong generator ``h`` (fixing base points before level ``j``) to levels lo..j."""
        levels = self._levels
        if j == len(levels):
            moved = next(k for k, v in enumerate(h) if k != v)
            levels.append(_Level(moved, self.degree))
        for k in range(lo, j + 1):
            levels[k].gens.append(h)
        for k in range(j, lo - 1, -1):
            self._close(k)

    def _close(self, i):
        lvl = self._levels[i]
        progress = True
        while progress:
            progress = False
            for point in list(lvl.trans):
                for gi in range(len(lvl.gens)):
                    if (point, gi) in lvl.done:
                        continue
                    lvl.done.add((point, gi))
                    progress = True
                    gen = lvl.gens[gi]
                    img = gen[point]
                    cand = mul(gen, lvl.trans[point])
                    if img not in lvl.trans:
                        lvl.trans[img] = cand
                        continue
                    s = mul(inv(lvl.trans[img]), cand)
                    if is_identity(s):
                        continue
                    h, j = self._sift(s, i + 1)
                    if not is_identity(h):
                        self._extend(i + 1, j, h)

    # -- queries ---------------------------------------------------------------

    def order(self) -> int:
        return math.prod(len(lvl.trans) for lvl in self.levels)

    def contains(self, p: Sequence[int]) -> bool:
        p = tuple(p)
        if len(p) != self.degree:
            return False
        if self._block_of is not None:
            return all(self._block_of[x] == self._block_of[y] for x, y in enumerate(p))
        self.levels  # build the chain
        h, _ = self._sift(p, 0)
        return is_identity(h)

    __contains__ = contains

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.gens)

    def orbits(self) -> list:
        """Orbits as sorted lists, ordered by least element (union-find over generators)."""
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            for i, j in enumerate(g):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        groups = {}
        for x in range(self.degree):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def base(self) -> list:
        return [lvl.base for lvl in self.levels]
