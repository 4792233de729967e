"""Backtracking over point bijections of two Cayley schemes.

A *matcher* looks for f with ``col_t[f(x), f(y)] = cmap[col_s[x, y]]`` for
all points x, y.  Candidate sets are Python ints used as bitsets.  Every
assignment x -> y intersects the candidates of each other point z with the
target neighbourhood of y in the colour required by (x, z); points whose
candidate set drops to one element are assigned in turn.  Colour 0 is the
diagonal, so injectivity comes for free.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded


class Budget:
    """Shared node counter; raises once ``limit`` nodes have been used."""

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(self.used)


def _bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def iter_bits(c: int):
    while c:
        low = c & -c
        yield low.bit_length() - 1
        c ^= low


class Matcher:
    def __init__(self, col_s: np.ndarray, col_t: np.ndarray, cmap, rank_t: int):
        n = col_s.shape[0]
        self.n = n
        self.col = col_s.tolist()
        self.cmap = [int(c) for c in cmap]
        self.nbr = [[_bits(col_t[y] == c) for c in range(rank_t)] for y in range(n)]
        self.col_s = col_s
        self.col_t = col_t
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 200))

    def _assign(self, cand: list[int], done: list[bool], x: int, y: int) -> bool:
        n, col, cm, nbr = self.n, self.col, self.cmap, self.nbr
        stack = [(x, y)]
        while stack:
            x, y = stack.pop()
            if done[x]:
                continue
            done[x] = True
            cand[x] = 1 << y
            row, nb = col[x], nbr[y]
            for z in range(n):
                if done[z]:
                    continue
                cz = cand[z]
                c = cz & nb[cm[row[z]]]
                if c != cz:
                    if not c:
                        return False
                    cand[z] = c
                    if not c & (c - 1):
                        stack.append((z, c.bit_length() - 1))
        return True

    def start(self, prefix) -> tuple[list[int], list[bool]] | None:
        cand = [(1 << self.n) - 1] * self.n
        done = [False] * self.n
        for x, y in prefix:
            if done[x]:
                if cand[x] != 1 << y:
                    return None
                continue
            if not cand[x] >> y & 1 or not self._assign(cand, done, x, y):
                return None
        return cand, done

    def search(self, prefix, budget: Budget) -> list[int] | None:
        """First solution extending ``prefix`` in canonical order, or None."""
        state = self.start(prefix)
        if state is None:
            return None
        return self._rec(*state, budget)

    def _rec(self, cand, done, budget):
        budget.tick()
        best, size = -1, self.n + 1
        for z in range(self.n):
            if not done[z]:
                s = cand[z].bit_count()
                if s < size:
                    best, size = z, s
                    if s == 2:
                        break
        if best < 0:
            return [c.bit_length() - 1 for c in cand]
        for y in iter_bits(cand[best]):
            nc, nd = list(cand), list(done)
            if self._assign(nc, nd, best, y):
                res = self._rec(nc, nd, budget)
                if res is not None:
                    return res
        return None

    def verify(self, f) -> bool:
        f = np.asarray(f)
        if sorted(f.tolist()) != list(range(self.n)):
            return False
        return bool((self.col_t[np.ix_(f, f)] == np.asarray(self.cmap)[self.col_s]).all())


def _closure(points: set[int], gens) -> set[int]:
    out = set(points)
    stack = list(out)
    while stack:
        p = stack.pop()
        for g in gens:
            q = g[p]
            if q not in out:
                out.add(q)
                stack.append(q)
    return out


@dataclass
class ChainResult:
    generators: list[tuple[int, ...]] = field(default_factory=list)
    base: list[int] = field(default_factory=list)
    orbit_sizes: list[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        out = 1
        for s in self.orbit_sizes:
            out *= s
        return out


def stabilizer_chain(m: Matcher, budget: Budget, fixed=(0,)) -> ChainResult:
    """Automorphisms (cmap must be the identity) fixing ``fixed``.

    Base points are taken top-down: after fixing the earlier base points and
    refining, the first point whose cell is not a singleton is next.  Every
    candidate image outside the orbit known so far is settled by a search,
    so each recorded orbit is the full orbit of the level stabilizer.
    """
    res = ChainResult()
    fixed = list(fixed)
    while True:
        state = m.start([(p, p) for p in fixed])
        cand = state[0]
        b = next((z for z in range(m.n) if cand[z] & (cand[z] - 1)), None)
        if b is None:
            break
        level = [g for g in res.generators if all(g[p] == p for p in fixed)]
        orb = _closure({b}, level)
        failed: set[int] = set()
        for c in iter_bits(cand[b]):
            if c in orb or c in failed:
                continue
            f = m.search([(p, p) for p in fixed] + [(b, c)], budget)
            if f is None:
                failed |= _closure({c}, level)
            else:
                g = tuple(f)
                res.generators.append(g)
                level.append(g)
                orb = _closure(orb, level)
        res.base.append(b)
        res.orbit_sizes.append(len(orb))
        fixed.append(b)
    return res
