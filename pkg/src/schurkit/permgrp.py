"""Permutation groups on the points 0..n-1.

Permutations are image tables (tuples); ``p[i]`` is the image of ``i``.
Products are read left to right: ``compose(p, q)`` applies ``p`` first.

Only what the S-ring code needs is offered: orbits, point stabilizers (as
Schreier generators) and the group order.  The order comes from a
deterministic Schreier-Sims stabilizer chain with base points taken in
natural order.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

from .groups import AbelianGroup, GroupAutomorphism

Permutation = tuple


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p`` then ``q``."""
    return tuple(q[i] for i in p)


def invert(p: Sequence[int]) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def identity(n: int) -> Permutation:
    return tuple(range(n))


def is_permutation(p: Sequence[int], n: int | None = None) -> bool:
    n = len(p) if n is None else n
    return len(p) == n and sorted(p) == list(range(n))


class _Chain:
    """Stabilizer chain built by deterministic Schreier-Sims.

    Orbits are extended in place when a strong generator is added, so a
    coset representative never changes once recorded; that lets each level
    remember how many of its generators were already tested on each orbit
    point.
    """

    def __init__(self, degree: int, gens: list[np.ndarray]):
        self.n = degree
        self.ident = np.arange(degree)
        self.base: list[int] = []
        self.strong: list[np.ndarray] = []
        self.level_gens: list[list[int]] = []
        self.trans: list[dict[int, np.ndarray]] = []
        self.points: list[list[int]] = []
        self.tested: list[list[int]] = []
        for g in gens:
            h, j = self.sift(g)
            if not (h == self.ident).all():
                self._add_strong(h, j)
        self._complete()

    def _extend(self, k: int, new_gen: int | None):
        trans, pts = self.trans[k], self.points[k]
        gens = [self.strong[i] for i in self.level_gens[k]]
        frontier = list(pts) if new_gen is not None else [self.base[k]]
        only = [self.strong[new_gen]] if new_gen is not None else gens
        first = True
        while frontier:
            nxt = []
            for pt in frontier:
                u = trans[pt]
                for s in only if first else gens:
                    q = int(s[pt])
                    if q not in trans:
                        trans[q] = s[u]  # u then s
                        pts.append(q)
                        self.tested[k].append(0)
                        nxt.append(q)
            frontier = nxt
            first = False

    def _add_strong(self, h: np.ndarray, j: int):
        gid = len(self.strong)
        self.strong.append(h)
        if j == len(self.base):
            b = int(np.flatnonzero(h != self.ident)[0])
            self.base.append(b)
            self.level_gens.append([])
            self.trans.append({b: self.ident})
            self.points.append([b])
            self.tested.append([0])
        for k in range(j + 1):
            self.level_gens[k].append(gid)
            self._extend(k, gid)

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for k in range(start, len(self.base)):
            u = self.trans[k].get(int(g[self.base[k]]))
            if u is None:
                return g, k
            uinv = np.empty_like(u)
            uinv[u] = self.ident
            g = uinv[g]  # g then u^-1
        return g, len(self.base)

    def _untested(self, k: int):
        gens = self.level_gens[k]
        for i, pt in enumerate(self.points[k]):
            while self.tested[k][i] < len(gens):
                gid = gens[self.tested[k][i]]
                self.tested[k][i] += 1
                yield pt, self.strong[gid]

    def _complete(self):
        k = len(self.base) - 1
        while k >= 0:
            found = None
            for pt, s in self._untested(k):
                su = s[self.trans[k][pt]]  # u then s
                v = self.trans[k][int(su[self.base[k]])]
                vinv = np.empty_like(v)
                vinv[v] = self.ident
                h, j = self.sift(vinv[su], k + 1)
                if not (h == self.ident).all():
                    found = (h, j)
                    break
            if found is None:
                k -= 1
                continue
            self._add_strong(*found)
            k = found[1]

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def contains(self, g: np.ndarray) -> bool:
        h, j = self.sift(g)
        return j == len(self.base) and bool((h == self.ident).all())


class PermutationGroup:
    """Group generated by a list of permutations of ``range(degree)``."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = ()):
        self.degree = degree
        ident = identity(degree)
        gens = []
        for g in generators:
            g = tuple(int(x) for x in g)
            if not is_permutation(g, degree):
                raise ValueError(f"not a permutation of degree {degree}")
            if g != ident and g not in gens:
                gens.append(g)
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self._lock = threading.Lock()
        self._chain: _Chain | None = None

    def __repr__(self):
        return f"PermutationGroup(degree={self.degree}, {len(self.generators)} generators)"

    def _get_chain(self) -> _Chain:
        with self._lock:
            if self._chain is None:
                self._chain = _Chain(self.degree, [np.array(g) for g in self.generators])
            return self._chain

    def order(self) -> int:
        return self._get_chain().order()

    def _contains(self, p: Sequence[int]) -> bool:
        return self._get_chain().contains(np.array(p))

    def orbit(self, pt: int) -> tuple[int, ...]:
        seen = {pt}
        frontier = [pt]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = g[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def orbits(self, points: Iterable[int] | None = None) -> list[tuple[int, ...]]:
        """Orbit partition of ``points`` (default: all), sorted by minimum."""
        pts = range(self.degree) if points is None else sorted(set(points))
        parent = list(range(self.degree))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.generators:
            for x in range(self.degree):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        classes: dict[int, list[int]] = {}
        for x in pts:
            classes.setdefault(find(x), []).append(x)
        return sorted((tuple(c) for c in classes.values()), key=lambda c: c[0])

    def transversal(self, pt: int) -> dict[int, Permutation]:
        """For every point of the orbit of ``pt`` an element mapping pt to it."""
        trans = {pt: identity(self.degree)}
        frontier = [pt]
        while frontier:
            nxt = []
            for x in frontier:
                u = trans[x]
                for g in self.generators:
                    y = g[x]
                    if y not in trans:
                        trans[y] = compose(u, g)
                        nxt.append(y)
            frontier = nxt
        return trans

    def point_stabilizer(self, pt: int) -> PermutationGroup:
        """Stabilizer of ``pt`` generated by its Schreier generators.

        Duplicate tables and the identity are dropped; nothing else is
        reduced.
        """
        if not 0 <= pt < self.degree:
            raise ValueError(f"point {pt} out of range")
        trans = self.transversal(pt)
        inv = {x: invert(u) for x, u in trans.items()}
        gens = []
        seen = set()
        for x, u in trans.items():
            for g in self.generators:
                s = compose(compose(u, g), inv[g[x]])
                if s not in seen:
                    seen.add(s)
                    gens.append(s)
        return PermutationGroup(self.degree, gens)


def orbits(K: PermutationGroup, points: Iterable[int] | None = None) -> list[tuple[int, ...]]:
    return K.orbits(points)


def point_stabilizer(K: PermutationGroup, pt: int) -> PermutationGroup:
    return K.point_stabilizer(pt)


def group_order(K: PermutationGroup) -> int:
    return K.order()


def translation(G: AbelianGroup, g: int) -> Permutation:
    """x -> x + g."""
    return tuple(int(v) for v in G.add_table[:, G.index(g)])


def right_regular(G: AbelianGroup) -> PermutationGroup:
    return PermutationGroup(G.order, [translation(G, g) for g in G.generators])


def holomorph_subgroup(G: AbelianGroup, autos: Iterable[GroupAutomorphism]) -> PermutationGroup:
    """G_right extended by the given automorphisms (a semidirect product)."""
    gens = [translation(G, g) for g in G.generators]
    gens += [a.table for a in autos]
    return PermutationGroup(G.order, gens)


def symmetric_group(n: int) -> PermutationGroup:
    if n < 2:
        return PermutationGroup(n)
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return PermutationGroup(n, [cycle, swap])
