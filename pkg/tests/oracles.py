"""Independent reference implementations used only by the tests.

Nothing here imports the package's algorithms: groups are residue tuples,
sets are Python sets, and searches are plain brute force.
"""

from __future__ import annotations

import itertools
from collections import deque

from sympy import primerange
from sympy.combinatorics import Permutation, PermutationGroup


def residues(factors):
    return list(itertools.product(*[range(q) for q in factors]))


def vadd(factors, x, y):
    return tuple((a + b) % q for a, b, q in zip(x, y, factors))


def vneg(factors, x):
    return tuple((-a) % q for a, q in zip(x, factors))


def brute_constants(factors, classes):
    """c[X][Y][Z] = #{(x, y) in X x Y : x + y = z} for the smallest z in Z."""
    classes = [sorted(map(tuple, c)) for c in classes]
    r = len(classes)
    out = [[[0] * r for _ in range(r)] for _ in range(r)]
    for Zi, Z in enumerate(classes):
        z = Z[0]
        for Xi, X in enumerate(classes):
            for Yi, Y in enumerate(classes):
                Yset = set(Y)
                out[Xi][Yi][Zi] = sum(
                    1 for x in X if vadd(factors, z, vneg(factors, x)) in Yset
                )
    return out


def is_sring_partition(factors, classes) -> bool:
    """Check the three axioms literally, coefficient of every element."""
    classes = [set(map(tuple, c)) for c in classes]
    zero = tuple(0 for _ in factors)
    if {zero} not in classes:
        return False
    for C in classes:
        if {vneg(factors, x) for x in C} not in classes:
            return False
    for X in classes:
        for Y in classes:
            counts = {}
            for x in X:
                for y in Y:
                    s = vadd(factors, x, y)
                    counts[s] = counts.get(s, 0) + 1
            for Z in classes:
                vals = {counts.get(z, 0) for z in Z}
                if len(vals) != 1:
                    return False
    return True


def bfs_orbits(n, gens):
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orb, q = [s], deque([s])
        seen[s] = True
        while q:
            p = q.popleft()
            for g in gens:
                t = g[p]
                if not seen[t]:
                    seen[t] = True
                    orb.append(t)
                    q.append(t)
        out.append(tuple(sorted(orb)))
    return out


def sympy_order(n, gens):
    gens = [Permutation(list(g)) for g in gens]
    if not gens:
        return 1
    return int(PermutationGroup(gens).order())


def brute_aut_stabilizer(col):
    """All colour-preserving permutations fixing 0, by full enumeration."""
    n = len(col)
    found = []
    for rest in itertools.permutations(range(1, n)):
        f = (0,) + rest
        if all(col[f[x]][f[y]] == col[x][y] for x in range(n) for y in range(n)):
            found.append(f)
    return found


def pruned_aut_stabilizer(col, limit=None):
    """Colour-preserving permutations fixing 0, by a depth-first search that
    only checks pairs among already placed points."""
    n = len(col)
    found = []
    f = [-1] * n
    used = [False] * n
    f[0], used[0] = 0, True

    def rec(x):
        if limit is not None and len(found) >= limit:
            return
        if x == n:
            found.append(tuple(f))
            return
        for y in range(n):
            if used[y]:
                continue
            if all(col[y][f[z]] == col[x][z] and col[f[z]][y] == col[z][x] for z in range(x)):
                f[x], used[y] = y, True
                rec(x + 1)
                used[y] = False
        f[x] = -1

    rec(1)
    return found


def theorem1_patterns(limit: int) -> dict[int, str]:
    """First matching headline pattern for every n <= limit, built forwards
    from prime tuples rather than by factoring n."""
    primes = list(primerange(2, limit + 1))
    sets = {t: set() for t in ("p^k", "pq^k", "2pq^k", "pqr", "2pqr")}
    sets["p^k"].add(1)
    for p in primes:
        v = p
        while v <= limit:
            sets["p^k"].add(v)
            v *= p
    for p in primes:
        for q in primes:
            if p == q:
                continue
            v = p
            while v <= limit:
                sets["pq^k"].add(v)
                if 2 * v <= limit:
                    sets["2pq^k"].add(2 * v)
                v *= q
    for p, q, r in itertools.combinations(primes, 3):
        v = p * q * r
        if v > limit:
            continue
        sets["pqr"].add(v)
        if 2 * v <= limit:
            sets["2pqr"].add(2 * v)
    out = {}
    for n in range(1, limit + 1):
        out[n] = next((t for t, s in sets.items() if n in s), None)
    return out


def abelian_specs(max_order: int):
    """Primary-factor lists of every abelian group of order 2..max_order."""
    from sympy import factorint
    from sympy.utilities.iterables import partitions

    for n in range(2, max_order + 1):
        per_prime = []
        for p, e in sorted(factorint(n).items()):
            per_prime.append(
                [sorted(p**k for k, m in part.items() for _ in range(m)) for part in partitions(e)]
            )
        for combo in itertools.product(*per_prime):
            yield [q for part in combo for q in part]
