"""Finite abelian groups in primary decomposition.

A group is a direct product of cyclic groups of prime-power order.  Elements
are residue vectors; they are also ranked lexicographically, and that rank
(the *index*) is what every other module works with.  Sets of elements are
kept as sorted tuples of indices.

>>> G = make_group([15, 8])
>>> G.primary_factors
(8, 3, 5)
>>> G.name
'C120'
>>> G.index((1, 0, 2))  # 1*15 + 0*5 + 2
17
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    EmptySet,
    InvalidElement,
    InvalidFactor,
    InvalidPrime,
    NotAHomomorphism,
    NotBijective,
)

GroupElement = tuple  # residue vector, one entry per primary factor
ElementLike = Union[int, Sequence[int]]


# ---------------------------------------------------------------------------
# arithmetic helpers


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, e) with q = p**e, or None if q is not a prime power > 1."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    return next(iter(f.items()))


def invariant_factors(primary: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... from a list of prime powers."""
    by_prime: dict[int, list[int]] = {}
    for q in primary:
        p, _ = prime_power(q)
        by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    cols = [1] * length
    for qs in by_prime.values():
        qs = sorted(qs, reverse=True)
        for i, q in enumerate(qs):
            cols[i] *= q
    return tuple(sorted(cols))


# ---------------------------------------------------------------------------
# the group


class AbelianGroup:
    """Direct product of cyclic groups of prime-power order.

    Use :func:`make_group` or :func:`parse_group` rather than calling this
    directly; the constructor assumes the factor list is already canonical.
    """

    def __init__(self, primary_factors: Sequence[int]):
        self.primary_factors = tuple(int(q) for q in primary_factors)
        self.order = math.prod(self.primary_factors)
        k = len(self.primary_factors)
        strides = [1] * k
        for i in range(k - 2, -1, -1):
            strides[i] = strides[i + 1] * self.primary_factors[i + 1]
        self._strides = np.array(strides, dtype=np.int64)
        self._moduli = np.array(self.primary_factors, dtype=np.int64)

    # identity / printing ---------------------------------------------------
    def __repr__(self):
        return f"AbelianGroup({self.literal})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.primary_factors == self.primary_factors

    def __hash__(self):
        return hash(("AbelianGroup", self.primary_factors))

    @property
    def literal(self) -> str:
        """'x'-separated primary factors, e.g. ``8x3x5``."""
        return "x".join(map(str, self.primary_factors)) or "1"

    @property
    def name(self) -> str:
        """Invariant-factor name, e.g. ``C120`` or ``C2xC6``."""
        inv = invariant_factors(self.primary_factors)
        return "x".join(f"C{d}" for d in inv) or "C1"

    @property
    def rank(self) -> int:
        return len(self.primary_factors)

    @property
    def identity(self) -> GroupElement:
        return (0,) * self.rank

    @property
    def generators(self) -> tuple[int, ...]:
        """Indices of the canonical generators (unit residue vectors)."""
        return tuple(int(s) for s in self._strides)

    def is_cyclic(self) -> bool:
        primes = [prime_power(q)[0] for q in self.primary_factors]
        return len(primes) == len(set(primes))

    def is_elementary(self) -> bool:
        """Elementary abelian of rank >= 1 (all factors the same prime)."""
        return bool(self.primary_factors) and len(set(self.primary_factors)) == 1 and is_prime(
            self.primary_factors[0]
        )

    # index <-> residue vector ----------------------------------------------
    def index(self, g: ElementLike) -> int:
        if isinstance(g, (int, np.integer)):
            if not 0 <= g < self.order:
                raise InvalidElement(f"index {g} out of range for group of order {self.order}")
            return int(g)
        g = tuple(g)
        if len(g) != self.rank or any(
            not isinstance(r, (int, np.integer)) or not 0 <= r < q
            for r, q in zip(g, self.primary_factors)
        ):
            raise InvalidElement(f"{list(g)} is not a reduced residue vector for {self.literal}")
        return int(sum(int(r) * int(s) for r, s in zip(g, self._strides)))

    def element(self, i: int) -> GroupElement:
        return tuple(int(x) for x in self.coords[self.index(i)])

    def elements(self) -> list[GroupElement]:
        return [tuple(int(x) for x in row) for row in self.coords]

    @cached_property
    def coords(self) -> np.ndarray:
        """|G| x rank array of residue vectors in index order."""
        n = np.arange(self.order, dtype=np.int64)
        return (n[:, None] // self._strides[None, :]) % self._moduli[None, :]

    def from_coords(self, coords: np.ndarray) -> np.ndarray:
        return ((np.asarray(coords) % self._moduli) * self._strides).sum(axis=-1)

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % self._moduli
        return (s * self._strides).sum(axis=-1).astype(np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.from_coords(-self.coords).astype(np.int64)

    @cached_property
    def order_table(self) -> np.ndarray:
        out = np.ones(self.order, dtype=np.int64)
        for col, q in zip(self.coords.T, self.primary_factors):
            o = q // np.gcd(col, q)
            out = np.lcm(out, o)
        return out

    def multiple(self, g: ElementLike, k: int) -> int:
        c = self.coords[self.index(g)] * k
        return int(self.from_coords(c))

    # element operations -----------------------------------------------------
    def compose(self, g: ElementLike, h: ElementLike) -> GroupElement:
        return self.element(self.add_table[self.index(g), self.index(h)])

    def inverse(self, g: ElementLike) -> GroupElement:
        return self.element(self.neg_table[self.index(g)])

    def element_order(self, g: ElementLike) -> int:
        return int(self.order_table[self.index(g)])


def element_ops(G: AbelianGroup, g: ElementLike, h: ElementLike) -> dict:
    """Composition, inverse of ``g`` and order of ``g`` in one call."""
    return {"compose": G.compose(g, h), "inverse": G.inverse(g), "order": G.element_order(g)}


def make_group(factor_orders: Iterable[int]) -> AbelianGroup:
    """Build a group from arbitrary cyclic factor orders.

    Each order is split into its prime-power parts; the result is sorted by
    prime, then by exponent.
    """
    parts = []
    for q in factor_orders:
        if not isinstance(q, (int, np.integer)) or q < 2:
            raise InvalidFactor(f"cyclic factor order must be an integer >= 2, got {q!r}")
        for p, e in factorize(int(q)).items():
            parts.append((p, e))
    parts.sort()
    return AbelianGroup([p**e for p, e in parts])


_LITERAL = re.compile(r"^\s*\d+(\s*x\s*\d+)*\s*$")


def parse_group(literal: str) -> AbelianGroup:
    """Parse ``"15x8"``-style literals.  ``"1"`` is the trivial group."""
    if not _LITERAL.match(literal):
        raise InvalidFactor(f"bad group literal {literal!r}; expected e.g. '15x8'")
    orders = [int(t) for t in literal.replace(" ", "").split("x")]
    if orders == [1]:
        return AbelianGroup(())
    return make_group(orders)


def format_element(g: Sequence[int]) -> str:
    return "[" + ",".join(str(int(r)) for r in g) + "]"


def parse_element(G: AbelianGroup, text: str) -> int:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise InvalidElement(f"element must look like [r1,r2,...], got {text!r}")
    inner = body[1:-1].strip()
    vec = tuple(int(t) for t in inner.split(",")) if inner else ()
    return G.index(vec)


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: AbelianGroup
    elements: tuple[int, ...]
    generators: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return self._members[self.parent.index(g)]

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.parent == self.parent
            and other.elements == self.elements
        )

    def __hash__(self):
        return hash((self.parent, self.elements))

    def __repr__(self):
        return f"Subgroup(order={self.order} in {self.parent.literal})"

    @cached_property
    def _members(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    def contains_set(self, xs: Iterable[int]) -> bool:
        return all(self._members[x] for x in xs)

    def vectors(self) -> list[GroupElement]:
        return [self.parent.element(x) for x in self.elements]

    def coset(self, g: ElementLike) -> tuple[int, ...]:
        g = self.parent.index(g)
        return tuple(sorted(int(x) for x in self.parent.add_table[g, list(self.elements)]))

    def structure(self) -> tuple[AbelianGroup, tuple[int, ...]]:
        """Abstract group isomorphic to this subgroup and the embedding.

        ``embedding[i]`` is the parent index of element ``i`` of the returned
        group.
        """
        pos = {x: i for i, x in enumerate(self.elements)}
        els = np.array(self.elements, dtype=np.int64)
        sub = self.parent.add_table[np.ix_(els, els)]
        table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
        H, labels = _decompose(table)
        return H, tuple(self.elements[i] for i in labels)


def subgroup_generated(G: AbelianGroup, gens: Iterable[ElementLike]) -> Subgroup:
    """Smallest subgroup containing ``gens`` (breadth-first saturation)."""
    gens = tuple(dict.fromkeys(G.index(g) for g in gens))
    add = G.add_table
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(add[x, g])
                if not seen[y]:
                    seen[y] = True
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(int(i) for i in np.flatnonzero(seen)), gens)


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, (0,), ())


def whole_group(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)), G.generators)


def sylow_subgroup(G: AbelianGroup, p: int) -> Subgroup:
    if not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    gens = [g for g, q in zip(G.generators, G.primary_factors) if q % p == 0]
    return subgroup_generated(G, gens)


def radical(G: AbelianGroup, X: Iterable[ElementLike]) -> Subgroup:
    """The subgroup {g : g + X = X}."""
    xs = np.array(sorted({G.index(x) for x in X}), dtype=np.int64)
    if xs.size == 0:
        raise EmptySet("radical of the empty set")
    member = np.zeros(G.order, dtype=bool)
    member[xs] = True
    keep = member[G.add_table[:, xs]].all(axis=1)
    els = tuple(int(i) for i in np.flatnonzero(keep))
    return Subgroup(G, els, ())


# ---------------------------------------------------------------------------
# homomorphisms and automorphisms


def extend_homomorphism(
    G: AbelianGroup,
    gens: Sequence[ElementLike],
    images: Sequence[ElementLike],
    target: AbelianGroup | None = None,
) -> dict[int, int]:
    """Extend ``gens[i] -> images[i]`` to a homomorphism on <gens>.

    Walks the Cayley graph of <gens> breadth-first and checks every edge, so
    an inconsistent assignment raises :class:`NotAHomomorphism`.
    """
    T = target or G
    gens = [G.index(g) for g in gens]
    images = [T.index(h) for h in images]
    if len(gens) != len(images):
        raise NotAHomomorphism("need exactly one image per generator")
    addG, addT = G.add_table, T.add_table
    img = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        fx = img[x]
        for g, h in zip(gens, images):
            y = int(addG[x, g])
            fy = int(addT[fx, h])
            if y not in img:
                img[y] = fy
                queue.append(y)
            elif img[y] != fy:
                raise NotAHomomorphism(
                    f"images of {G.element(x)} + {G.element(g)} disagree "
                    f"({T.element(img[y])} vs {T.element(fy)})"
                )
    return img


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    parent: AbelianGroup
    table: tuple[int, ...]

    def __call__(self, g: ElementLike) -> int:
        return self.table[self.parent.index(g)]

    def __eq__(self, other):
        return isinstance(other, GroupAutomorphism) and other.table == self.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        gens = [format_element(self.parent.element(self.table[g])) for g in self.parent.generators]
        return f"GroupAutomorphism({self.parent.literal}: {' '.join(gens)})"

    def then(self, other: GroupAutomorphism) -> GroupAutomorphism:
        """Apply ``self`` first, then ``other``."""
        return GroupAutomorphism(self.parent, tuple(other.table[i] for i in self.table))

    def inverse(self) -> GroupAutomorphism:
        inv = [0] * len(self.table)
        for i, j in enumerate(self.table):
            inv[j] = i
        return GroupAutomorphism(self.parent, tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.table))

    def order(self) -> int:
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur.then(self)
            k += 1
        return k

    def commutes_with(self, other: GroupAutomorphism) -> bool:
        return self.then(other) == other.then(self)


def automorphism_from_images(
    G: AbelianGroup, gens: Sequence[ElementLike], images: Sequence[ElementLike]
) -> GroupAutomorphism:
    """Automorphism sending ``gens[i]`` to ``images[i]``; gens must generate G."""
    img = extend_homomorphism(G, gens, images)
    if len(img) != G.order:
        raise NotAHomomorphism("the given elements do not generate the group")
    table = tuple(img[i] for i in range(G.order))
    if len(set(table)) != G.order:
        raise NotBijective("homomorphic extension is not injective")
    return GroupAutomorphism(G, table)


def make_automorphism(G: AbelianGroup, generator_images) -> GroupAutomorphism:
    """Automorphism from the images of the canonical generators.

    ``generator_images`` is a sequence with one element per primary factor,
    or a mapping from factor position to image (missing positions are fixed).
    """
    if isinstance(generator_images, dict):
        images = [generator_images.get(i, G.generators[i]) for i in range(G.rank)]
    else:
        images = list(generator_images)
    if len(images) != G.rank:
        raise NotAHomomorphism(f"expected {G.rank} generator images, got {len(images)}")
    for q, h in zip(G.primary_factors, images):
        if q % G.element_order(h):
            raise NotAHomomorphism(
                f"image {format_element(G.element(h))} has order {G.element_order(h)}, "
                f"which does not divide {q}"
            )
    return automorphism_from_images(G, G.generators, images)


def inversion(G: AbelianGroup) -> GroupAutomorphism:
    return GroupAutomorphism(G, tuple(int(i) for i in G.neg_table))


def identity_automorphism(G: AbelianGroup) -> GroupAutomorphism:
    return GroupAutomorphism(G, tuple(range(G.order)))


def power_automorphism(G: AbelianGroup, k: int) -> GroupAutomorphism:
    """x -> k*x; an automorphism when gcd(k, exponent) = 1."""
    return make_automorphism(G, [G.multiple(g, k) for g in G.generators])


def pairwise_commute(autos: Sequence[GroupAutomorphism]) -> bool:
    return all(a.commutes_with(b) for i, a in enumerate(autos) for b in autos[i + 1 :])


# ---------------------------------------------------------------------------
# structure of subgroups and quotients


def quotient_structure(U: Subgroup, L: Subgroup) -> tuple[AbelianGroup, np.ndarray]:
    """The group U/L and the projection.

    Returns ``(Q, proj)`` where ``proj[g]`` is the Q-index of the coset of
    ``g`` for g in U, and -1 elsewhere.
    """
    G = U.parent
    if L.parent != G or not U.contains_set(L.elements):
        raise ValueError("L must be a subgroup of U")
    add = G.add_table
    Ls = np.array(L.elements, dtype=np.int64)
    rep = np.full(G.order, -1, dtype=np.int64)
    for u in U.elements:
        if rep[u] < 0:
            coset = add[u, Ls]
            rep[coset] = coset.min()
    reps = sorted({int(rep[u]) for u in U.elements})
    label = {r: i for i, r in enumerate(reps)}
    m = len(reps)
    table = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            table[i, j] = label[int(rep[add[a, b]])]
    Q, labels = _decompose(table)
    # labels[i] = coset label of Q-element i
    inv = np.empty(m, dtype=np.int64)
    inv[np.array(labels, dtype=np.int64)] = np.arange(m)
    proj = np.full(G.order, -1, dtype=np.int64)
    for u in U.elements:
        proj[u] = inv[label[int(rep[u])]]
    return Q, proj


def _table_orders(table: np.ndarray) -> np.ndarray:
    m = table.shape[0]
    orders = np.ones(m, dtype=np.int64)
    cur = np.arange(m)
    k = 1
    pending = cur != 0
    while pending.any():
        cur = table[cur, np.arange(m)]
        k += 1
        hit = pending & (cur == 0)
        orders[hit] = k
        pending &= ~hit
    return orders


def _is_power_of(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


def _multiples(table: np.ndarray, x: int, k: int) -> list[int]:
    out, cur = [0], 0
    for _ in range(k - 1):
        cur = int(table[cur, x])
        out.append(cur)
    return out


def _decompose(table: np.ndarray) -> tuple[AbelianGroup, list[int]]:
    """Primary decomposition of a group given by its addition table.

    Label 0 must be the identity.  Returns the canonical group and, for each
    of its element indices, the corresponding label.
    """
    m = table.shape[0]
    orders = _table_orders(table)
    basis: list[tuple[int, int, int]] = []  # (p, e, label)
    for p, _ in sorted(factorize(m).items()) if m > 1 else []:
        P = [x for x in range(m) if _is_power_of(int(orders[x]), p)]
        exps = _p_type(P, orders, p)
        chosen = _p_basis(table, P, orders, p, exps)
        basis += [(p, e, x) for e, x in zip(exps, chosen)]
    basis.sort()
    H = AbelianGroup([p**e for p, e, _ in basis])
    labels = []
    gens = [x for _, _, x in basis]
    for vec in H.coords:
        cur = 0
        for r, g in zip(vec, gens):
            for _ in range(int(r)):
                cur = int(table[cur, g])
        labels.append(cur)
    if len(set(labels)) != m:
        raise AssertionError("decomposition failed to produce a basis")
    return H, labels


def _p_type(P: list[int], orders: np.ndarray, p: int) -> list[int]:
    """Exponents (descending) of a p-group from its element-order counts."""
    counts = {}
    for x in P:
        e = 0
        o = int(orders[x])
        while o > 1:
            o //= p
            e += 1
        counts[e] = counts.get(e, 0) + 1
    top = max(counts)
    n_le = []  # number of elements with order dividing p^j
    acc = 0
    for j in range(top + 1):
        acc += counts.get(j, 0)
        n_le.append(acc)
    d = [0] * (top + 2)  # d[j] = number of parts >= j
    for j in range(1, top + 1):
        ratio = n_le[j] // n_le[j - 1]
        k = 0
        while ratio > 1:
            ratio //= p
            k += 1
        d[j] = k
    exps = []
    for j in range(top, 0, -1):
        exps += [j] * (d[j] - d[j + 1])
    return exps


def _p_basis(table, P, orders, p, exps) -> list[int]:
    by_order: dict[int, list[int]] = {}
    for x in P:
        by_order.setdefault(int(orders[x]), []).append(x)

    def rec(k, span):
        if k == len(exps):
            return []
        need = p ** exps[k]
        for x in by_order.get(need, []):
            mult = _multiples(table, x, need)
            if mult[need // p] in span:
                continue
            new = {int(table[s, t]) for s in span for t in mult}
            rest = rec(k + 1, new)
            if rest is not None:
                return [x] + rest
        return None

    out = rec(0, {0})
    if out is None:
        raise AssertionError("no basis found for p-group")
    return out
