"""Algebraic and combinatorial isomorphisms of S-rings.

An algebraic isomorphism is a bijection of basic sets preserving every
structure constant.  A combinatorial isomorphism is a point bijection
carrying each Cayley relation R(X) = {(g, x + g)} onto a relation of the
target; it induces an algebraic isomorphism, and the question of which
algebraic isomorphisms arise this way is the separability question.

Schurity is decided through the scheme automorphisms fixing the identity:
A is schurian exactly when their orbits are the basic sets of A.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from ._search import Budget, Matcher, stabilizer_chain
from .errors import (
    BudgetExceeded,
    ConstantMismatch,
    InvalidAlgebraicIso,
    NotASchemeIsomorphism,
    SizeMismatch,
)
from .permgrp import PermutationGroup
from .sring import SRing

DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    env = os.environ.get("SCHURKIT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(default_budget() if budget is None else budget)


# ---------------------------------------------------------------------------
# algebraic isomorphisms


@dataclass(frozen=True, eq=False)
class AlgebraicIso:
    source: SRing
    target: SRing
    class_map: tuple[int, ...]

    def __call__(self, X: int) -> int:
        return self.class_map[X]

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraicIso)
            and other.class_map == self.class_map
            and other.source == self.source
            and other.target == self.target
        )

    def __hash__(self):
        return hash(self.class_map)

    def __repr__(self):
        return f"AlgebraicIso({list(self.class_map)})"

    def then(self, other: AlgebraicIso) -> AlgebraicIso:
        """Apply ``self`` first, then ``other``."""
        if other.source != self.target:
            raise InvalidAlgebraicIso("maps do not compose")
        cm = tuple(other.class_map[y] for y in self.class_map)
        return AlgebraicIso(self.source, other.target, cm)

    def inverse(self) -> AlgebraicIso:
        inv = [0] * len(self.class_map)
        for x, y in enumerate(self.class_map):
            inv[y] = x
        return AlgebraicIso(self.target, self.source, tuple(inv))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.class_map))

    def order(self) -> int:
        if self.source != self.target:
            raise InvalidAlgebraicIso("order is defined for automorphisms only")
        k, cur = 1, self
        while not cur.is_identity():
            cur = cur.then(self)
            k += 1
        return k


def algebraic_iso_from_map(A: SRing, B: SRing, class_map: Sequence[int]) -> AlgebraicIso:
    """Check every constant and return the map as an :class:`AlgebraicIso`."""
    m = tuple(int(y) for y in class_map)
    r = A.rank
    if B.rank != r or sorted(m) != list(range(r)):
        raise InvalidAlgebraicIso("class map is not a bijection of basic sets")
    for X, Y in enumerate(m):
        if A.sizes[X] != B.sizes[Y]:
            raise SizeMismatch(
                f"class {X} has size {A.sizes[X]} but its image {Y} has size {B.sizes[Y]}"
            )
    idx = np.array(m, dtype=np.int64)
    TA, TB = A.tensor, B.tensor[np.ix_(idx, idx, idx)]
    bad = np.argwhere(TA != TB)
    if bad.size:
        X, Y, Z = (int(v) for v in bad[0])
        raise ConstantMismatch((X, Y, Z), int(TA[X, Y, Z]), int(TB[X, Y, Z]))
    if not (B.inverse_class[idx] == idx[A.inverse_class]).all():
        raise InvalidAlgebraicIso("map does not commute with inversion")
    return AlgebraicIso(A, B, m)


def identity_iso(A: SRing) -> AlgebraicIso:
    return AlgebraicIso(A, A, tuple(range(A.rank)))


def _signature(A: SRing, X: int):
    T, s, inv = A.tensor, A.sizes, A.inverse_class
    return (
        int(s[X]),
        int(inv[X]) == X,
        tuple(sorted(zip(T[X, X].tolist(), s.tolist()))),
        tuple(sorted(zip(T[X, int(inv[X])].tolist(), s.tolist()))),
    )


def find_algebraic_isos(A: SRing, B: SRing, limit: int | None = None) -> list[AlgebraicIso]:
    """All algebraic isomorphisms A -> B in lexicographic order of class maps.

    Backtracks over classes in index order; the image of X^-1 is forced to
    be the inverse of the image of X, and candidates are restricted to
    classes with the same size, symmetry type and sorted constant rows.
    """
    r = A.rank
    if B.rank != r or A.group.order != B.group.order:
        return []
    sigA = [_signature(A, X) for X in range(r)]
    sigB = [_signature(B, Y) for Y in range(r)]
    if sorted(sigA) != sorted(sigB):
        return []
    cands = [[Y for Y in range(r) if sigB[Y] == sigA[X]] for X in range(r)]
    TA, TB = A.tensor, B.tensor
    invA, invB = A.inverse_class.tolist(), B.inverse_class.tolist()
    out: list[AlgebraicIso] = []
    m = [-1] * r
    used = [False] * r

    def consistent(pairs, a, b) -> bool:
        for X, Y in pairs:
            if not (TA[np.ix_([X], a, a)] == TB[np.ix_([Y], b, b)]).all():
                return False
            if not (TA[np.ix_(a, [X], a)] == TB[np.ix_(b, [Y], b)]).all():
                return False
            if not (TA[np.ix_(a, a, [X])] == TB[np.ix_(b, b, [Y])]).all():
                return False
        return True

    def rec(X):
        if limit is not None and len(out) >= limit:
            return
        while X < r and m[X] >= 0:
            X += 1
        if X == r:
            out.append(algebraic_iso_from_map(A, B, m))
            return
        for Y in cands[X]:
            if used[Y]:
                continue
            Xi, Yi = invA[X], invB[Y]
            if (Xi == X) != (Yi == Y) or (Xi != X and used[Yi]):
                continue
            pairs = [(X, Y)] if Xi == X else [(X, Y), (Xi, Yi)]
            for P, Q in pairs:
                m[P], used[Q] = Q, True
            a = [P for P in range(r) if m[P] >= 0]
            b = [m[P] for P in a]
            if consistent(pairs, a, b):
                rec(X + 1)
            for P, Q in pairs:
                m[P], used[Q] = -1, False

    m[0], used[0] = 0, True
    rec(1)
    return out


def find_algebraic_autos(A: SRing) -> list[AlgebraicIso]:
    """The group Aut_alg(A), listed in lexicographic order."""
    return find_algebraic_isos(A, A)


# ---------------------------------------------------------------------------
# combinatorial isomorphisms


class Status(str, Enum):
    FOUND = "Found"
    NOT_FOUND = "NotFound"
    TIMEOUT = "Timeout"


@dataclass(frozen=True)
class SchemeIsoResult:
    status: Status
    witness: tuple[int, ...] | None
    nodes_explored: int

    def to_dict(self, group=None) -> dict:
        d = {"status": self.status.value, "nodes": self.nodes_explored}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        return d


def _relation_map(f, A: SRing, B: SRing) -> list[int]:
    f = np.asarray(f, dtype=np.int64)
    n = A.group.order
    if f.shape != (n,) or sorted(f.tolist()) != list(range(n)) or B.group.order != n:
        raise NotASchemeIsomorphism("not a bijection between the point sets")
    colA, colB = A.color_matrix, B.color_matrix
    image = colB[np.ix_(f, f)]
    cmap = [-1] * A.rank
    for X, c in enumerate(A.classes):
        cmap[X] = int(image[0, c[0]])
    if sorted(cmap) != list(range(B.rank)) or not (
        image == np.array(cmap)[colA]
    ).all():
        raise NotASchemeIsomorphism("some relation is not mapped onto a relation")
    return cmap


def induced_algebraic_iso(f, A: SRing, B: SRing | None = None) -> AlgebraicIso:
    """φ_f: the class map X -> X' with R(X)^f = R(X')."""
    B = A if B is None else B
    return algebraic_iso_from_map(A, B, _relation_map(f, A, B))


def is_scheme_isomorphism(f, phi: AlgebraicIso) -> bool:
    try:
        return tuple(_relation_map(f, phi.source, phi.target)) == phi.class_map
    except NotASchemeIsomorphism:
        return False


def find_inducing_iso(phi: AlgebraicIso, budget=None) -> SchemeIsoResult:
    """Search for f with R(X)^f = R(X^φ) for every X, with f(e) = e.

    Fixing the image of e loses nothing: composing with a translation of
    the target fixes every relation.
    """
    A, B = phi.source, phi.target
    bud = _budget(budget)
    start = bud.used
    m = Matcher(A.color_matrix, B.color_matrix, phi.class_map, B.rank)
    try:
        f = m.search([(0, 0)], bud)
    except BudgetExceeded:
        return SchemeIsoResult(Status.TIMEOUT, None, bud.used - start)
    nodes = bud.used - start
    if f is None:
        return SchemeIsoResult(Status.NOT_FOUND, None, nodes)
    if not m.verify(f) or not is_scheme_isomorphism(f, phi):
        raise AssertionError("search returned an invalid witness")
    return SchemeIsoResult(Status.FOUND, tuple(f), nodes)


# ---------------------------------------------------------------------------
# scheme automorphisms and schurity


@dataclass
class AutomorphismSearch:
    group: PermutationGroup
    base: list[int]
    orbit_sizes: list[int]
    nodes: int

    @property
    def order(self) -> int:
        """|Aut(A)_e|, the product of the basic orbit lengths."""
        out = 1
        for s in self.orbit_sizes:
            out *= s
        return out

    def orbits(self) -> list[tuple[int, ...]]:
        return self.group.orbits()


def scheme_automorphism_search(A: SRing, budget=None) -> AutomorphismSearch:
    bud = _budget(budget)
    start = bud.used
    m = Matcher(A.color_matrix, A.color_matrix, range(A.rank), A.rank)
    res = stabilizer_chain(m, bud)
    for g in res.generators:
        if not m.verify(g) or g[0] != 0:
            raise AssertionError("search returned an invalid automorphism")
    K = PermutationGroup(A.group.order, res.generators)
    return AutomorphismSearch(K, res.base, res.orbit_sizes, bud.used - start)


def scheme_stabilizer_autos(A: SRing, budget=None) -> PermutationGroup:
    """Aut(A)_e as an explicit permutation group."""
    return scheme_automorphism_search(A, budget).group


def orbits_match_classes(A: SRing, K: PermutationGroup) -> bool:
    return tuple(sorted(K.orbits(), key=lambda c: (len(c), c[0]))) == A.classes


def is_schurian(A: SRing, budget=None) -> bool:
    return orbits_match_classes(A, scheme_stabilizer_autos(A, budget))


# ---------------------------------------------------------------------------
# separability


@dataclass
class SeparabilityReport:
    entries: list[tuple[AlgebraicIso, SchemeIsoResult]] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        statuses = {r.status for _, r in self.entries}
        if Status.NOT_FOUND in statuses:
            return "not separable"
        if Status.TIMEOUT in statuses:
            return "undetermined"
        return "separable within scope"

    @property
    def culprits(self) -> list[AlgebraicIso]:
        return [phi for phi, r in self.entries if r.status is Status.NOT_FOUND]

    def to_list(self) -> list[dict]:
        out = []
        for phi, r in self.entries:
            d = {"phi": list(phi.class_map)}
            d.update(r.to_dict())
            out.append(d)
        return out


def separability_report(
    A: SRing, targets: Iterable[SRing] = (), budget=None
) -> SeparabilityReport:
    """Run the inducing search on every algebraic automorphism of A and on
    every algebraic isomorphism to each supplied target.  The identity of
    the point set's base point is fixed, as in :func:`find_inducing_iso`.
    """
    bud = _budget(budget)
    rep = SeparabilityReport()
    phis = find_algebraic_autos(A)
    for B in targets:
        phis += find_algebraic_isos(A, B)
    for phi in phis:
        rep.entries.append((phi, find_inducing_iso(phi, bud)))
    return rep
