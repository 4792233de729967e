"""S-rings over finite abelian groups.

An S-ring is stored as its partition of the group into basic sets (classes).
Classes are kept in canonical order, sorted by (size, smallest index), so
class 0 is always the identity class.  Every constructor funnels through
:func:`sring_from_partition`, which checks the axioms in full before an
:class:`SRing` exists.

The structure constants ``tensor[X, Y, Z]`` count, for a fixed z in class Z,
the pairs (x, y) in X x Y with x + y = z.

>>> from schurkit.groups import make_group
>>> A = sring_from_partition(make_group([4]), [[0], [1, 3], [2]])
>>> A.rank
3
>>> A.classes
((0,), (2,), (1, 3))
>>> int(A.tensor[2, 2, 0]), int(A.tensor[2, 2, 1])
(2, 2)
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    HNotSubgroup,
    InvalidAlgebraicIso,
    MissingIdentityClass,
    NotASection,
    NotContainingRegular,
    NotInverseClosed,
    NotProductClosed,
    PartitionError,
)
from .groups import (
    AbelianGroup,
    GroupAutomorphism,
    Subgroup,
    format_element,
    make_group,
    quotient_structure,
    radical,
    subgroup_generated,
    trivial_subgroup,
)
from .permgrp import PermutationGroup, translation


class SRing:
    """A validated S-ring.  Build one with :func:`sring_from_partition`."""

    def __init__(self, group: AbelianGroup, classes, class_of, tensor):
        self.group = group
        self.classes: tuple[tuple[int, ...], ...] = classes
        self.class_of: np.ndarray = class_of
        self._tensor = tensor
        self._lock = threading.Lock()

    @property
    def rank(self) -> int:
        return len(self.classes)

    @property
    def tensor(self) -> np.ndarray:
        with self._lock:
            if self._tensor is None:
                self._tensor = _tensor(self.group, self.classes, self.class_of)
            return self._tensor

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes], dtype=np.int64)

    @cached_property
    def inverse_class(self) -> np.ndarray:
        neg = self.group.neg_table
        return np.array([self.class_of[neg[c[0]]] for c in self.classes], dtype=np.int64)

    @cached_property
    def color_matrix(self) -> np.ndarray:
        """``col[x, y]`` is the class of y - x, i.e. (x, y) lies in R(X)."""
        G = self.group
        diff = G.add_table[:, G.neg_table]  # diff[y, x] = y - x
        return self.class_of[diff.T]

    def constant(self, X: int, Y: int, Z: int) -> int:
        return int(self.tensor[X, Y, Z])

    def is_symmetric(self, X: int) -> bool:
        return int(self.inverse_class[X]) == X

    def basic_set(self, X: int) -> list[tuple[int, ...]]:
        return [self.group.element(x) for x in self.classes[X]]

    def product(self, X: int, Y: int) -> dict[int, int]:
        """X̲·Y̲ as {class: coefficient}, omitting zeros."""
        row = self.tensor[X, Y]
        return {int(Z): int(row[Z]) for Z in np.flatnonzero(row)}

    def __eq__(self, other):
        return (
            isinstance(other, SRing)
            and other.group == self.group
            and other.classes == self.classes
        )

    def __hash__(self):
        return hash((self.group, self.classes))

    def __repr__(self):
        return f"SRing(rank={self.rank} over {self.group.literal})"

    # serialization ---------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "group": list(self.group.primary_factors),
            "classes": [[list(self.group.element(x)) for x in c] for c in self.classes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> SRing:
        G = make_group(data["group"])
        if tuple(data["group"]) != G.primary_factors:
            raise PartitionError("group factors must be in canonical order")
        return sring_from_partition(G, [[tuple(v) for v in c] for c in data["classes"]])

    @classmethod
    def from_json(cls, text: str) -> SRing:
        return cls.from_dict(json.loads(text))

    def describe(self) -> list[str]:
        return [
            "{" + ", ".join(format_element(v) for v in self.basic_set(X)) + "}"
            for X in range(self.rank)
        ]


# ---------------------------------------------------------------------------
# validation


def _canonical(G: AbelianGroup, classes) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    norm = []
    for c in classes:
        idx = sorted({G.index(x) for x in c})
        if not idx:
            raise PartitionError("empty class")
        if len(idx) != len(c):
            raise PartitionError("class lists an element twice")
        norm.append(tuple(idx))
    norm.sort(key=lambda c: (len(c), c[0]))
    class_of = np.full(G.order, -1, dtype=np.int64)
    for k, c in enumerate(norm):
        if (class_of[list(c)] >= 0).any():
            raise PartitionError("classes are not disjoint")
        class_of[list(c)] = k
    if (class_of < 0).any():
        missing = G.element(int(np.flatnonzero(class_of < 0)[0]))
        raise PartitionError(f"element {format_element(missing)} is in no class")
    return tuple(norm), class_of


def _tensor(G, classes, class_of, check=False) -> np.ndarray:
    """Structure constants from one binned pass per class.

    With ``check`` set, every coefficient of every element is compared
    against the rest of its class.
    """
    n, r = G.order, len(classes)
    add = G.add_table
    order = np.concatenate([np.array(c, dtype=np.int64) for c in classes])
    starts = np.cumsum([0] + [len(c) for c in classes[:-1]])
    T = np.zeros((r, r, r), dtype=np.int64)
    ys = class_of[None, :]
    for X, xs in enumerate(classes):
        sums = add[list(xs), :]  # sums[i, y] = x_i + y
        keys = (np.broadcast_to(ys, sums.shape) * n + sums).ravel()
        M = np.bincount(keys, minlength=r * n).reshape(r, n)[:, order]
        lo = np.minimum.reduceat(M, starts, axis=1)
        if check:
            hi = np.maximum.reduceat(M, starts, axis=1)
            bad = np.argwhere(lo != hi)
            if bad.size:
                Y, Z = (int(v) for v in bad[0])
                zs = np.array(classes[Z])
                coeff = M[Y, starts[Z] : starts[Z] + len(zs)]
                i1, i2 = int(np.argmin(coeff)), int(np.argmax(coeff))
                raise NotProductClosed(
                    X, Y,
                    format_element(G.element(int(zs[i1]))),
                    format_element(G.element(int(zs[i2]))),
                    int(coeff[i1]), int(coeff[i2]),
                )
        T[X] = lo
    return T


def sring_from_partition(G: AbelianGroup, classes: Iterable[Iterable]) -> SRing:
    """Validate a partition of G and return the S-ring it spans.

    Elements may be given as indices or residue vectors.
    """
    classes, class_of = _canonical(G, [list(c) for c in classes])
    if classes[0] != (0,):
        raise MissingIdentityClass("the identity is not a class by itself")
    neg = G.neg_table
    for k, c in enumerate(classes):
        inv = sorted(int(neg[x]) for x in c)
        j = int(class_of[inv[0]])
        if classes[j] != tuple(inv):
            v = format_element(G.element(c[0]))
            raise NotInverseClosed(f"the inverse of the class of {v} is not a class")
    T = _tensor(G, classes, class_of, check=True)
    return SRing(G, classes, class_of, T)


def structure_constants(A: SRing) -> np.ndarray:
    return A.tensor


def eq1_violations(A: SRing) -> list[tuple[int, int, int]]:
    """Triples where |Z| c^{Z^-1}_{X,Y} = |X| c^{X^-1}_{Y,Z} fails.

    By symmetry of the identity under cyclic shifts this covers all three
    members of the chain.
    """
    T, s, inv = A.tensor, A.sizes, A.inverse_class
    U = T[:, :, inv]  # U[X, Y, Z] = c[X, Y, Z^-1]
    lhs = U * s[None, None, :]
    rhs = U.transpose(2, 0, 1) * s[:, None, None]  # |X| c[Y, Z, X^-1]
    return [tuple(int(v) for v in t) for t in np.argwhere(lhs != rhs)]


def check_eq1(A: SRing) -> bool:
    return not eq1_violations(A)


def check_row_sums(A: SRing) -> bool:
    """sum_Z c^Z_{X,Y} |Z| = |X| |Y| for all X, Y."""
    T, s = A.tensor, A.sizes
    return bool((T @ s == np.outer(s, s)).all())


def check_unit_law(A: SRing) -> bool:
    T = A.tensor
    eye = np.eye(A.rank, dtype=np.int64)
    return bool((T[0] == eye).all() and (T[:, 0, :] == eye).all())


# ---------------------------------------------------------------------------
# constructors


def group_ring(G: AbelianGroup) -> SRing:
    return sring_from_partition(G, [[x] for x in range(G.order)])


def rank_two(G: AbelianGroup) -> SRing:
    if G.order == 1:
        return sring_from_partition(G, [[0]])
    return sring_from_partition(G, [[0], list(range(1, G.order))])


def cyclotomic(G: AbelianGroup, autos: Iterable[GroupAutomorphism]) -> SRing:
    """cyc(K, G) for K generated by ``autos``."""
    tables = []
    for a in autos:
        if not isinstance(a, GroupAutomorphism) or a.parent != G:
            raise TypeError("cyclotomic expects automorphisms of the given group")
        tables.append(a.table)
    return sring_from_partition(G, PermutationGroup(G.order, tables).orbits())


def transitivity_module(G: AbelianGroup, K: PermutationGroup) -> SRing:
    """V(K, G): orbits of the stabilizer of the identity."""
    if K.degree != G.order:
        raise NotContainingRegular("degree does not match the group order")
    for g in G.generators:
        if not K._contains(translation(G, g)):
            v = format_element(G.element(g))
            raise NotContainingRegular(f"translation by {v} is not in the group")
    return sring_from_partition(G, K.point_stabilizer(0).orbits())


# ---------------------------------------------------------------------------
# A-sets and A-subgroups


def is_a_set(A: SRing, X: Iterable) -> bool:
    xs = {A.group.index(x) for x in X}
    if not xs:
        return True
    cls = {int(A.class_of[x]) for x in xs}
    return sum(len(A.classes[c]) for c in cls) == len(xs)


def _is_subgroup(G: AbelianGroup, xs: Sequence[int]) -> bool:
    if 0 not in xs:
        return False
    s = np.zeros(G.order, dtype=bool)
    s[list(xs)] = True
    return bool(s[G.add_table[np.ix_(xs, xs)]].all())


def a_subgroups(A: SRing) -> list[Subgroup]:
    """Every A-subgroup, by join-closure from the atoms <X>."""
    G = A.group
    add = G.add_table
    atoms = {}
    for c in A.classes:
        H = subgroup_generated(G, c)
        atoms.setdefault(H.elements, H)
    found = {H.elements: H for H in atoms.values()}
    queue = list(found.values())
    while queue:
        H = queue.pop()
        for K in atoms.values():
            els = tuple(int(x) for x in np.unique(add[np.ix_(H.elements, K.elements)]))
            if els not in found:
                J = Subgroup(G, els, tuple(dict.fromkeys(H.generators + K.generators)))
                found[els] = J
                queue.append(J)
    out = [H for H in found.values() if is_a_set(A, H.elements)]
    return sorted(out, key=lambda H: (H.order, H.elements))


def is_a_subgroup(A: SRing, H: Subgroup | Iterable) -> bool:
    els = H.elements if isinstance(H, Subgroup) else sorted({A.group.index(x) for x in H})
    return _is_subgroup(A.group, list(els)) and is_a_set(A, els)


# ---------------------------------------------------------------------------
# sections, quotients, wreath products


@dataclass(frozen=True)
class Section:
    U: Subgroup
    L: Subgroup

    def __post_init__(self):
        if not self.U.contains_set(self.L.elements):
            raise NotASection("L is not contained in U")


def _check_section(A: SRing, S: Section):
    for name, H in (("U", S.U), ("L", S.L)):
        if H.parent != A.group or not is_a_subgroup(A, H):
            raise NotASection(f"{name} is not an A-subgroup")


def quotient(A: SRing, S: Section) -> SRing:
    """A_{U/L}: images of the classes inside U."""
    _check_section(A, S)
    Q, proj = quotient_structure(S.U, S.L)
    images = {}
    for c in A.classes:
        if S.U.contains_set(c):
            img = tuple(sorted({int(proj[x]) for x in c}))
            images[img] = None
    return sring_from_partition(Q, list(images))


def check_embedding(H: AbelianGroup, G: AbelianGroup, embedding: Sequence[int]) -> np.ndarray:
    emb = np.asarray(embedding, dtype=np.int64)
    if emb.shape != (H.order,) or len(set(emb.tolist())) != H.order:
        raise HNotSubgroup("embedding is not injective on the subgroup")
    if (emb < 0).any() or (emb >= G.order).any():
        raise HNotSubgroup("embedding leaves the group")
    if not (emb[H.add_table] == G.add_table[np.ix_(emb, emb)]).all():
        raise HNotSubgroup("embedding is not a homomorphism")
    return emb


def transport(B: SRing, G: AbelianGroup, embedding: Sequence[int]) -> list[tuple[int, ...]]:
    """Classes of B carried into G along an embedding."""
    emb = check_embedding(B.group, G, embedding)
    return [tuple(sorted(int(emb[x]) for x in c)) for c in B.classes]


def wreath_product(B: SRing, G: AbelianGroup, embedding: Sequence[int] | None = None) -> SRing:
    """B ≀ Z(G/H): classes of B plus every non-identity coset of H.

    ``embedding[i]`` is the G-index of element i of ``B.group``; it defaults
    to the identity, which requires B to live over G itself.
    """
    if embedding is None:
        if B.group != G:
            raise HNotSubgroup("an embedding is needed when B is over a different group")
        embedding = range(G.order)
    inner = transport(B, G, embedding)
    H = sorted(x for c in inner for x in c)
    seen = np.zeros(G.order, dtype=bool)
    seen[H] = True
    cosets = []
    for g in range(G.order):
        if not seen[g]:
            cs = G.add_table[g, H]
            seen[cs] = True
            cosets.append(sorted(int(x) for x in cs))
    return sring_from_partition(G, inner + cosets)


@dataclass(frozen=True)
class SWreathReport:
    holds: bool
    proper: bool

    def __bool__(self):
        return self.holds


def is_s_wreath(A: SRing, S: Section) -> SWreathReport:
    """Whether L lies in rad(X) for every class X outside U."""
    _check_section(A, S)
    G = A.group
    holds = True
    for c in A.classes:
        if S.U.contains_set(c):
            continue
        if not radical(G, c).contains_set(S.L.elements):
            holds = False
            break
    proper = S.L.order > 1 and S.U.order < G.order
    return SWreathReport(holds, holds and proper)


# ---------------------------------------------------------------------------
# fusion


def fusion(A: SRing, Phi: Iterable) -> SRing:
    """A^Φ: unions of Φ-orbits of classes.

    Orbits of the group generated by Φ coincide with the orbits of the
    generators, so the closure is not materialized.
    """
    parent = list(range(A.rank))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for phi in Phi:
        if getattr(phi, "source", None) is not A and phi.source != A:
            raise InvalidAlgebraicIso("fusion needs algebraic automorphisms of A")
        if phi.target != A:
            raise InvalidAlgebraicIso("fusion needs algebraic automorphisms of A")
        for X, Y in enumerate(phi.class_map):
            a, b = find(X), find(Y)
            if a != b:
                parent[max(a, b)] = min(a, b)
    merged: dict[int, list[int]] = {}
    for X, c in enumerate(A.classes):
        merged.setdefault(find(X), []).extend(c)
    return sring_from_partition(A.group, list(merged.values()))


def a_section(A: SRing, U: Iterable, L: Iterable | None = None) -> Section:
    """Section from element collections; both must be A-subgroups."""
    G = A.group
    Us = subgroup_generated(G, U)
    Ls = trivial_subgroup(G) if L is None else subgroup_generated(G, L)
    S = Section(Us, Ls)
    _check_section(A, S)
    return S
