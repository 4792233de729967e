"""Machine-checked non-separability witnesses for H1 x H2.

The construction takes A1 < H1 of odd prime order and A2 < H2 of order 4
(when 4 divides |H2|) or of odd prime order, elements b_i outside A_i, and
writes down the basic sets X, Y, Z, T of an S-ring over H = H1 x H2
together with a permutation φ of them that swaps X_ij with X_(p1-i)j.  The
S-ring is intended to be cyc(K, H) for the group K generated by the
automorphisms σ_i.

Every claim about the result is re-checked rather than assumed: the σ_i
are tested as homomorphisms, the partition is validated as an S-ring, φ is
checked on all rank³ constants, schurity of A and of its fusion by <φ> is
decided by search, and the direct search for a map inducing φ is run as
well.  The certificate states non-separability only when A is schurian, φ
is algebraic and the fusion is not schurian (if φ were induced, the fusion
would be schurian too).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .classify import prop31_decomposition
from .errors import (
    FormulaMismatch,
    InvalidAlgebraicIso,
    NotAHomomorphism,
    NotApplicable,
    NotBijective,
    PlanInvalid,
)
from .groups import (
    AbelianGroup,
    Subgroup,
    automorphism_from_images,
    extend_homomorphism,
    factorize,
    is_prime,
    make_group,
    prime_power,
    subgroup_generated,
)
from .morphisms import (
    AlgebraicIso,
    Status,
    algebraic_iso_from_map,
    find_inducing_iso,
    orbits_match_classes,
    scheme_automorphism_search,
)
from .permgrp import PermutationGroup
from .sring import (
    Section,
    SRing,
    check_eq1,
    check_row_sums,
    fusion,
    is_s_wreath,
    sring_from_partition,
    transport,
    wreath_product,
)

SCHEMA = 1
CYCLIC, E4 = "CyclicA2", "E4A2"


# ---------------------------------------------------------------------------
# plans


def standard_embedding(H: AbelianGroup, G: AbelianGroup) -> tuple[int, ...]:
    """An injective homomorphism H -> G, matching cyclic factors of each
    prime largest to largest."""
    images = [0] * H.rank
    for p in sorted({prime_power(q)[0] for q in H.primary_factors}):
        hs = sorted(
            (i for i, q in enumerate(H.primary_factors) if q % p == 0),
            key=lambda i: -H.primary_factors[i],
        )
        gs = sorted(
            (i for i, q in enumerate(G.primary_factors) if q % p == 0),
            key=lambda i: -G.primary_factors[i],
        )
        if len(hs) > len(gs):
            raise PlanInvalid(f"{H.literal} is not a subgroup of {G.literal}")
        for i, j in zip(hs, gs):
            qh, qg = H.primary_factors[i], G.primary_factors[j]
            if qg % qh:
                raise PlanInvalid(f"{H.literal} is not a subgroup of {G.literal}")
            images[i] = G.multiple(G.generators[j], qg // qh)
    img = extend_homomorphism(H, H.generators, images, G)
    emb = tuple(img[i] for i in range(H.order))
    if len(set(emb)) != H.order:
        raise PlanInvalid("embedding is not injective")
    return emb


@dataclass(frozen=True, eq=False)
class WitnessPlan:
    G: AbelianGroup
    H: AbelianGroup
    embedding: tuple[int, ...]
    H1: Subgroup
    H2: Subgroup
    A1: Subgroup
    A2: Subgroup
    a1: int
    a2: tuple[int, ...]
    b1: int
    b2: int
    branch: str

    @property
    def p1(self) -> int:
        return self.A1.order

    @property
    def q1(self) -> int:
        return self.H1.order // self.A1.order

    @property
    def q2(self) -> int:
        return self.H2.order // self.A2.order

    @property
    def L(self) -> Subgroup:
        return subgroup_generated(self.H, (self.a1,) + self.a2)

    def to_dict(self) -> dict:
        v = lambda x: list(self.H.element(x))  # noqa: E731
        return {
            "G": self.G.literal,
            "H": self.H.literal,
            "H1": [v(x) for x in self.H1.generators],
            "H2": [v(x) for x in self.H2.generators],
            "a1": v(self.a1),
            "a2": [v(x) for x in self.a2],
            "b1": v(self.b1),
            "b2": v(self.b2),
            "branch": self.branch,
            "orders": {"H1": self.H1.order, "H2": self.H2.order, "A1": self.p1, "A2": self.A2.order},
        }


def _tagged_group(h1: Sequence[int], h2: Sequence[int]) -> tuple[AbelianGroup, list[int], list[int]]:
    """H = H1 x H2 with the positions of each side's canonical generators."""
    tagged = []
    for side, fs in ((1, h1), (2, h2)):
        for f in fs:
            for p, e in factorize(int(f)).items():
                tagged.append((p, p**e, side))
    tagged.sort()
    H = make_group([q for _, q, _ in tagged])
    if H.primary_factors != tuple(q for _, q, _ in tagged):
        raise AssertionError("factor order of make_group changed")
    pos1 = [i for i, t in enumerate(tagged) if t[2] == 1]
    pos2 = [i for i, t in enumerate(tagged) if t[2] == 2]
    return H, pos1, pos2


def _smallest(H: AbelianGroup, S: Subgroup, order: int, exclude=()) -> int | None:
    ords = H.order_table
    for x in S.elements:
        if ords[x] == order and x not in exclude:
            return x
    return None


def make_plan(
    h1_factors: Sequence[int],
    h2_factors: Sequence[int],
    G: AbelianGroup | None = None,
    *,
    a1=None,
    a2=None,
    b1=None,
    b2=None,
    embedding: Sequence[int] | None = None,
) -> WitnessPlan:
    """Canonical plan for H1 x H2 (inside G, default H itself).

    Unless given, a1 is the lowest-index element of the smallest prime
    order in H1, A2 is cyclic whenever H2 has an element of order 4, and
    b_i is the lowest-index element of H_i outside A_i.  Elements may be
    passed as H-indices or residue vectors of H.
    """
    H, pos1, pos2 = _tagged_group(h1_factors, h2_factors)
    H1 = subgroup_generated(H, [H.generators[i] for i in pos1])
    H2 = subgroup_generated(H, [H.generators[i] for i in pos2])
    if H1.order % 2 == 0:
        raise PlanInvalid("|H1| must be odd")
    if H1.order < 2 or H2.order < 2:
        raise PlanInvalid("both sides must be nontrivial")

    if a1 is None:
        p1 = min(factorize(H1.order))
        a1 = _smallest(H, H1, p1)
    a1 = H.index(a1)
    if a2 is None:
        if H2.order % 4 == 0:
            c = _smallest(H, H2, 4)
            if c is not None:
                a2 = (c,)
            else:
                a21 = _smallest(H, H2, 2)
                a22 = _smallest(H, H2, 2, exclude=(a21,))
                a2 = (a21, a22)
        else:
            p2 = min(factorize(H2.order))
            a2 = (_smallest(H, H2, p2),)
    elif isinstance(a2, (int, np.integer)) or (a2 and isinstance(a2[0], (int, np.integer)) and len(a2) == H.rank):
        a2 = (a2,)
    a2 = tuple(H.index(x) for x in a2)
    A1 = subgroup_generated(H, [a1])
    A2 = subgroup_generated(H, a2)
    if b1 is None:
        b1 = next(x for x in H1.elements if x not in A1)
    if b2 is None:
        b2 = next(x for x in H2.elements if x not in A2)
    b1, b2 = H.index(b1), H.index(b2)
    G = H if G is None else G
    emb = tuple(embedding) if embedding is not None else standard_embedding(H, G)
    branch = CYCLIC if len(a2) == 1 else E4
    plan = WitnessPlan(G, H, emb, H1, H2, A1, A2, a1, a2, b1, b2, branch)
    validate_plan(plan)
    return plan


def validate_plan(plan: WitnessPlan):
    H, H1, H2, A1, A2 = plan.H, plan.H1, plan.H2, plan.A1, plan.A2
    if len(set(H1.elements) & set(H2.elements)) != 1 or H1.order * H2.order != H.order:
        raise PlanInvalid("H is not the direct product of H1 and H2")
    if not (is_prime(A1.order) and A1.order % 2):
        raise PlanInvalid(f"|A1| = {A1.order} is not an odd prime")
    if not H1.contains_set(A1.elements) or not H2.contains_set(A2.elements):
        raise PlanInvalid("A_i must lie in H_i")
    if H2.order % 4 == 0:
        if A2.order != 4:
            raise PlanInvalid("A2 must have order 4 when 4 divides |H2|")
        ords = [H.element_order(x) for x in plan.a2]
        if not (ords == [4] or (ords == [2, 2] and len(plan.a2) == 2)):
            raise PlanInvalid("A2 needs one generator of order 4 or two of order 2")
    elif not (is_prime(A2.order) and A2.order % 2 and len(plan.a2) == 1):
        raise PlanInvalid(f"|A2| = {A2.order} is not an odd prime")
    for name, Hi, Ai in (("H1/A1", H1, A1), ("H2/A2", H2, A2)):
        if not is_prime(Hi.order // Ai.order):
            raise PlanInvalid(f"{name} does not have prime order")
    if plan.b1 not in H1 or plan.b1 in A1 or plan.b2 not in H2 or plan.b2 in A2:
        raise PlanInvalid("b_i must lie in H_i outside A_i")


# ---------------------------------------------------------------------------
# the S-ring and φ


@dataclass
class Construction:
    plan: WitnessPlan
    A: SRing
    phi_map: tuple[int, ...]
    W: list[int]
    sigmas: list | None
    sigma_error: str | None
    K: PermutationGroup | None


def formula_classes(plan: WitnessPlan) -> tuple[list[frozenset], dict]:
    """Deduplicated basic-set formulas and the names of the X classes.

    Index ranges for b1 and b2 stop at |H_i/A_i| - 1: the last power of b_i
    lies in A_i and would name a set overlapping the X classes.
    """
    H = plan.H
    add, neg = H.add_table, H.neg_table
    mul = H.multiple
    a1, b1, b2 = plan.a1, plan.b1, plan.b2
    p1, q1, q2 = plan.p1, plan.q1, plan.q2
    A1 = np.array(plan.A1.elements)
    A2 = np.array(plan.A2.elements)
    L = np.array(plan.L.elements)

    def s(*xs):
        out = 0
        for x in xs:
            out = int(add[out, x])
        return out

    def coset(g, S):
        return set(int(x) for x in add[g, S])

    sets: dict[frozenset, None] = {}
    xnames: dict[tuple[int, int], frozenset] = {}
    if plan.branch == CYCLIC:
        (a2,) = plan.a2
        m2 = plan.A2.order
        for i in range(p1):
            for j in range(m2):
                g = s(mul(a1, i), mul(a2, j))
                X = frozenset({g, int(neg[g])})
                sets[X] = None
                xnames[(i, j)] = X
        for i in range(1, q1):
            for j in range(m2):
                g = s(mul(b1, i), mul(a2, j))
                sets[frozenset(coset(g, A1) | coset(int(neg[g]), A1))] = None
    else:
        a21, a22 = plan.a2
        c = s(a21, a22)
        for i in range(p1):
            for j in range(2):
                X = frozenset({s(mul(a1, i), mul(a21, j)), s(mul(a1, -i), mul(a22, j))})
                sets[X] = None
                xnames[(i, j)] = X
            sets[frozenset({s(c, mul(a1, i)), s(c, mul(a1, -i))})] = None
        for i in range(1, q1):
            for j in range(2):
                u = s(mul(b1, i), mul(a21, j))
                w = s(mul(b1, -i), mul(a22, j))
                sets[frozenset(coset(u, A1) | coset(w, A1))] = None
            sets[frozenset(coset(s(c, mul(b1, i)), A1) | coset(s(c, mul(b1, -i)), A1))] = None
    for i in range(1, q2):
        for j in range(p1):
            g = s(mul(b2, i), mul(a1, j))
            sets[frozenset(coset(g, A2) | coset(int(neg[g]), A2))] = None
    for i in range(1, q1):
        for j in range(1, q2):
            g = s(mul(b1, i), mul(b2, j))
            sets[frozenset(coset(g, L) | coset(int(neg[g]), L))] = None
    return list(sets), xnames


def _sigmas(plan: WitnessPlan):
    H = plan.H
    add, neg = H.add_table, H.neg_table
    a1, b1, b2 = plan.a1, plan.b1, plan.b2
    if plan.branch == CYCLIC:
        (a2,) = plan.a2
        gens = (a1, a2, b1, b2)
        images = [
            (neg[a1], neg[a2], neg[b1], neg[b2]),
            (a1, a2, add[b1, a1], b2),
            (a1, a2, b1, add[b2, a2]),
        ]
    else:
        a21, a22 = plan.a2
        gens = (a1, a21, a22, b1, b2)
        images = [
            (neg[a1], a22, a21, neg[b1], neg[b2]),
            (a1, a21, a22, add[b1, a1], b2),
            (a1, a21, a22, b1, add[b2, a21]),
            (a1, a21, a22, b1, add[b2, a22]),
        ]
    return gens, [tuple(int(x) for x in im) for im in images]


def construct(plan: WitnessPlan) -> Construction:
    validate_plan(plan)
    H = plan.H
    sets, xnames = formula_classes(plan)
    if sum(len(S) for S in sets) != H.order or len(set().union(*sets)) != H.order:
        raise FormulaMismatch("the basic-set formulas do not partition H")
    A = sring_from_partition(H, [sorted(S) for S in sets])

    gens, images = _sigmas(plan)
    sigmas, error, K = [], None, None
    for k, im in enumerate(images, 1):
        try:
            sigmas.append(automorphism_from_images(H, gens, im))
        except (NotAHomomorphism, NotBijective) as exc:
            error = f"sigma{k}: {exc}"
            sigmas = None
            break
    if sigmas is not None:
        K = PermutationGroup(H.order, [s.table for s in sigmas])
        if tuple(sorted(K.orbits(), key=lambda c: (len(c), c[0]))) != A.classes:
            raise FormulaMismatch("orbits of K differ from the basic-set formulas")

    index = {frozenset(c): k for k, c in enumerate(A.classes)}
    phi = list(range(A.rank))
    W = set()
    jmax = plan.A2.order if plan.branch == CYCLIC else 2
    for i in range(1, plan.p1):
        for j in range(1, jmax):
            X = index[xnames[(i, j)]]
            W.add(X)
            phi[X] = index[xnames[(plan.p1 - i, j)]]
    return Construction(plan, A, tuple(phi), sorted(W), sigmas, error, K)


def build_prop31_sring(plan: WitnessPlan) -> tuple[SRing, AlgebraicIso]:
    """The S-ring A over H and the algebraic automorphism φ."""
    c = construct(plan)
    return c.A, algebraic_iso_from_map(c.A, c.A, c.phi_map)


def lift_by_wreath(
    A: SRing, phi: AlgebraicIso, G: AbelianGroup, embedding: Sequence[int] | None = None
) -> tuple[SRing, AlgebraicIso]:
    """B = A ≀ Z(G/H) and ψ: φ on the classes from A, identity on cosets."""
    B = wreath_product(A, G, embedding)
    if embedding is None:
        embedding = range(G.order)
    inner = transport(A, G, embedding)
    pos = {c: B.classes.index(c) for c in inner}
    psi = list(range(B.rank))
    for X, c in enumerate(inner):
        psi[pos[c]] = pos[inner[phi.class_map[X]]]
    psi = algebraic_iso_from_map(B, B, psi)
    for X, c in enumerate(inner):
        if psi.class_map[pos[c]] != pos[inner[phi.class_map[X]]]:
            raise InvalidAlgebraicIso("restriction of the lift differs from φ")
    return B, psi


# ---------------------------------------------------------------------------
# certificates


@dataclass
class WitnessCertificate:
    group: str
    plan: dict
    sigmas: list | None
    K_order: int | None
    sring: dict
    rank_A: int
    phi: list[int]
    checks: dict
    details: dict = field(default_factory=dict)
    conclusion: str | None = None
    schema: int = SCHEMA

    def to_dict(self) -> dict:
        d = asdict(self)
        return {
            "schema": d.pop("schema"),
            "group": d.pop("group"),
            "plan": d.pop("plan"),
            "sigmas": d.pop("sigmas"),
            "K_order": d.pop("K_order"),
            "sring": d.pop("sring"),
            "rank_A": d.pop("rank_A"),
            "phi": d.pop("phi"),
            "checks": d.pop("checks"),
            "details": d.pop("details"),
            "conclusion": d.pop("conclusion"),
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d: dict) -> WitnessCertificate:
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported certificate schema {d.get('schema')!r}")
        fields = dict(d)
        return cls(**fields)

    @classmethod
    def from_json(cls, text: str) -> WitnessCertificate:
        return cls.from_dict(json.loads(text))

    @property
    def conclusive(self) -> bool:
        return self.conclusion is not None

    def recheck(self) -> bool:
        """Re-validate the stored S-ring and φ from scratch."""
        A = SRing.from_dict(self.sring)
        algebraic_iso_from_map(A, A, self.phi)
        return check_eq1(A) and A.rank == self.rank_A


def _product_patterns(A: SRing, phi: Sequence[int], W: list[int], branch: str):
    """First pair (X, Y) of W breaking the expected product shape, or None."""
    for X in W:
        for Y in W:
            prod = A.product(X, Y)
            if branch == E4:
                ok = prod == A.product(phi[X], phi[Y])
            elif X == Y:
                rest = {Z: c for Z, c in prod.items() if Z != 0}
                ok = prod.get(0) == 2 and len(rest) == 1 and set(rest.values()) == {1}
            else:
                ok = not prod.get(0) and set(prod.values()) == {1}
            if not ok:
                return X, Y
    return None


def witness_from_plan(plan: WitnessPlan, budget=None, direct_search: bool = True) -> WitnessCertificate:
    c = construct(plan)
    A, H = c.A, plan.H
    checks: dict = {}
    details: dict = {}

    checks["eq1"] = check_eq1(A)
    checks["row_sums"] = check_row_sums(A)
    checks["sigmas_are_automorphisms"] = c.sigmas is not None
    if c.sigma_error:
        details["sigma_error"] = c.sigma_error
    checks["basic_sets_match_formulas"] = True if c.K is not None else None
    checks["all_classes_symmetric"] = all(A.is_symmetric(X) for X in range(A.rank))
    checks["W_sizes_two"] = all(A.sizes[X] == 2 for X in c.W)
    checks["phi_size_preserving"] = all(A.sizes[X] == A.sizes[Y] for X, Y in enumerate(c.phi_map))
    checks["phi_involution"] = all(c.phi_map[c.phi_map[X]] == X for X in range(A.rank))
    try:
        phi = algebraic_iso_from_map(A, A, c.phi_map)
        checks["phi_is_alg_auto"] = True
    except InvalidAlgebraicIso as exc:
        phi = None
        checks["phi_is_alg_auto"] = False
        details["phi_error"] = str(exc)
    bad = _product_patterns(A, c.phi_map, c.W, plan.branch)
    checks["product_patterns"] = bad is None
    if bad is not None:
        details["product_pattern_failure"] = [[list(H.element(x)) for x in A.classes[X]] for X in bad]

    U = subgroup_generated(H, plan.H1.generators + plan.a2)
    sw = is_s_wreath(A, Section(U, plan.A2))
    checks["A_is_s_wreath"] = sw.holds and sw.proper

    aut = scheme_automorphism_search(A, budget)
    checks["A_schurian"] = orbits_match_classes(A, aut.group)
    details["A"] = {"aut_e_order": aut.order, "aut_e_orbits": len(aut.orbits()), "nodes": aut.nodes}

    F = fusion(A, [phi] if phi is not None else [])
    checks["fusion_rank"] = F.rank
    faut = scheme_automorphism_search(F, budget)
    checks["fusion_non_schurian"] = not orbits_match_classes(F, faut.group)
    details["fusion"] = {
        "aut_e_order": faut.order,
        "aut_e_orbits": len(faut.orbits()),
        "nodes": faut.nodes,
    }

    if phi is not None and (H.order < plan.G.order or plan.embedding != tuple(range(H.order))):
        try:
            B, psi = lift_by_wreath(A, phi, plan.G, plan.embedding)
            checks["lift_valid"] = True
            details["lift"] = {"rank": B.rank, "index": plan.G.order // H.order}
        except InvalidAlgebraicIso as exc:
            checks["lift_valid"] = False
            details["lift"] = {"error": str(exc)}
    else:
        checks["lift_valid"] = phi is not None
        details["lift"] = {"rank": A.rank, "index": 1}

    if direct_search and phi is not None:
        res = find_inducing_iso(phi, budget)
        checks["direct_search_not_found"] = {
            Status.NOT_FOUND: True,
            Status.FOUND: False,
            Status.TIMEOUT: None,
        }[res.status]
        details["direct_search"] = res.to_dict()
    else:
        checks["direct_search_not_found"] = None

    conclusion = None
    if checks["A_schurian"] and checks["phi_is_alg_auto"] and checks["fusion_non_schurian"]:
        if checks["lift_valid"]:
            conclusion = f"{plan.G.name} is not weakly separable"

    sigmas = None
    if c.sigmas is not None:
        gens, _ = _sigmas(plan)
        sigmas = [[list(H.element(s(g))) for g in gens] for s in c.sigmas]
    return WitnessCertificate(
        group=plan.G.literal,
        plan=plan.to_dict(),
        sigmas=sigmas,
        K_order=c.K.order() if c.K is not None else None,
        sring=A.to_dict(),
        rank_A=A.rank,
        phi=list(c.phi_map),
        checks=checks,
        details=details,
        conclusion=conclusion,
    )


def build_witness(spec, budget=None, direct_search: bool = True) -> WitnessCertificate:
    """Certificate for the group with the given primary factors."""
    G = spec if isinstance(spec, AbelianGroup) else make_group(spec)
    dec = prop31_decomposition(G)
    if dec is None:
        raise NotApplicable(f"{G.name} has no suitable H1 x H2 decomposition")
    plan = make_plan(dec.h1, dec.h2, G)
    return witness_from_plan(plan, budget, direct_search)
