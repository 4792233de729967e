"""Which abelian groups can be weakly separable.

Everything here is arithmetic on the primary-factor multiset of a group:
the cyclic and elementary abelian cases go through the order alone, the
rest through per-prime types (the sorted list of exponents of the cyclic
factors of each Sylow subgroup).

>>> classify([3, 5, 8]).to_dict()["witness_route"]
'Prop31'
>>> theorem1_family(60).tag
'2pqr'
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, NamedTuple

from .groups import AbelianGroup, factorize, make_group, prime_power

KNOWN_ELEMENTARY = (4, 8, 9, 27)


def _spec(spec) -> AbelianGroup:
    return spec if isinstance(spec, AbelianGroup) else make_group(spec)


def _ptypes(G: AbelianGroup) -> dict[int, list[int]]:
    """{p: exponents of the cyclic p-factors, descending}."""
    out: dict[int, list[int]] = {}
    for q in G.primary_factors:
        p, k = prime_power(q)
        out.setdefault(p, []).append(k)
    return {p: sorted(ks, reverse=True) for p, ks in sorted(out.items())}


def _omega(n: int) -> int:
    return sum(factorize(n).values())


def arith_invariants(n: int) -> tuple[int, int, int]:
    """(ω(n), Ω(n), Ω*(n)); Ω* drops one factor 2 from even n."""
    if n < 1:
        raise ValueError("n must be positive")
    f = factorize(n)
    big = sum(f.values())
    star = big if n % 2 else _omega(n // 2)
    return len(f), big, star


@dataclass(frozen=True)
class Family:
    tag: str
    params: dict = field(default_factory=dict)
    number: int | None = None

    def to_dict(self) -> dict:
        d = {"tag": self.tag, "params": dict(self.params)}
        if self.number is not None:
            d["number"] = self.number
        return d


# ---------------------------------------------------------------------------
# cyclic groups

THEOREM1_TAGS = ("p^k", "pq^k", "2pq^k", "pqr", "2pqr")


def _match_pqk(m: int) -> dict | None:
    """m = p * q^k with p != q prime, k >= 0; smallest p wins."""
    f = factorize(m)
    if len(f) == 1:
        (p, e), = f.items()
        return {"p": p, "q": None, "k": 0} if e == 1 else None
    if len(f) != 2:
        return None
    for p in sorted(f):
        if f[p] == 1:
            (q, k), = ((q, k) for q, k in f.items() if q != p)
            return {"p": p, "q": q, "k": k}
    return None


def _match_pqr(m: int) -> dict | None:
    f = factorize(m)
    if len(f) == 3 and all(e == 1 for e in f.values()):
        p, q, r = sorted(f)
        return {"p": p, "q": q, "r": r}
    return None


def theorem1_family(n: int) -> Family | None:
    """First of p^k, pq^k, 2pq^k, pqr, 2pqr that fits n.

    The primes inside a pattern are distinct; any of them may be 2, so the
    leading 2 of the last two patterns can coincide with p.
    """
    if n < 1:
        raise ValueError("n must be positive")
    f = factorize(n)
    if len(f) <= 1:
        (p, k), = f.items() if f else ((None, 0),)
        return Family("p^k", {"p": p, "k": k})
    m = _match_pqk(n)
    if m is not None:
        return Family("pq^k", m)
    if n % 2 == 0:
        m = _match_pqk(n // 2)
        if m is not None:
            return Family("2pq^k", m)
    m = _match_pqr(n)
    if m is not None:
        return Family("pqr", m)
    if n % 2 == 0:
        m = _match_pqr(n // 2)
        if m is not None:
            return Family("2pqr", m)
    return None


# ---------------------------------------------------------------------------
# neither cyclic nor elementary abelian

THEOREM3_TAGS = {
    1: "C2xC2^k",
    2: "C2pxC2^k",
    3: "E4xCp^k",
    4: "E4xCpq",
    5: "C3xC3^k",
    6: "C6xC3^k",
    7: "E9xCq",
    8: "E9xC2q",
}


def _theorem3_match(t: dict[int, list[int]]) -> tuple[int, dict] | None:
    primes = sorted(t)
    odd = [p for p in primes if p != 2]
    t2, t3 = t.get(2), t.get(3)
    others = {p: t[p] for p in primes if p not in (2, 3)}

    def cyclic_primes(ps):
        return all(t[p] == [1] for p in ps)

    # (1) C2 x C2^k, k >= 2
    if primes == [2] and len(t2) == 2 and t2[1] == 1 and t2[0] >= 2:
        return 1, {"k": t2[0]}
    # (2) C2p x C2^k = C2 x C2^k x Cp; k = 1 is E4 x Cp, left to (3)
    if t2 and len(t2) == 2 and t2[1] == 1 and t2[0] >= 2 and len(odd) == 1 and t[odd[0]] == [1]:
        return 2, {"p": odd[0], "k": t2[0]}
    # (3) E4 x Cp^k
    if t2 == [1, 1] and len(odd) == 1 and len(t[odd[0]]) == 1:
        return 3, {"p": odd[0], "k": t[odd[0]][0]}
    # (4) E4 x Cpq, p odd; q = 2 gives E8 x Cp
    if t2 == [1, 1] and len(odd) == 2 and cyclic_primes(odd):
        return 4, {"p": odd[0], "q": odd[1]}
    if t2 == [1, 1, 1] and len(odd) == 1 and t[odd[0]] == [1]:
        return 4, {"p": odd[0], "q": 2}
    # (5) C3 x C3^k, k >= 2
    if primes == [3] and len(t3) == 2 and t3[1] == 1 and t3[0] >= 2:
        return 5, {"k": t3[0]}
    # (6) C6 x C3^k
    if primes == [2, 3] and t2 == [1] and len(t3) == 2 and t3[1] == 1:
        return 6, {"k": t3[0]}
    # (7) E9 x Cq, q odd and q != 3
    if t3 == [1, 1] and len(primes) == 2 and 2 not in t:
        q = next(p for p in primes if p != 3)
        if t[q] == [1]:
            return 7, {"q": q}
    # (8) E9 x C2q: {3,3,4}, {2,3,3,3}, {2,3,3,q}
    if t3 == [1, 1] and primes == [2, 3] and t2 == [2]:
        return 8, {"q": 2}
    if t3 == [1, 1, 1] and primes == [2, 3] and t2 == [1]:
        return 8, {"q": 3}
    if t3 == [1, 1] and t2 == [1] and len(others) == 1 and cyclic_primes(others):
        return 8, {"q": next(iter(others))}
    return None


def theorem3_family(spec) -> Family | None:
    """Which of the eight families a non-cyclic, non-elementary group is in."""
    from .errors import CyclicInput, ElementaryAbelianInput

    G = _spec(spec)
    if G.is_cyclic():
        raise CyclicInput(f"{G.name} is cyclic")
    if G.is_elementary():
        raise ElementaryAbelianInput(f"{G.name} is elementary abelian")
    m = _theorem3_match(_ptypes(G))
    if m is None:
        return None
    num, params = m
    return Family(THEOREM3_TAGS[num], params, num)


# ---------------------------------------------------------------------------
# Sylow screening


@dataclass(frozen=True)
class SylowReport:
    p: int
    factors: tuple[int, ...]
    admissible: bool
    clause: str | None

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "factors": list(self.factors),
            "admissible": self.admissible,
            "clause": self.clause,
        }


def _sylow_clause(p: int, ks: list[int]) -> str | None:
    if len(ks) <= 1:
        return None
    if p >= 5:
        return "non-cyclic Sylow subgroup for p >= 5"
    if len(ks) >= 4:
        return "four or more cyclic factors"
    if ks[1] >= 2:
        return "contains C_{p^2} x C_{p^2}"
    if len(ks) == 3 and ks[0] >= 2:
        return "contains C_p x C_p x C_{p^k} with k >= 2"
    return None


def sylow_screen(spec) -> dict[int, SylowReport]:
    G = _spec(spec)
    out = {}
    for p, ks in _ptypes(G).items():
        clause = _sylow_clause(p, ks)
        out[p] = SylowReport(p, tuple(p**k for k in ks), clause is None, clause)
    return out


# ---------------------------------------------------------------------------
# decompositions used by the witness routes


class Prop31Decomposition(NamedTuple):
    h1: tuple[int, ...]
    h2: tuple[int, ...]
    shape: str


def _embeds(factors: Iterable[int], G: AbelianGroup) -> bool:
    """Whether the abelian group with these primary factors is a subgroup of G."""
    H = _ptypes(make_group(list(factors)))
    T = _ptypes(G)
    for p, ks in H.items():
        ts = T.get(p, [])
        if len(ks) > len(ts) or any(a > b for a, b in zip(ks, ts)):
            return False
    return True


def _odd_shapes(primes: list[int]) -> list[tuple[tuple[int, ...], bool]]:
    """Groups of order pq with p, q odd primes; flag marks p-groups."""
    out = []
    for p, q in combinations_with_replacement(primes, 2):
        if p == q:
            out.append(((p * p,), True))
            out.append(((p, p), True))
        else:
            out.append(((p, q), False))
    return out


def prop31_decomposition(spec) -> Prop31Decomposition | None:
    """Subgroups H1 x H2 <= G with |H1| = p1 q1 odd and |H2| = p2 q2, 4 q2 or 8.

    Shapes are tried in that order.  Within a shape, sides that are
    p-groups (or E8) come first, then the factor lists lexicographically.
    """
    G = _spec(spec)
    odd = sorted(p for p in factorize(G.order) if p != 2)
    h1s = _odd_shapes(odd)
    h2_by_shape = {
        "odd-odd": _odd_shapes(odd),
        "odd-4q": [((4, q), False) for q in odd] + [((2, 2, q), False) for q in odd],
        "odd-8": [((8,), False), ((2, 4), False), ((2, 2, 2), True)],
    }
    for shape, h2s in h2_by_shape.items():
        best = None
        for h1, s1 in h1s:
            for h2, s2 in h2s:
                if not _embeds(h1 + h2, G):
                    continue
                key = (not s1, not s2, h1, h2)
                if best is None or key < best[0]:
                    best = (key, h1, h2)
        if best is not None:
            return Prop31Decomposition(best[1], best[2], shape)
    return None


def square_subgroup(spec) -> tuple[int, ...]:
    """Primary factors of the largest H with H x H <= G."""
    G = _spec(spec)
    out = []
    for p, ks in _ptypes(G).items():
        out += [p**k for k in ks[1::2]]
    return tuple(out)


def contains_square(spec, minimum: int = 4) -> bool:
    h = square_subgroup(spec)
    prod = 1
    for q in h:
        prod *= q
    return prod >= minimum


def contains_external_e4c4(spec) -> bool:
    """C_p x C_p x C_{p^k} <= G for some p in {2, 3} and k >= 2."""
    T = _ptypes(_spec(spec))
    return any(p in (2, 3) and len(ks) >= 3 and ks[0] >= 2 for p, ks in T.items())


# ---------------------------------------------------------------------------
# verdicts


STATUSES = ("KnownSeparableKA", "Candidate", "NotWeaklySeparable")
REASONS = ("Theorem1Exclusion", "Theorem2Exclusion", "Theorem3Exclusion")
ROUTES = ("Prop31", "SquareLemma", "ExternalE4C4", "None")


@dataclass(frozen=True)
class Verdict:
    group: str
    status: str
    family: str | None = None
    reason: str | None = None
    witness_route: str | None = None

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "status": self.status,
            "family": self.family,
            "reason": self.reason,
            "witness_route": self.witness_route,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> Verdict:
        return cls(d["group"], d["status"], d.get("family"), d.get("reason"), d.get("witness_route"))


def witness_route(spec) -> str:
    if prop31_decomposition(spec) is not None:
        return "Prop31"
    if contains_square(spec):
        return "SquareLemma"
    if contains_external_e4c4(spec):
        return "ExternalE4C4"
    return "None"


def _known_theorem3(t: dict[int, list[int]]) -> bool:
    primes = sorted(t)
    if primes in ([2], [3]) and len(t[primes[0]]) == 2 and t[primes[0]][1] == 1:
        return True  # C2 x C2^k, C3 x C3^k
    odd = [p for p in primes if p != 2]
    return t.get(2) == [1, 1] and len(odd) == 1 and t[odd[0]] == [1]  # E4 x Cp


def classify(spec) -> Verdict:
    G = _spec(spec)
    name = G.literal
    if G.is_cyclic():
        fam = theorem1_family(G.order)
        if fam is None:
            return Verdict(name, "NotWeaklySeparable", None, "Theorem1Exclusion", witness_route(G))
        status = "KnownSeparableKA" if fam.tag == "p^k" else "Candidate"
        return Verdict(name, status, fam.tag)
    if G.is_elementary():
        if G.order in KNOWN_ELEMENTARY:
            return Verdict(name, "KnownSeparableKA", f"E{G.order}")
        return Verdict(name, "NotWeaklySeparable", None, "Theorem2Exclusion", witness_route(G))
    fam = theorem3_family(G)
    if fam is None:
        return Verdict(name, "NotWeaklySeparable", None, "Theorem3Exclusion", witness_route(G))
    status = "KnownSeparableKA" if _known_theorem3(_ptypes(G)) else "Candidate"
    return Verdict(name, status, fam.tag)
