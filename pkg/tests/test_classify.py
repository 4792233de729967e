import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import abelian_specs, theorem1_patterns
from schurkit.classify import (
    Verdict,
    arith_invariants,
    classify,
    contains_external_e4c4,
    contains_square,
    prop31_decomposition,
    sylow_screen,
    theorem1_family,
    theorem3_family,
)
from schurkit.errors import CyclicInput, ElementaryAbelianInput
from schurkit.groups import make_group

ALL_1000 = [make_group(fs) for fs in abelian_specs(1000)]


def test_arith_invariants():
    assert arith_invariants(15) == (2, 2, 2)
    assert arith_invariants(8) == (1, 3, 2)
    assert arith_invariants(2) == (1, 1, 0)


def test_theorem1_examples():
    f = theorem1_family(20)
    assert f.tag == "pq^k" and f.params == {"p": 5, "q": 2, "k": 2}
    f = theorem1_family(60)
    assert f.tag == "2pqr" and sorted(f.params.values()) == [2, 3, 5]
    assert theorem1_family(120) is None
    assert theorem1_family(1).tag == "p^k"


def test_theorem1_against_patterns():
    oracle = theorem1_patterns(1000)
    for n in range(1, 1001):
        f = theorem1_family(n)
        assert (None if f is None else f.tag) == oracle[n], n


@pytest.mark.parametrize(
    "spec, number",
    [
        ([2, 8], 1),
        ([2, 4, 3], 2),
        ([2, 2, 5], 3),
        ([2, 2, 25], 3),
        ([2, 2, 3, 5], 4),
        ([2, 2, 2, 5], 4),
        ([3, 9], 5),
        ([2, 3, 9], 6),
        ([2, 3, 3], 6),
        ([3, 3, 5], 7),
        ([3, 3, 4], 8),
        ([2, 3, 3, 3], 8),
        ([2, 3, 3, 5], 8),
    ],
)
def test_theorem3_families(spec, number):
    assert theorem3_family(spec).number == number


def test_theorem3_rejects():
    assert theorem3_family([4, 4]) is None
    assert theorem3_family([3, 3, 2]).number == 6  # C6 x C3 lands in family 6
    with pytest.raises(CyclicInput):
        theorem3_family([3, 5])
    with pytest.raises(ElementaryAbelianInput):
        theorem3_family([2, 2])


def test_sylow_examples():
    assert sylow_screen([2, 2, 2])[2].admissible
    rep = sylow_screen([5, 5])[5]
    assert not rep.admissible and "p >= 5" in rep.clause
    rep = sylow_screen([2, 2, 2, 2])[2]
    assert not rep.admissible and "four" in rep.clause


def test_prop31_examples():
    d = prop31_decomposition([3, 5, 8])
    assert (d.h1, d.h2, d.shape) == ((3, 5), (8,), "odd-8")
    assert prop31_decomposition([4, 5]) is None
    assert prop31_decomposition([2, 2, 3, 3]) is None


def test_classify_examples():
    v = classify([3, 5, 8])
    assert (v.status, v.reason, v.witness_route) == ("NotWeaklySeparable", "Theorem1Exclusion", "Prop31")
    assert classify([2, 2, 5]).status == "KnownSeparableKA"
    v = classify([4, 4])
    assert (v.status, v.reason, v.witness_route) == ("NotWeaklySeparable", "Theorem3Exclusion", "SquareLemma")
    assert classify([2, 2, 2]).status == "KnownSeparableKA"
    v = classify([5, 5])
    assert (v.reason, v.witness_route) == ("Theorem2Exclusion", "SquareLemma")
    v = classify([2, 2, 8])
    assert v.witness_route == "ExternalE4C4"
    assert classify([8]).status == "KnownSeparableKA"
    assert classify([4, 5]).status == "Candidate"


def test_square_and_external_detection():
    assert contains_square([4, 4]) and contains_square([2, 2, 3, 3])
    assert not contains_square([2, 2]) and not contains_square([3, 9])
    assert contains_external_e4c4([2, 2, 8]) and contains_external_e4c4([3, 3, 9])
    assert not contains_external_e4c4([2, 2, 2])


def test_verdict_json_roundtrip():
    v = classify([3, 5, 8])
    assert Verdict.from_dict(v.to_dict()) == v


def test_classify_total_and_consistent():
    for G in ALL_1000:
        v = classify(G)
        assert v == classify(G)
        if v.status == "NotWeaklySeparable":
            assert v.reason is not None
            assert v.witness_route in ("Prop31", "SquareLemma", "ExternalE4C4", "None")
        else:
            assert v.family is not None


def test_sylow_inadmissible_implies_excluded():
    for G in ALL_1000:
        if not all(r.admissible for r in sylow_screen(G).values()):
            assert classify(G).status == "NotWeaklySeparable", G


def test_families_never_sylow_excluded():
    for G in ALL_1000:
        if G.is_cyclic() or G.is_elementary():
            continue
        if theorem3_family(G) is not None:
            assert all(r.admissible for r in sylow_screen(G).values()), G


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 25]), min_size=1, max_size=4))
def test_classify_is_order_independent(fs):
    assert classify(fs) == classify(list(reversed(fs)))
