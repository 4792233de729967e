import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_orbits, brute_aut_stabilizer, pruned_aut_stabilizer
from strategies import cyclotomic_rings
from schurkit.errors import BudgetExceeded, ConstantMismatch, NotASchemeIsomorphism, SizeMismatch
from schurkit.groups import inversion, make_group, power_automorphism
from schurkit.morphisms import (
    Status,
    algebraic_iso_from_map,
    default_budget,
    find_algebraic_autos,
    find_algebraic_isos,
    find_inducing_iso,
    identity_iso,
    induced_algebraic_iso,
    is_scheme_isomorphism,
    is_schurian,
    scheme_automorphism_search,
    scheme_stabilizer_autos,
    separability_report,
)
from schurkit.permgrp import compose, translation
from schurkit.sring import cyclotomic, group_ring, rank_two, sring_from_partition
from schurkit.witness import construct, make_plan


def c120():
    c = construct(make_plan((3, 5), (8,)))
    return c.A, algebraic_iso_from_map(c.A, c.A, c.phi_map)


def test_algebraic_iso_from_map():
    A = rank_two(make_group([7]))
    assert identity_iso(A).is_identity()
    B = sring_from_partition(make_group([4]), [[0], [2], [1, 3]])
    with pytest.raises(SizeMismatch):
        algebraic_iso_from_map(B, B, [0, 2, 1])
    C = sring_from_partition(make_group([2, 4]), [[x] for x in range(8)])
    with pytest.raises(ConstantMismatch) as exc:
        algebraic_iso_from_map(C, C, [0, 2, 1, 3, 4, 5, 6, 7])
    assert exc.value.args


def test_c120_phi_is_algebraic_and_order_two():
    A, phi = c120()
    assert phi.order() == 2
    assert phi in find_algebraic_autos(A) or any(p.class_map == phi.class_map for p in find_algebraic_autos(A))


def test_find_algebraic_autos_examples():
    assert len(find_algebraic_autos(rank_two(make_group([6])))) == 1
    ZC4 = group_ring(make_group([4]))
    autos = find_algebraic_autos(ZC4)
    assert len(autos) == 2
    brute = []
    for perm in itertools.permutations(range(1, 4)):
        try:
            brute.append(algebraic_iso_from_map(ZC4, ZC4, (0,) + perm))
        except (ConstantMismatch, SizeMismatch):
            pass
    assert sorted(a.class_map for a in autos) == sorted(b.class_map for b in brute)


def test_induced_algebraic_iso_examples():
    G = make_group([5])
    ZG = group_ring(G)
    assert induced_algebraic_iso(tuple(range(5)), ZG).is_identity()
    for g in range(5):
        assert induced_algebraic_iso(translation(G, g), ZG).is_identity()
    phi = induced_algebraic_iso(inversion(G).table, ZG)
    assert phi.class_map == (0, 4, 3, 2, 1)
    with pytest.raises(NotASchemeIsomorphism):
        induced_algebraic_iso((0, 2, 1, 3, 4), ZG)


def test_find_inducing_iso_examples():
    ZC4 = group_ring(make_group([4]))
    for phi in find_algebraic_autos(ZC4):
        res = find_inducing_iso(phi)
        assert res.status is Status.FOUND
        if not phi.is_identity():
            assert res.witness == (0, 3, 2, 1)


def test_c120_phi_is_induced():
    # Recorded deviation: a point bijection inducing φ exists on C120.
    A, phi = c120()
    res = find_inducing_iso(phi)
    assert res.status is Status.FOUND
    f = res.witness
    col = A.color_matrix
    for x in range(120):
        for y in range(120):
            assert col[f[x], f[y]] == phi.class_map[col[x, y]]


def test_timeout_is_not_notfound():
    A, phi = c120()
    res = find_inducing_iso(phi, budget=1)
    assert res.status is Status.TIMEOUT
    with pytest.raises(BudgetExceeded):
        scheme_automorphism_search(A, budget=2)


def test_budget_env(monkeypatch):
    monkeypatch.setenv("SCHURKIT_BUDGET", "123")
    assert default_budget() == 123


def test_scheme_stabilizer_examples():
    G = make_group([2, 3])
    assert scheme_stabilizer_autos(group_ring(G)).order() == 1
    assert scheme_stabilizer_autos(rank_two(G)).order() == 120
    A, _ = c120()
    aut = scheme_automorphism_search(A)
    assert aut.order == 648 == aut.group.order()


def test_schurity_examples():
    assert is_schurian(rank_two(make_group([8])))
    G = make_group([9, 9])
    assert is_schurian(cyclotomic(G, [power_automorphism(G, 2)]))
    c = construct(make_plan((9,), (9,)))
    from schurkit.sring import fusion

    F = fusion(c.A, [algebraic_iso_from_map(c.A, c.A, c.phi_map)])
    assert not is_schurian(F)


def test_separability_report_examples():
    for A in (rank_two(make_group([6])), group_ring(make_group([2, 2]))):
        rep = separability_report(A)
        assert rep.verdict == "separable within scope"
    c = construct(make_plan((9,), (9,)))
    rep = separability_report(c.A)
    assert rep.verdict == "not separable"
    assert any(p.class_map == c.phi_map for p in rep.culprits)
    assert all(r.status is not Status.TIMEOUT for _, r in rep.entries)


def test_algebraic_isos_between_rings():
    G = make_group([7])
    A = cyclotomic(G, [power_automorphism(G, 2)])
    B = cyclotomic(G, [power_automorphism(G, 4)])
    assert len(find_algebraic_isos(A, B)) == 2


@settings(max_examples=25, deadline=None)
@given(cyclotomic_rings(max_order=8))
def test_stabilizer_against_brute_force(A):
    col = A.color_matrix.tolist()
    brute = brute_aut_stabilizer(col)
    aut = scheme_automorphism_search(A)
    assert aut.order == len(brute)
    orbs = sorted(bfs_orbits(A.group.order, brute), key=lambda o: (len(o), o[0]))
    assert sorted(aut.orbits(), key=lambda o: (len(o), o[0])) == orbs


@settings(max_examples=25, deadline=None)
@given(cyclotomic_rings(max_order=16))
def test_stabilizer_against_pruned_oracle(A):
    if A.rank < 4:
        return
    aut = scheme_automorphism_search(A)
    assert aut.order == len(pruned_aut_stabilizer(A.color_matrix.tolist()))


@settings(max_examples=30, deadline=None)
@given(cyclotomic_rings(max_order=24))
def test_cyclotomic_rings_are_schurian(A):
    assert is_schurian(A)


@settings(max_examples=30, deadline=None)
@given(cyclotomic_rings(max_order=16))
def test_aut_alg_is_a_group(A):
    autos = find_algebraic_autos(A)
    maps = {a.class_map for a in autos}
    for a in autos:
        assert a.inverse().class_map in maps
        for b in autos:
            assert a.then(b).class_map in maps
    for a in autos:
        assert all(A.sizes[X] == A.sizes[a.class_map[X]] for X in range(A.rank))
        inv = A.inverse_class
        assert all(a.class_map[inv[X]] == inv[a.class_map[X]] for X in range(A.rank))


@settings(max_examples=30, deadline=None)
@given(cyclotomic_rings(max_order=20), st.integers(0, 10**6))
def test_found_witnesses_and_translations(A, seed):
    rng = random.Random(seed)
    G = A.group
    for phi in find_algebraic_autos(A)[:4]:
        res = find_inducing_iso(phi)
        if res.status is not Status.FOUND:
            continue
        f = res.witness
        assert is_scheme_isomorphism(f, phi)
        g = rng.randrange(G.order)
        shifted = compose(f, translation(G, g))
        assert is_scheme_isomorphism(shifted, phi)
        assert induced_algebraic_iso(shifted, A).class_map == phi.class_map


@settings(max_examples=20, deadline=None)
@given(cyclotomic_rings(max_order=16))
def test_induced_respects_composition(A):
    found = []
    for phi in find_algebraic_autos(A)[:4]:
        res = find_inducing_iso(phi)
        if res.status is Status.FOUND:
            found.append(res.witness)
    for f in found:
        for g in found:
            fg = compose(f, g)
            lhs = induced_algebraic_iso(fg, A)
            rhs = induced_algebraic_iso(f, A).then(induced_algebraic_iso(g, A))
            assert lhs.class_map == rhs.class_map
