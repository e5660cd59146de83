from collections import Counter

import pytest

from builders import build_path
from chain_core import Basis, Chain, ModuleMap, apply_map, is_part_of, l1_norm
from conftest import square_cycle
from coned_off import ConedOffSpec, build_coned_off
from connectivity import (UnitChain, d1_neighbors, decompose, decompose_greedy, enumerate_Dn, enumerate_Dn_upto,
                          is_rho_connected, is_rho_connected_by_ordering, maximal_connected_part, rho_intersects,
                          target_support, unit_neighbors, unit_parts)
from errors import ChainInputError
from filling import all_chains_upto, chains_of_norm
from fv import enumerate_cycles


def test_unit_parts(abc):
    assert unit_parts(Chain.from_labels(abc, {"a": 2, "b": -1})) == [UnitChain(0, 1), UnitChain(0, 1), UnitChain(1, -1)]
    assert unit_parts(Chain.zero(abc)) == []
    assert unit_parts(Chain.unit(abc, 2, -1)) == [UnitChain(2, -1)]


def test_rho_intersects(path2):
    d1 = path2.boundary(1)
    e1, e2 = path2.cell(1, "e1"), path2.cell(1, "e2")
    assert rho_intersects(d1, e1, e2)
    assert not rho_intersects(d1, e1, -e2)
    assert not rho_intersects(d1, e1, Chain.zero(d1.source))

    path3 = build_path(3)
    assert not rho_intersects(path3.boundary(1), path3.cell(1, "e1"), path3.cell(1, "e3"))


def test_target_support(path2, abc):
    d1 = path2.boundary(1)
    assert target_support(d1, d1.target.index_of("v1")) == {0, 1}
    assert target_support(ModuleMap.zero(abc, Basis("t", ("t",))), 0) == frozenset()
    with pytest.raises(ChainInputError):
        target_support(d1, 3)


def test_target_support_of_a_cone_vertex():
    complex_ = build_coned_off(ConedOffSpec("Free2", 1))
    d1 = complex_.boundary(1)
    cone = target_support(d1, d1.target.index_of("P_1"))
    assert {d1.source.labels[s] for s in cone} == {"c_1", "c_b", "c_B"}


def test_d1_neighbors(path2, abc):
    d1 = path2.boundary(1)
    assert d1_neighbors(d1, path2.cell(1, "e1")) == {UnitChain(1, 1), UnitChain(0, -1)}
    zero_map = ModuleMap.zero(abc, Basis("t", ("t",)))
    assert d1_neighbors(zero_map, Chain.unit(abc, 0)) == frozenset()


def test_unit_neighbors_match_d1_neighbors(grid1):
    d1 = grid1.boundary(1)
    table = unit_neighbors(d1)
    assert len(table) == 2 * d1.source.size
    for unit, neighbours in table.items():
        assert neighbours == d1_neighbors(d1, unit.to_chain(d1.source))


def test_is_rho_connected(grid1, grid3):
    d1 = grid3.boundary(1)
    assert is_rho_connected(d1, grid3.cell(1, "h1_1"))
    assert is_rho_connected(grid1.boundary(1), square_cycle(grid1, 0, 0))
    assert not is_rho_connected(d1, square_cycle(grid3, 0, 0) + square_cycle(grid3, 2, 2))
    with pytest.raises(ChainInputError):
        is_rho_connected(d1, Chain.zero(d1.source))


def test_multiples_of_one_unit_are_not_connected(abc):
    rho = ModuleMap(abc, Basis("t", ("t",)), tuple(Chain.unit(Basis("t", ("t",)), 0) for _ in range(3)))
    assert not is_rho_connected(rho, Chain.from_labels(abc, {"a": 2}))
    assert is_rho_connected(rho, Chain.from_labels(abc, {"a": 1, "b": -1}))


@pytest.mark.parametrize("norm", [1, 2, 3, 4, 5, 6])
def test_graph_method_matches_the_ordering_search(grid1, tetra_solid, tetra_hollow, norm):
    maps = (grid1.boundary(1), grid1.boundary(2), tetra_solid.boundary(1), tetra_solid.boundary(2),
            tetra_solid.boundary(3), tetra_hollow.boundary(1), tetra_hollow.boundary(2))
    for rho in maps:
        for x in chains_of_norm(rho.source, norm):
            assert is_rho_connected(rho, x) == is_rho_connected_by_ordering(rho, x), x


@pytest.mark.parametrize("norm", [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_graph_method_matches_the_ordering_search_on_the_3x3_grid(grid3, norm):
    for rho in (grid3.boundary(1), grid3.boundary(2)):
        for x in chains_of_norm(rho.source, norm):
            assert is_rho_connected(rho, x) == is_rho_connected_by_ordering(rho, x), x


@pytest.mark.parametrize("norm", [5, pytest.param(6, marks=pytest.mark.slow)])
def test_graph_method_matches_the_ordering_search_on_large_3x3_chains(grid3, norm):
    # edges: every chain of 𝒟ₙ and every kernel element; squares: every chain
    d1, d2 = grid3.boundary(1), grid3.boundary(2)
    candidates = set(enumerate_Dn(d1, norm))
    candidates.update(z for z in enumerate_cycles(d1, norm) if l1_norm(z) == norm)
    assert candidates
    for x in candidates:
        assert is_rho_connected(d1, x) == is_rho_connected_by_ordering(d1, x), x
    for x in chains_of_norm(d2.source, norm):
        assert is_rho_connected(d2, x) == is_rho_connected_by_ordering(d2, x), x


def test_decompose_simple_cases(grid3):
    d1 = grid3.boundary(1)
    assert decompose(d1, Chain.zero(d1.source)) == []
    gamma = square_cycle(grid3, 1, 1)
    assert decompose(d1, gamma) == [gamma]
    a, b = square_cycle(grid3, 0, 0), square_cycle(grid3, 2, 2)
    assert set(decompose(d1, a + b)) == {a, b}


def test_decompose_rejects_chains_outside_the_kernel(path2):
    with pytest.raises(ChainInputError) as info:
        decompose(path2.boundary(1), path2.cell(1, "e1"))
    assert info.value.witness is not None


def check_decomposition(rho, z, parts):
    assert sum(parts, Chain.zero(rho.source)) == z
    assert sum(l1_norm(x) for x in parts) == l1_norm(z)
    assert len(parts) <= l1_norm(z)
    for x in parts:
        assert not apply_map(rho, x)
        assert is_part_of(x, z)
        assert is_rho_connected(rho, x)


@pytest.mark.parametrize("norm", [4, pytest.param(6, marks=pytest.mark.slow)])
def test_decomposition_properties(grid3, tetra_solid, norm):
    for rho in (grid3.boundary(1), tetra_solid.boundary(1), tetra_solid.boundary(2)):
        for z in enumerate_cycles(rho, norm):
            parts = decompose(rho, z)
            check_decomposition(rho, z, parts)
            assert Counter(decompose_greedy(rho, z)) == Counter(parts)


def test_maximal_connected_part(grid3):
    d1 = grid3.boundary(1)
    a, b = square_cycle(grid3, 0, 0), square_cycle(grid3, 2, 2)
    assert maximal_connected_part(d1, a + b) == a
    with pytest.raises(ChainInputError):
        maximal_connected_part(d1, a, seed=UnitChain(d1.source.index_of("h0_0"), -1))


def test_D1_is_every_signed_unit(grid1):
    d1 = grid1.boundary(1)
    assert len(enumerate_Dn(d1, 1)) == 2 * d1.source.size
    assert enumerate_Dn(d1, 0) == frozenset()
    with pytest.raises(ChainInputError):
        enumerate_Dn(d1, -1)


def test_Dn_on_a_zero_map_stops_at_units(abc):
    rho = ModuleMap.zero(abc, Basis("t", ("t",)))
    assert enumerate_Dn(rho, 2) == frozenset()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_Dn_matches_the_definition(path2, grid1, n):
    for rho in (path2.boundary(1), grid1.boundary(1)):
        expected = {x for x in chains_of_norm(rho.source, n) if is_rho_connected(rho, x)}
        assert enumerate_Dn(rho, n) == expected


def test_Dn_on_the_path(path2):
    d1 = path2.boundary(1)
    e1, e2 = path2.cell(1, "e1"), path2.cell(1, "e2")
    d2 = enumerate_Dn(d1, 2)
    assert e1 + e2 in d2
    assert -e1 - e2 in d2
    assert e1 - e2 not in d2


def test_Dn_upto_is_the_union(grid1):
    d1 = grid1.boundary(1)
    expected = {x for x in all_chains_upto(d1.source, 3) if x and is_rho_connected(d1, x)}
    assert enumerate_Dn_upto(d1, 3) == expected
