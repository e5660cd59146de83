import math

import pytest

from builders import build_cycle, build_discrete, build_fixture, build_path
from chain_core import Chain, apply_map, l1_norm
from conftest import square_cycle
from connectivity import decompose, is_rho_connected
from errors import ChainInputError
from filling import BudgetExceeded, FillingSolver, Finite, all_chains_upto, filling_norm_oracle
from fv import (FvBudget, FvFinite, FvInfinite, cell_diameter_bound, complex_upper_bound, cycle_diameter,
                enumerate_cycles, fv, fv0, fv_table, fv_upper_bound, vertex_closure)


def test_enumerate_cycles_small_cases(grid2, grid3):
    assert enumerate_cycles(grid3.boundary(1), 0) == [Chain.zero(grid3.basis(1))]
    # zero plus both orientations of every unit square
    assert len(enumerate_cycles(grid2.boundary(1), 4)) == 9
    assert len(enumerate_cycles(grid3.boundary(1), 4)) == 19
    assert enumerate_cycles(build_path(3).boundary(1), 5) == [Chain.zero(build_path(3).basis(1))]
    with pytest.raises(ChainInputError):
        enumerate_cycles(grid2.boundary(1), -1)


def test_enumerate_cycles_is_exhaustive(grid1, cycle4):
    for rho in (grid1.boundary(1), cycle4.boundary(1)):
        brute = sorted((x for x in all_chains_upto(rho.source, 5) if not apply_map(rho, x)), key=Chain.sort_key)
        assert enumerate_cycles(rho, 5) == brute


def test_enumerate_cycles_is_sorted_and_distinct(grid2):
    cycles = enumerate_cycles(grid2.boundary(1), 6)
    assert cycles == sorted(cycles, key=Chain.sort_key)
    assert len(set(cycles)) == len(cycles)
    assert all(l1_norm(z) <= 6 for z in cycles)


def test_fv_at_zero_is_zero(tetra_solid, grid1):
    assert fv(tetra_solid, 2, 0).value == 0
    assert fv(grid1, 1, 0).value == 0


def test_fv_on_the_solid_tetrahedron(tetra_solid):
    assert fv(tetra_solid, 2, 3).value == 0
    entry = fv(tetra_solid, 2, 4)
    assert entry.value == 1
    assert l1_norm(entry.cycle) == 4
    assert apply_map(tetra_solid.boundary(3), entry.filling) == entry.cycle


def test_fv_on_the_grid(grid3):
    assert fv(grid3, 1, 4).value == 1


def test_fv_table_rows(tetra_solid):
    assert fv_table(tetra_solid, 2, 4).values() == [0, 0, 0, 0, 1]
    assert fv_table(build_path(4), 1, 5).values() == [0] * 6


def test_unfillable_triangle():
    table = fv_table(build_cycle(3), 1, 4)
    assert table.values() == [0, 0, 0, math.inf, math.inf]
    assert isinstance(table.rows[3], FvInfinite)
    assert l1_norm(table.rows[3].cycle) == 3
    assert table.rows[3].cell() == "inf"


def test_hollow_tetrahedron_is_infinite_at_four(tetra_hollow):
    entry = fv(tetra_hollow, 2, 4)
    assert isinstance(entry, FvInfinite)
    assert entry.obstruction.verify(tetra_hollow.boundary(3), entry.cycle)


def test_fv_budget_marker(grid2):
    table = fv_table(grid2, 1, 8, budget=3)
    assert table.values()[:8] == [0, 0, 0, 0, 1, 1, 2, 2]
    assert isinstance(table.rows[8], FvBudget)
    assert table.rows[8].cell() == "budget(3)"


def test_fv_rejects_bad_degrees(grid1):
    with pytest.raises(ChainInputError):
        fv(grid1, 3, 2)
    with pytest.raises(ChainInputError):
        fv_table(grid1, 1, -1)


def test_fv0_single_vertex():
    assert fv0(build_discrete(1), 3).value == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_fv0_on_paths_grows_with_length(n):
    entry = fv0(build_path(n), 2)
    assert entry.value == n
    assert l1_norm(entry.cycle) == 2


def test_fv0_disconnected_vertices():
    complex_ = build_discrete(2)
    entry = fv0(complex_, 2)
    assert isinstance(entry, FvInfinite)
    assert entry.cycle == complex_.chain(0, {"v1": 1, "v0": -1})


def test_upper_bound_on_the_grid(grid3):
    bound = complex_upper_bound(grid3, 1, 4)
    assert (bound.b_n, bound.bound) == (1, 4)
    assert fv(grid3, 1, 4).value <= bound.bound
    assert complex_upper_bound(grid3, 1, 0).bound == 0


def test_upper_bound_on_a_tree():
    tree = build_path(3)
    assert fv_upper_bound(tree.boundary(1), 4, tree.boundary(2)).bound == 0


def test_upper_bound_reports_infinite_kernel_elements():
    triangle = build_cycle(3)
    bound = complex_upper_bound(triangle, 1, 3)
    assert bound.is_infinite
    assert l1_norm(bound.infinite_witness) == 3


def test_upper_bound_needs_matching_maps(grid1, tetra_solid):
    with pytest.raises(ChainInputError):
        fv_upper_bound(grid1.boundary(1), 2, tetra_solid.boundary(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4, pytest.param(5, marks=pytest.mark.slow),
                               pytest.param(6, marks=pytest.mark.slow)])
def test_fv_is_below_n_times_bn(grid3, tetra_solid, n):
    for complex_, d in ((grid3, 1), (tetra_solid, 1), (tetra_solid, 2)):
        bound = complex_upper_bound(complex_, d, n)
        assert not bound.is_infinite
        assert fv(complex_, d, n).value <= bound.bound


@pytest.mark.slow
def test_finite_complexes_have_finite_tables(grid3, tetra_solid):
    solid = fv_table(tetra_solid, 2, 6)
    grid = fv_table(grid3, 1, 6)
    for table in (solid, grid):
        assert all(isinstance(row, FvFinite) for row in table.rows)
    assert solid.values()[4] == 1
    assert grid.values()[4] == 1


def test_cycle_diameter(grid1, grid2):
    assert cycle_diameter(grid1, grid1.cell(2, "q0_0")) == 2
    assert cycle_diameter(grid1, grid1.cell(1, "h0_0")) == 1
    assert cycle_diameter(grid1, square_cycle(grid1, 0, 0)) == 2
    assert cycle_diameter(grid2, grid2.chain(2, {"q0_0": 1, "q1_1": 1})) == 4
    with pytest.raises(ChainInputError):
        cycle_diameter(grid1, Chain.zero(grid1.basis(1)))


def test_cycle_diameter_of_a_disconnected_support():
    complex_ = build_discrete(2)
    assert cycle_diameter(complex_, complex_.chain(0, {"v0": 1, "v1": -1})) == math.inf


def test_vertex_closure(grid1):
    closure = vertex_closure(grid1, grid1.cell(2, "q0_0"))
    assert closure == frozenset(range(4))


def test_cell_diameter_bound(grid2):
    assert cell_diameter_bound(grid2, 2) == 2
    assert cell_diameter_bound(grid2, 1) == 1
    assert cell_diameter_bound(grid2, 0) == 0


def fv_key(value):
    return (1, 0) if value == math.inf else (0, value)


@pytest.mark.parametrize("name, d, kmax", [("grid_2x2", 1, 8), ("tetra_solid", 2, 5), ("torus_2", 1, 4),
                                           ("cycle_3", 1, 4), ("path_3", 0, 4)])
def test_fv_is_monotone_in_k(name, d, kmax):
    values = fv_table(build_fixture(name), d, kmax).values()
    keys = [fv_key(value) for value in values]
    assert keys == sorted(keys)
    assert values[0] == 0


def brute_force_fv_values(complex_, d, kmax, cap):
    """FV(0..kmax) by enumerating every chain for both the cycles and their fillings."""
    rho, boundary = complex_.boundary(d), complex_.boundary(d + 1)
    filled_by_norm = [0] * (kmax + 1)
    for z in all_chains_upto(rho.source, kmax):
        if apply_map(rho, z):
            continue
        result = filling_norm_oracle(boundary, z, cap)
        value = math.inf if isinstance(result, BudgetExceeded) else result.value
        norm = l1_norm(z)
        filled_by_norm[norm] = max(filled_by_norm[norm], value)
    values, best = [], 0
    for value in filled_by_norm:
        best = max(best, value)
        values.append(best)
    return values


@pytest.mark.parametrize("name, d", [("grid_1x1", 1), ("grid_2x2", 1), ("grid_2x1", 1), ("tetra_solid", 1),
                                     ("tetra_solid", 2), ("tetra_hollow", 1), ("tetra_hollow", 2),
                                     ("torus_2", 1), ("cycle_3", 1), ("cycle_4", 1)])
def test_fv_matches_a_double_brute_force(name, d):
    complex_ = build_fixture(name)
    assert max(complex_.sizes) <= 12
    assert fv_table(complex_, d, 4).values() == brute_force_fv_values(complex_, d, 4, cap=6)


SKETCH_CASES = [("grid_3x3", 1, 6), ("tetra_solid", 1, 6), ("tetra_solid", 2, 6), ("torus_2", 1, 6),
                ("coned_f2_2", 1, 4)]


@pytest.mark.parametrize("name, d, norm", SKETCH_CASES)
def test_connected_cycles_have_diameter_at_most_c_times_norm(name, d, norm):
    complex_ = build_fixture(name)
    rho = complex_.boundary(d)
    c = cell_diameter_bound(complex_, d)
    checked = 0
    for sigma in enumerate_cycles(rho, norm):
        if not sigma or not is_rho_connected(rho, sigma):
            continue
        assert cycle_diameter(complex_, sigma) <= c * l1_norm(sigma)
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("name, d, norm", [("grid_3x3", 1, 4), ("tetra_solid", 1, 6), ("tetra_solid", 2, 6),
                                           ("torus_2", 1, 6),
                                           pytest.param("grid_3x3", 1, 6, marks=pytest.mark.slow)])
def test_fillings_are_subadditive_over_decompositions(name, d, norm):
    complex_ = build_fixture(name)
    rho = complex_.boundary(d)
    solver = FillingSolver(complex_.boundary(d + 1))
    for z in enumerate_cycles(rho, norm):
        parts = [solver.solve(x) for x in decompose(rho, z)]
        if not all(isinstance(part, Finite) for part in parts):
            continue
        whole = solver.solve(z)
        assert isinstance(whole, Finite)
        assert whole.value <= sum(part.value for part in parts)
