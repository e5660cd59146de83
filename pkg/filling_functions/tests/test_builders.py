import pytest

from builders import (build_cycle, build_discrete, build_fixture, build_grid, build_path, build_tetrahedron,
                      build_torus_grid, cycle_rotation, edge_endpoints, fixture_symmetry, is_fixture_name,
                      one_skeleton, torus_translation)
from chain_core import Chain, apply_map, validate_complex
from errors import ChainInputError
from filling import filling_norm_oracle


def test_tetrahedron_sizes(tetra_solid, tetra_hollow):
    assert tetra_solid.sizes == [4, 6, 4, 1]
    assert tetra_hollow.sizes == [4, 6, 4]
    assert validate_complex(tetra_solid)
    assert validate_complex(tetra_hollow)


def test_grid_sizes(grid1, grid2):
    assert grid1.sizes == [4, 4, 1]
    assert grid2.sizes == [9, 12, 4]
    with pytest.raises(ChainInputError):
        build_grid(0, 2)


def test_unit_square_fills_with_one_cell(grid1):
    d2 = grid1.boundary(2)
    gamma = apply_map(d2, grid1.cell(2, "q0_0"))
    assert filling_norm_oracle(d2, gamma, 2).value == 1


def test_torus_sizes_and_fundamental_class(torus2):
    assert torus2.sizes == [4, 8, 4]
    everything = Chain(torus2.basis(2), {s: 1 for s in range(4)})
    assert not apply_map(torus2.boundary(2), everything)
    with pytest.raises(ChainInputError):
        build_torus_grid(1)


def test_path_cycle_and_discrete(path2):
    assert path2.sizes == [3, 2]
    assert build_cycle(5).sizes == [5, 5]
    assert build_discrete(3).sizes == [3]
    assert apply_map(path2.boundary(1), path2.cell(1, "e2")) == path2.chain(0, {"v2": 1, "v1": -1})


@pytest.mark.parametrize("name, sizes", [
    ("tetra_solid", [4, 6, 4, 1]),
    ("grid_2x1", [6, 7, 2]),
    ("torus_3", [9, 18, 9]),
    ("path_4", [5, 4]),
    ("cycle_3", [3, 3]),
    ("discrete_2", [2]),
])
def test_build_fixture(name, sizes):
    complex_ = build_fixture(name)
    assert complex_.name == name
    assert complex_.sizes == sizes


def test_unknown_fixture():
    assert not is_fixture_name("sphere_3")
    assert is_fixture_name("coned_f2_2")
    with pytest.raises(ChainInputError):
        build_fixture("sphere_3")


def test_edge_endpoints_and_skeleton(path2):
    assert edge_endpoints(path2) == [(0, 1), (1, 2)]
    skeleton = one_skeleton(path2)
    assert sorted(skeleton.edges(keys=True)) == [(0, 1, 0), (1, 2, 1)]


def test_edge_endpoints_rejects_non_graph_edges():
    from builders import assemble_complex

    odd = assemble_complex("odd", [["v0", "v1"], ["e"]], [{"e": {"v0": 2}}])
    with pytest.raises(ChainInputError):
        edge_endpoints(odd)


def test_symmetry_generators_are_cellular(cycle4, torus2):
    for complex_, perm in ((cycle4, cycle_rotation(4)), (torus2, torus_translation(2)),
                           (torus2, torus_translation(2, axis=1))):
        for d in range(1, complex_.top_degree + 1):
            boundary = complex_.boundary(d)
            src, dst = perm.images[d], perm.images[d - 1]
            for s, column in enumerate(boundary.columns):
                moved = Chain(boundary.target, {dst[t]: c for t, c in column.items})
                assert boundary.columns[src[s]] == moved


def test_fixture_symmetry():
    assert [p.name for p in fixture_symmetry("cycle_4")] == ["rotation of cycle_4"]
    with pytest.raises(ChainInputError):
        fixture_symmetry("grid_2x2")
    with pytest.raises(ChainInputError):
        torus_translation(3, axis=2)
