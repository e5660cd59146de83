"""
Standard test complexes and the built-in fixture names.

Every builder returns a validated ChainComplex. Cell labels are stable so the
text format, the CLI and the tests can refer to cells by name.
"""

import logging
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

import networkx as nx

from chain_core import Basis, Chain, ChainComplex, ModuleMap, require_valid
from errors import ChainInputError

logger = logging.getLogger(__name__)


def assemble_complex(name: str, cells: Sequence[Sequence[str]],
                     boundaries: Sequence[Mapping[str, Mapping[str, int]]]) -> ChainComplex:
    """
    Build and validate a complex from labels.

    cells[d] lists the degree-d labels; boundaries[d - 1] maps each degree-d
    label to its boundary as {lower label: coefficient}. Missing entries mean a
    zero boundary.

    Args:
        name: Complex name, a single token
        cells: Labels per degree
        boundaries: Boundary coefficients per degree ≥ 1

    Returns:
        ChainComplex: The complex, after the ∂∘∂ = 0 check
    """
    if len(boundaries) != max(len(cells) - 1, 0):
        raise ChainInputError(f"Complex {name!r}: {len(cells)} degrees need {len(cells) - 1} boundary maps")
    bases = [Basis(f"{name}:C{d}", tuple(labels)) for d, labels in enumerate(cells)]
    maps = []
    for d in range(1, len(bases)):
        source, target = bases[d], bases[d - 1]
        given = boundaries[d - 1]
        unknown = set(given) - set(source.labels)
        if unknown:
            raise ChainInputError(f"Complex {name!r}: boundary given for unknown {d}-cell {sorted(unknown)[0]!r}")
        columns = tuple(Chain.from_labels(target, given.get(label, {})) for label in source.labels)
        maps.append(ModuleMap(source, target, columns, name=f"d{d}"))
    return require_valid(ChainComplex(name, tuple(bases), tuple(maps)))


def build_tetrahedron(solid: bool = True) -> ChainComplex:
    vertices = [f"v{i}" for i in range(4)]
    edges = {f"e{i}{j}": {f"v{j}": 1, f"v{i}": -1} for i, j in combinations(range(4), 2)}
    faces = {f"f{i}{j}{k}": {f"e{j}{k}": 1, f"e{i}{k}": -1, f"e{i}{j}": 1}
             for i, j, k in combinations(range(4), 3)}
    cells = [vertices, list(edges), list(faces)]
    boundaries = [edges, faces]
    if solid:
        cells.append(["t0123"])
        boundaries.append({"t0123": {"f123": 1, "f023": -1, "f013": 1, "f012": -1}})
    return assemble_complex("tetra_solid" if solid else "tetra_hollow", cells, boundaries)


def _square(i: int, j: int, right: int, up: int) -> Dict[str, int]:
    # counter-clockwise: bottom, right side, top reversed, left side reversed
    return {f"h{i}_{j}": 1, f"u{right}_{j}": 1, f"h{i}_{up}": -1, f"u{i}_{j}": -1}


def build_grid(w: int, h: int) -> ChainComplex:
    """The w×h square grid disc: vertices v{i}_{j}, edges h (along x) and u (along y), squares q."""
    if w < 1 or h < 1:
        raise ChainInputError(f"Grid dimensions must be at least 1, got {w}x{h}")
    vertices = [f"v{i}_{j}" for j in range(h + 1) for i in range(w + 1)]
    edges = {}
    for j in range(h + 1):
        for i in range(w):
            edges[f"h{i}_{j}"] = {f"v{i + 1}_{j}": 1, f"v{i}_{j}": -1}
    for j in range(h):
        for i in range(w + 1):
            edges[f"u{i}_{j}"] = {f"v{i}_{j + 1}": 1, f"v{i}_{j}": -1}
    squares = {f"q{i}_{j}": _square(i, j, i + 1, j + 1) for j in range(h) for i in range(w)}
    return assemble_complex(f"grid_{w}x{h}", [vertices, list(edges), list(squares)], [edges, squares])


def build_torus_grid(n: int) -> ChainComplex:
    """The n×n grid with opposite sides identified."""
    if n < 2:
        raise ChainInputError(f"Torus size must be at least 2, got {n}")
    vertices = [f"v{i}_{j}" for j in range(n) for i in range(n)]
    edges = {}
    for j in range(n):
        for i in range(n):
            edges[f"h{i}_{j}"] = {f"v{(i + 1) % n}_{j}": 1, f"v{i}_{j}": -1}
    for j in range(n):
        for i in range(n):
            edges[f"u{i}_{j}"] = {f"v{i}_{(j + 1) % n}": 1, f"v{i}_{j}": -1}
    squares = {f"q{i}_{j}": _square(i, j, (i + 1) % n, (j + 1) % n) for j in range(n) for i in range(n)}
    return assemble_complex(f"torus_{n}", [vertices, list(edges), list(squares)], [edges, squares])


def build_path(n: int) -> ChainComplex:
    """v0 - v1 - … - vn with e{i}: v{i-1} → v{i}."""
    if n < 0:
        raise ChainInputError(f"Path length must be non-negative, got {n}")
    vertices = [f"v{i}" for i in range(n + 1)]
    edges = {f"e{i}": {f"v{i}": 1, f"v{i - 1}": -1} for i in range(1, n + 1)}
    return assemble_complex(f"path_{n}", [vertices, list(edges)], [edges])


def build_cycle(n: int) -> ChainComplex:
    """v0, …, v{n-1} with e{i}: v{i} → v{i+1 mod n}."""
    if n < 2:
        raise ChainInputError(f"Cycle length must be at least 2, got {n}")
    vertices = [f"v{i}" for i in range(n)]
    edges = {f"e{i}": {f"v{(i + 1) % n}": 1, f"v{i}": -1} for i in range(n)}
    return assemble_complex(f"cycle_{n}", [vertices, list(edges)], [edges])


def build_discrete(n: int) -> ChainComplex:
    """n vertices and nothing else."""
    if n < 1:
        raise ChainInputError(f"A discrete complex needs at least one vertex, got {n}")
    return assemble_complex(f"discrete_{n}", [[f"v{i}" for i in range(n)]], [])


_FIXTURES = [
    (re.compile(r"tetra_solid"), lambda m: build_tetrahedron(True)),
    (re.compile(r"tetra_hollow"), lambda m: build_tetrahedron(False)),
    (re.compile(r"grid_(\d+)x(\d+)"), lambda m: build_grid(int(m.group(1)), int(m.group(2)))),
    (re.compile(r"torus_(\d+)"), lambda m: build_torus_grid(int(m.group(1)))),
    (re.compile(r"path_(\d+)"), lambda m: build_path(int(m.group(1)))),
    (re.compile(r"cycle_(\d+)"), lambda m: build_cycle(int(m.group(1)))),
    (re.compile(r"discrete_(\d+)"), lambda m: build_discrete(int(m.group(1)))),
    (re.compile(r"coned_(f2|z2)_(\d+)"), lambda m: _coned(m.group(1), int(m.group(2)))),
]


def _coned(kind: str, radius: int) -> ChainComplex:
    from coned_off import ConedOffSpec, build_coned_off
    return build_coned_off(ConedOffSpec("Free2" if kind == "f2" else "FreeAbelian2", radius))


def is_fixture_name(name: str) -> bool:
    return any(pattern.fullmatch(name) for pattern, _ in _FIXTURES)


def build_fixture(name: str) -> ChainComplex:
    """Resolve a built-in name such as tetra_solid, grid_3x3, torus_2, coned_z2_4 or path_5."""
    for pattern, build in _FIXTURES:
        match = pattern.fullmatch(name)
        if match:
            logger.info("building fixture %s", name)
            return build(match)
    raise ChainInputError(f"Unknown fixture {name!r}")


@dataclass(frozen=True)
class CellPermutation:
    """A cellular automorphism that maps oriented cells to oriented cells.

    images[d][i] is the index of the image of the i-th d-cell.
    """

    name: str
    images: Tuple[Tuple[int, ...], ...]


def _permutation_from_labels(complex_: ChainComplex, name: str, relabel) -> CellPermutation:
    images = []
    for basis in complex_.dimensions:
        images.append(tuple(basis.index_of(relabel(label)) for label in basis.labels))
    return CellPermutation(name, tuple(images))


def cycle_rotation(n: int) -> CellPermutation:
    """v{i} ↦ v{i+1}, e{i} ↦ e{i+1} on cycle_n."""
    complex_ = build_cycle(n)

    def shift(label: str) -> str:
        return f"{label[0]}{(int(label[1:]) + 1) % n}"

    return _permutation_from_labels(complex_, f"rotation of cycle_{n}", shift)


def torus_translation(n: int, axis: int = 0) -> CellPermutation:
    """Translate torus_n by one step along x (axis 0) or y (axis 1)."""
    if axis not in (0, 1):
        raise ChainInputError(f"Axis must be 0 or 1, got {axis}")
    complex_ = build_torus_grid(n)
    step = (1, 0) if axis == 0 else (0, 1)

    def shift(label: str) -> str:
        i, j = (int(part) for part in label[1:].split("_"))
        return f"{label[0]}{(i + step[0]) % n}_{(j + step[1]) % n}"

    return _permutation_from_labels(complex_, f"translation of torus_{n} along axis {axis}", shift)


def fixture_symmetry(name: str) -> List[CellPermutation]:
    """Generators of the built-in symmetry of a fixture, for `--action symmetry`."""
    match = re.fullmatch(r"cycle_(\d+)", name)
    if match:
        return [cycle_rotation(int(match.group(1)))]
    match = re.fullmatch(r"torus_(\d+)", name)
    if match:
        return [torus_translation(int(match.group(1)))]
    raise ChainInputError(f"Fixture {name!r} has no built-in symmetry (only cycle_N and torus_N do)")


def edge_endpoints(complex_: ChainComplex) -> List[Tuple[int, int]]:
    """(tail, head) vertex indices of every edge, read off ∂e = head - tail; (None, None) for ∂e = 0."""
    ends = []
    edges = complex_.boundary(1)
    for s, column in enumerate(edges.columns):
        items = column.items
        if not items:
            ends.append((None, None))
            continue
        if len(items) != 2 or sorted(c for _, c in items) != [-1, 1]:
            raise ChainInputError(f"Edge {edges.source.labels[s]!r} does not have boundary head - tail")
        tail = next(t for t, c in items if c == -1)
        head = next(t for t, c in items if c == 1)
        ends.append((tail, head))
    return ends


def one_skeleton(complex_: ChainComplex) -> nx.MultiGraph:
    """The 1-skeleton as a MultiGraph on vertex indices, edges keyed by edge index."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(complex_.basis(0).size))
    for e, (tail, head) in enumerate(edge_endpoints(complex_)):
        if tail is not None:
            graph.add_edge(tail, head, key=e)
    return graph
