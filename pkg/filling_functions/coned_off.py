"""
Coned-off Cayley complexes of F₂ = ⟨a, b⟩ and ℤ² = ⟨a, b | aba⁻¹b⁻¹⟩ relative
to the peripheral subgroup P = ⟨b⟩, truncated to a word-metric ball, plus the
circuit counting used to check fineness of their 1-skeleta.

Labels:
    g_<w>   group element (g_1 is the identity)
    P_<w>   the coset w·P
    a_<w>   generator edge w → wa      b_<w>   generator edge w → wb
    c_<w>   cone edge w → wP
    r_<w>   commutator square at w (ℤ² only)
    t_<w>   cone triangle (w, wb, wP)

F₂ elements are reduced words over a, A = a⁻¹, b, B = b⁻¹; ℤ² elements are
written i_j for a^i b^j.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from builders import assemble_complex, edge_endpoints, one_skeleton
from chain_core import Chain, ChainComplex
from errors import ChainInputError

logger = logging.getLogger(__name__)

GROUP_KINDS = ("Free2", "FreeAbelian2")
_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


@dataclass(frozen=True)
class ConedOffSpec:
    group_kind: str
    radius: int

    def __post_init__(self):
        if self.group_kind not in GROUP_KINDS:
            raise ChainInputError(f"group_kind must be one of {GROUP_KINDS}, got {self.group_kind!r}")
        if self.radius < 1:
            raise ChainInputError(f"Truncation radius must be at least 1, got {self.radius}")

    @property
    def name(self) -> str:
        return f"coned_{'f2' if self.group_kind == 'Free2' else 'z2'}_{self.radius}"


class _FreeGroup:
    """Reduced words, right multiplication by a generator letter."""

    def ball(self, radius: int) -> List[str]:
        layer, elements = [""], [""]
        for _ in range(radius):
            layer = [w + s for w in layer for s in "aAbB" if not w or w[-1] != _INVERSE[s]]
            elements.extend(layer)
        return elements

    def multiply(self, g: str, letter: str) -> str:
        if g and g[-1] == _INVERSE[letter]:
            return g[:-1]
        return g + letter

    def length(self, g: str) -> int:
        return len(g)

    def coset(self, g: str) -> str:
        return g.rstrip("bB")

    def coset_name(self, rep: str) -> str:
        return rep or "1"

    def name(self, g: str) -> str:
        return g or "1"


class _FreeAbelianGroup:
    """Pairs (i, j) standing for a^i b^j."""

    _STEP = {"a": (1, 0), "A": (-1, 0), "b": (0, 1), "B": (0, -1)}

    def ball(self, radius: int) -> List[Tuple[int, int]]:
        points = [(i, j) for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)
                  if abs(i) + abs(j) <= radius]
        return sorted(points, key=lambda p: (abs(p[0]) + abs(p[1]), p))

    def multiply(self, g: Tuple[int, int], letter: str) -> Tuple[int, int]:
        di, dj = self._STEP[letter]
        return g[0] + di, g[1] + dj

    def length(self, g: Tuple[int, int]) -> int:
        return abs(g[0]) + abs(g[1])

    def coset(self, g: Tuple[int, int]) -> int:
        return g[0]

    def coset_name(self, rep: int) -> str:
        return str(rep)

    def name(self, g: Tuple[int, int]) -> str:
        return f"{g[0]}_{g[1]}"


def _group(kind: str):
    return _FreeGroup() if kind == "Free2" else _FreeAbelianGroup()


def build_coned_off(spec: ConedOffSpec) -> ChainComplex:
    """
    Truncated coned-off Cayley complex of F₂ or ℤ² relative to ⟨b⟩

    Args:
        spec: Group kind and word-length radius

    Returns:
        ChainComplex: Group-element and coset vertices, generator and cone edges,
        commutator squares (ℤ² only) and cone triangles
    """
    group = _group(spec.group_kind)
    elements = group.ball(spec.radius)
    present = set(elements)
    name = group.name

    cosets: List = []
    for g in elements:
        if group.coset(g) not in cosets:
            cosets.append(group.coset(g))

    def coset_label(g) -> str:
        return f"P_{group.coset_name(group.coset(g))}"

    vertices = [f"g_{name(g)}" for g in elements] + [f"P_{group.coset_name(rep)}" for rep in cosets]

    edges: Dict[str, Dict[str, int]] = {}
    for letter in "ab":
        for g in elements:
            h = group.multiply(g, letter)
            if h in present:
                edges[f"{letter}_{name(g)}"] = {f"g_{name(h)}": 1, f"g_{name(g)}": -1}
    for g in elements:
        edges[f"c_{name(g)}"] = {coset_label(g): 1, f"g_{name(g)}": -1}

    faces: Dict[str, Dict[str, int]] = {}
    if spec.group_kind == "FreeAbelian2":
        for g in elements:
            ga, gb = group.multiply(g, "a"), group.multiply(g, "b")
            gab = group.multiply(ga, "b")
            if ga in present and gb in present and gab in present:
                faces[f"r_{name(g)}"] = {f"a_{name(g)}": 1, f"b_{name(ga)}": 1,
                                         f"a_{name(gb)}": -1, f"b_{name(g)}": -1}
    for g in elements:
        gb = group.multiply(g, "b")
        if gb in present:
            faces[f"t_{name(g)}"] = {f"b_{name(g)}": 1, f"c_{name(gb)}": 1, f"c_{name(g)}": -1}

    complex_ = assemble_complex(spec.name, [vertices, list(edges), list(faces)], [edges, faces])
    logger.info("built %s with cell counts %s", spec.name, complex_.sizes)
    return complex_


def element_length(label: str) -> Optional[int]:
    """Word length of a group-element vertex label, None for cone vertices."""
    if not label.startswith("g_"):
        return None
    body = label[2:]
    match = re.fullmatch(r"(-?\d+)_(-?\d+)", body)
    if match:
        return abs(int(match.group(1))) + abs(int(match.group(2)))
    return 0 if body == "1" else len(body)


def hexagon_cycle(complex_: ChainComplex, m: int) -> Chain:
    """
    The 1-cycle P - b - ab - aP - ab^m - b^m - P in a coned-off ℤ² complex.
    It has ℓ1 norm 6 for every m ≥ 2.
    """
    if m < 2:
        raise ChainInputError(f"The hexagon needs m >= 2, got {m}")
    entries = {"c_0_1": -1, "a_0_1": 1, "c_1_1": 1, f"c_1_{m}": -1, f"a_0_{m}": -1, f"c_0_{m}": 1}
    basis = complex_.basis(1)
    missing = [label for label in entries if label not in basis.labels]
    if missing:
        raise ChainInputError(f"{complex_.name} is too small for the hexagon with m = {m} (missing {missing[0]})")
    return Chain.from_labels(basis, entries)


@dataclass(frozen=True)
class Circuit:
    """A closed edge path without repeated vertices."""

    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.edges)


def _circuits(graph: nx.MultiGraph, complex_: ChainComplex, e: int, tail: int, head: int, n: int) -> List[Circuit]:
    vertex_labels, edge_labels = complex_.basis(0).labels, complex_.basis(1).labels
    found = []
    graph.remove_edge(tail, head, key=e)
    try:
        if n >= 2:
            for path in nx.all_simple_edge_paths(graph, head, tail, cutoff=n - 1):
                vertices = (vertex_labels[tail],) + tuple(vertex_labels[u] for u, _, _ in path)
                edges = (edge_labels[e],) + tuple(edge_labels[key] for _, _, key in path)
                found.append(Circuit(vertices, edges))
    finally:
        graph.add_edge(tail, head, key=e)
    return found


def circuits_through_edge(complex_: ChainComplex, e, n: int) -> List[Circuit]:
    """
    All circuits of length ≤ n containing edge e, each once up to rotation and reflection.

    Args:
        complex_: Complex whose 1-skeleton is searched
        e: Edge label or index
        n: Largest circuit length

    Returns:
        list: Circuits sorted by length, then by edge sequence
    """
    index = complex_.basis(1).check(e) if not isinstance(e, str) else complex_.basis(1).index_of(e)
    tail, head = edge_endpoints(complex_)[index]
    if tail is None:
        raise ChainInputError(f"Edge {complex_.basis(1).labels[index]!r} has zero boundary")
    graph = one_skeleton(complex_)
    return sorted(_circuits(graph, complex_, index, tail, head, n), key=lambda c: (c.length, c.edges))


def fineness_report(complex_: ChainComplex, n: int, edges: Optional[Iterable[str]] = None) -> Dict[str, int]:
    """Edge label → number of circuits of length ≤ n through it."""
    labels = complex_.basis(1).labels
    wanted = list(labels) if edges is None else list(edges)
    ends = edge_endpoints(complex_)
    graph = one_skeleton(complex_)
    report = {}
    for label in wanted:
        index = complex_.basis(1).index_of(label)
        tail, head = ends[index]
        report[label] = 0 if tail is None else len(_circuits(graph, complex_, index, tail, head, n))
    logger.debug("fineness report of %s at n=%d over %d edges", complex_.name, n, len(report))
    return report


def core_edges(complex_: ChainComplex, radius: int) -> List[str]:
    """Edges of a coned-off truncation whose group-element endpoints all have word length ≤ radius."""
    vertex_labels = complex_.basis(0).labels
    core = []
    for e, (tail, head) in enumerate(edge_endpoints(complex_)):
        if tail is None:
            continue
        lengths = [element_length(vertex_labels[v]) for v in (tail, head)]
        if all(length is None or length <= radius for length in lengths):
            core.append(complex_.basis(1).labels[e])
    return core


def stabilization_radius(core_radius: int, n: int) -> int:
    """Radius from which circuit counts of length ≤ n on the core of a coned-off F₂ no longer change."""
    return core_radius + max(n - 2, 0)
