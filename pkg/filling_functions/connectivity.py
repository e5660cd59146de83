"""
ρ-intersection, ρ-connectedness and the decomposition of kernel elements.

A chain x is split into unit parts ±s (|⟨x,s⟩| copies of sign(⟨x,s⟩)·s). Two
chains ρ-intersect when a unit part of one and a unit part of the other have
images carrying opposite signs on a common target element t. A chain is
ρ-connected when its unit parts can be added one at a time, each new unit
ρ-intersecting the running sum. That is the same as connectivity of the
graph on unit parts joined by ρ-intersection, which is what the fast path uses;
is_rho_connected_by_ordering keeps the literal search for cross-checking.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

import networkx as nx

from chain_core import Chain, ModuleMap, apply_map, l1_norm, s_intersection
from errors import ChainInputError, SolverError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class UnitChain:
    """One element of 𝒟₁: a basis element with a sign."""

    index: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ChainInputError(f"Unit sign must be +1 or -1, got {self.sign!r}")

    def to_chain(self, basis) -> Chain:
        return Chain.unit(basis, self.index, self.sign)

    def format(self, basis) -> str:
        return f"{'+' if self.sign > 0 else '-'}{basis.labels[self.index]}"


def _sign(value: int) -> int:
    return 1 if value > 0 else -1


def unit_parts(x: Chain) -> List[UnitChain]:
    """|⟨x,s⟩| copies of sign(⟨x,s⟩)·s for each s, in basis order."""
    parts = []
    for s, c in x.items:
        parts.extend([UnitChain(s, _sign(c))] * abs(c))
    return parts


def _check_source(rho: ModuleMap, *chains: Chain):
    for chain in chains:
        if chain.basis is not rho.source and chain.basis != rho.source:
            raise ChainInputError(
                f"Chain over {chain.basis.name!r} does not live in the source {rho.source.name!r} of the map")


def _signed_targets(rho: ModuleMap, x: Chain) -> Dict[int, Set[int]]:
    """For each t, the signs sign(⟨x,s⟩)·sign(⟨ρ(s),t⟩) over the unit parts of x."""
    signs: Dict[int, Set[int]] = defaultdict(set)
    for s, c in x.items:
        for t, r in rho.columns[s].items:
            signs[t].add(_sign(c) * _sign(r))
    return signs


def rho_intersects(rho: ModuleMap, x: Chain, y: Chain) -> bool:
    """
    x ∩_ρ y ≠ ∅: some unit part of x and some unit part of y have images with
    opposite signs on a common target element

    Args:
        rho: Module map
        x: Chain over rho.source
        y: Chain over rho.source

    Returns:
        bool: False whenever either chain is zero
    """
    _check_source(rho, x, y)
    left = _signed_targets(rho, x)
    if not left:
        return False
    for t, signs in _signed_targets(rho, y).items():
        other = left.get(t)
        if other and any(-sign in other for sign in signs):
            return True
    return False


def target_support(rho: ModuleMap, t) -> FrozenSet[int]:
    """S(t): the source elements whose image has a nonzero coefficient at t."""
    index = rho.target.check(t)
    return frozenset(s for s, _ in rho.rows[index])


def unit_neighbors(rho: ModuleMap) -> Dict[UnitChain, FrozenSet[UnitChain]]:
    """For every unit u, the units whose image meets ρ(u) with opposite sign on some t."""
    table: Dict[UnitChain, FrozenSet[UnitChain]] = {}
    for s in range(rho.source.size):
        for sign in (1, -1):
            neighbours = set()
            for t, r in rho.columns[s].items:
                tau = sign * _sign(r)
                for s2, r2 in rho.rows[t]:
                    neighbours.add(UnitChain(s2, -tau * _sign(r2)))
            table[UnitChain(s, sign)] = frozenset(neighbours)
    return table


def d1_neighbors(rho: ModuleMap, y: Chain) -> FrozenSet[UnitChain]:
    """The units u with rho_intersects(ρ, u, y)."""
    _check_source(rho, y)
    found = set()
    for s, c in y.items:
        for t, r in rho.columns[s].items:
            tau = _sign(c) * _sign(r)
            for s2, r2 in rho.rows[t]:
                found.add(UnitChain(s2, -tau * _sign(r2)))
    return frozenset(found)


def unit_part_graph(rho: ModuleMap, x: Chain) -> nx.Graph:
    """Nodes are (basis id, copy) pairs for the unit parts of x; edges join ρ-intersecting units."""
    _check_source(rho, x)
    graph = nx.Graph()
    copies: Dict[int, List[Tuple[int, int]]] = {}
    for s, c in x.items:
        copies[s] = [(s, k) for k in range(abs(c))]
        graph.add_nodes_from(copies[s])

    by_target: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: {1: [], -1: []})
    for s, c in x.items:
        for t, r in rho.columns[s].items:
            by_target[t][_sign(c) * _sign(r)].append(s)
    for sides in by_target.values():
        for s in sides[1]:
            for s2 in sides[-1]:
                for a in copies[s]:
                    for b in copies[s2]:
                        if a != b:
                            graph.add_edge(a, b)
    return graph


def is_rho_connected(rho: ModuleMap, x: Chain) -> bool:
    """
    Whether the unit parts of x can be added one by one, each ρ-intersecting the sum so far

    Args:
        rho: Module map
        x: Nonzero chain over rho.source

    Returns:
        bool: Connectivity of the unit-part graph

    Raises:
        ChainInputError: For the zero chain
    """
    if not x:
        raise ChainInputError("ρ-connectedness is undefined for the zero chain")
    return nx.is_connected(unit_part_graph(rho, x))


def is_rho_connected_by_ordering(rho: ModuleMap, x: Chain) -> bool:
    """
    Search for an ordering x₁, …, xₙ of the unit parts in which every prefix sum
    has trivial S-intersection with, and ρ-intersects, the next unit.
    """
    if not x:
        raise ChainInputError("ρ-connectedness is undefined for the zero chain")
    _check_source(rho, x)
    basis = x.basis
    distinct = sorted(set(unit_parts(x)))
    total = tuple(abs(c) for _, c in x.items)
    seen = set()

    def extend(used: Tuple[int, ...], prefix: Chain) -> bool:
        if used == total:
            return True
        if used in seen:
            return False
        seen.add(used)
        for position, unit in enumerate(distinct):
            if used[position] == total[position]:
                continue
            step = unit.to_chain(basis)
            if s_intersection(prefix, step) or not rho_intersects(rho, prefix, step):
                continue
            advanced = used[:position] + (used[position] + 1,) + used[position + 1:]
            if extend(advanced, prefix + step):
                return True
        return False

    for position, unit in enumerate(distinct):
        start = tuple(1 if i == position else 0 for i in range(len(distinct)))
        if extend(start, unit.to_chain(basis)):
            return True
    return False


def _require_kernel(rho: ModuleMap, z: Chain):
    image = apply_map(rho, z)
    if image:
        t, value = image.items[0]
        raise ChainInputError(
            f"Chain is not in the kernel: ⟨ρ(z), {rho.target.labels[t]}⟩ = {value}", witness=t)


def _part_order(x: Chain):
    first, coefficient = x.items[0]
    return (first, _sign(coefficient), x.items)


def decompose(rho: ModuleMap, z: Chain) -> List[Chain]:
    """
    Split a kernel element into ρ-connected kernel elements that are parts of z
    and add up to z with additive norms. Parts are the sums over connected
    components of the unit-part graph.

    Args:
        rho: Module map
        z: Element of ker ρ

    Returns:
        list: Parts in a fixed order ([] for z = 0)

    Raises:
        ChainInputError: If ρ(z) ≠ 0; the witness is the first target element hit
    """
    _check_source(rho, z)
    _require_kernel(rho, z)
    if not z:
        return []
    basis = z.basis
    coefficients = dict(z.items)
    parts = []
    for component in nx.connected_components(unit_part_graph(rho, z)):
        values: Dict[int, int] = defaultdict(int)
        for s, _ in component:
            values[s] += _sign(coefficients[s])
        part = Chain(basis, values)
        if apply_map(rho, part):
            raise SolverError(f"Connected component {part.format()} of a kernel element is not in the kernel")
        parts.append(part)
    parts.sort(key=_part_order)
    logger.debug("decomposed chain of norm %d into %d parts", l1_norm(z), len(parts))
    return parts


def maximal_connected_part(rho: ModuleMap, z: Chain, seed: Optional[UnitChain] = None) -> Chain:
    """
    Grow a ρ-connected part of z from a seed unit, adding units λs ⪯ z − x that
    ρ-intersect the current part x, until no such unit is left.
    """
    _check_source(rho, z)
    if not z:
        raise ChainInputError("Cannot grow a part of the zero chain")
    basis = z.basis
    if seed is None:
        s, c = z.items[0]
        seed = UnitChain(s, _sign(c))
    if dict(z.items).get(seed.index, 0) * seed.sign <= 0:
        raise ChainInputError(f"Seed {seed.format(basis)} is not a part of the chain")

    part = seed.to_chain(basis)
    while True:
        rest = z - part
        grown = False
        for s, c in rest.items:
            step = Chain.unit(basis, s, _sign(c))
            if rho_intersects(rho, part, step):
                part = part + step
                grown = True
                break
        if not grown:
            return part


def decompose_greedy(rho: ModuleMap, z: Chain) -> List[Chain]:
    """decompose, computed by repeatedly extracting maximal connected parts."""
    _check_source(rho, z)
    _require_kernel(rho, z)
    parts = []
    remaining = z
    while remaining:
        part = maximal_connected_part(rho, remaining)
        if apply_map(rho, part):
            raise SolverError(f"Maximal connected part {part.format()} is not in the kernel")
        before = l1_norm(remaining)
        remaining = remaining - part
        if l1_norm(remaining) >= before:
            raise SolverError("Extracting a connected part did not reduce the norm")
        parts.append(part)
    parts.sort(key=_part_order)
    return parts


def iterate_Dn(rho: ModuleMap, n: int) -> Iterator[FrozenSet[Chain]]:
    """Yield 𝒟₁, 𝒟₂, …, 𝒟ₙ in turn."""
    if n < 0:
        raise ChainInputError(f"n must be non-negative, got {n}")
    if n == 0:
        return
    basis = rho.source
    neighbours = unit_neighbors(rho)
    layer = frozenset(unit.to_chain(basis) for unit in neighbours)
    yield layer
    for size in range(2, n + 1):
        grown = set()
        for y in layer:
            signs = dict(y.items)
            candidates = set()
            for s, c in y.items:
                candidates |= neighbours[UnitChain(s, _sign(c))]
            for unit in candidates:
                # trivial S-intersection: no opposite-sign coefficient at s
                if signs.get(unit.index, 0) * unit.sign < 0:
                    continue
                grown.add(y + unit.to_chain(basis))
        layer = frozenset(grown)
        logger.debug("D_%d has %d elements", size, len(layer))
        yield layer


def enumerate_Dn(rho: ModuleMap, n: int) -> FrozenSet[Chain]:
    """
    𝒟ₙ: the ρ-connected chains of ℓ1 norm exactly n

    Args:
        rho: Module map
        n: Norm, n ≥ 0

    Returns:
        frozenset: 𝒟ₙ (empty for n = 0)
    """
    layer = frozenset()
    for layer in iterate_Dn(rho, n):
        pass
    return layer


def enumerate_Dn_upto(rho: ModuleMap, n: int) -> FrozenSet[Chain]:
    """𝒟_{≤n} = 𝒟₁ ∪ … ∪ 𝒟ₙ."""
    union = set()
    for layer in iterate_Dn(rho, n):
        union |= layer
    return frozenset(union)
