"""
Finite groups acting on a map ρ: ℤ[S] → ℤ[T] by paired permutations of S and T.

Used to check that an action commutes with ρ, to compute orbits and
stabilizers, and to build 𝒟ₙ and B_n from one representative per orbit.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from builders import CellPermutation
from chain_core import Basis, Chain, ChainComplex, ModuleMap, apply_map
from connectivity import d1_neighbors
from errors import ChainInputError
from filling import FillingSolver
from fv import BnBound, bn_from_candidates

logger = logging.getLogger(__name__)

Permutation = Tuple[int, ...]


class UnionFind:
    """Disjoint sets with path compression and union by rank."""

    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        root = self.parent[x]
        if self.parent[root] != root:
            root = self.parent[x] = self.find(root)
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def groups(self) -> List[List]:
        classes: Dict = {}
        for x in self.parent:
            classes.setdefault(self.find(x), []).append(x)
        return sorted((sorted(members) for members in classes.values()), key=lambda members: members[0])


def _check_permutation(perm: Sequence[int], size: int, what: str) -> Permutation:
    perm = tuple(int(i) for i in perm)
    if sorted(perm) != list(range(size)):
        raise ChainInputError(f"{what} is not a permutation of {size} elements")
    return perm


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p∘q: apply q first."""
    return tuple(p[i] for i in q)


@dataclass(frozen=True)
class PermutationAction:
    """
    A finite group listed element by element. Each element is a pair
    (source permutation, target permutation); element 0 is the identity.
    """

    source: Basis
    target: Basis
    elements: Tuple[Tuple[Permutation, Permutation], ...]
    name: str = ""

    def __post_init__(self):
        checked = []
        for number, (sp, tp) in enumerate(self.elements):
            checked.append((_check_permutation(sp, self.source.size, f"Source permutation of element {number}"),
                            _check_permutation(tp, self.target.size, f"Target permutation of element {number}")))
        object.__setattr__(self, "elements", tuple(checked))
        identity = (tuple(range(self.source.size)), tuple(range(self.target.size)))
        if not checked or checked[0] != identity:
            raise ChainInputError("The first element of an action must be the identity")

    @classmethod
    def from_generators(cls, source: Basis, target: Basis,
                        generators: Iterable[Tuple[Sequence[int], Sequence[int]]], name: str = "") -> "PermutationAction":
        """Close a set of generators under composition."""
        gens = [(_check_permutation(sp, source.size, "Source generator"),
                 _check_permutation(tp, target.size, "Target generator")) for sp, tp in generators]
        identity = (tuple(range(source.size)), tuple(range(target.size)))
        elements, seen, frontier = [identity], {identity}, [identity]
        while frontier:
            grown = []
            for element in frontier:
                for gen in gens:
                    product = (compose(gen[0], element[0]), compose(gen[1], element[1]))
                    if product not in seen:
                        seen.add(product)
                        elements.append(product)
                        grown.append(product)
            frontier = grown
        logger.debug("action %s closed to %d elements", name, len(elements))
        return cls(source, target, tuple(elements), name)

    @property
    def order(self) -> int:
        return len(self.elements)

    def _side(self, basis: Basis) -> int:
        if basis is self.source or basis == self.source:
            return 0
        if basis is self.target or basis == self.target:
            return 1
        raise ChainInputError(f"The action does not act on basis {basis.name!r}")

    def act(self, g: int, x: Chain) -> Chain:
        perm = self.elements[g][self._side(x.basis)]
        return Chain._from_dict(x.basis, {perm[s]: c for s, c in x.items})

    def orbit_of(self, x: Chain) -> FrozenSet[Chain]:
        return frozenset(self.act(g, x) for g in range(self.order))

    def canonical(self, x: Chain) -> Chain:
        """The orbit member with the lexicographically smallest (basis id, coefficient) items."""
        return min(self.orbit_of(x), key=lambda chain: chain.items)


def check_equivariance(rho: ModuleMap, action: PermutationAction) -> bool:
    """
    ρ(g·s) = g·ρ(s) for every listed g and every basis element s

    Args:
        rho: Module map
        action: Action on (rho.source, rho.target)

    Returns:
        bool: True if every element commutes with ρ

    Raises:
        ChainInputError: If the action is defined on other bases
    """
    if action.source.size != rho.source.size or action.target.size != rho.target.size:
        raise ChainInputError(
            f"Action sizes ({action.source.size}, {action.target.size}) do not match the map "
            f"({rho.source.size}, {rho.target.size})")
    if action.source != rho.source or action.target != rho.target:
        raise ChainInputError("The action is defined on different bases than the map")
    for g in range(action.order):
        for s in range(rho.source.size):
            unit = Chain.unit(rho.source, s)
            if apply_map(rho, action.act(g, unit)) != action.act(g, rho.columns[s]):
                logger.debug("element %d of %s breaks equivariance at %s", g, action.name, rho.source.labels[s])
                return False
    return True


def _side_of(which: str) -> int:
    if which == "source":
        return 0
    if which == "target":
        return 1
    raise ChainInputError(f"which must be 'source' or 'target', got {which!r}")


def orbits(action: PermutationAction, which: str = "source") -> List[List[int]]:
    """
    Orbit partition of S or T under the action.

    Args:
        action: A validated permutation action
        which: "source" for S, "target" for T

    Returns:
        list: Orbits as sorted index lists, ordered by their smallest member
    """
    side = _side_of(which)
    basis = action.source if side == 0 else action.target
    classes = UnionFind(range(basis.size))
    for element in action.elements:
        for s, image in enumerate(element[side]):
            classes.union(s, image)
    return classes.groups()


def stabilizer_order(action: PermutationAction, t: int, which: str = "target") -> int:
    """
    |G_t|: how many listed elements fix t.

    Args:
        action: A validated permutation action
        t: Index or label of the basis element
        which: "target" for an element of T, "source" for one of S

    Returns:
        int: Order of the stabilizer
    """
    side = _side_of(which)
    basis = action.source if side == 0 else action.target
    index = basis.check(t)
    return sum(1 for element in action.elements if element[side][index] == index)


def dn_orbit_layers(rho: ModuleMap, action: PermutationAction, n: int) -> List[FrozenSet[Chain]]:
    """Canonical representatives of the G-orbits of 𝒟₁, …, 𝒟ₙ."""
    if n < 0:
        raise ChainInputError(f"n must be non-negative, got {n}")
    basis = rho.source
    layers = []
    if n == 0:
        return layers
    layer = frozenset(action.canonical(Chain.unit(basis, s, sign))
                      for s in range(basis.size) for sign in (1, -1))
    layers.append(layer)
    for size in range(2, n + 1):
        grown = set()
        for y in layer:
            signs = dict(y.items)
            for unit in d1_neighbors(rho, y):
                if signs.get(unit.index, 0) * unit.sign < 0:
                    continue
                grown.add(action.canonical(y + unit.to_chain(basis)))
        layer = frozenset(grown)
        logger.debug("D_%d has %d orbit representatives", size, len(layer))
        layers.append(layer)
    return layers


def dn_orbit_representatives(rho: ModuleMap, action: PermutationAction, n: int) -> FrozenSet[Chain]:
    """
    One canonical representative per G-orbit of 𝒟ₙ

    Args:
        rho: Module map the action commutes with
        action: Validated permutation action
        n: Norm, n ≥ 0

    Returns:
        frozenset: Orbit representatives; their orbits cover enumerate_Dn(rho, n)
    """
    layers = dn_orbit_layers(rho, action, n)
    return layers[-1] if layers else frozenset()


def bn_via_orbits(rho: ModuleMap, action: PermutationAction, n: int, filling_map: ModuleMap) -> BnBound:
    """
    B_n from orbit representatives only. Agrees with fv_upper_bound whenever the
    action extends to the filling chains, since filling norms are then constant
    on orbits.
    """
    candidates = sorted((x for layer in dn_orbit_layers(rho, action, n) for x in layer if not apply_map(rho, x)),
                        key=Chain.sort_key)
    return bn_from_candidates(n, candidates, FillingSolver(filling_map))


def action_for_degree(complex_: ChainComplex, generators: Sequence[CellPermutation], d: int) -> PermutationAction:
    """The action on (C_d, C_{d-1}) generated by cellular automorphisms of a complex."""
    if not 1 <= d <= complex_.top_degree:
        raise ChainInputError(f"Degree {d} out of range 1..{complex_.top_degree} for {complex_.name!r}")
    pairs = []
    for generator in generators:
        if len(generator.images) != len(complex_.dimensions):
            raise ChainInputError(f"{generator.name} does not cover every degree of {complex_.name!r}")
        pairs.append((generator.images[d], generator.images[d - 1]))
    name = ", ".join(generator.name for generator in generators) or "trivial"
    return PermutationAction.from_generators(complex_.basis(d), complex_.basis(d - 1), pairs, name)


def trivial_action(rho: ModuleMap) -> PermutationAction:
    return PermutationAction.from_generators(rho.source, rho.target, [], "trivial")
