"""
Filling functions FV^{d+1}(k) of a finite complex and the n·B_n upper bound.

Cycles of ℓ1 norm ≤ k are enumerated as integer points of the kernel lattice
in the ℓ1 ball. Each one is filled exactly by FillingSolver, and the table
entry for k is the largest filling norm found (∞ once any cycle has no integer
filling).
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx

from builders import one_skeleton
from chain_core import Chain, ChainComplex, ModuleMap, apply_map, augmentation_map, l1_norm
from connectivity import enumerate_Dn_upto
from errors import ChainInputError
from filling import BudgetExceeded, FillingSolver, Infeasible
from smith_form import Obstruction, echelon_kernel_basis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FvFinite:
    value: int
    cycle: Optional[Chain] = None
    filling: Optional[Chain] = None

    def cell(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class FvInfinite:
    cycle: Chain
    obstruction: Optional[Obstruction] = None

    def cell(self) -> str:
        return "inf"


@dataclass(frozen=True)
class FvBudget:
    budget: int
    cycle: Optional[Chain] = None

    def cell(self) -> str:
        return f"budget({self.budget})"


FvEntry = Union[FvFinite, FvInfinite, FvBudget]


@dataclass(frozen=True)
class FvTable:
    complex_name: str
    degree: int
    rows: Tuple[FvEntry, ...]

    def values(self) -> List[Union[int, float, str]]:
        """Plain values per k: ints, math.inf, or the budget marker string."""
        out = []
        for row in self.rows:
            if isinstance(row, FvFinite):
                out.append(row.value)
            elif isinstance(row, FvInfinite):
                out.append(math.inf)
            else:
                out.append(row.cell())
        return out


def enumerate_cycles(boundary: ModuleMap, k: int) -> List[Chain]:
    """
    Every z with ∂z = 0 and ‖z‖₁ ≤ k, each exactly once, sorted by (norm, items).

    The kernel basis is in column echelon form, so once the coefficients of the
    first i basis vectors are fixed, every coordinate above the (i+1)-th pivot
    is final and the partial norm can prune the search.
    """
    if k < 0:
        raise ChainInputError(f"k must be non-negative, got {k}")
    basis = boundary.source
    kernel, pivots = echelon_kernel_basis(boundary)
    n, r = basis.size, len(kernel)
    columns = [[int(v) for v in chain.to_vector()] for chain in kernel]
    found: List[Chain] = []

    def search(i: int, x: List[int], used: int):
        if i == r:
            found.append(Chain(basis, {s: c for s, c in enumerate(x) if c}))
            return
        column, pivot_row = columns[i], pivots[i]
        end = pivots[i + 1] if i + 1 < r else n
        pivot, current, room = column[pivot_row], x[pivot_row], k - used
        low = -((room + current) // pivot)
        high = (room - current) // pivot
        for t in range(low, high + 1):
            segment = sum(abs(x[row] + t * column[row]) for row in range(pivot_row, end))
            if used + segment > k:
                continue
            y = [a + t * b for a, b in zip(x, column)] if t else x
            search(i + 1, y, used + segment)

    search(0, [0] * n, 0)
    found.sort(key=Chain.sort_key)
    logger.debug("%d cycles of norm <= %d in %s", len(found), k, basis.name)
    return found


def _check_degree(complex_: ChainComplex, d: int):
    if not 0 <= d <= complex_.top_degree:
        raise ChainInputError(
            f"Degree {d} out of range for {complex_.name!r}: cycles live in degrees 0..{complex_.top_degree}")


def _tabulate(cycles: List[Chain], solver: FillingSolver, kmax: int, budget: Optional[int]) -> List[FvEntry]:
    """Rows k = 0..kmax from cycles sorted by norm, each filled once."""
    rows: List[FvEntry] = []
    best: FvEntry = FvFinite(0)
    exhausted: Optional[FvBudget] = None
    position = 0
    for k in range(kmax + 1):
        while position < len(cycles) and l1_norm(cycles[position]) <= k:
            z = cycles[position]
            position += 1
            if isinstance(best, FvInfinite):
                continue
            result = solver.solve(z, budget)
            if isinstance(result, Infeasible):
                best = FvInfinite(z, result.obstruction)
            elif isinstance(result, BudgetExceeded):
                exhausted = exhausted or FvBudget(result.budget, z)
            elif result.value > best.value or best.cycle is None:
                best = FvFinite(result.value, z, result.witness)
        if isinstance(best, FvInfinite) or exhausted is None:
            rows.append(best)
        else:
            rows.append(exhausted)
    return rows


def fv_table(complex_: ChainComplex, d: int, kmax: int, budget: Optional[int] = None) -> FvTable:
    """
    FV^{d+1}(k) for k = 0..kmax. Degree 0 uses the augmentation kernel.

    Args:
        complex_: Finite chain complex
        d: Degree of the cycles, 0 ≤ d ≤ top degree
        kmax: Largest cycle norm
        budget: Optional cap on each filling search

    Returns:
        FvTable: One row per k, each finite, infinite or a budget marker
    """
    _check_degree(complex_, d)
    if kmax < 0:
        raise ChainInputError(f"kmax must be non-negative, got {kmax}")
    cycle_map = augmentation_map(complex_.basis(0)) if d == 0 else complex_.boundary(d)
    cycles = enumerate_cycles(cycle_map, kmax)
    solver = FillingSolver(complex_.boundary(d + 1))
    rows = _tabulate(cycles, solver, kmax, budget)
    logger.info("fv table of %s in degree %d up to k=%d: %d cycles", complex_.name, d, kmax, len(cycles))
    return FvTable(complex_.name, d, tuple(rows))


def fv(complex_: ChainComplex, d: int, k: int, budget: Optional[int] = None) -> FvEntry:
    """sup{‖γ‖_∂ : γ a d-cycle, ‖γ‖₁ ≤ k}; 0 when only the zero cycle qualifies."""
    return fv_table(complex_, d, k, budget).rows[k]


def fv0(complex_: ChainComplex, k: int, budget: Optional[int] = None) -> FvEntry:
    """FV¹(k) with Z₀ the kernel of the augmentation, filled by 1-chains."""
    return fv(complex_, 0, k, budget)


@dataclass(frozen=True)
class BnBound:
    """B_n = max filling norm over connected kernel elements of norm ≤ n, and bound = n·B_n."""

    n: int
    b_n: Optional[int]
    bound: Optional[int]
    maximizer: Optional[Chain] = None
    infinite_witness: Optional[Chain] = None

    @property
    def is_infinite(self) -> bool:
        return self.infinite_witness is not None


def fv_upper_bound(rho: ModuleMap, n: int, filling_map: ModuleMap) -> BnBound:
    """
    B_n over the ρ-connected elements of ker ρ with norm ≤ n, filled through
    filling_map (∂_{d+1} when ρ = ∂_d).

    Args:
        rho: The map whose kernel holds the cycles
        n: Largest norm
        filling_map: Map landing in rho.source

    Returns:
        BnBound: b_n and n·b_n, or an infinite witness when some element has no filling
    """
    if n < 0:
        raise ChainInputError(f"n must be non-negative, got {n}")
    if filling_map.target != rho.source:
        raise ChainInputError("The filling map must land in the source of ρ")
    candidates = sorted((x for x in enumerate_Dn_upto(rho, n) if not apply_map(rho, x)), key=Chain.sort_key)
    return bn_from_candidates(n, candidates, FillingSolver(filling_map))


def bn_from_candidates(n: int, candidates: List[Chain], solver: FillingSolver) -> BnBound:
    b_n, maximizer = 0, None
    for x in candidates:
        result = solver.solve(x)
        if isinstance(result, Infeasible):
            return BnBound(n, None, None, infinite_witness=x)
        if result.value > b_n:
            b_n, maximizer = result.value, x
    logger.debug("B_%d = %d over %d connected kernel elements", n, b_n, len(candidates))
    return BnBound(n, b_n, n * b_n, maximizer)


def complex_upper_bound(complex_: ChainComplex, d: int, n: int) -> BnBound:
    """fv_upper_bound with ρ = ∂_d (the augmentation for d = 0) and fillings by ∂_{d+1}."""
    _check_degree(complex_, d)
    rho = augmentation_map(complex_.basis(0)) if d == 0 else complex_.boundary(d)
    return fv_upper_bound(rho, n, complex_.boundary(d + 1))


def _degree_of(complex_: ChainComplex, chain: Chain) -> int:
    for d, basis in enumerate(complex_.dimensions):
        if chain.basis is basis or chain.basis == basis:
            return d
    raise ChainInputError(f"Chain over {chain.basis.name!r} is not a chain of {complex_.name!r}")


def vertex_closure(complex_: ChainComplex, chain: Chain) -> frozenset:
    """Vertices reached from the support of a chain by taking boundary supports down to degree 0."""
    d = _degree_of(complex_, chain)
    cells = set(chain.support)
    while d > 0:
        columns = complex_.boundary(d).columns
        cells = {t for s in cells for t, _ in columns[s].items}
        d -= 1
    return frozenset(cells)


def cycle_diameter(complex_: ChainComplex, sigma: Chain, skeleton: Optional[nx.Graph] = None) -> float:
    """
    Diameter of the vertex closure of σ in the 1-skeleton path metric

    Args:
        complex_: Complex that σ is a chain of
        sigma: Nonzero chain in any degree
        skeleton: Precomputed 1-skeleton graph, built when omitted

    Returns:
        float: Largest vertex distance, math.inf if the vertices are disconnected
    """
    if not sigma:
        raise ChainInputError("The zero chain has no diameter")
    vertices = vertex_closure(complex_, sigma)
    graph = skeleton if skeleton is not None else nx.Graph(one_skeleton(complex_))
    diameter = 0
    for v in vertices:
        distances: Dict[int, int] = nx.single_source_shortest_path_length(graph, v)
        for w in vertices:
            if w not in distances:
                return math.inf
            diameter = max(diameter, distances[w])
    return diameter


def cell_diameter_bound(complex_: ChainComplex, d: int) -> float:
    """C = max diameter of a single d-cell."""
    _check_degree(complex_, d)
    basis = complex_.basis(d)
    skeleton = nx.Graph(one_skeleton(complex_))
    return max((cycle_diameter(complex_, Chain.unit(basis, s), skeleton) for s in range(basis.size)), default=0)
