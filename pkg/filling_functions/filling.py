"""
Exact filling norms: the minimum ℓ1 norm of an integer preimage μ with ∂μ = z.

The solution set is a coset x0 + L·ℤ^k of the kernel lattice. FillingSolver
searches it by branch-and-bound, with the continuous ℓ1 relaxation (scipy's
HiGHS LP) as the admissible lower bound. The relaxation only prunes; every
value reported is recomputed in exact integer arithmetic.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import linprog

import settings
from chain_core import Basis, Chain, ModuleMap, l1_norm
from errors import ChainInputError, SolverError
from smith_form import (Feasibility, Obstruction, column_chains, echelon_form, smith_normal_form,
                        solve_with)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Finite:
    value: int
    witness: Chain

    def format(self) -> str:
        return f"finite {self.value} {self.witness.format()}"


@dataclass(frozen=True)
class Infeasible:
    obstruction: Optional[Obstruction] = None

    def format(self) -> str:
        return "infeasible" if self.obstruction is None else f"infeasible {self.obstruction.format()}"


@dataclass(frozen=True)
class BudgetExceeded:
    budget: int

    def format(self) -> str:
        return f"budget-exceeded {self.budget}"


FillingResult = Union[Finite, Infeasible, BudgetExceeded]


class FillingSolver:
    """
    Minimum-ℓ1 integer fillings for one boundary map.

    The Smith decomposition, the kernel lattice and the relaxation constraint
    matrix are computed once, so a solver can be reused across many targets.
    """

    def __init__(self, boundary: ModuleMap, tolerance: Optional[float] = None):
        self.boundary = boundary
        self.tolerance = settings.LP_TOLERANCE if tolerance is None else tolerance
        self.snf = smith_normal_form(boundary)
        K = self.snf.V[:, self.snf.rank:]
        if K.shape[1]:
            K, _ = echelon_form(K)
        self.lattice = K
        self.kernel = column_chains(boundary, K)
        self.nodes_explored = 0

        n, k = K.shape
        if k:
            L = K.astype(float)
            identity = np.eye(n)
            # variables are [t (k, free), u (n, >= 0)]
            self._A_ub = np.block([[L, -identity], [-L, -identity]])
            self._cost = np.concatenate([np.zeros(k), np.ones(n)])
        logger.debug("filling solver for %s: source %d, kernel rank %d",
                     boundary.name or boundary.source.name, n, k)

    @property
    def kernel_rank(self) -> int:
        return self.lattice.shape[1]

    def feasibility(self, z: Chain) -> Feasibility:
        return solve_with(self.snf, self.boundary, z, self.kernel)

    def solve(self, z: Chain, budget: Optional[int] = None) -> FillingResult:
        """
        Minimum-ℓ1 integer filling of z

        Args:
            z: Chain over the boundary's target
            budget: Largest filling norm worth searching for; None for no cap

        Returns:
            FillingResult: Finite with an optimal witness, Infeasible with its
            obstruction, or BudgetExceeded when every filling has norm > budget
        """
        if budget is not None and budget < 0:
            raise ChainInputError(f"Budget must be non-negative, got {budget}")
        feasibility = self.feasibility(z)
        if not feasibility:
            return Infeasible(feasibility.obstruction)
        x0 = feasibility.particular
        if self.kernel_rank == 0:
            value = l1_norm(x0)
            if budget is not None and value > budget:
                return BudgetExceeded(budget)
            return Finite(value, x0)
        return self._branch_and_bound(x0, budget)

    def _point(self, x0: np.ndarray, t) -> np.ndarray:
        return x0 + self.lattice.dot(np.array([int(v) for v in t], dtype=object))

    def _relax(self, x0: np.ndarray, bounds) -> Optional[Tuple[float, np.ndarray]]:
        x0f = x0.astype(float)
        b_ub = np.concatenate([-x0f, x0f])
        k = self.kernel_rank
        all_bounds = list(bounds) + [(0, None)] * len(x0f)
        result = linprog(self._cost, A_ub=self._A_ub, b_ub=b_ub, bounds=all_bounds, method="highs")
        self.nodes_explored += 1
        if result.status == 2:
            return None
        if result.status != 0:
            raise SolverError(f"Relaxation solver failed with status {result.status}: {result.message}")
        return result.fun, result.x[:k]

    def _branch_and_bound(self, particular: Chain, budget: Optional[int]) -> FillingResult:
        x0 = particular.to_vector()
        k = self.kernel_rank
        best_value = l1_norm(particular)
        best_point = x0
        if budget is not None and best_value > budget:
            # only incumbents within budget count
            best_value, best_point = budget + 1, None

        stack: List[List[Tuple[Optional[float], Optional[float]]]] = [[(None, None)] * k]
        while stack:
            bounds = stack.pop()
            relaxed = self._relax(x0, bounds)
            if relaxed is None:
                continue
            value, t = relaxed
            lower = math.ceil(value - self.tolerance)
            if lower >= best_value:
                continue

            # any rounded t is a lattice point, hence a valid filling
            rounded = np.rint(t)
            candidate = self._point(x0, rounded)
            norm = int(sum(abs(v) for v in candidate))
            if norm < best_value:
                best_value, best_point = norm, candidate

            fractional = np.abs(t - rounded)
            i = int(np.argmax(fractional))
            if fractional[i] <= self.tolerance or lower >= best_value:
                continue
            down, up = list(bounds), list(bounds)
            down[i] = (bounds[i][0], math.floor(t[i]))
            up[i] = (math.ceil(t[i]), bounds[i][1])
            # explore the nearer side first
            if t[i] - math.floor(t[i]) < 0.5:
                stack.extend([up, down])
            else:
                stack.extend([down, up])

        if best_point is None:
            logger.debug("no filling within budget %s after %d nodes", budget, self.nodes_explored)
            return BudgetExceeded(budget)
        witness = Chain.from_vector(self.boundary.source, best_point)
        return Finite(l1_norm(witness), witness)


def filling_norm(boundary: ModuleMap, z: Chain, budget: Optional[int] = None) -> FillingResult:
    """‖z‖_∂ = min{‖μ‖₁ : ∂μ = z}: Finite with a witness, Infeasible, or BudgetExceeded."""
    if budget is None:
        budget = settings.DEFAULT_BUDGET
    return FillingSolver(boundary).solve(z, budget)


def chains_of_norm(basis: Basis, norm: int) -> Iterator[Chain]:
    """Every chain over basis with ℓ1 norm exactly `norm`, in a fixed order."""
    size = basis.size

    def place(position: int, remaining: int, items):
        if remaining == 0:
            yield Chain._from_items(basis, tuple(items))
            return
        if position == size:
            return
        yield from place(position + 1, remaining, items)
        for magnitude in range(1, remaining + 1):
            for sign in (1, -1):
                items.append((position, sign * magnitude))
                yield from place(position + 1, remaining - magnitude, items)
                items.pop()

    yield from place(0, norm, [])


def filling_norm_oracle(boundary: ModuleMap, z: Chain, cap: Optional[int] = None) -> FillingResult:
    """
    Brute force: try every μ in increasing ℓ1 norm up to cap. Cannot certify ∞.

    Args:
        boundary: The map ∂
        z: Chain over boundary.target
        cap: Largest norm tried; defaults to settings.ORACLE_CAP

    Returns:
        FillingResult: Finite with the first filling found, or BudgetExceeded(cap)
    """
    if cap is None:
        cap = settings.ORACLE_CAP
    if z.basis is not boundary.target and z.basis != boundary.target:
        raise ChainInputError(f"Target chain is over {z.basis.name!r}, expected {boundary.target.name!r}")
    columns = boundary.columns
    target = dict(z.items)
    for norm in range(cap + 1):
        for mu in chains_of_norm(boundary.source, norm):
            image = {}
            for s, c in mu.items:
                for t, r in columns[s].items:
                    image[t] = image.get(t, 0) + c * r
            if {t: v for t, v in image.items() if v} == target:
                return Finite(norm, mu)
    return BudgetExceeded(cap)


def all_chains_upto(basis: Basis, norm: int) -> Iterator[Chain]:
    """
    Every chain over basis with ℓ1 norm at most `norm`

    Args:
        basis: Basis to enumerate over
        norm: Largest ℓ1 norm

    Returns:
        Iterator: Chains in increasing norm, the zero chain first
    """
    return itertools.chain.from_iterable(chains_of_norm(basis, n) for n in range(norm + 1))


def result_key(result: FillingResult):
    """Total order Finite(a) < Finite(b) < Infinite for a < b; budget results sort last."""
    if isinstance(result, Finite):
        return (0, result.value)
    if isinstance(result, Infeasible):
        return (1, 0)
    return (2, result.budget)
