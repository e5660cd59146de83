"""
Smith normal form over ℤ and what it buys us: integer solvability of ∂μ = z,
a certificate when no solution exists, and ℤ-bases of kernels.

Matrices are numpy arrays with dtype=object so every entry stays a Python int.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Tuple, Union

import numpy as np

from chain_core import Chain, ModuleMap
from errors import ChainInputError

logger = logging.getLogger(__name__)

MatrixLike = Union[ModuleMap, np.ndarray]


def _as_matrix(A: MatrixLike) -> np.ndarray:
    if isinstance(A, ModuleMap):
        return A.matrix.copy()
    array = np.array(A, dtype=object)
    if array.ndim != 2:
        raise ChainInputError(f"Expected a 2-dimensional integer matrix, got shape {array.shape}")
    return array


def identity(n: int) -> np.ndarray:
    eye = np.zeros((n, n), dtype=object)
    eye[:, :] = 0
    for i in range(n):
        eye[i, i] = 1
    return eye


@dataclass(frozen=True)
class SNFDecomposition:
    """U·A·V = D with U, V unimodular and D diagonal, d_1 | d_2 | … | d_rank."""

    U: np.ndarray = field(repr=False)
    D: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    rank: int

    @property
    def divisors(self) -> Tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(self.rank))

    def check(self, A: MatrixLike) -> bool:
        """Recompute U·A·V and compare with D."""
        matrix = _as_matrix(A)
        if matrix.size == 0:
            return self.D.shape == matrix.shape
        return bool(np.array_equal(self.U.dot(matrix).dot(self.V), self.D))


def _smallest_nonzero(A: np.ndarray, t: int):
    best, where = None, None
    rows, cols = A.shape
    for i in range(t, rows):
        for j in range(t, cols):
            value = abs(A[i, j])
            if value and (best is None or value < best):
                best, where = value, (i, j)
    return where


def _swap_rows(M: np.ndarray, a: int, b: int):
    if a != b:
        M[[a, b], :] = M[[b, a], :]


def _swap_cols(M: np.ndarray, a: int, b: int):
    if a != b:
        M[:, [a, b]] = M[:, [b, a]]


def smith_normal_form(A: MatrixLike) -> SNFDecomposition:
    """
    Diagonalise an integer matrix by unimodular row and column operations.

    Pivot choice is the smallest nonzero magnitude in the remaining block. After
    the pivot row and column are cleared, any entry the pivot does not divide is
    pulled into the pivot row and the step repeats, which gives d_i | d_{i+1}.

    Args:
        A: Integer matrix, or a ModuleMap read as its target × source matrix

    Returns:
        SNFDecomposition: U, D, V with U·A·V = D and the rank
    """
    D = _as_matrix(A)
    rows, cols = D.shape
    U, V = identity(rows), identity(cols)

    t = 0
    while t < min(rows, cols):
        where = _smallest_nonzero(D, t)
        if where is None:
            break
        i, j = where
        _swap_rows(D, t, i)
        _swap_rows(U, t, i)
        _swap_cols(D, t, j)
        _swap_cols(V, t, j)

        while True:
            pivot = D[t, t]
            for i in range(t + 1, rows):
                if D[i, t]:
                    q = D[i, t] // pivot
                    D[i, :] -= q * D[t, :]
                    U[i, :] -= q * U[t, :]
            for j in range(t + 1, cols):
                if D[t, j]:
                    q = D[t, j] // pivot
                    D[:, j] -= q * D[:, t]
                    V[:, j] -= q * V[:, t]

            # remainders smaller than the pivot become the next pivot
            best, where = abs(pivot), None
            for i in range(t + 1, rows):
                if D[i, t] and abs(D[i, t]) < best:
                    best, where = abs(D[i, t]), ("row", i)
            for j in range(t + 1, cols):
                if D[t, j] and abs(D[t, j]) < best:
                    best, where = abs(D[t, j]), ("col", j)
            if where is not None:
                kind, index = where
                if kind == "row":
                    _swap_rows(D, t, index)
                    _swap_rows(U, t, index)
                else:
                    _swap_cols(D, t, index)
                    _swap_cols(V, t, index)
                continue

            offender = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if D[i, j] % pivot),
                None)
            if offender is None:
                break
            i, _ = offender
            D[t, :] += D[i, :]
            U[t, :] += U[i, :]

        if D[t, t] < 0:
            D[t, :] = -D[t, :]
            U[t, :] = -U[t, :]
        t += 1

    logger.debug("smith form of %dx%d matrix: rank %d", rows, cols, t)
    return SNFDecomposition(U=U, D=D, V=V, rank=t)


@dataclass(frozen=True)
class Obstruction:
    """
    Certificate that ∂μ = z has no integer solution.

    functional is an integer linear form u on the target basis. With modulus 0,
    u vanishes on every column of ∂ while u(z) ≠ 0. With modulus m > 1, u is
    divisible by m on every column of ∂ while u(z) is not.
    """

    functional: Chain
    modulus: int
    value: int

    @property
    def kind(self) -> str:
        return "rank" if self.modulus == 0 else "torsion"

    def verify(self, boundary: ModuleMap, z: Chain) -> bool:
        u = dict(self.functional.items)

        def pair(chain: Chain) -> int:
            return sum(c * u.get(t, 0) for t, c in chain.items)

        def vanishes(value: int) -> bool:
            return value == 0 if self.modulus == 0 else value % self.modulus == 0

        return all(vanishes(pair(column)) for column in boundary.columns) and not vanishes(pair(z))

    def format(self) -> str:
        if self.modulus == 0:
            return f"rank u={self.functional.format()} u(z)={self.value}"
        return f"torsion mod {self.modulus} u={self.functional.format()} u(z)={self.value}"


@dataclass(frozen=True)
class Feasibility:
    """Outcome of integer_feasible; truthy iff an integer preimage exists."""

    particular: Optional[Chain]
    kernel: Tuple[Chain, ...] = ()
    obstruction: Optional[Obstruction] = None

    @property
    def feasible(self) -> bool:
        return self.particular is not None

    def __bool__(self) -> bool:
        return self.feasible


def column_chains(boundary: ModuleMap, matrix: np.ndarray) -> Tuple[Chain, ...]:
    return tuple(Chain.from_vector(boundary.source, matrix[:, j]) for j in range(matrix.shape[1]))


def solve_with(snf: SNFDecomposition, boundary: ModuleMap, z: Chain, kernel: Tuple[Chain, ...]) -> Feasibility:
    """Solve ∂μ = z using a precomputed decomposition of ∂."""
    if z.basis is not boundary.target and z.basis != boundary.target:
        raise ChainInputError(f"Target chain is over {z.basis.name!r}, expected {boundary.target.name!r}")
    rows, cols = snf.D.shape
    c = snf.U.dot(z.to_vector()) if rows else np.zeros(0, dtype=object)

    for i in range(snf.rank, rows):
        if c[i] != 0:
            functional = Chain.from_vector(boundary.target, snf.U[i, :])
            return Feasibility(None, kernel, Obstruction(functional, 0, int(c[i])))

    y = np.zeros(cols, dtype=object)
    y[:] = 0
    for i, d in enumerate(snf.divisors):
        if c[i] % d:
            functional = Chain.from_vector(boundary.target, snf.U[i, :])
            return Feasibility(None, kernel, Obstruction(functional, d, int(c[i])))
        y[i] = c[i] // d

    particular = Chain.from_vector(boundary.source, snf.V.dot(y) if cols else y)
    return Feasibility(particular, kernel)


def kernel_basis(boundary: ModuleMap, snf: Optional[SNFDecomposition] = None) -> Tuple[Chain, ...]:
    """A ℤ-basis of ker ∂: the last (n - rank) columns of V."""
    snf = snf or smith_normal_form(boundary)
    return column_chains(boundary, snf.V[:, snf.rank:])


def integer_feasible(boundary: ModuleMap, z: Chain) -> Feasibility:
    """Decide whether ∂μ = z has an integer solution; on success return one and a basis of ker ∂."""
    snf = smith_normal_form(boundary)
    return solve_with(snf, boundary, z, kernel_basis(boundary, snf))


def echelon_form(K: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """
    Column echelon form of an integer matrix of full column rank, by unimodular
    column operations. Column i has its first nonzero entry at pivot row p_i, the
    pivot is positive and p_0 < p_1 < ….
    """
    K = np.array(K, dtype=object)
    rows, cols = K.shape
    pivots = []
    current = 0
    for r in range(rows):
        if current >= cols:
            break
        # fold every remaining column's entry in row r into column `current`
        for j in range(current + 1, cols):
            a, b = K[r, current], K[r, j]
            if b == 0:
                continue
            g, x, y = _extended_gcd(a, b)
            left, right = K[:, current].copy(), K[:, j].copy()
            K[:, current] = x * left + y * right
            K[:, j] = (a // g) * right - (b // g) * left
        if K[r, current] == 0:
            continue
        if K[r, current] < 0:
            K[:, current] = -K[:, current]
        pivots.append(r)
        current += 1
    if current < cols:
        raise ChainInputError("echelon_form needs linearly independent columns")
    return K, tuple(pivots)


def _extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y) with x·a + y·b = g = gcd(a, b) ≥ 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    assert old_r == gcd(a, b)
    return old_r, old_x, old_y


def echelon_kernel_basis(boundary: ModuleMap) -> Tuple[Tuple[Chain, ...], Tuple[int, ...]]:
    """ker ∂ in column echelon form, with the pivot row of each basis vector."""
    snf = smith_normal_form(boundary)
    K = snf.V[:, snf.rank:]
    if K.shape[1] == 0:
        return (), ()
    echelon, pivots = echelon_form(K)
    return column_chains(boundary, echelon), pivots
