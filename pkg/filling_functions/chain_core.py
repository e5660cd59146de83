"""
Exact sparse integer chains over named bases.

Bases, chains, module maps between free modules and finite chain complexes.
All values are immutable after construction and every operation below is a pure
function, so chains can be shared freely between callers.
"""

import logging
import numbers
import operator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from errors import ChainInputError, ComplexValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasisId:
    """A basis element: its position in the basis plus an optional cell label."""

    index: int
    label: Optional[str] = None

    def __index__(self) -> int:
        return self.index


@dataclass(frozen=True)
class Basis:
    """An ordered, named set of cells of one degree (or of a G-set S or T)."""

    name: str
    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(label) for label in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            seen = set()
            for label in labels:
                if label in seen:
                    raise ChainInputError(f"Basis {self.name!r} repeats the label {label!r}")
                seen.add(label)

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def check(self, s) -> int:
        """Return s as a plain index, raising if it is not a basis id of this basis."""
        try:
            index = operator.index(s)
        except TypeError:
            raise ChainInputError(f"Basis id must be an integer, got {s!r}")
        if not 0 <= index < self.size:
            raise ChainInputError(f"Basis id {index} out of range for basis {self.name!r} of size {self.size}")
        return index

    def index_of(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise ChainInputError(f"Unknown cell {label!r} in basis {self.name!r}")

    def label(self, s) -> str:
        return self.labels[self.check(s)]

    def ids(self) -> List[BasisId]:
        return [BasisId(i, label) for i, label in enumerate(self.labels)]


class Chain:
    """
    A finitely supported integer combination of basis elements.

    Coefficients are Python ints (arbitrary precision). Zero coefficients are
    never stored; the zero chain has an empty support.
    """

    __slots__ = ("_basis", "_items", "_hash")

    def __init__(self, basis: Basis, entries: Optional[Mapping] = None):
        collected: Dict[int, int] = {}
        for key, value in (entries or {}).items():
            index = basis.check(key)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral):
                raise ChainInputError(f"Coefficient of {basis.labels[index]!r} must be an integer, got {value!r}")
            collected[index] = collected.get(index, 0) + int(value)
        self._basis = basis
        self._items = tuple(sorted((i, c) for i, c in collected.items() if c != 0))
        self._hash = None

    @classmethod
    def _from_items(cls, basis: Basis, items) -> "Chain":
        # Trusted constructor: items must be sorted, in range and nonzero.
        chain = object.__new__(cls)
        chain._basis = basis
        chain._items = tuple(items)
        chain._hash = None
        return chain

    @classmethod
    def _from_dict(cls, basis: Basis, values: Mapping[int, int]) -> "Chain":
        return cls._from_items(basis, sorted((i, c) for i, c in values.items() if c != 0))

    @classmethod
    def zero(cls, basis: Basis) -> "Chain":
        return cls._from_items(basis, ())

    @classmethod
    def unit(cls, basis: Basis, s, sign: int = 1) -> "Chain":
        if sign not in (1, -1):
            raise ChainInputError(f"Unit sign must be +1 or -1, got {sign!r}")
        return cls._from_items(basis, ((basis.check(s), sign),))

    @classmethod
    def from_labels(cls, basis: Basis, entries: Mapping[str, int]) -> "Chain":
        return cls(basis, {basis.index_of(label): value for label, value in entries.items()})

    @classmethod
    def from_vector(cls, basis: Basis, vector) -> "Chain":
        values = list(vector)
        if len(values) != basis.size:
            raise ChainInputError(f"Vector of length {len(values)} does not match basis {basis.name!r} of size {basis.size}")
        return cls(basis, {i: int(v) for i, v in enumerate(values) if v != 0})

    @property
    def basis(self) -> Basis:
        return self._basis

    @property
    def items(self) -> Tuple[Tuple[int, int], ...]:
        """(basis id, coefficient) pairs sorted by basis id."""
        return self._items

    @property
    def entries(self) -> Dict[int, int]:
        return dict(self._items)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, _ in self._items)

    def to_vector(self) -> np.ndarray:
        vector = np.zeros(self._basis.size, dtype=object)
        vector[:] = 0
        for i, c in self._items:
            vector[i] = c
        return vector

    def sort_key(self):
        """Order by ℓ1 norm, then lexicographically by (basis id, coefficient) pairs."""
        return (l1_norm(self), self._items)

    def format(self) -> str:
        """Render as a comma separated ``label:coeff`` list ("0" for the zero chain)."""
        if not self._items:
            return "0"
        labels = self._basis.labels
        return ",".join(f"{labels[i]}:{c}" for i, c in self._items)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return self._items == other._items and (self._basis is other._basis or self._basis == other._basis)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._basis.name, self._items))
        return self._hash

    def __add__(self, other: "Chain") -> "Chain":
        return add(self, other)

    def __sub__(self, other: "Chain") -> "Chain":
        return add(self, negate(other))

    def __neg__(self) -> "Chain":
        return negate(self)

    def __rmul__(self, n) -> "Chain":
        return scale(n, self)

    def __mul__(self, n) -> "Chain":
        return scale(n, self)

    def __repr__(self) -> str:
        return f"Chain({self._basis.name}: {self.format()})"


def _require_same_basis(x: Chain, y: Chain, operation: str):
    if x.basis is not y.basis and x.basis != y.basis:
        raise ChainInputError(f"{operation}: chains live in different bases ({x.basis.name!r} vs {y.basis.name!r})")


def coeff(x: Chain, s) -> int:
    """⟨x, s⟩: the coefficient of basis element s in x (0 when absent)."""
    index = x.basis.check(s)
    for i, c in x.items:
        if i == index:
            return c
    return 0


def l1_norm(x: Chain) -> int:
    """
    ‖x‖₁ = Σ |⟨x, s⟩|

    Args:
        x: Chain over any basis

    Returns:
        int: Sum of absolute coefficients (0 for the zero chain)
    """
    return sum(abs(c) for _, c in x.items)


def add(x: Chain, y: Chain) -> Chain:
    """
    Coefficientwise sum of two chains

    Args:
        x: First chain
        y: Second chain, over the same basis as x

    Returns:
        Chain: x + y with zero coefficients dropped

    Raises:
        ChainInputError: If the chains live in different bases
    """
    _require_same_basis(x, y, "add")
    values = dict(x.items)
    for i, c in y.items:
        values[i] = values.get(i, 0) + c
    return Chain._from_dict(x.basis, values)


def negate(x: Chain) -> Chain:
    return Chain._from_items(x.basis, tuple((i, -c) for i, c in x.items))


def scale(n, x: Chain) -> Chain:
    """
    Multiply every coefficient by an integer

    Args:
        n: Integer factor (bool and non-integral values are rejected)
        x: Chain to scale

    Returns:
        Chain: n·x
    """
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise ChainInputError(f"Chains can only be scaled by integers, got {n!r}")
    n = int(n)
    if n == 0:
        return Chain.zero(x.basis)
    return Chain._from_items(x.basis, tuple((i, n * c) for i, c in x.items))


def is_part_of(x: Chain, y: Chain) -> bool:
    """
    x ⪯ y: ⟨x,s⟩⟨y,s⟩ ≥ ⟨x,s⟩² for every basis element s

    Args:
        x: Candidate part
        y: Chain over the same basis

    Returns:
        bool: True if every coefficient of x has the sign of y's and no larger magnitude
    """
    _require_same_basis(x, y, "is_part_of")
    ys = dict(y.items)
    return all(c * ys.get(i, 0) >= c * c for i, c in x.items)


def s_intersection(x: Chain, y: Chain) -> FrozenSet[int]:
    """
    x ∩_S y: basis elements on which x and y carry coefficients of opposite sign

    Args:
        x: First chain
        y: Second chain, over the same basis

    Returns:
        frozenset: Basis indices; empty exactly when ‖x + y‖₁ = ‖x‖₁ + ‖y‖₁
    """
    _require_same_basis(x, y, "s_intersection")
    ys = dict(y.items)
    return frozenset(i for i, c in x.items if c * ys.get(i, 0) < 0)


@dataclass(frozen=True)
class ModuleMap:
    """
    A homomorphism ℤ[source] → ℤ[target], stored column-wise.

    columns[s] is the image of the basis element s, a chain over the target.
    """

    source: Basis
    target: Basis
    columns: Tuple[Chain, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        columns = tuple(self.columns)
        object.__setattr__(self, "columns", columns)
        if len(columns) != self.source.size:
            raise ChainInputError(
                f"Map {self.name or '?'} has {len(columns)} columns but its source {self.source.name!r} has {self.source.size} elements")
        for s, column in enumerate(columns):
            if column.basis is not self.target and column.basis != self.target:
                raise ChainInputError(
                    f"Column {self.source.labels[s]!r} of map {self.name or '?'} is not a chain over {self.target.name!r}")

    @classmethod
    def zero(cls, source: Basis, target: Basis, name: str = "") -> "ModuleMap":
        return cls(source, target, tuple(Chain.zero(target) for _ in range(source.size)), name)

    @classmethod
    def from_matrix(cls, source: Basis, target: Basis, matrix, name: str = "") -> "ModuleMap":
        """Build from a target.size × source.size integer matrix."""
        array = np.asarray(matrix, dtype=object).reshape(target.size, source.size)
        columns = tuple(Chain.from_vector(target, array[:, s]) for s in range(source.size))
        return cls(source, target, columns, name)

    @cached_property
    def matrix(self) -> np.ndarray:
        array = np.zeros((self.target.size, self.source.size), dtype=object)
        array[:, :] = 0
        for s, column in enumerate(self.columns):
            for t, c in column.items:
                array[t, s] = c
        return array

    @cached_property
    def rows(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """For each target element t, the (s, ⟨ρ(s), t⟩) pairs with nonzero entry."""
        rows: List[List[Tuple[int, int]]] = [[] for _ in range(self.target.size)]
        for s, column in enumerate(self.columns):
            for t, c in column.items:
                rows[t].append((s, c))
        return tuple(tuple(row) for row in rows)

    def column(self, s) -> Chain:
        return self.columns[self.source.check(s)]


def apply_map(rho: ModuleMap, x: Chain) -> Chain:
    """
    Linear extension Σ ⟨x,s⟩·ρ(s)

    Args:
        rho: Module map
        x: Chain over rho.source

    Returns:
        Chain: ρ(x) over rho.target
    """
    if x.basis is not rho.source and x.basis != rho.source:
        raise ChainInputError(f"apply_map: chain over {x.basis.name!r} but map source is {rho.source.name!r}")
    values: Dict[int, int] = {}
    for s, c in x.items:
        for t, r in rho.columns[s].items:
            values[t] = values.get(t, 0) + c * r
    return Chain._from_dict(rho.target, values)


@dataclass(frozen=True)
class ChainComplex:
    """
    Graded bases C_0..C_D with boundary maps ∂_d: C_d → C_{d-1} for 1 ≤ d ≤ D.

    boundaries[d - 1] holds ∂_d. Construction checks that bases line up; the
    ∂∘∂ = 0 condition is checked separately by validate_complex.
    """

    name: str
    dimensions: Tuple[Basis, ...]
    boundaries: Tuple[ModuleMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if not self.name or any(ch.isspace() for ch in self.name):
            raise ComplexValidationError(f"Complex name {self.name!r} must be non-empty and free of whitespace")
        if not self.dimensions:
            raise ComplexValidationError(f"Complex {self.name!r} has no degree-0 basis")
        if len(self.boundaries) != len(self.dimensions) - 1:
            raise ComplexValidationError(
                f"Complex {self.name!r} has {len(self.dimensions)} degrees but {len(self.boundaries)} boundary maps")
        for d, boundary in enumerate(self.boundaries, start=1):
            if boundary.source != self.dimensions[d] or boundary.target != self.dimensions[d - 1]:
                raise ComplexValidationError(
                    f"Boundary map in degree {d} of {self.name!r} does not go from C_{d} to C_{d - 1}", degree=d)

    @property
    def top_degree(self) -> int:
        return len(self.dimensions) - 1

    @property
    def sizes(self) -> List[int]:
        return [basis.size for basis in self.dimensions]

    def basis(self, d: int) -> Basis:
        if not 0 <= d <= self.top_degree:
            raise ChainInputError(f"Degree {d} out of range 0..{self.top_degree} for complex {self.name!r}")
        return self.dimensions[d]

    def boundary(self, d: int) -> ModuleMap:
        """∂_d for 1 ≤ d ≤ top degree; d = top + 1 gives the zero map out of the empty basis."""
        if 1 <= d <= self.top_degree:
            return self.boundaries[d - 1]
        if d == self.top_degree + 1:
            return self._empty_top_boundary
        raise ChainInputError(f"No boundary map ∂_{d} in complex {self.name!r} (top degree {self.top_degree})")

    @cached_property
    def _empty_top_boundary(self) -> ModuleMap:
        d = self.top_degree + 1
        empty = Basis(f"{self.name}:C{d}", ())
        return ModuleMap.zero(empty, self.dimensions[-1], name=f"d{d}")

    def cell(self, d: int, label: str, sign: int = 1) -> Chain:
        basis = self.basis(d)
        return Chain.unit(basis, basis.index_of(label), sign)

    def chain(self, d: int, entries: Mapping[str, int]) -> Chain:
        return Chain.from_labels(self.basis(d), entries)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_complex; truthy iff ∂∘∂ = 0 everywhere."""

    ok: bool
    degree: Optional[int] = None
    cell: Optional[str] = None
    residual: Optional[Chain] = None

    def __bool__(self) -> bool:
        return self.ok

    @property
    def message(self) -> str:
        if self.ok:
            return "ok"
        return f"∂∘∂ ≠ 0 at cell {self.cell} (degree {self.degree}): ∂∂({self.cell}) = {self.residual.format()}"


def validate_complex(complex_: ChainComplex) -> ValidationReport:
    """
    Check ∂_{d-1}∘∂_d = 0 cell by cell

    Args:
        complex_: Chain complex to check

    Returns:
        ValidationReport: ok, or the first cell whose boundary of boundary is nonzero
    """
    for d in range(2, complex_.top_degree + 1):
        outer, inner = complex_.boundary(d - 1), complex_.boundary(d)
        for s, column in enumerate(inner.columns):
            residual = apply_map(outer, column)
            if residual:
                label = inner.source.labels[s]
                logger.debug("complex %s fails ∂∂ = 0 at %s", complex_.name, label)
                return ValidationReport(False, d, label, residual)
    return ValidationReport(True)


def require_valid(complex_: ChainComplex) -> ChainComplex:
    """Return the complex unchanged, or raise ComplexValidationError naming the first bad cell."""
    report = validate_complex(complex_)
    if not report:
        raise ComplexValidationError(report.message, degree=report.degree, cell=report.cell)
    return complex_


def augmentation(x: Chain) -> int:
    """Sum of coefficients of a 0-chain."""
    return sum(c for _, c in x.items)


def augmentation_map(basis: Basis) -> ModuleMap:
    """The map ℤ[V] → ℤ sending every vertex to 1; its kernel is Z_0."""
    point = Basis(f"{basis.name}:pt", ("pt",))
    column = Chain._from_items(point, ((0, 1),))
    return ModuleMap(basis, point, tuple(column for _ in range(basis.size)), name="augmentation")
