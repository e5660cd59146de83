"""
Text formats for complexes, chains and group actions.

Complex:
    complex <name>
    cells 0: v0 v1 v2
    cells 1: e1 e2
    boundary 1: e1 = -1*v0 + 1*v1
    boundary 1: e2 = -1*v1 + 1*v2

Chain (CLI --cycle and fill output):
    e1:1,e2:-1      or   0

Action:
    action <name>
    element
    source: (e0 e1 e2 e3)
    target: v1 v2 v3 v0

Permutation lines use either cycle notation, with () for the identity, or
image notation listing the image of every basis element in basis order.
Lines starting with # are comments. Labels may not contain whitespace, *, =,
: or ,.
"""

import logging
import os
import re
from typing import Dict, List, Optional, Sequence, Tuple

from builders import assemble_complex, build_fixture, fixture_symmetry, is_fixture_name
from chain_core import Basis, Chain, ChainComplex
from equivariance import PermutationAction, action_for_degree
from errors import ChainInputError, ComplexSyntaxError

logger = logging.getLogger(__name__)

_LABEL = re.compile(r"[^\s*=:,]+")
_TERM = re.compile(r"(-?\d+)\*([^\s*=:,]+)")


def _tokens(text: str, offset: int = 0) -> List[Tuple[str, int]]:
    """Whitespace separated tokens with their 1-based columns."""
    return [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", text)]


def _labels(text: str, offset: int, line: int) -> List[str]:
    labels = []
    for token, column in _tokens(text, offset):
        if not _LABEL.fullmatch(token):
            raise ComplexSyntaxError(f"invalid cell label {token!r}", line, column)
        labels.append(token)
    return labels


def _parse_terms(text: str, offset: int, line: int, lower: Basis) -> Dict[str, int]:
    """Parse `c*label (+|-) c*label …` or `0`."""
    tokens = _tokens(text, offset)
    if not tokens:
        raise ComplexSyntaxError("missing boundary expression after '='", line, offset + 1)
    if len(tokens) == 1 and tokens[0][0] == "0":
        return {}
    terms: Dict[str, int] = {}
    sign = 1
    expect_term = True
    for token, column in tokens:
        if expect_term:
            match = _TERM.fullmatch(token)
            if not match:
                raise ComplexSyntaxError(f"expected a term like 2*label, got {token!r}", line, column)
            label = match.group(2)
            if label not in lower.labels:
                raise ComplexSyntaxError(f"unknown cell {label!r} in boundary", line, column + len(match.group(1)) + 1)
            terms[label] = terms.get(label, 0) + sign * int(match.group(1))
        else:
            if token not in ("+", "-"):
                raise ComplexSyntaxError(f"expected '+' or '-', got {token!r}", line, column)
            sign = 1 if token == "+" else -1
        expect_term = not expect_term
    if expect_term:
        raise ComplexSyntaxError("expression ends with an operator", line, tokens[-1][1])
    return terms


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield number, raw


def parse_complex(text: str) -> ChainComplex:
    """
    Parse the complex text format

    Args:
        text: `complex <name>` header, then `cells <d>:` and `boundary <d>:` lines

    Returns:
        ChainComplex: The validated complex

    Raises:
        ComplexSyntaxError: With line and column of the first malformed token
        ComplexValidationError: When ∂∘∂ ≠ 0, naming the cell
    """
    name: Optional[str] = None
    cells: List[List[str]] = []
    boundaries: List[Dict[str, Dict[str, int]]] = []
    header = re.compile(r"\s*(cells|boundary)\s+(-?\d+)\s*:")

    for number, raw in _content_lines(text):
        if name is None:
            match = re.fullmatch(r"\s*complex\s+(\S+)\s*", raw)
            if not match:
                raise ComplexSyntaxError("expected 'complex <name>' header", number, 1)
            name = match.group(1)
            continue
        match = header.match(raw)
        if not match:
            raise ComplexSyntaxError("expected 'cells <d>:' or 'boundary <d>:'", number, len(raw) - len(raw.lstrip()) + 1)
        kind, d, rest, offset = match.group(1), int(match.group(2)), raw[match.end():], match.end()

        if kind == "cells":
            if d != len(cells):
                raise ComplexSyntaxError(f"cells {d} declared out of order (expected degree {len(cells)})",
                                         number, match.start(2) + 1)
            labels = _labels(rest, offset, number)
            if len(set(labels)) != len(labels):
                raise ComplexSyntaxError(f"repeated label in degree {d}", number, offset + 1)
            cells.append(labels)
            if d >= 1:
                boundaries.append({})
            continue

        if not 1 <= d < len(cells):
            raise ComplexSyntaxError(f"boundary {d} needs cells {d} and {d - 1} declared first", number,
                                     match.start(2) + 1)
        if "=" not in rest:
            raise ComplexSyntaxError("expected '<label> = <expression>'", number, offset + 1)
        left, right = rest.split("=", 1)
        cell_tokens = _tokens(left, offset)
        if len(cell_tokens) != 1:
            raise ComplexSyntaxError("expected exactly one cell label before '='", number, offset + 1)
        cell, column = cell_tokens[0]
        if cell not in cells[d]:
            raise ComplexSyntaxError(f"unknown {d}-cell {cell!r}", number, column)
        if cell in boundaries[d - 1]:
            raise ComplexSyntaxError(f"boundary of {cell!r} given twice", number, column)
        lower = Basis("lower", tuple(cells[d - 1]))
        boundaries[d - 1][cell] = _parse_terms(right, offset + len(left) + 1, number, lower)

    if name is None:
        raise ComplexSyntaxError("empty input: expected 'complex <name>'", 1, 1)
    if not cells:
        raise ComplexSyntaxError("a complex needs at least 'cells 0:'", 1, 1)
    return assemble_complex(name, cells, boundaries)


def _format_terms(chain: Chain) -> str:
    if not chain:
        return "0"
    labels = chain.basis.labels
    parts = []
    for position, (t, c) in enumerate(chain.items):
        if position == 0:
            parts.append(f"{c}*{labels[t]}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{labels[t]}")
    return " ".join(parts)


def serialize_complex(complex_: ChainComplex) -> str:
    """Write a complex in the format parse_complex reads, one boundary line per cell."""
    lines = [f"complex {complex_.name}"]
    for d, basis in enumerate(complex_.dimensions):
        lines.append(f"cells {d}: {' '.join(basis.labels)}".rstrip())
    for d in range(1, complex_.top_degree + 1):
        boundary = complex_.boundary(d)
        for label, column in zip(boundary.source.labels, boundary.columns):
            lines.append(f"boundary {d}: {label} = {_format_terms(column)}")
    return "\n".join(lines) + "\n"


def parse_chain(basis: Basis, text: str) -> Chain:
    """Inverse of Chain.format: `label:coeff,…` or `0`."""
    stripped = text.strip()
    if stripped in ("", "0"):
        return Chain.zero(basis)
    entries: Dict[int, int] = {}
    column = 1
    for piece in text.split(","):
        if ":" not in piece:
            raise ComplexSyntaxError(f"expected label:coefficient, got {piece.strip()!r}", 1, column)
        label, coefficient = (part.strip() for part in piece.rsplit(":", 1))
        if label not in basis.labels:
            raise ComplexSyntaxError(f"unknown cell {label!r}", 1, column)
        try:
            value = int(coefficient)
        except ValueError:
            raise ComplexSyntaxError(f"coefficient {coefficient!r} is not an integer", 1,
                                     column + piece.rindex(":") + 1)
        index = basis.index_of(label)
        entries[index] = entries.get(index, 0) + value
        column += len(piece) + 1
    return Chain(basis, entries)


def _parse_permutation(text: str, offset: int, line: int, basis: Basis) -> Tuple[int, ...]:
    stripped = text.strip()
    if stripped.startswith("("):
        image = list(range(basis.size))
        position = 0
        body = stripped
        for match in re.finditer(r"\s*\(([^()]*)\)\s*", body):
            if match.start() != position:
                break
            cycle = _labels(match.group(1), offset, line)
            for label in cycle:
                if label not in basis.labels:
                    raise ComplexSyntaxError(f"unknown cell {label!r} in cycle", line, offset + 1)
            indices = [basis.index_of(label) for label in cycle]
            for a, b in zip(indices, indices[1:] + indices[:1]):
                image[a] = b
            position = match.end()
        if position != len(body):
            raise ComplexSyntaxError("malformed cycle notation", line, offset + position + 1)
        return tuple(image)

    labels = _labels(text, offset, line)
    if len(labels) != basis.size:
        raise ComplexSyntaxError(f"image notation needs {basis.size} labels, got {len(labels)}", line, offset + 1)
    for label, (_, column) in zip(labels, _tokens(text, offset)):
        if label not in basis.labels:
            raise ComplexSyntaxError(f"unknown cell {label!r}", line, column)
    image = tuple(basis.index_of(label) for label in labels)
    if sorted(image) != list(range(basis.size)):
        raise ComplexSyntaxError("image notation does not describe a permutation", line, offset + 1)
    return image


def parse_action(text: str, source: Basis, target: Basis) -> PermutationAction:
    """Parse the action format and close the listed elements under composition."""
    name: Optional[str] = None
    elements: List[List[Optional[Tuple[int, ...]]]] = []
    for number, raw in _content_lines(text):
        stripped = raw.strip()
        if name is None:
            match = re.fullmatch(r"action\s+(\S+)", stripped)
            if not match:
                raise ComplexSyntaxError("expected 'action <name>' header", number, 1)
            name = match.group(1)
        elif stripped == "element":
            elements.append([None, None])
        else:
            match = re.match(r"\s*(source|target)\s*:", raw)
            if not match:
                raise ComplexSyntaxError("expected 'element', 'source:' or 'target:'", number, 1)
            if not elements:
                raise ComplexSyntaxError(f"'{match.group(1)}:' outside an element block", number, 1)
            side = 0 if match.group(1) == "source" else 1
            basis = source if side == 0 else target
            elements[-1][side] = _parse_permutation(raw[match.end():], match.end(), number, basis)
    if name is None:
        raise ComplexSyntaxError("empty input: expected 'action <name>'", 1, 1)
    for position, (sp, tp) in enumerate(elements, start=1):
        if sp is None or tp is None:
            raise ComplexSyntaxError(f"element {position} needs both a source and a target line", 1, 1)
    return PermutationAction.from_generators(source, target, [tuple(e) for e in elements], name)


def serialize_action(action: PermutationAction) -> str:
    lines = [f"action {action.name or 'unnamed'}"]
    for sp, tp in action.elements:
        lines.append("element")
        lines.append("source: " + " ".join(action.source.labels[i] for i in sp))
        lines.append("target: " + " ".join(action.target.labels[i] for i in tp))
    return "\n".join(lines) + "\n"


def load_complex(name_or_path: str) -> ChainComplex:
    """
    Load a complex for the command line

    Args:
        name_or_path: Existing file in the complex format, or a built-in fixture name

    Returns:
        ChainComplex: The parsed or built complex
    """
    if os.path.isfile(name_or_path):
        with open(name_or_path) as handle:
            logger.info("reading complex from %s", name_or_path)
            return parse_complex(handle.read())
    if is_fixture_name(name_or_path):
        return build_fixture(name_or_path)
    raise ChainInputError(f"{name_or_path!r} is neither a complex file nor a fixture name")


def load_action(spec: str, complex_: ChainComplex, d: int) -> PermutationAction:
    """`symmetry` for the fixture's built-in symmetry, otherwise an action file acting on (C_d, C_{d-1})."""
    if d < 1:
        raise ChainInputError(f"Actions act on (C_d, C_(d-1)) for d >= 1, got degree {d}")
    if spec == "symmetry":
        return action_for_degree(complex_, fixture_symmetry(complex_.name), d)
    if not os.path.isfile(spec):
        raise ChainInputError(f"Action file not found: {spec}")
    with open(spec) as handle:
        return parse_action(handle.read(), complex_.basis(d), complex_.basis(d - 1))
