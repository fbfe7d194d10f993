"""Pregroup types, diagrams and reduction checks.

A pregroup type is a sequence of simple types, each a base symbol with an
integer adjoint order ``z`` (negative for left adjoints, positive for right
adjoints).  A sentence is represented as a ``PregroupDiagram``: a list of
typed tokens plus a set of non-crossing cups contracting adjoint pairs.
A sentence is grammatical when the uncontracted wires reduce to a single
sentence wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import InvalidDiagram

BASES = ("n", "s", "t")


@dataclass(frozen=True, order=True)
class SimpleType:
    """A base grammar symbol with an adjoint order.

    ``z == 0`` is the plain type, ``z == -1`` its left adjoint and
    ``z == +1`` its right adjoint; higher |z| are iterated adjoints.
    """

    base: str
    z: int = 0

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown base type {self.base!r}")

    @property
    def l(self) -> "SimpleType":
        return SimpleType(self.base, self.z - 1)

    @property
    def r(self) -> "SimpleType":
        return SimpleType(self.base, self.z + 1)

    def __str__(self):
        if self.z == 0:
            return self.base
        suffix = (".l" if self.z < 0 else ".r") * abs(self.z)
        return self.base + suffix


def adjoint(t: SimpleType, direction: str) -> SimpleType:
    """Return the left or right adjoint of a simple type."""
    if direction == "left":
        return t.l
    if direction == "right":
        return t.r
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def can_contract(a: SimpleType, b: SimpleType) -> bool:
    """True iff a cup may join ``a`` (left endpoint) to ``b`` (right)."""
    return a.base == b.base and b.z == a.z + 1


@dataclass(frozen=True)
class PregroupType:
    """An ordered sequence of simple types; empty is the monoid unit."""

    factors: tuple[SimpleType, ...] = ()

    def __init__(self, factors: Iterable[SimpleType] = ()):
        object.__setattr__(self, "factors", tuple(factors))

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self) -> Iterator[SimpleType]:
        return iter(self.factors)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return PregroupType(self.factors[i])
        return self.factors[i]

    def __matmul__(self, other: "PregroupType") -> "PregroupType":
        return PregroupType(self.factors + other.factors)

    @property
    def l(self) -> "PregroupType":
        return PregroupType(tuple(t.l for t in reversed(self.factors)))

    @property
    def r(self) -> "PregroupType":
        return PregroupType(tuple(t.r for t in reversed(self.factors)))

    def __str__(self):
        return "@".join(str(t) for t in self.factors) if self.factors else "1"

    @staticmethod
    def parse(text: str) -> "PregroupType":
        """Parse strings like ``"n.r@s@n.l"`` (``"1"`` is the unit)."""
        text = text.strip()
        if text in ("", "1"):
            return PregroupType()
        factors = []
        for part in text.replace(" ", "@").split("@"):
            if not part:
                continue
            bits = part.split(".")
            z = sum(1 if b == "r" else -1 for b in bits[1:])
            factors.append(SimpleType(bits[0], z))
        return PregroupType(factors)


N = SimpleType("n")
S = SimpleType("s")
T = SimpleType("t")


def Ty(*factors: SimpleType) -> PregroupType:
    return PregroupType(factors)


@dataclass(frozen=True)
class PregroupDiagram:
    """Typed tokens plus non-crossing cups over global wire offsets.

    Wire offsets index the concatenation of all tokens' factors, left to
    right.  Each offset appears in at most one cup.
    """

    tokens: tuple[tuple[str, PregroupType], ...]
    cups: tuple[tuple[int, int], ...]

    def __init__(self, tokens, cups=()):
        object.__setattr__(
            self, "tokens", tuple((w, t) for w, t in tokens))
        object.__setattr__(
            self, "cups", tuple(sorted((min(i, j), max(i, j)) for i, j in cups)))

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.tokens)

    @property
    def wire_types(self) -> tuple[SimpleType, ...]:
        return tuple(t for _, ty in self.tokens for t in ty)

    @property
    def n_wires(self) -> int:
        return len(self.wire_types)

    def token_of_wire(self, offset: int) -> int:
        """Index of the token owning a global wire offset."""
        pos = 0
        for i, (_, ty) in enumerate(self.tokens):
            pos += len(ty)
            if offset < pos:
                return i
        raise IndexError(f"wire offset {offset} out of range")

    def wires_of_token(self, index: int) -> range:
        start = sum(len(ty) for _, ty in self.tokens[:index])
        return range(start, start + len(self.tokens[index][1]))

    @property
    def free_wires(self) -> tuple[int, ...]:
        cupped = {w for cup in self.cups for w in cup}
        return tuple(w for w in range(self.n_wires) if w not in cupped)


@dataclass(frozen=True)
class ValidationReport:
    """Fault lists plus the free-wire type sequence of a diagram."""

    illegal_cups: tuple[tuple[int, int], ...]
    crossing_pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    free_types: PregroupType

    @property
    def is_valid(self) -> bool:
        return not self.illegal_cups and not self.crossing_pairs


def validate_diagram(d: PregroupDiagram) -> ValidationReport:
    """Check every cup for legality and every cup pair for crossings."""
    wires = d.wire_types
    illegal = []
    seen: dict[int, tuple[int, int]] = {}
    for cup in d.cups:
        i, j = cup
        if not (0 <= i < j < len(wires)) or not can_contract(wires[i], wires[j]):
            illegal.append(cup)
            continue
        if i in seen or j in seen:
            illegal.append(cup)
            continue
        seen[i] = seen[j] = cup
    crossings = []
    cups = sorted(set(d.cups))
    for a in range(len(cups)):
        for b in range(a + 1, len(cups)):
            (i, j), (k, l) = cups[a], cups[b]
            if i < k < j < l or k < i < l < j:
                crossings.append((cups[a], cups[b]))
    free = PregroupType(wires[w] for w in d.free_wires)
    return ValidationReport(tuple(illegal), tuple(crossings), free)


def reduce(d: PregroupDiagram) -> PregroupType:
    """Free-wire types of a valid diagram; ``[s]`` means grammatical."""
    report = validate_diagram(d)
    if not report.is_valid:
        raise InvalidDiagram(
            f"illegal cups: {report.illegal_cups}, "
            f"crossings: {report.crossing_pairs}")
    return report.free_types
