"""Points of the index poset and finitely generated down-sets.

Index values are fixed-length vectors ordered componentwise.  Levels are
either non-negative integers (the discrete instantiations) or exact
rationals in [0, 1] (the metric evaluators); a single problem never mixes
the two kinds.  A down-set is stored by its antichain of maximal
generators, which determines it completely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import ContractViolation, StructureMismatch

Level = Union[int, Fraction]


@dataclass(frozen=True)
class IndexValue:
    """One point of the index poset: a fixed-length vector of levels."""

    coords: Tuple[Level, ...]

    def __post_init__(self):
        if not isinstance(self.coords, tuple):
            object.__setattr__(self, "coords", tuple(self.coords))
        kinds = {type(c) for c in self.coords}
        if not kinds <= {int, Fraction}:
            raise StructureMismatch(f"unsupported level types: {kinds}")
        if len(kinds) > 1:
            raise StructureMismatch("mixed level kinds in one index value")
        for c in self.coords:
            if isinstance(c, Fraction):
                if not 0 <= c <= 1:
                    raise StructureMismatch(f"rational level {c} outside [0,1]")
            elif c < 0:
                raise StructureMismatch(f"negative natural level {c}")

    @property
    def kind(self) -> str:
        if self.coords and isinstance(self.coords[0], Fraction):
            return "rational"
        return "nat"

    def __len__(self) -> int:
        return len(self.coords)

    def _check_compatible(self, other: "IndexValue") -> None:
        if len(self.coords) != len(other.coords):
            raise StructureMismatch(
                f"length mismatch: {len(self.coords)} vs {len(other.coords)}"
            )
        if self.coords and other.coords and self.kind != other.kind:
            raise StructureMismatch(f"kind mismatch: {self.kind} vs {other.kind}")


def leq(xi: IndexValue, zeta: IndexValue) -> bool:
    """Componentwise order: every coordinate of xi at most the one of zeta."""
    xi._check_compatible(zeta)
    return all(a <= b for a, b in zip(xi.coords, zeta.coords))


@dataclass(frozen=True)
class DownSet:
    """Downward closure of finitely many index values, kept as an antichain.

    Membership: xi is in the down-set iff xi <= g for some generator g.
    """

    generators: Tuple[IndexValue, ...]

    def __contains__(self, xi: IndexValue) -> bool:
        return any(leq(xi, g) for g in self.generators)

    def is_subset(self, other: "DownSet") -> bool:
        # A down-set is contained in another iff each generator is a member.
        return all(g in other for g in self.generators)

    def __le__(self, other: "DownSet") -> bool:
        return self.is_subset(other)

    def same_as(self, other: "DownSet") -> bool:
        return self.is_subset(other) and other.is_subset(self)


def downset_of(values: Iterable[IndexValue]) -> DownSet:
    """Down-set generated by the given values (generators = maximal elements)."""
    vals = list(values)
    if not vals:
        raise ContractViolation("down-set requires a non-empty value list")
    first = vals[0]
    for v in vals[1:]:
        first._check_compatible(v)
    maximal: List[IndexValue] = []
    for v in vals:
        if any(leq(v, m) for m in maximal):
            continue
        maximal = [m for m in maximal if not leq(m, v)]
        maximal.append(v)
    # Deterministic generator order regardless of input order.
    maximal.sort(key=lambda iv: tuple(iv.coords))
    return DownSet(tuple(maximal))


def strictly_below(d: DownSet, e: DownSet) -> bool:
    """True iff d is contained in e and differs from it as a down-set."""
    return d.is_subset(e) and not e.is_subset(d)


def maximal_in(d: DownSet, values: Sequence[IndexValue]) -> List[int]:
    """Indices of the values that are generators (maximal elements) of d.

    Every value must already belong to d.
    """
    for i, v in enumerate(values):
        if v not in d:
            raise ContractViolation(f"value #{i} {v.coords} lies outside the down-set")
    gens = set(d.generators)
    return [i for i, v in enumerate(values) if v in gens]


def nat(*coords: int) -> IndexValue:
    """Shorthand for an integer-levelled index value."""
    return IndexValue(tuple(int(c) for c in coords))
