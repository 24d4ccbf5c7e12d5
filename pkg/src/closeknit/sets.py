"""Subsets of a finite carrier, packed as int bitsets, with meet = intersection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .engine import EngineOptions, Instance, meet_and_sub_samples as _meet_and_sub_samples, orbit_closure
from .errors import StructureMismatch
from .indexposet import IndexValue

MAX_CARRIER = 4096


@dataclass(frozen=True)
class FiniteSubset:
    """A subset of {0, ..., carrier_size-1} stored as a bit vector."""

    carrier_size: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.carrier_size <= MAX_CARRIER:
            raise StructureMismatch(f"carrier size {self.carrier_size} out of range")
        if self.bits < 0 or self.bits >> self.carrier_size:
            raise StructureMismatch("members outside the carrier")

    @classmethod
    def from_members(cls, carrier_size: int, members: Iterable[int]) -> "FiniteSubset":
        bits = 0
        for m in members:
            if not 0 <= m < carrier_size:
                raise StructureMismatch(f"member {m} outside carrier of size {carrier_size}")
            bits |= 1 << m
        return cls(carrier_size, bits)

    def members(self) -> List[int]:
        return [i for i in range(self.carrier_size) if (self.bits >> i) & 1]

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, point: int) -> bool:
        return 0 <= point < self.carrier_size and bool((self.bits >> point) & 1)

    def _check(self, other: "FiniteSubset") -> None:
        if self.carrier_size != other.carrier_size:
            raise StructureMismatch("carrier size mismatch")

    def intersect(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.carrier_size, self.bits & other.bits)

    def union(self, other: "FiniteSubset") -> "FiniteSubset":
        self._check(other)
        return FiniteSubset(self.carrier_size, self.bits | other.bits)

    def issubset(self, other: "FiniteSubset") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def difference_size(self, other: "FiniteSubset") -> int:
        self._check(other)
        return (self.bits & ~other.bits).bit_count()

    def apply_permutation(self, perm: Sequence[int]) -> "FiniteSubset":
        """Image of the subset under a permutation given as an image array."""
        if len(perm) != self.carrier_size:
            raise StructureMismatch("permutation degree mismatch")
        bits = 0
        for i in range(self.carrier_size):
            if (self.bits >> i) & 1:
                bits |= 1 << perm[i]
        return FiniteSubset(self.carrier_size, bits)


def measure_set(s: FiniteSubset, t: FiniteSubset) -> Tuple[int, int]:
    """Commensurability measure pair (|s minus t|, |t minus s|)."""
    return s.difference_size(t), t.difference_size(s)


class SetInstance(Instance):
    """Subset family under permutations of the carrier; meet is intersection,
    delta counts the overflow |s minus f_a|, increment is union with f_a."""

    kind = "set"

    def __init__(self, carrier_size: int, seeds: Sequence[FiniteSubset],
                 gamma: Sequence[Sequence[int]],
                 options: EngineOptions | None = None):
        self.carrier_size = carrier_size
        self.options = options or EngineOptions()
        self.gamma: List[Tuple[int, ...]] = []
        for p in gamma:
            perm = tuple(p)
            if sorted(perm) != list(range(carrier_size)):
                raise StructureMismatch(f"not a permutation of the carrier: {p}")
            self.gamma.append(perm)
        for s in seeds:
            if s.carrier_size != carrier_size:
                raise StructureMismatch("seed carrier mismatch")
        self.family, self.action_table = orbit_closure(
            list(seeds), len(self.gamma), self.act, self.key,
            self.options.max_orbit)

    def meet(self, x: FiniteSubset, y: FiniteSubset) -> FiniteSubset:
        return x.intersect(y)

    def equals(self, x: FiniteSubset, y: FiniteSubset) -> bool:
        return x == y

    def key(self, x: FiniteSubset):
        return x.bits

    def delta(self, x: FiniteSubset, a: int) -> IndexValue:
        return IndexValue((x.difference_size(self.family[a]),))

    def increment(self, x: FiniteSubset, a: int) -> FiniteSubset:
        return x.union(self.family[a])

    def gamma_size(self) -> int:
        return len(self.gamma)

    def act(self, g: int, x: FiniteSubset) -> FiniteSubset:
        return x.apply_permutation(self.gamma[g])

    def join_span(self) -> FiniteSubset:
        out = self.family[0]
        for f in self.family[1:]:
            out = out.union(f)
        return out

    def measure(self, x: FiniteSubset, y: FiniteSubset) -> Tuple[int, int]:
        return measure_set(x, y)

    def element_json(self, x: FiniteSubset) -> List[int]:
        return x.members()

    def random_subelement(self, rng, s: FiniteSubset) -> FiniteSubset:
        bits = s.bits & rng.getrandbits(self.carrier_size) if self.carrier_size else 0
        return FiniteSubset(self.carrier_size, bits)

    def validation_samples(self, rng, samples: int):
        return _meet_and_sub_samples(self, rng, samples)
