"""Finite permutation-group kernel and subgroup operations.

Permutations are image arrays; composition is (a * b)(x) = a(b(x)).
Conjugation in exponent notation is X^s = s^-1 X s.  A PermGroup
enumerates its full element table (naive closure, adequate at this
scale) with the identity at index 0; subgroups are element-index sets
over that table.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .engine import EngineOptions, Instance, meet_and_sub_samples, orbit_closure
from .errors import ElementCapExceeded, InvalidAction, StructureMismatch, CloseKnitError
from .indexposet import IndexValue

Perm = Tuple[int, ...]

DEFAULT_ELEMENT_CAP = 100_000


def compose(a: Sequence[int], b: Sequence[int]) -> Perm:
    """Composite permutation applying b first, then a."""
    return tuple(a[b[x]] for x in range(len(a)))


def invert(a: Sequence[int]) -> Perm:
    out = [0] * len(a)
    for x, y in enumerate(a):
        out[y] = x
    return tuple(out)


def check_perm(images: Sequence[int], degree: int) -> Perm:
    p = tuple(images)
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise StructureMismatch(f"not a permutation of degree {degree}: {images}")
    return p


class PermGroup:
    """An ambient group G <= Sym(degree) with an enumerated element table."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]],
                 element_cap: int = DEFAULT_ELEMENT_CAP):
        self.degree = degree
        self.generators = [check_perm(g, degree) for g in generators]
        identity = tuple(range(degree))
        elements: List[Perm] = [identity]
        index: Dict[Perm, int] = {identity: 0}
        frontier = [identity]
        while frontier:
            new: List[Perm] = []
            for g in self.generators:
                for e in frontier:
                    prod = compose(g, e)
                    if prod not in index:
                        if len(elements) >= element_cap:
                            raise ElementCapExceeded(
                                f"group closure exceeded cap {element_cap}")
                        index[prod] = len(elements)
                        elements.append(prod)
                        new.append(prod)
            frontier = new
        self.elements: List[Perm] = elements
        self.index: Dict[Perm, int] = index
        self.inverse: List[int] = [index[invert(e)] for e in elements]

    def __len__(self) -> int:
        return len(self.elements)

    def mult(self, i: int, j: int) -> int:
        return self.index[compose(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def contains_perm(self, images: Sequence[int]) -> bool:
        return tuple(images) in self.index

    def conjugate_index(self, gamma: Perm, i: int) -> int:
        """Index of gamma * e_i * gamma^-1; requires the result to stay in G."""
        conj = compose(compose(gamma, self.elements[i]), invert(gamma))
        j = self.index.get(conj)
        if j is None:
            raise InvalidAction("permutation does not normalize the ambient group")
        return j


class Subgroup:
    """A subgroup of an ambient PermGroup as a frozen element-index set."""

    __slots__ = ("ambient", "members")

    def __init__(self, ambient: PermGroup, members: FrozenSet[int]):
        if 0 not in members:
            raise StructureMismatch("subgroup must contain the identity")
        self.ambient = ambient
        self.members = frozenset(members)

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"Subgroup(order={len(self.members)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.members == other.members \
            and self.ambient is other.ambient

    def __hash__(self) -> int:
        return hash(self.members)

    def _check(self, other: "Subgroup") -> None:
        if self.ambient is not other.ambient:
            raise StructureMismatch("subgroups have different ambient groups")

    def contains(self, other: "Subgroup") -> bool:
        self._check(other)
        return other.members <= self.members

    def intersect(self, other: "Subgroup") -> "Subgroup":
        self._check(other)
        return Subgroup(self.ambient, self.members & other.members)

    def perms(self) -> List[Perm]:
        return sorted(self.ambient.elements[i] for i in self.members)


def closure(gens: Iterable[int], ambient: PermGroup) -> Subgroup:
    """Smallest subgroup of the ambient group containing the given indices."""
    members = {0}
    frontier = [0]
    gens = list(gens)
    for g in gens:
        if not 0 <= g < len(ambient):
            raise StructureMismatch(f"element index {g} out of range")
    while frontier:
        new = []
        for g in gens:
            for e in frontier:
                prod = ambient.mult(g, e)
                if prod not in members:
                    members.add(prod)
                    new.append(prod)
        frontier = new
    return Subgroup(ambient, frozenset(members))


def subgroup_from_perms(ambient: PermGroup, perms: Iterable[Sequence[int]]) -> Subgroup:
    idxs = []
    for p in perms:
        key = check_perm(p, ambient.degree)
        if key not in ambient.index:
            raise StructureMismatch(f"permutation {p} is not in the ambient group")
        idxs.append(ambient.index[key])
    return closure(idxs, ambient)


def is_subgroup(ambient: PermGroup, members: FrozenSet[int]) -> bool:
    if 0 not in members:
        return False
    for i in members:
        if ambient.inv(i) not in members:
            return False
        for j in members:
            if ambient.mult(i, j) not in members:
                return False
    return True


def index_of(s: Subgroup, t: Subgroup) -> int:
    """[s : s meet t] by left-coset counting (always finite here)."""
    s._check(t)
    core = s.members & t.members
    cosets = set()
    for x in sorted(s.members):
        cosets.add(frozenset(s.ambient.mult(x, h) for h in core))
    return len(cosets)


def measure_group(s: Subgroup, t: Subgroup) -> Tuple[int, int]:
    """Commensurability measure pair ([s : s meet t], [t : s meet t])."""
    return index_of(s, t), index_of(t, s)


def product_set(s: Subgroup, f: Subgroup) -> FrozenSet[int]:
    """The product set {x*y : x in s, y in f}; generally not a subgroup."""
    s._check(f)
    amb = s.ambient
    return frozenset(amb.mult(x, y) for x in s.members for y in f.members)


def coset_representatives(s: Subgroup, core: FrozenSet[int]) -> List[int]:
    """Representatives of the right cosets core*x inside s, lowest index first.

    The right-sided decomposition x = h*i with h in the core is the one
    that conjugation of the product set absorbs: core elements normalize
    both factors, so (sf)^(h*i) = (sf)^i.
    """
    amb = s.ambient
    reps: List[int] = []
    seen = set()
    for x in sorted(s.members):
        if x not in seen:
            reps.append(x)
            seen.update(amb.mult(h, x) for h in core)
    return reps


def increment_group(s: Subgroup, f: Subgroup) -> Subgroup:
    """Controlled enlargement of s toward f: the intersection of all
    conjugates (sf)^x over x in s, computed over right-coset
    representatives of s modulo s meet f.

    The result is a supergroup of s; failing the subgroup check indicates
    a kernel bug and raises.
    """
    s._check(f)
    amb = s.ambient
    sf = product_set(s, f)
    reps = coset_representatives(s, s.members & f.members)
    result = None
    for x in reps:
        xinv = amb.inv(x)
        conj = frozenset(amb.mult(amb.mult(xinv, y), x) for y in sf)
        result = conj if result is None else result & conj
        if result == s.members:
            break
    assert result is not None
    if not is_subgroup(amb, result):
        raise CloseKnitError("increment produced a non-subgroup; kernel bug")
    if not s.members <= result:
        raise CloseKnitError("increment lost elements of the base subgroup")
    return Subgroup(amb, result)


def increment_group_unoptimized(s: Subgroup, f: Subgroup) -> Subgroup:
    """Same intersection taken over every element of s (test cross-check)."""
    amb = s.ambient
    sf = product_set(s, f)
    result = None
    for x in sorted(s.members):
        xinv = amb.inv(x)
        conj = frozenset(amb.mult(amb.mult(xinv, y), x) for y in sf)
        result = conj if result is None else result & conj
    assert result is not None
    return Subgroup(amb, result)


def conjugate_action(gamma: Sequence[int], s: Subgroup) -> Subgroup:
    """The conjugate gamma * s * gamma^-1 as a subgroup.

    gamma must normalize the ambient element set.
    """
    g = check_perm(gamma, s.ambient.degree)
    members = frozenset(s.ambient.conjugate_index(g, i) for i in s.members)
    return Subgroup(s.ambient, members)


def normalizes(gamma: Sequence[int], ambient: PermGroup) -> bool:
    g = check_perm(gamma, ambient.degree)
    try:
        for i in range(len(ambient)):
            ambient.conjugate_index(g, i)
    except InvalidAction:
        return False
    return True


class GroupInstance(Instance):
    """Subgroup family under conjugation by normalizing permutations; meet is
    intersection, delta is the index [s : s meet f_a], increment the
    conjugate-intersection enlargement."""

    kind = "group"

    def __init__(self, ambient: PermGroup, seeds: Sequence[Subgroup],
                 gamma: Sequence[Sequence[int]],
                 options: EngineOptions | None = None):
        self.ambient = ambient
        self.options = options or EngineOptions()
        self.gamma: List[Perm] = []
        for g in gamma:
            perm = check_perm(g, ambient.degree)
            if not normalizes(perm, ambient):
                raise InvalidAction(
                    "symmetry generator does not normalize the ambient group")
            self.gamma.append(perm)
        for s in seeds:
            if s.ambient is not ambient:
                raise StructureMismatch("seed subgroup has a different ambient group")
        self.family, self.action_table = orbit_closure(
            list(seeds), len(self.gamma), self.act, self.key,
            self.options.max_orbit)

    def meet(self, x: Subgroup, y: Subgroup) -> Subgroup:
        return x.intersect(y)

    def equals(self, x: Subgroup, y: Subgroup) -> bool:
        return x.members == y.members

    def key(self, x: Subgroup):
        return x.members

    def delta(self, x: Subgroup, a: int) -> IndexValue:
        return IndexValue((index_of(x, self.family[a]),))

    def increment(self, x: Subgroup, a: int) -> Subgroup:
        return increment_group(x, self.family[a])

    def gamma_size(self) -> int:
        return len(self.gamma)

    def act(self, g: int, x: Subgroup) -> Subgroup:
        return conjugate_action(self.gamma[g], x)

    def join_span(self) -> Subgroup:
        gens: List[int] = []
        for f in self.family:
            gens.extend(f.members)
        return closure(gens, self.ambient)

    def measure(self, x: Subgroup, y: Subgroup) -> Tuple[int, int]:
        return measure_group(x, y)

    def element_json(self, x: Subgroup) -> List[List[int]]:
        return [list(p) for p in x.perms()]

    def random_subelement(self, rng, s: Subgroup) -> Subgroup:
        members = sorted(s.members)
        picks = [m for m in members if rng.random() < 0.4]
        return closure(picks, self.ambient)

    def validation_samples(self, rng, samples: int):
        return meet_and_sub_samples(self, rng, samples)
