"""Independence structures: partition, uniform, graphic and table matroids,
contraction, greedy base maximization, and zero-contribution padding.

Padding follows the mirrored-copy construction: every element u gets a twin
u' = u + n that contributes nothing to the objective and may stand in for u,
so every base of the padded matroid has size exactly rank(M) and every
independent set extends to a base at zero cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError
from .functions import SubmodularOracle


@dataclass(frozen=True)
class PartitionStructure:
    """Disjoint non-empty parts covering the ground set 0..n-1."""

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        for part in self.parts:
            if not part:
                raise ValueError("empty part")
            for e in part:
                if e in seen:
                    raise ValueError(f"element {e} appears in two parts")
                seen.add(e)
        n = len(seen)
        if seen != set(range(n)):
            raise ValueError("parts must cover 0..n-1 exactly")

    @classmethod
    def of(cls, parts: Iterable[Iterable[int]]) -> "PartitionStructure":
        return cls(tuple(tuple(sorted(p)) for p in parts))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def ground_size(self) -> int:
        return sum(len(p) for p in self.parts)

    def part_of(self, element: int) -> int:
        for j, part in enumerate(self.parts):
            if element in part:
                return j
        raise ValueError(f"element {element} not in any part")


class Matroid:
    """Independence oracle: ground set 0..n-1, deterministic membership test."""

    def __init__(self, n: int, rank: int):
        self.n = n
        self.rank = rank

    def is_independent(self, items: Iterable[int]) -> bool:
        s = frozenset(items)
        for e in s:
            if not 0 <= e < self.n:
                raise ValueError(f"element {e} outside ground set 0..{self.n - 1}")
        return self._independent(s)

    def _independent(self, s: frozenset[int]) -> bool:
        raise NotImplementedError


class PartitionMatroid(Matroid):
    """At most one element per part."""

    def __init__(self, structure: PartitionStructure):
        super().__init__(structure.ground_size, structure.k)
        self.structure = structure
        self._part_index = {}
        for j, part in enumerate(structure.parts):
            for e in part:
                self._part_index[e] = j

    def _independent(self, s):
        used = set()
        for e in s:
            j = self._part_index[e]
            if j in used:
                return False
            used.add(j)
        return True


class UniformMatroid(Matroid):
    """Independent iff |S| <= rank."""

    def __init__(self, rank: int, n: int):
        if rank > n:
            raise ValueError("rank cannot exceed ground size")
        super().__init__(n, rank)

    def _independent(self, s):
        return len(s) <= self.rank


class GraphicMatroid(Matroid):
    """Elements are edges of a graph; independent iff the edge set is a forest."""

    def __init__(self, vertices: int, edges: Sequence[tuple[int, int]]):
        for a, b in edges:
            if not (0 <= a < vertices and 0 <= b < vertices):
                raise ValueError(f"bad edge ({a}, {b})")
        self.vertices = vertices
        self.edges = tuple(edges)
        comps = self._count_components(range(len(edges)))
        super().__init__(len(edges), vertices - comps)

    def _count_components(self, edge_ids) -> int:
        parent = list(range(self.vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = self.vertices
        for e in edge_ids:
            a, b = self.edges[e]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        return comps

    def _independent(self, s):
        # a forest on |V| vertices with |s| edges has |V| - |s| components
        return self._count_components(sorted(s)) == self.vertices - len(s)


class TableMatroid(Matroid):
    """Explicit list of independent sets (ground <= 16), validated against the
    matroid axioms at construction."""

    MAX_GROUND = 16

    def __init__(self, n: int, independent_sets: Iterable[Iterable[int]]):
        if n > self.MAX_GROUND:
            raise CapacityError(f"table matroid limited to {self.MAX_GROUND} elements")
        sets = {frozenset(s) for s in independent_sets}
        sets.add(frozenset())
        for s in sets:
            for e in s:
                if not 0 <= e < n:
                    raise ValueError(f"element {e} outside ground set")
        for s in sets:
            for e in s:
                if s - {e} not in sets:
                    raise ValueError(f"not downward closed at {sorted(s)} minus {e}")
        ordered = sorted(sets, key=lambda s: (len(s), sorted(s)))
        if len(ordered) <= 1024:
            pairs = ((a, b) for a in ordered for b in ordered if len(a) < len(b))
        else:
            # too many sets for the exhaustive scan; spot-check a fixed sample
            import random
            rng = random.Random(0)
            pairs = []
            for _ in range(100_000):
                a, b = rng.choice(ordered), rng.choice(ordered)
                if len(a) < len(b):
                    pairs.append((a, b))
        for a, b in pairs:
            if not any(a | {e} in sets for e in b - a):
                raise ValueError(f"exchange fails for {sorted(a)} vs {sorted(b)}")
        super().__init__(n, max(len(s) for s in sets))
        self._sets = sets

    def _independent(self, s):
        return s in self._sets


class ContractedMatroid(Matroid):
    """M/S: a set is independent iff it avoids S and its union with S is
    independent in the base matroid."""

    def __init__(self, base: Matroid, contracted: Iterable[int]):
        s = frozenset(contracted)
        if not base.is_independent(s):
            raise ValueError("can only contract by an independent set")
        super().__init__(base.n, base.rank - len(s))
        self.base = base
        self.contracted = s

    def _independent(self, s):
        if s & self.contracted:
            return False
        return self.base.is_independent(s | self.contracted)


def contract(matroid: Matroid, items: Iterable[int]) -> ContractedMatroid:
    return ContractedMatroid(matroid, items)


class MirrorPaddedMatroid(Matroid):
    """Ground set doubled with zero-contribution twins: element u + n mirrors u.

    A set is independent iff it never holds both an element and its twin, and
    the projection (twins folded back onto their originals) is independent in
    the base matroid.  The rank is unchanged and every base has size rank(M).
    """

    def __init__(self, base: Matroid):
        super().__init__(2 * base.n, base.rank)
        self.base = base

    def project(self, s: Iterable[int]) -> frozenset[int]:
        return frozenset(e if e < self.base.n else e - self.base.n for e in s)

    def _independent(self, s):
        proj = set()
        for e in s:
            o = e if e < self.base.n else e - self.base.n
            if o in proj:
                return False
            proj.add(o)
        return self.base.is_independent(proj)


class ZeroPaddedOracle(SubmodularOracle):
    """Set-function view over a padded ground set: padding elements (indices
    >= the inner oracle's item count) contribute exactly zero in any context."""

    kind = "padded"

    def __init__(self, inner: SubmodularOracle, total_items: int):
        if total_items < inner.m:
            raise ValueError("padded ground cannot be smaller than the original")
        super().__init__(total_items)
        self.inner = inner

    def _value(self, items):
        return self.inner._value(frozenset(i for i in items if i < self.inner.m))


def greedy_max_base(matroid: Matroid, weights: Sequence[float]) -> frozenset[int]:
    """Base of maximum total weight: scan elements by weight descending
    (lowest index on ties), keep those preserving independence.

    Exact for linear objectives over matroid bases.
    """
    if len(weights) != matroid.n:
        raise ValueError("one weight per ground element required")
    chosen: set[int] = set()
    for e in sorted(range(matroid.n), key=lambda e: (-weights[e], e)):
        if matroid.is_independent(chosen | {e}):
            chosen.add(e)
    assert len(chosen) == matroid.rank
    return frozenset(chosen)
