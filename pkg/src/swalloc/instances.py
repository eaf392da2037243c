"""Welfare instances (n bidder oracles over m items), allocations, the
text file format, and the product-ground-set reduction to a partition
matroid problem.

File format (UTF-8, ``#`` starts a comment, indices are 1-based)::

    swinstance 1
    items <m>
    bidders <n>
    bidder <j> table
      values <v_0> <v_1> ... <v_{2^m-1}>     # index = subset bitmask
    bidder <j> coverage
      universe <U>
      weights <w_1> ... <w_U>
      covers <i>: <e_1> <e_2> ...
    bidder <j> cut
      edge <a> <b> <w>
    matroid partition                        # optional trailing block
      part <j>: <e_1> <e_2> ...
    matroid uniform <rank>
    matroid table
      independent: <set> ; <set> ; ...
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ParseError
from .functions import (CoverageFunction, CutFunction, SubmodularOracle,
                        TableFunction)
from .matroids import (Matroid, PartitionMatroid, PartitionStructure,
                       TableMatroid, UniformMatroid)


@dataclass
class WelfareInstance:
    """n bidders, each with a submodular utility over items 0..m-1."""

    bidders: tuple[SubmodularOracle, ...]
    m: int
    name: str = ""

    def __post_init__(self):
        self.bidders = tuple(self.bidders)
        for j, b in enumerate(self.bidders):
            if b.m != self.m:
                raise ValueError(f"bidder {j} has {b.m} items, instance has {self.m}")

    @property
    def n(self) -> int:
        return len(self.bidders)

    @property
    def total_queries(self) -> int:
        return sum(b.queries for b in self.bidders)


@dataclass(frozen=True)
class Allocation:
    """Pairwise-disjoint per-bidder item sets; items may stay unassigned."""

    sets: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for s in self.sets:
            if seen & s:
                raise ValueError("allocation assigns an item to two bidders")
            seen |= s

    @classmethod
    def empty(cls, n: int) -> "Allocation":
        return cls(tuple(frozenset() for _ in range(n)))

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]]) -> "Allocation":
        return cls(tuple(frozenset(s) for s in sets))

    @property
    def assigned(self) -> frozenset[int]:
        out: set[int] = set()
        for s in self.sets:
            out |= s
        return frozenset(out)


def welfare_of(instance: WelfareInstance, allocation: Allocation) -> float:
    """Sum of bidder values; one query per bidder."""
    if len(allocation.sets) != instance.n:
        raise ValueError("allocation size does not match bidder count")
    return sum(b.eval(s) for b, s in zip(instance.bidders, allocation.sets))


class WelfareProductOracle(SubmodularOracle):
    """The instance's utilities folded into one set function over the
    item-bidder product ground set: element i*n + j means "item i to bidder j"
    and f(S) is the welfare of the induced (possibly overlapping) assignment."""

    kind = "welfare-product"

    def __init__(self, instance: WelfareInstance):
        super().__init__(instance.m * instance.n)
        self.instance = instance

    def _value(self, items):
        n = self.instance.n
        per: list[set[int]] = [set() for _ in range(n)]
        for e in items:
            per[e % n].add(e // n)
        return sum(b._value(frozenset(s))
                   for b, s in zip(self.instance.bidders, per))


def welfare_as_partition(instance: WelfareInstance):
    """(oracle, parts): the partition-matroid form of a welfare instance.

    Part i holds the n copies of item i; picking at most one element per part
    is exactly an allocation.  Within a part, element order is bidder order,
    so index tie-breaks agree with lowest-bidder tie-breaks.
    """
    n = instance.n
    parts = PartitionStructure.of(
        tuple(range(i * n, (i + 1) * n)) for i in range(instance.m))
    return WelfareProductOracle(instance), parts


def allocation_from_product(instance: WelfareInstance, items: Iterable[int]) -> Allocation:
    """Map a set over the product ground set back to an allocation."""
    n = instance.n
    sets: list[set[int]] = [set() for _ in range(n)]
    for e in items:
        sets[e % n].add(e // n)
    return Allocation.of(sets)


# ---------------------------------------------------------------------------
# file format


def _clean_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _to_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected integer, got {tok!r}", lineno) from None


def _to_float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"expected number, got {tok!r}", lineno) from None


def parse_instance(text: str, name: str = "") -> tuple[WelfareInstance, Optional[Matroid]]:
    """Parse an instance file; returns the instance and its optional matroid."""
    lines = list(_clean_lines(text))
    pos = 0

    def peek():
        return lines[pos] if pos < len(lines) else (None, None)

    lineno, line = peek()
    if line is None or line.split() != ["swinstance", "1"]:
        raise ParseError("file must start with 'swinstance 1'", lineno or 1)
    pos += 1

    lineno, line = peek()
    toks = line.split() if line else []
    if len(toks) != 2 or toks[0] != "items":
        raise ParseError("expected 'items <m>'", lineno or 1)
    m = _to_int(toks[1], lineno)
    pos += 1

    lineno, line = peek()
    toks = line.split() if line else []
    if len(toks) != 2 or toks[0] != "bidders":
        raise ParseError("expected 'bidders <n>'", lineno or 1)
    n = _to_int(toks[1], lineno)
    pos += 1

    bidders: dict[int, SubmodularOracle] = {}
    matroid: Optional[Matroid] = None

    while pos < len(lines):
        lineno, line = lines[pos]
        toks = line.split()
        if toks[0] == "bidder":
            if len(toks) != 3:
                raise ParseError("expected 'bidder <j> <kind>'", lineno)
            j = _to_int(toks[1], lineno)
            if not 1 <= j <= n:
                raise ParseError(f"bidder index {j} out of range 1..{n}", lineno)
            if j in bidders:
                raise ParseError(f"bidder {j} defined twice", lineno)
            kind = toks[2]
            pos += 1
            if kind == "table":
                bidders[j], pos = _parse_table(lines, pos, m)
            elif kind == "coverage":
                bidders[j], pos = _parse_coverage(lines, pos, m)
            elif kind == "cut":
                bidders[j], pos = _parse_cut(lines, pos, m)
            else:
                raise ParseError(f"unknown bidder kind {kind!r}", lineno)
        elif toks[0] == "matroid":
            if matroid is not None:
                raise ParseError("second matroid block", lineno)
            matroid, pos = _parse_matroid_block(lines, pos, m)
        else:
            raise ParseError(f"unexpected directive {toks[0]!r}", lineno)

    missing = [j for j in range(1, n + 1) if j not in bidders]
    if missing:
        raise ParseError(f"missing bidder blocks: {missing}", lines[-1][0] if lines else 1)
    instance = WelfareInstance(tuple(bidders[j] for j in range(1, n + 1)), m, name)
    return instance, matroid


def _parse_table(lines, pos, m):
    if pos >= len(lines):
        raise ParseError("table bidder needs a 'values' line", lines[-1][0])
    lineno, line = lines[pos]
    toks = line.split()
    if toks[0] != "values":
        raise ParseError("expected 'values ...'", lineno)
    vals = [_to_float(t, lineno) for t in toks[1:]]
    if len(vals) != 1 << m:
        raise ParseError(f"expected {1 << m} values, got {len(vals)}", lineno)
    try:
        return TableFunction.checked(vals), pos + 1
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def _parse_coverage(lines, pos, m):
    if pos >= len(lines):
        raise ParseError("coverage bidder needs a 'universe' line", lines[-1][0])
    lineno, line = lines[pos]
    toks = line.split()
    if len(toks) != 2 or toks[0] != "universe":
        raise ParseError("expected 'universe <U>'", lineno)
    universe = _to_int(toks[1], lineno)
    pos += 1
    if pos >= len(lines):
        raise ParseError("coverage bidder needs a 'weights' line", lineno)
    lineno, line = lines[pos]
    toks = line.split()
    if toks[0] != "weights":
        raise ParseError("expected 'weights ...'", lineno)
    weights = [_to_float(t, lineno) for t in toks[1:]]
    if len(weights) != universe:
        raise ParseError(f"expected {universe} weights, got {len(weights)}", lineno)
    pos += 1
    covers: list[set[int]] = [set() for _ in range(m)]
    while pos < len(lines) and lines[pos][1].startswith("covers"):
        lineno, line = lines[pos]
        head, _, rest = line.partition(":")
        toks = head.split()
        if len(toks) != 2:
            raise ParseError("expected 'covers <i>: ...'", lineno)
        item = _to_int(toks[1], lineno)
        if not 1 <= item <= m:
            raise ParseError(f"item {item} out of range 1..{m}", lineno)
        for t in rest.split():
            e = _to_int(t, lineno)
            if not 1 <= e <= universe:
                raise ParseError(f"universe element {e} out of range 1..{universe}", lineno)
            covers[item - 1].add(e - 1)
        pos += 1
    return CoverageFunction(universe, weights, covers), pos


def _parse_cut(lines, pos, m):
    edges = []
    while pos < len(lines) and lines[pos][1].startswith("edge"):
        lineno, line = lines[pos]
        toks = line.split()
        if len(toks) != 4:
            raise ParseError("expected 'edge <a> <b> <w>'", lineno)
        a, b = _to_int(toks[1], lineno), _to_int(toks[2], lineno)
        w = _to_float(toks[3], lineno)
        if not (1 <= a <= m and 1 <= b <= m):
            raise ParseError(f"edge endpoint out of range 1..{m}", lineno)
        edges.append((a - 1, b - 1, w))
        pos += 1
    try:
        return CutFunction(m, edges), pos
    except ValueError as exc:
        raise ParseError(str(exc), lines[pos - 1][0] if pos else 1) from None


def _parse_matroid_block(lines, pos, m):
    lineno, line = lines[pos]
    toks = line.split()
    if len(toks) < 2:
        raise ParseError("expected 'matroid <kind> ...'", lineno)
    kind = toks[1]
    pos += 1
    if kind == "partition":
        parts = []
        while pos < len(lines) and lines[pos][1].startswith("part"):
            plineno, pline = lines[pos]
            head, sep, rest = pline.partition(":")
            if not sep:
                raise ParseError("expected 'part <j>: ...'", plineno)
            elems = [_to_int(t, plineno) for t in rest.split()]
            for e in elems:
                if not 1 <= e <= m:
                    raise ParseError(f"element {e} out of range 1..{m}", plineno)
            parts.append(tuple(e - 1 for e in elems))
            pos += 1
        if sum(len(p) for p in parts) != m:
            raise ParseError(f"partition must cover all {m} items", lineno)
        try:
            return PartitionMatroid(PartitionStructure.of(parts)), pos
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if kind == "uniform":
        if len(toks) != 3:
            raise ParseError("expected 'matroid uniform <rank>'", lineno)
        rank = _to_int(toks[2], lineno)
        try:
            return UniformMatroid(rank, m), pos
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if kind == "table":
        if pos >= len(lines) or not lines[pos][1].startswith("independent"):
            raise ParseError("matroid table needs an 'independent:' line", lineno)
        tlineno, tline = lines[pos]
        _, _, rest = tline.partition(":")
        sets = []
        for seg in rest.split(";"):
            elems = [_to_int(t, tlineno) for t in seg.split()]
            for e in elems:
                if not 1 <= e <= m:
                    raise ParseError(f"element {e} out of range 1..{m}", tlineno)
            sets.append([e - 1 for e in elems])
        try:
            return TableMatroid(m, sets), pos + 1
        except ValueError as exc:
            raise ParseError(str(exc), tlineno) from None
    raise ParseError(f"unknown matroid kind {kind!r}", lineno)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_instance(instance: WelfareInstance, matroid: Optional[Matroid] = None) -> str:
    """Serialize an instance (and optional matroid) in the file format.

    Deterministic: identical inputs produce identical bytes.  Oracle kinds
    without a file representation (priced, padded) are materialized as tables.
    """
    out = ["swinstance 1", f"items {instance.m}", f"bidders {instance.n}"]
    for j, b in enumerate(instance.bidders, start=1):
        if isinstance(b, CoverageFunction):
            out.append(f"bidder {j} coverage")
            out.append(f"  universe {b.universe}")
            out.append("  weights " + " ".join(_fmt(w) for w in b.weights))
            for i, cov in enumerate(b.covers, start=1):
                if cov:
                    out.append(f"  covers {i}: " + " ".join(str(e + 1) for e in sorted(cov)))
        elif isinstance(b, CutFunction):
            out.append(f"bidder {j} cut")
            for a, c, w in b.edges:
                out.append(f"  edge {a + 1} {c + 1} {_fmt(w)}")
        else:
            table = b if isinstance(b, TableFunction) else b.to_table()
            out.append(f"bidder {j} table")
            out.append("  values " + " ".join(_fmt(v) for v in table.values))
    if matroid is not None:
        out.extend(_write_matroid(matroid))
    return "\n".join(out) + "\n"


def _write_matroid(matroid: Matroid):
    if isinstance(matroid, PartitionMatroid):
        yield "matroid partition"
        for j, part in enumerate(matroid.structure.parts, start=1):
            yield f"  part {j}: " + " ".join(str(e + 1) for e in part)
    elif isinstance(matroid, UniformMatroid):
        yield f"matroid uniform {matroid.rank}"
    elif isinstance(matroid, TableMatroid):
        segs = sorted(matroid._sets, key=lambda s: (len(s), sorted(s)))
        yield "matroid table"
        yield "  independent: " + " ; ".join(
            " ".join(str(e + 1) for e in sorted(s)) for s in segs)
    else:
        raise ValueError(f"matroid kind {type(matroid).__name__} has no file form")


def load_instance(path) -> tuple[WelfareInstance, Optional[Matroid]]:
    from pathlib import Path
    p = Path(path)
    return parse_instance(p.read_text(encoding="utf-8"), name=p.stem)
