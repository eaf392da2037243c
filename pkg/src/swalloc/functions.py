"""Set-function value oracles: table, coverage, graph-cut and priced-coverage
families, plus validation helpers (non-negativity, diminishing returns).

Items are integers 0..m-1.  Sets are passed around as frozensets; table-backed
functions index an explicit value array by subset bitmask.  Every oracle counts
the value queries made against it; the counter is thread safe so concurrent
trial workers do not lose increments.
"""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError

#: absolute tolerance for comparisons of function values in validation checks
EPS = 1e-9

#: table functions keep an explicit array of 2^m values
MAX_TABLE_ITEMS = 20


def mask_of(items: Iterable[int]) -> int:
    """Bitmask of an item set (bit i set iff item i is in the set)."""
    m = 0
    for i in items:
        m |= 1 << i
    return m


def items_of(mask: int) -> frozenset[int]:
    """Inverse of :func:`mask_of`."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


class QueryCounter:
    """Lock-protected increment-only counter (safe under concurrent evals)."""

    __slots__ = ("_lock", "_n")

    def __init__(self):
        self._lock = threading.Lock()
        self._n = 0

    def incr(self):
        with self._lock:
            self._n += 1

    @property
    def value(self) -> int:
        return self._n


class SubmodularOracle:
    """Black-box view of one set function over items 0..m-1.

    Subclasses implement ``_value`` (the uncounted evaluation); ``eval`` adds
    range checking and query accounting.  Oracles are immutable after
    construction apart from the query counter.
    """

    kind = "abstract"

    def __init__(self, m: int):
        if m < 0:
            raise ValueError("item count must be non-negative")
        self.m = m
        self._counter = QueryCounter()

    @property
    def queries(self) -> int:
        """Number of value queries made so far."""
        return self._counter.value

    def _value(self, items: frozenset[int]) -> float:
        raise NotImplementedError

    def _check_range(self, items):
        for i in items:
            if not 0 <= i < self.m:
                raise ValueError(f"item {i} outside ground set 0..{self.m - 1}")

    def eval(self, items: Iterable[int]) -> float:
        """f(S).  Counts one query."""
        s = frozenset(items)
        self._check_range(s)
        self._counter.incr()
        return self._value(s)

    def marginal(self, item: int, items: Iterable[int]) -> float:
        """f(S + item) - f(S).  Counts two queries; ``item`` must not be in S."""
        s = frozenset(items)
        if item in s:
            raise ValueError(f"item {item} already in the set")
        return self.eval(s | {item}) - self.eval(s)

    def to_table(self) -> "TableFunction":
        """Materialize all 2^m values (uncounted; m <= MAX_TABLE_ITEMS)."""
        if self.m > MAX_TABLE_ITEMS:
            raise CapacityError(f"cannot tabulate {self.m} items (limit {MAX_TABLE_ITEMS})")
        vals = [self._value(items_of(mask)) for mask in range(1 << self.m)]
        return TableFunction(vals)


class TableFunction(SubmodularOracle):
    """Explicit 2^m value table indexed by subset bitmask.

    The plain constructor accepts any values (so the validators below have
    something to reject); :meth:`checked` enforces both non-negativity and
    diminishing returns.
    """

    kind = "table"

    def __init__(self, values: Sequence[float]):
        n = len(values)
        if n == 0 or n & (n - 1):
            raise ValueError("table length must be a power of two")
        m = n.bit_length() - 1
        if m > MAX_TABLE_ITEMS:
            raise CapacityError(f"table with {m} items exceeds limit {MAX_TABLE_ITEMS}")
        super().__init__(m)
        self.values = [float(v) for v in values]

    @classmethod
    def checked(cls, values: Sequence[float], eps: float = EPS) -> "TableFunction":
        t = cls(values)
        if not is_nonnegative(t):
            raise ValueError("table function must be non-negative everywhere")
        viol = submodularity_violation(t, eps)
        if viol is not None:
            a, b, u = viol
            raise ValueError(f"diminishing returns fails at A={sorted(a)}, B={sorted(b)}, u={u}")
        return t

    def _value(self, items):
        return self.values[mask_of(items)]


class CoverageFunction(SubmodularOracle):
    """Weighted coverage: f(S) = total weight of universe elements covered by S.

    Monotone and submodular by construction.
    """

    kind = "coverage"

    def __init__(self, universe: int, weights: Sequence[float], covers: Sequence[Iterable[int]]):
        super().__init__(len(covers))
        if len(weights) != universe:
            raise ValueError("one weight per universe element required")
        if any(w < 0 for w in weights):
            raise ValueError("coverage weights must be non-negative")
        self.universe = universe
        self.weights = tuple(float(w) for w in weights)
        self.covers = tuple(frozenset(c) for c in covers)
        for c in self.covers:
            for e in c:
                if not 0 <= e < universe:
                    raise ValueError(f"covered element {e} outside universe 0..{universe - 1}")

    def _value(self, items):
        covered = set()
        for i in items:
            covered |= self.covers[i]
        return sum(self.weights[e] for e in covered)


class CutFunction(SubmodularOracle):
    """Undirected cut: items are vertices, f(S) = weight of edges leaving S.

    Non-negative, non-monotone, submodular by construction.
    """

    kind = "cut"

    def __init__(self, m: int, edges: Iterable[tuple[int, int, float]]):
        super().__init__(m)
        norm = []
        for a, b, w in edges:
            if not (0 <= a < m and 0 <= b < m) or a == b:
                raise ValueError(f"bad edge ({a}, {b})")
            if w < 0:
                raise ValueError("edge weights must be non-negative")
            norm.append((min(a, b), max(a, b), float(w)))
        self.edges = tuple(sorted(norm))

    def _value(self, items):
        total = 0.0
        for a, b, w in self.edges:
            if (a in items) != (b in items):
                total += w
        return total


class PricedFunction(SubmodularOracle):
    """Coverage value minus per-item prices (models soft budgets).

    The constructor exhaustively verifies that no subset evaluates negative;
    instances too large to verify (m > MAX_TABLE_ITEMS) are rejected rather
    than silently breaking the non-negativity contract.
    """

    kind = "priced"

    def __init__(self, base: CoverageFunction, prices: Sequence[float]):
        if len(prices) != base.m:
            raise ValueError("one price per item required")
        if any(p < 0 for p in prices):
            raise ValueError("prices must be non-negative")
        if base.m > MAX_TABLE_ITEMS:
            raise CapacityError(
                f"cannot verify non-negativity for {base.m} items (limit {MAX_TABLE_ITEMS})")
        super().__init__(base.m)
        self.base = base
        self.prices = tuple(float(p) for p in prices)
        for mask in range(1 << self.m):
            if self._value(items_of(mask)) < 0:
                raise ValueError(
                    f"prices drive f({sorted(items_of(mask))}) below zero; rejected")

    def _value(self, items):
        return self.base._value(items) - sum(self.prices[i] for i in items)


def is_nonnegative(t: TableFunction) -> bool:
    """True iff every entry of the value table is >= 0."""
    return all(v >= 0.0 for v in t.values)


def submodularity_violation(t: TableFunction, eps: float = EPS):
    """First triple (A, B, u) with A subset of B, u outside B, violating
    f(A+u) - f(A) >= f(B+u) - f(B) - eps; None if the table is submodular.

    Checking adjacent pairs B = A + v suffices: any violation of the general
    property induces one along a chain.  Pairs are scanned in (v, u) index
    order and masks ascending, so the reported triple is deterministic.
    """
    m = t.m
    vals = np.asarray(t.values)
    all_masks = np.arange(1 << m, dtype=np.int64)
    for v in range(m):
        for u in range(m):
            if u == v:
                continue
            pair = (1 << u) | (1 << v)
            base = all_masks[(all_masks & pair) == 0]
            # violation: f(A+u) - f(A) < f(A+v+u) - f(A+v) - eps
            bad = (vals[base | (1 << u)] - vals[base]
                   < vals[base | pair] - vals[base | (1 << v)] - eps)
            if bad.any():
                a = int(base[int(np.argmax(bad))])
                return (items_of(a), items_of(a | (1 << v)), u)
    return None


def is_submodular(t: TableFunction, eps: float = EPS) -> bool:
    """True iff the table has diminishing returns (exhaustive, m <= 20)."""
    return submodularity_violation(t, eps) is None
