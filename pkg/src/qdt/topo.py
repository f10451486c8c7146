"""Alexandrov topologies of finite orders, chain-open down sets of trees, Lawson join.

Subsets of a carrier ``0..n-1`` are Python ints used as bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .semival import FiniteOrder
from .treecore import BinTree, CheckResult, PathLenSeq, tree_to_dot

ORIENTATIONS = ("root-as-bottom", "root-as-top")


def bits(members) -> int:
    out = 0
    for m in members:
        out |= 1 << int(m)
    return out


def members(s: int) -> list[int]:
    out = []
    i = 0
    while s:
        if s & 1:
            out.append(i)
        s >>= 1
        i += 1
    return out


def popcount(s: int) -> int:
    return bin(s).count("1")


def hexset(s: int) -> str:
    return format(s, "x")


@dataclass(frozen=True)
class Topology:
    size: int
    opens: tuple[int, ...]  # sorted ascending

    def __contains__(self, s):
        return s in self._set

    @property
    def _set(self):
        return frozenset(self.opens)

    def is_discrete(self) -> bool:
        return len(self.opens) == 2**self.size

    def verify(self) -> CheckResult:
        """Contains the empty set and the carrier; closed under pairwise union and intersection."""
        opens = self._set
        full = (1 << self.size) - 1
        if 0 not in opens:
            return CheckResult.failed("contains-empty", ())
        if full not in opens:
            return CheckResult.failed("contains-carrier", ())
        ops = self.opens
        for i, a in enumerate(ops):
            for b in ops[i + 1:]:
                if a | b not in opens:
                    return CheckResult.failed("union-closed", (hexset(a), hexset(b)))
                if a & b not in opens:
                    return CheckResult.failed("intersection-closed", (hexset(a), hexset(b)))
        n = len(ops)
        return CheckResult.passed("topology", checked=n * (n - 1) // 2)

    def to_json(self) -> dict:
        return {"size": self.size, "opens": [hexset(s) for s in self.opens]}


def _closed_sets(leq: np.ndarray, upward: bool) -> list[int]:
    """All up-closed (``upward``) or down-closed subsets.

    Elements are decided from the extreme end inwards so that whether an
    element may be included depends only on choices already made.
    """
    n = leq.shape[0]
    rel = leq if upward else leq.T  # rel[x, y]: y must be present whenever x is
    # extreme-first: elements with more elements beyond them come later
    order = sorted(range(n), key=lambda x: (int(rel[x].sum()), x))
    need = [bits(int(y) for y in np.flatnonzero(rel[x]) if y != x) for x in range(n)]
    out = []

    def walk(i, acc):
        if i == n:
            out.append(acc)
            return
        x = order[i]
        walk(i + 1, acc)
        if need[x] & acc == need[x]:
            walk(i + 1, acc | (1 << x))

    walk(0, 0)
    return sorted(out)


def up_sets(order: FiniteOrder) -> list[int]:
    return _closed_sets(order.leq, upward=True)


def lower_sets(order: FiniteOrder) -> list[int]:
    return _closed_sets(order.leq, upward=False)


def alexandrov_topologies(order: FiniteOrder) -> tuple[Topology, Topology]:
    """(upper-set topology, lower-set topology)."""
    return Topology(order.size, tuple(up_sets(order))), Topology(order.size, tuple(lower_sets(order)))


def principal(order: FiniteOrder, x: int, up: bool) -> int:
    col = order.leq[x] if up else order.leq[:, x]
    return bits(np.flatnonzero(col))


def lawson_check(order: FiniteOrder) -> CheckResult:
    """Join of the upper and lower Alexandrov topologies is discrete.

    The join has the pairwise intersections U & D as a base; it is discrete
    iff every singleton appears among them.
    """
    upper, lower = alexandrov_topologies(order)
    base = {u & d for u in upper.opens for d in lower.opens}
    for x in range(order.size):
        if (1 << x) not in base:
            return CheckResult.failed("lawson-discrete", (order.labels[x],))
        # the witnessing pair is the principal filter and ideal
        assert principal(order, x, True) & principal(order, x, False) == 1 << x
    return CheckResult.passed("lawson-discrete", checked=len(base), base_size=len(base))


# ---------------------------------------------------------------------------
# trees


@dataclass(frozen=True, eq=False)
class DownSetFamily:
    tree: BinTree
    orientation: str
    sets: tuple[int, ...]

    def __contains__(self, s):
        return s in set(self.sets)

    def to_json(self) -> dict:
        return {"orientation": self.orientation, "sets": [hexset(s) for s in self.sets]}


def down_sets(tree: BinTree, orientation: str = "root-as-bottom") -> DownSetFamily:
    """All down-closed node sets of the tree order.

    root-as-bottom: down-closed means ancestor-closed (initial subtrees).
    root-as-top: down-closed means descendant-closed.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"unknown orientation {orientation!r}")
    order = FiniteOrder.from_tree(tree, orientation)
    return DownSetFamily(tree, orientation, tuple(lower_sets(order)))


def principal_down_sets(fam: DownSetFamily) -> list[int]:
    order = FiniteOrder.from_tree(fam.tree, fam.orientation)
    return sorted(principal(order, x, False) for x in range(order.size))


def _subsets_in(fam: DownSetFamily, t: int) -> list[int]:
    return [s for s in fam.sets if s & t == s]


def is_chain_open(fam: DownSetFamily, t: int) -> bool:
    """Whether the family members contained in ``t`` are totally ordered by inclusion."""
    if t not in fam:
        raise ValueError(f"set {hexset(t)} is not in the family")
    below = sorted(_subsets_in(fam, t), key=popcount)
    # a chain iff each member contains the previous one in size order
    return all(a & b == a for a, b in zip(below, below[1:]))


def chain_open_sets(fam: DownSetFamily) -> list[int]:
    return [t for t in fam.sets if is_chain_open(fam, t)]


@dataclass(frozen=True)
class ChainOpenBase:
    sets: tuple[int, ...]
    base_check: CheckResult
    recovered: PathLenSeq


def maximal_chain_open(fam: DownSetFamily) -> ChainOpenBase:
    """The inclusion-maximal chain-open sets.

    ``base_check`` reports whether every family member is a union of them.
    ``recovered`` is the multiset of (|set| - 1); under root-as-bottom these
    sets are the root-to-leaf paths, so it equals the tree's sequence.
    """
    co = chain_open_sets(fam)
    maximal = tuple(sorted(t for t in co if not any(t != u and t & u == t for u in co)))
    failures = []
    for s in fam.sets:
        cover = 0
        for m in maximal:
            if m & s == m:
                cover |= m
        if cover != s:
            failures.append(s)
    if failures:
        base = CheckResult.failed("maximal-chain-open-base", (hexset(failures[0]),),
                                  checked=len(fam.sets), violations=len(failures))
    else:
        base = CheckResult.passed("maximal-chain-open-base", checked=len(fam.sets))
    recovered = PathLenSeq(max(popcount(m) - 1, 0) for m in maximal if m)
    return ChainOpenBase(maximal, base, recovered)


def root_paths(tree: BinTree, leaves_only=True) -> list[int]:
    """Node sets of root-to-node paths (independent of the family machinery)."""
    nodes = tree.leaves() if leaves_only else list(tree.nodes())
    return sorted(bits(tree.ancestors(v)) for v in nodes)


def chain_open_dot(tree: BinTree, maximal) -> str:
    """Tree DOT with every node lying on some maximal chain-open set filled."""
    on = set()
    for m in maximal:
        on.update(members(m))
    return tree_to_dot(tree, name="chain_open", highlight=sorted(on))
