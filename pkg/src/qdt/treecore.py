"""Binary trees as leaf-depth sequences and as explicit node structures."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels


class InvalidSequence(ValueError):
    """A depth sequence whose Kraft sum is not exactly one."""

    def __init__(self, depths, kraft):
        self.depths = tuple(depths)
        self.kraft = kraft
        super().__init__(f"invalid path-length sequence {format_seq(depths)}: kraft sum {kraft}")


class UnknownNode(KeyError):
    pass


@dataclass(frozen=True, order=True)
class PathLenSeq:
    """Canonical (sorted) multiset of leaf depths."""

    depths: tuple[int, ...]

    def __init__(self, depths: Iterable[int]):
        ds = tuple(sorted(int(d) for d in depths))
        if any(d < 0 for d in ds):
            raise ValueError(f"negative depth in {ds}")
        object.__setattr__(self, "depths", ds)

    @property
    def n(self) -> int:
        return len(self.depths)

    def __iter__(self):
        return iter(self.depths)

    def __len__(self):
        return len(self.depths)

    def __str__(self):
        return format_seq(self.depths)

    def is_valid(self) -> bool:
        return kraft_sum(self) == 1


@dataclass(frozen=True)
class CheckResult:
    """Verdict of a law check, with the first violating tuple when it fails.

    ``witness`` holds carrier indices (or labels); ``lhs``/``rhs`` are the two
    sides of the violated inequality evaluated on the witness.
    """

    ok: bool
    law: str
    witness: tuple | None = None
    lhs: Fraction | int | None = None
    rhs: Fraction | int | None = None
    checked: int = 0
    violations: int = 0
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls, law, checked=0, **detail):
        return cls(True, law, checked=checked, detail=detail)

    @classmethod
    def failed(cls, law, witness, lhs=None, rhs=None, checked=0, violations=1, **detail):
        return cls(False, law, tuple(witness), lhs, rhs, checked, violations, detail)

    def summary(self) -> dict:
        out = {"law": self.law, "verdict": "pass" if self.ok else "fail", "checked": self.checked}
        if not self.ok:
            out["violations"] = self.violations
            out["witness"] = [_plain(w) for w in self.witness]
            if self.lhs is not None:
                out["lhs"] = rational_str(self.lhs)
                out["rhs"] = rational_str(self.rhs)
        if self.detail:
            out["detail"] = {k: _plain(v) for k, v in self.detail.items()}
        return out


def _plain(v):
    if isinstance(v, Fraction):
        return rational_str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, PathLenSeq):
        return list(v.depths)
    return v


def rational_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# sequences

_SEQ_RE = re.compile(r"^\s*[⟨<\[(]?\s*(.*?)\s*[⟩>\])]?\s*$")


def format_seq(depths) -> str:
    return "⟨" + ",".join(str(d) for d in depths) + "⟩"


def parse_seq(text: str) -> PathLenSeq:
    """Parse "⟨1,3,3,4⟩", "<1 3 3 4>" or a JSON array."""
    text = text.strip()
    if text.startswith("["):
        return PathLenSeq(json.loads(text))
    body = _SEQ_RE.match(text).group(1)
    parts = [p for p in re.split(r"[\s,]+", body) if p]
    if not parts:
        raise ValueError(f"empty sequence: {text!r}")
    return PathLenSeq(int(p) for p in parts)


def seq_to_json(seq: PathLenSeq) -> str:
    return json.dumps(list(seq.depths))


def kraft_sum(seq: Iterable[int]) -> Fraction:
    return sum((Fraction(1, 2**d) for d in seq), Fraction(0))


def enumerate_Tn(n: int) -> list[PathLenSeq]:
    """All leaf-depth multisets of full binary trees with ``n`` leaves, lexicographically.

    Walks down level by level: at each depth the open slots are split into
    leaves and internal nodes, and each internal node opens two slots below.
    Every multiset is produced exactly once.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out: list[tuple[int, ...]] = []

    def walk(depth, slots, acc):
        # every open slot yields at least one leaf
        if len(acc) + slots > n:
            return
        for leaves in range(slots, -1, -1):
            internal = slots - leaves
            acc2 = acc + [depth] * leaves
            if internal == 0:
                if len(acc2) == n:
                    out.append(tuple(acc2))
            else:
                walk(depth + 1, 2 * internal, acc2)

    walk(0, 1, [])
    out.sort()
    return [PathLenSeq(s) for s in out]


# ---------------------------------------------------------------------------
# node structures


@dataclass(frozen=True)
class BinTree:
    """Rooted tree with node ids ``0..size-1``; node 0 is the root.

    ``children[v]`` lists 0 or 2 children (0..2 when ``relaxed``).
    ``parent[root] == root`` so ancestor walks terminate without sentinels.
    """

    children: tuple[tuple[int, ...], ...]
    parent: tuple[int, ...]
    level: tuple[int, ...]
    relaxed: bool = False

    @classmethod
    def from_children(cls, children: Sequence[Sequence[int]], relaxed=False) -> "BinTree":
        size = len(children)
        parent = [-1] * size
        parent[0] = 0
        level = [0] * size
        order = [0]
        for v in order:
            kids = tuple(children[v])
            if len(kids) > 2 or (not relaxed and len(kids) == 1):
                raise ValueError(f"node {v} has {len(kids)} children")
            for c in kids:
                if c == 0 or parent[c] != -1:
                    raise ValueError(f"node {c} reached twice")
                parent[c] = v
                level[c] = level[v] + 1
                order.append(c)
        if len(order) != size:
            raise ValueError("tree has unreachable nodes")
        return cls(tuple(tuple(c) for c in children), tuple(parent), tuple(level), relaxed)

    @property
    def size(self) -> int:
        return len(self.children)

    @property
    def root(self) -> int:
        return 0

    def nodes(self) -> range:
        return range(self.size)

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaves(self) -> list[int]:
        return [v for v in self.nodes() if not self.children[v]]

    def ancestors(self, v: int) -> list[int]:
        """Path from ``v`` up to the root, both included."""
        self._check(v)
        path = [v]
        while v != 0:
            v = self.parent[v]
            path.append(v)
        return path

    def _check(self, v):
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.size):
            raise UnknownNode(v)

    def arrays(self):
        """(parent, level) as int64 arrays for the kernels."""
        return (np.asarray(self.parent, dtype=np.int64), np.asarray(self.level, dtype=np.int64))

    def lca_table(self) -> np.ndarray:
        return _kernels.lca_table(*self.arrays())

    def to_dot(self, name="tree", node_label=None, edge_label=None, highlight=()) -> str:
        return tree_to_dot(self, name, node_label, edge_label, highlight)


def tree_from_seq(seq: PathLenSeq | Iterable[int], relaxed=False) -> BinTree:
    """Canonical representative of a sequence class: deeper leaves go left, recursively.

    Nodes are numbered in preorder.
    """
    if not isinstance(seq, PathLenSeq):
        seq = PathLenSeq(seq)
    k = kraft_sum(seq)
    if k != 1:
        raise InvalidSequence(seq.depths, k)
    children: list[list[int]] = []

    def build(depths_desc, depth):
        v = len(children)
        children.append([])
        if len(depths_desc) == 1 and depths_desc[0] == depth:
            return v
        # deepest-first prefix carrying exactly half of this subtree's mass
        half = Fraction(1, 2 ** (depth + 1))
        mass = Fraction(0)
        cut = 0
        while mass < half:
            mass += Fraction(1, 2 ** depths_desc[cut])
            cut += 1
        left = build(depths_desc[:cut], depth + 1)
        right = build(depths_desc[cut:], depth + 1)
        children[v] = [left, right]
        return v

    build(sorted(seq.depths, reverse=True), 0)
    return BinTree.from_children(children, relaxed=relaxed)


def seq_from_tree(tree: BinTree) -> PathLenSeq:
    return PathLenSeq(tree.level[v] for v in tree.leaves())


def lca(tree: BinTree, x: int, y: int) -> int:
    """Join in the root-as-top order: the deepest common ancestor."""
    tree._check(x)
    tree._check(y)
    px = tree.ancestors(x)
    on_x = set(px)
    for v in tree.ancestors(y):
        if v in on_x:
            return v
    raise AssertionError("root is a common ancestor")


def level(tree: BinTree, x: int) -> int:
    tree._check(x)
    return tree.level[x]


def caterpillar(leaves: int) -> BinTree:
    """Left-leaning comb: every internal node has a leaf as its right child."""
    if leaves < 1:
        raise ValueError("need at least one leaf")
    children: list[list[int]] = [[]]
    spine = 0
    for _ in range(leaves - 1):
        a, b = len(children), len(children) + 1
        children.extend([[], []])
        children[spine] = [a, b]
        spine = a
    return BinTree.from_children(children)


@lru_cache(maxsize=None)
def all_trees(max_leaves: int) -> tuple[BinTree, ...]:
    """Canonical trees for every sequence in T_1 .. T_max_leaves."""
    return tuple(tree_from_seq(s) for n in range(1, max_leaves + 1) for s in enumerate_Tn(n))


def figure1_tree() -> BinTree:
    return tree_from_seq(PathLenSeq((1, 3, 3, 4, 4, 4, 4)))


# ---------------------------------------------------------------------------
# DOT


def _q(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def tree_to_dot(tree: BinTree, name="tree", node_label=None, edge_label=None, highlight=()) -> str:
    """Digraph with one node per id and parent -> child edges.

    Leaves default to their level as label. Nodes in ``highlight`` are filled.
    """
    marked = set(highlight)
    lines = [f"digraph {_q(name)} {{", "  node [shape=circle];"]
    for v in tree.nodes():
        if node_label is not None:
            label = node_label(v)
        elif tree.is_leaf(v):
            label = tree.level[v]
        else:
            label = ""
        attrs = [f"label={_q(label)}"]
        if tree.is_leaf(v):
            attrs.append("shape=box")
        if v in marked:
            attrs.append("style=filled fillcolor=lightblue")
        lines.append(f"  n{v} [{' '.join(attrs)}];")
    for v in tree.nodes():
        for i, c in enumerate(tree.children[v]):
            attr = ""
            if edge_label is not None:
                attr = f" [label={_q(edge_label(v, i))}]"
            lines.append(f"  n{v} -> n{c}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
