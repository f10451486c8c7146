"""Decision trees of comparison sorts, built by tracing every input permutation."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import _kernels
from .semival import (
    FiniteOrder,
    FunctionOnPoset,
    partial_metric_from,
    quasi_metric_from_covaluation,
)
from .treecore import BinTree, CheckResult, PathLenSeq, kraft_sum, rational_str

ALGORITHMS = ("insertion", "merge")
DEFAULT_MAX_N = 8
DEFAULT_SAMPLE = 10**6
LE, GT = "≤", ">"


class BoundExceeded(ValueError):
    pass


def max_n() -> int:
    return int(os.environ.get("QDT_MAX_N", DEFAULT_MAX_N))


# ---------------------------------------------------------------------------
# algorithms: each sorts item ids 0..n-1 using only ``le(a, b)``


def insertion_sort(items, le):
    a = list(items)
    for i in range(1, len(a)):
        key = a[i]
        j = i - 1
        # right-to-left scan; stop at the first element not larger than key
        while j >= 0 and not le(a[j], key):
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = key
    return a


def merge_sort(items, le):
    a = list(items)
    if len(a) <= 1:
        return a
    mid = (len(a) + 1) // 2  # left half gets the extra element
    left = merge_sort(a[:mid], le)
    right = merge_sort(a[mid:], le)
    out = []
    i = j = 0
    while i < len(left) and j < len(right):
        if le(left[i], right[j]):
            out.append(left[i])
            i += 1
        else:
            out.append(right[j])
            j += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return out


SORTERS = {"insertion": insertion_sort, "merge": merge_sort}


def trace(algorithm: str, perm) -> tuple[list[tuple[int, int, bool]], list[int]]:
    """Comparisons (i, j, outcome) the algorithm makes on ``perm`` and its output order.

    ``perm[i]`` is the rank of the item at input position i (0-based).
    """
    log = []

    def le(i, j):
        r = perm[i] <= perm[j]
        log.append((i, j, r))
        return r

    out = SORTERS[algorithm](range(len(perm)), le)
    return log, out


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DecisionTree:
    """Comparison tree of one algorithm at one input size.

    ``tree`` is relaxed (up to two children). For an internal node,
    ``compare[v]`` is the 1-based input positions compared and
    ``outcomes[v]`` gives the outcome label of each child edge.
    ``leaf_perm[v]`` is the rank permutation reaching leaf v.
    """

    algorithm: str
    n: int
    tree: BinTree
    compare: dict[int, tuple[int, int]]
    outcomes: dict[int, tuple[str, ...]]
    leaf_perm: dict[int, tuple[int, ...]]
    single_child: int

    @property
    def size(self):
        return self.tree.size

    def profile(self) -> PathLenSeq:
        return PathLenSeq(self.tree.level[v] for v in self.tree.leaves())

    def leaf_for(self, perm) -> int:
        perm = tuple(perm)
        for v, p in self.leaf_perm.items():
            if p == perm:
                return v
        raise KeyError(perm)

    def structure(self):
        """Hashable structural fingerprint for determinism checks."""
        return (self.tree.children, tuple(sorted(self.compare.items())),
                tuple(sorted(self.outcomes.items())), tuple(sorted(self.leaf_perm.items())))

    def to_dot(self) -> str:
        def node_label(v):
            if v in self.compare:
                i, j = self.compare[v]
                return f"{i}:{j}"
            return "".join(str(r + 1) for r in self.leaf_perm[v])

        return self.tree.to_dot(
            name=f"{self.algorithm}_{self.n}",
            node_label=node_label,
            edge_label=lambda v, k: self.outcomes[v][k],
        )


def build_decision_tree(algorithm: str, n: int) -> DecisionTree:
    """Merge the comparison traces of all n! permutations into one tree.

    Permutations are visited in lexicographic order and nodes are numbered on
    first creation, so the numbering is deterministic.
    """
    if algorithm not in SORTERS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    bound = max_n()
    if n < 1 or n > bound:
        raise BoundExceeded(f"n={n} outside 1..{bound} (set QDT_MAX_N to raise the bound)")
    children: list[dict[bool, int]] = [{}]
    compare: dict[int, tuple[int, int]] = {}
    leaf_perm: dict[int, tuple[int, ...]] = {}
    for perm in permutations(range(n)):
        log, out = trace(algorithm, perm)
        if [perm[i] for i in out] != sorted(perm):
            raise AssertionError(f"{algorithm} failed to sort {perm}")
        v = 0
        for i, j, r in log:
            seen = compare.setdefault(v, (i + 1, j + 1))
            if seen != (i + 1, j + 1):
                raise AssertionError(f"node {v} compares {seen} and {(i + 1, j + 1)}")
            nxt = children[v].get(r)
            if nxt is None:
                nxt = len(children)
                children.append({})
                children[v][r] = nxt
            v = nxt
        if v in leaf_perm or children[v]:
            raise AssertionError(f"two inputs reach node {v}")
        leaf_perm[v] = perm
    kids = [tuple(c[r] for r in (True, False) if r in c) for c in children]
    outcomes = {v: tuple(LE if r else GT for r in (True, False) if r in c)
                for v, c in enumerate(children) if c}
    single = sum(1 for k in kids if len(k) == 1)
    tree = BinTree.from_children(kids, relaxed=True)
    return DecisionTree(algorithm, n, tree, compare, outcomes, leaf_perm, single)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexityReport:
    algorithm: str
    n: int
    profile: PathLenSeq
    worst: int
    average: Fraction
    epl: int
    kraft: Fraction
    single_child: int

    def to_json(self) -> dict:
        return {
            "alg": self.algorithm,
            "n": self.n,
            "worst": self.worst,
            "average": rational_str(self.average),
            "epl": self.epl,
            "profile": list(self.profile.depths),
            "kraft": rational_str(self.kraft),
            "single_child_nodes": self.single_child,
        }


def complexity_report(dt: DecisionTree) -> ComplexityReport:
    prof = dt.profile()
    epl = sum(prof.depths)
    leaves = len(prof)
    return ComplexityReport(
        dt.algorithm, dt.n, prof, max(prof.depths), Fraction(epl, leaves), epl,
        kraft_sum(prof), dt.single_child,
    )


def closed_form_worst(algorithm: str, n: int) -> int:
    """n(n-1)/2 for insertion; n*ceil(lg n) - 2**ceil(lg n) + 1 for merge."""
    if algorithm == "insertion":
        return n * (n - 1) // 2
    if algorithm == "merge":
        c = (n - 1).bit_length()  # ceil(log2 n) for n >= 1
        return n * c - 2**c + 1
    raise ValueError(algorithm)


def verify_star_inequality(dt: DecisionTree | BinTree, mode="exhaustive", k: int = DEFAULT_SAMPLE,
                           seed: int = 0, backend=None) -> CheckResult:
    """l(x v z) >= l(x v y) + l(y v z) - l(y) over node triples of the tree.

    ``mode`` is "exhaustive" or "sampled"; sampling draws ``k`` uniform
    triples from ``numpy.random.default_rng(seed)``.
    """
    tree = dt.tree if isinstance(dt, DecisionTree) else dt
    parent, lv = tree.arrays()
    law = "star"
    if mode == "exhaustive":
        lca = _kernels.lca_table(parent, lv, backend)
        count, x, y, z = _kernels.triple_scan(lca, lv, -1, backend)
        checked = tree.size**3
        w = (x, y, z)
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        triples = rng.integers(0, tree.size, size=(k, 3), dtype=np.int64)
        count, first = _kernels.star_sampled(parent, lv, triples, backend)
        checked = k
        w = tuple(int(t) for t in triples[first]) if count else None
    else:
        raise ValueError(f"mode must be exhaustive or sampled, got {mode!r}")
    if not count:
        return CheckResult.passed(law, checked=checked, mode=mode)
    x, y, z = w
    lca_of = lambda a, b: int(_kernels.lca_pairs(parent, lv, [a], [b], backend)[0])  # noqa: E731
    lhs = lv[lca_of(x, z)]
    rhs = lv[lca_of(x, y)] + lv[lca_of(y, z)] - lv[y]
    return CheckResult.failed(law, w, int(lhs), int(rhs), checked=checked, violations=count, mode=mode)


def complexity_pmetric(dt: DecisionTree | BinTree):
    """Partial metric p(x,y) = l(x) + l(y) - l(x v y) via the conjugate weighted construction."""
    tree = dt.tree if isinstance(dt, DecisionTree) else dt
    order = FiniteOrder.from_tree(tree)
    f = FunctionOnPoset(tree.level)
    q = quasi_metric_from_covaluation(order, f, "conjugate")
    return partial_metric_from(q, f)


def leaf_weights(dt: DecisionTree) -> dict[int, int]:
    """p(leaf, leaf) = l(leaf), computed without materializing the full table."""
    parent, lv = dt.tree.arrays()
    leaves = np.asarray(dt.tree.leaves(), dtype=np.int64)
    joins = _kernels.lca_pairs(parent, lv, leaves, leaves)
    return {int(v): int(2 * lv[v] - lv[j]) for v, j in zip(leaves, joins)}
