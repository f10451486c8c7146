"""The balance order on T_n, its EPL quotient chain, and balance comparisons of sorting algorithms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Callable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .dtree import build_decision_tree, complexity_report
from .semival import QUASI, DistanceStructure, FiniteOrder, PARTIAL, FunctionOnPoset
from .treecore import CheckResult, PathLenSeq, enumerate_Tn, format_seq, rational_str


def epl(seq) -> int:
    """External path length: the sum of leaf depths."""
    return sum(seq)


def more_balanced(x, y) -> bool:
    """True iff ``x`` is at least as balanced as ``y`` (smaller or equal EPL)."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return epl(x) <= epl(y)


def _closure(step: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean squaring."""
    reach = step | np.eye(step.shape[0], dtype=bool)
    while True:
        nxt = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
        if np.array_equal(nxt, reach):
            return reach
        reach = nxt


@dataclass(frozen=True, eq=False)
class BalancePoset:
    """T_n under the chained more-balanced relation.

    ``raw[i, j]`` is True iff ``seqs[i] <= seqs[j]``: seqs[i] is reachable from
    seqs[j] by a chain of more-balanced steps. ``classes`` groups sequences
    sharing one EPL, ordered by increasing EPL.
    """

    n: int
    seqs: tuple[PathLenSeq, ...]
    raw: np.ndarray
    classes: tuple[tuple[PathLenSeq, ...], ...]
    class_epl: tuple[int, ...]

    @property
    def ranks(self) -> range:
        return range(len(self.classes))

    def quotient_order(self) -> FiniteOrder:
        labels = tuple(f"EPL={e}" for e in self.class_epl)
        k = len(labels)
        leq = np.zeros((k, k), dtype=bool)
        index = {s: c for c, members in enumerate(self.classes) for s in members}
        for i, a in enumerate(self.seqs):
            for j, b in enumerate(self.seqs):
                if self.raw[i, j]:
                    leq[index[a], index[b]] = True
        return FiniteOrder.from_leq(labels, leq)

    def to_dot(self) -> str:
        lines = [f'digraph "balance_{self.n}" {{', "  rankdir=BT;", "  node [shape=box];"]
        for r, (e, members) in enumerate(zip(self.class_epl, self.classes)):
            lines.append(f'  c{r} [label="EPL={e}, size={len(members)}"];')
        for r in self.ranks[:-1]:
            lines.append(f"  c{r} -> c{r + 1};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "classes": [
                {"rank": r, "epl": e, "members": [list(s.depths) for s in m]}
                for r, (e, m) in enumerate(zip(self.class_epl, self.classes))
            ],
        }


def build_balance_poset(n: int, step: Callable[[PathLenSeq, PathLenSeq], bool] = more_balanced) -> BalancePoset:
    """Enumerate T_n, close the step relation transitively, group by EPL.

    ``step(x, y)`` answers "x is more balanced than y"; any finer order can be
    plugged in here.
    """
    seqs = tuple(enumerate_Tn(n))
    m = len(seqs)
    steps = np.array([[step(seqs[i], seqs[j]) for j in range(m)] for i in range(m)], dtype=bool)
    raw = _closure(steps)
    by_epl = sorted(seqs, key=lambda s: (epl(s), s.depths))
    classes, epls = [], []
    for e, grp in groupby(by_epl, key=epl):
        classes.append(tuple(grp))
        epls.append(e)
    return BalancePoset(n, seqs, raw, tuple(classes), tuple(epls))


def audit_antisymmetry(p: BalancePoset) -> list[tuple[PathLenSeq, PathLenSeq]]:
    """Pairs x != y with x <= y and y <= x in the raw relation, lexicographic."""
    both = p.raw & p.raw.T
    out = []
    for i, j in zip(*np.nonzero(np.triu(both, k=1))):
        out.append((p.seqs[int(i)], p.seqs[int(j)]))
    return out


def lattice_laws(order: FiniteOrder) -> CheckResult:
    """Join/meet exist, and idempotence, commutativity, associativity, absorption hold."""
    po = order.validate()
    if not po:
        return po
    if not order.is_lattice:
        return CheckResult.failed("lattice", (), detail="join or meet missing")
    J, M = order.join, order.meet
    n = order.size
    for x in range(n):
        if J[x, x] != x or M[x, x] != x:
            return CheckResult.failed("idempotent", (x,))
        for y in range(n):
            if J[x, y] != J[y, x] or M[x, y] != M[y, x]:
                return CheckResult.failed("commutative", (x, y))
            if J[x, M[x, y]] != x or M[x, J[x, y]] != x:
                return CheckResult.failed("absorption", (x, y))
            for z in range(n):
                if J[J[x, y], z] != J[x, J[y, z]] or M[M[x, y], z] != M[x, M[y, z]]:
                    return CheckResult.failed("associative", (x, y, z))
    return CheckResult.passed("lattice", checked=n**3)


def is_chain(order: FiniteOrder) -> bool:
    return bool((order.leq | order.leq.T).all())


def verify_lattice(p: BalancePoset) -> CheckResult:
    """Lattice check on the EPL quotient, with the raw relation's antisymmetry audit attached.

    The verdict is about the quotient. Antisymmetry failures of the raw
    relation are informational and listed under ``detail``.
    """
    audit = audit_antisymmetry(p)
    q = p.quotient_order()
    laws = lattice_laws(q)
    chain = is_chain(q)
    extra = {
        "raw_partial_order": not audit,
        "antisymmetry_witnesses": [[format_seq(a), format_seq(b)] for a, b in audit],
        "quotient_is_chain": chain,
        "classes": len(p.classes),
    }
    if laws and chain:
        return CheckResult.passed("quotient-lattice", checked=laws.checked, **extra)
    if not laws:
        return CheckResult(False, laws.law, laws.witness, checked=laws.checked, violations=1, detail=extra)
    return CheckResult.failed("quotient-chain", (), **extra)


def relation_matches_epl(p: BalancePoset) -> CheckResult:
    """The closed step relation coincides with comparing EPLs."""
    e = np.array([epl(s) for s in p.seqs])
    expect = e[:, None] <= e[None, :]
    diff = np.argwhere(expect != p.raw)
    if diff.size:
        i, j = map(int, diff[0])
        return CheckResult.failed("raw==epl-order", (format_seq(p.seqs[i]), format_seq(p.seqs[j])))
    return CheckResult.passed("raw==epl-order", checked=int(expect.size))


def chain_pmetric(p: BalancePoset) -> tuple[DistanceStructure, DistanceStructure]:
    """Shortest-path quasi-metric on the Hasse diagram of the quotient, and its partial metric.

    q(C, D) is the length of the shortest upward Hasse path from C to C v D
    (unit edges), w(C) the path length from the bottom class, and
    p(C, D) = q(C, D) + w(C).
    """
    order = p.quotient_order()
    k = order.size
    leq = order.leq
    strict = leq & ~np.eye(k, dtype=bool)
    # Hasse covers: x < y with nothing strictly between
    between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
    cover = strict & ~between
    dist = shortest_path(csr_matrix(cover.astype(np.int64)), directed=True, unweighted=True)
    J = order.join
    bottom = int(np.flatnonzero(leq.all(axis=1))[0])
    labels = order.labels
    q = [[Fraction(int(dist[c, J[c, d]])) for d in range(k)] for c in range(k)]
    w = FunctionOnPoset(int(dist[bottom, c]) for c in range(k))
    qd = DistanceStructure.from_matrix(labels, q, QUASI, w)
    pd = DistanceStructure.from_matrix(labels, [[q[c][d] + w[c] for d in range(k)] for c in range(k)], PARTIAL, w)
    return pd, qd


@dataclass(frozen=True)
class BalanceReport:
    alg_a: str
    alg_b: str
    n: int
    epl_a: int
    epl_b: int
    average_a: Fraction
    average_b: Fraction
    verdict: str

    def to_json(self) -> dict:
        return {
            "alg_a": self.alg_a,
            "alg_b": self.alg_b,
            "n": self.n,
            "epl_a": self.epl_a,
            "epl_b": self.epl_b,
            "average_a": rational_str(self.average_a),
            "average_b": rational_str(self.average_b),
            "verdict": self.verdict,
        }


def balance_compare(alg_a: str, alg_b: str, n: int) -> BalanceReport:
    ra = complexity_report(build_decision_tree(alg_a, n))
    rb = complexity_report(build_decision_tree(alg_b, n))
    a_le_b = more_balanced(ra.profile, rb.profile)
    b_le_a = more_balanced(rb.profile, ra.profile)
    if a_le_b and b_le_a:
        verdict = "equal"
    elif a_le_b:
        verdict = "A-more-balanced"
    else:
        verdict = "B-more-balanced"
    return BalanceReport(alg_a, alg_b, n, ra.epl, rb.epl, ra.average, rb.average, verdict)
