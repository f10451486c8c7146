"""Valuation laws on finite (semi)lattices, and the quasi-/partial-metric constructions.

All arithmetic is exact. Function values and distances are ``Fraction``; the
triple scans run on integers after scaling by a common denominator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from . import _kernels
from .treecore import BinTree, CheckResult, parse_rational, rational_str

KINDS = ("join-val", "join-coval", "meet-val", "meet-coval")
QUASI = "quasi-metric"
PARTIAL = "partial-metric"

# (table, sign): violation iff sign * (f(x.z) - f(x.y) - f(y.z) + f(y)) > 0
_KIND_SCAN = {
    "join-val": ("join", +1),
    "join-coval": ("join", -1),
    "meet-val": ("meet", -1),
    "meet-coval": ("meet", +1),
}

# beyond this, int64 sums of four terms could overflow
_INT_LIMIT = 2**60


class NotALattice(ValueError):
    pass


class ConstructionError(ValueError):
    """A metric construction whose precondition fails; ``result`` holds the witness."""

    def __init__(self, message, result: CheckResult):
        super().__init__(message)
        self.result = result


# ---------------------------------------------------------------------------
# orders


@dataclass(frozen=True, eq=False)
class FiniteOrder:
    """Finite poset with optional join/meet operation tables (index-valued)."""

    labels: tuple
    leq: np.ndarray
    join: np.ndarray | None = None
    meet: np.ndarray | None = None

    @property
    def size(self):
        return len(self.labels)

    def index(self, label):
        return self.labels.index(label)

    @property
    def is_lattice(self):
        return self.join is not None and self.meet is not None

    def validate(self) -> CheckResult:
        """Partial-order axioms, plus lub/glb correctness of the tables present."""
        n = self.size
        leq = self.leq
        checked = n * n * n
        for x in range(n):
            if not leq[x, x]:
                return CheckResult.failed("reflexive", (x,), checked=checked)
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            x, y = map(int, np.argwhere(both)[0])
            return CheckResult.failed("antisymmetric", (x, y), checked=checked)
        # x<=y and y<=z but not x<=z
        trans = (leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq
        if trans.any():
            x, z = map(int, np.argwhere(trans)[0])
            y = int(np.flatnonzero(leq[x] & leq[:, z])[0])
            return CheckResult.failed("transitive", (x, y, z), checked=checked)
        for name, table in (("join", self.join), ("meet", self.meet)):
            if table is None:
                continue
            expected = _bound_table(leq if name == "join" else leq.T)
            if expected is None or not np.array_equal(expected, table):
                bad = np.argwhere(expected != table)[0] if expected is not None else (0, 0)
                return CheckResult.failed(f"{name}-table", tuple(map(int, bad)), checked=checked)
        return CheckResult.passed("partial-order", checked=checked)

    def with_operations(self) -> "FiniteOrder":
        """Fill whichever of join/meet exist as total operations."""
        join = self.join if self.join is not None else _bound_table(self.leq)
        meet = self.meet if self.meet is not None else _bound_table(self.leq.T)
        return FiniteOrder(self.labels, self.leq, join, meet)

    # constructors -----------------------------------------------------

    @classmethod
    def from_leq(cls, labels, leq, operations=True) -> "FiniteOrder":
        order = cls(tuple(labels), np.asarray(leq, dtype=bool))
        return order.with_operations() if operations else order

    @classmethod
    def from_relation(cls, labels, rel) -> "FiniteOrder":
        labels = tuple(labels)
        leq = np.array([[bool(rel(a, b)) for b in labels] for a in labels])
        return cls.from_leq(labels, leq)

    @classmethod
    def chain(cls, length: int) -> "FiniteOrder":
        return cls.from_relation(range(length), lambda a, b: a <= b)

    @classmethod
    def antichain(cls, size: int) -> "FiniteOrder":
        return cls.from_relation(range(size), lambda a, b: a == b)

    @classmethod
    def powerset(cls, atoms: int) -> "FiniteOrder":
        return cls.from_relation(range(2**atoms), lambda a, b: a & b == a)

    @classmethod
    def divisors(cls, m: int) -> "FiniteOrder":
        divs = [d for d in range(1, m + 1) if m % d == 0]
        return cls.from_relation(divs, lambda a, b: b % a == 0)

    @classmethod
    def from_tree(cls, tree: BinTree, orientation="root-as-top") -> "FiniteOrder":
        """Node order of a tree.

        root-as-top: x <= y iff y is an ancestor of x; the join is the lowest
        common ancestor. root-as-bottom reverses it and the meet is the LCA.
        """
        n = tree.size
        up = np.zeros((n, n), dtype=bool)
        for v in tree.nodes():
            up[v, tree.ancestors(v)] = True
        lca = tree.lca_table()
        if orientation == "root-as-top":
            return cls(tuple(range(n)), up, join=lca)
        if orientation == "root-as-bottom":
            return cls(tuple(range(n)), up.T.copy(), meet=lca)
        raise ValueError(f"unknown orientation {orientation!r}")

    # serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "carrier": [str(x) for x in self.labels],
            "leq": ["".join("1" if b else "0" for b in row) for row in self.leq],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteOrder":
        leq = [[c == "1" for c in row] for row in data["leq"]]
        return cls.from_leq(data["carrier"], leq)


def _bound_table(leq):
    """Least-upper-bound table for ``leq`` (pass ``leq.T`` for glb); None if some pair lacks one."""
    n = leq.shape[0]
    counts = leq.sum(axis=0)  # number of elements below each element
    out = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(x, n):
            ub = np.flatnonzero(leq[x] & leq[y])
            if ub.size == 0:
                return None
            # the least upper bound sits below every other upper bound
            cand = ub[np.argmin(counts[ub])]
            if not leq[cand, ub].all():
                return None
            out[x, y] = out[y, x] = cand
    return out


# ---------------------------------------------------------------------------
# functions on posets


@dataclass(frozen=True)
class FunctionOnPoset:
    values: tuple[Fraction, ...]

    def __init__(self, values):
        vals = tuple(Fraction(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("function values must be non-negative")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def shifted(self, c) -> "FunctionOnPoset":
        return FunctionOnPoset(v + c for v in self.values)

    def to_json(self, labels) -> dict:
        return {str(lab): rational_str(v) for lab, v in zip(labels, self.values)}

    @classmethod
    def from_json(cls, data: dict, labels) -> "FunctionOnPoset":
        return cls(parse_rational(data[str(lab)]) for lab in labels)


def _as_f(f) -> FunctionOnPoset:
    return f if isinstance(f, FunctionOnPoset) else FunctionOnPoset(f)


def _scaled(values) -> tuple[np.ndarray, int] | None:
    """Integer array and common denominator, or None if the integers would be too large."""
    values = [Fraction(v) for v in values]
    den = math.lcm(*(v.denominator for v in values)) if values else 1
    ints = [v.numerator * (den // v.denominator) for v in values]
    if any(abs(i) >= _INT_LIMIT // 4 for i in ints):
        return None
    return np.asarray(ints, dtype=np.int64), den


# ---------------------------------------------------------------------------
# valuation laws


def _scan_python(op, vals, sign):
    n = len(vals)
    count, witness = 0, None
    for x, y, z in product(range(n), repeat=3):
        diff = vals[op[x][z]] - vals[op[x][y]] - vals[op[y][z]] + vals[y]
        if sign * diff > 0:
            count += 1
            witness = witness or (x, y, z)
    return count, witness


def semivaluation_scan(op, f, sign, backend=None):
    """(violations, first witness or None) for the generic triple law."""
    f = _as_f(f)
    sc = _scaled(f.values)
    if sc is None:
        return _scan_python(np.asarray(op).tolist(), f.values, sign)
    count, x, y, z = _kernels.triple_scan(op, sc[0], sign, backend)
    return count, ((x, y, z) if count else None)


def _table_for(order: FiniteOrder, kind):
    if kind not in _KIND_SCAN:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    name, sign = _KIND_SCAN[kind]
    table = getattr(order, name)
    if table is None:
        raise ValueError(f"{kind} requires a {name} table")
    return table, sign


def _triple_sides(order, f, kind, x, y, z):
    table, _ = _table_for(order, kind)
    lhs = f[table[x, z]]
    rhs = f[table[x, y]] + f[table[y, z]] - f[y]
    return lhs, rhs


def check_semivaluation(order: FiniteOrder, f, kind: str, backend=None) -> CheckResult:
    """Exhaustive triple test of a (co-)valuation law.

    join-val:   f(x v z) <= f(x v y) + f(y v z) - f(y)
    join-coval: f(x v z) >= f(x v y) + f(y v z) - f(y)
    meet-val:   f(x ^ z) >= f(x ^ y) + f(y ^ z) - f(y)
    meet-coval: f(x ^ z) <= f(x ^ y) + f(y ^ z) - f(y)
    """
    f = _as_f(f)
    table, sign = _table_for(order, kind)
    count, w = semivaluation_scan(table, f, sign, backend)
    checked = order.size**3
    if not count:
        return CheckResult.passed(kind, checked=checked)
    lhs, rhs = _triple_sides(order, f, kind, *w)
    return CheckResult.failed(kind, w, lhs, rhs, checked=checked, violations=count)


def _monotone(order: FiniteOrder, f, law, bad):
    f = _as_f(f)
    sc = _scaled(f.values)
    pairs = np.argwhere(order.leq)
    if sc is not None:
        v = sc[0]
        hits = np.flatnonzero(bad(v[pairs[:, 0]], v[pairs[:, 1]]))
        first = hits[0] if hits.size else None
    else:
        first = next((i for i, (x, y) in enumerate(pairs) if bad(f[x], f[y])), None)
    if first is None:
        return CheckResult.passed(law, checked=len(pairs))
    x, y = map(int, pairs[first])
    return CheckResult.failed(law, (x, y), f[x], f[y], checked=len(pairs))


def is_increasing(order: FiniteOrder, f) -> CheckResult:
    return _monotone(order, f, "increasing", lambda a, b: a > b)


def is_decreasing(order: FiniteOrder, f) -> CheckResult:
    return _monotone(order, f, "decreasing", lambda a, b: a < b)


_MOD_LAW = {"<=": "join-modular", ">=": "meet-modular", "==": "modular"}
_MOD_BAD = {"<=": lambda a, b: a > b, ">=": lambda a, b: a < b, "==": lambda a, b: a != b}


def modularity(order: FiniteOrder, f, relation: str) -> CheckResult:
    """f(x v z) + f(x ^ z)  REL  f(x) + f(z) for all pairs; REL in {"<=", ">=", "=="}."""
    _require_lattice(order)
    f = _as_f(f)
    n = order.size
    law, bad = _MOD_LAW[relation], _MOD_BAD[relation]
    sc = _scaled(f.values)
    if sc is not None:
        v = sc[0]
        lhs = v[order.join] + v[order.meet]
        rhs = v[:, None] + v[None, :]
        hits = np.argwhere(bad(lhs, rhs))
        first = tuple(map(int, hits[0])) if len(hits) else None
    else:
        first = next(((x, z) for x in range(n) for z in range(n)
                      if bad(f[order.join[x, z]] + f[order.meet[x, z]], f[x] + f[z])), None)
    if first is None:
        return CheckResult.passed(law, checked=n * n)
    x, z = first
    return CheckResult.failed(law, (x, z), f[order.join[x, z]] + f[order.meet[x, z]], f[x] + f[z],
                              checked=n * n)


def _require_lattice(order):
    if not order.is_lattice:
        raise NotALattice("operation needs both join and meet tables")


def _equivalence(law, left: CheckResult, right_parts: Sequence[CheckResult]) -> CheckResult:
    right_ok = all(right_parts)
    if bool(left) == right_ok:
        return CheckResult.passed(law, detail_holds=bool(left))
    if left:
        broke = next(r for r in right_parts if not r)
        return CheckResult.failed(law, broke.witness, broke.lhs, broke.rhs,
                                  direction="law holds but characterization fails", part=broke.law)
    return CheckResult.failed(law, left.witness, left.lhs, left.rhs,
                              direction="characterization holds but law fails", part=left.law)


def prop3_equivalence(lattice: FiniteOrder, f, backend=None) -> CheckResult:
    """join-val <=> increasing and join-modular; meet-val <=> increasing and meet-modular.

    Both sides are computed independently; a failure means they disagree.
    """
    _require_lattice(lattice)
    f = _as_f(f)
    inc = is_increasing(lattice, f)
    j = _equivalence("join-val<=>increasing+join-modular",
                     check_semivaluation(lattice, f, "join-val", backend),
                     [inc, modularity(lattice, f, "<=")])
    if not j:
        return j
    m = _equivalence("meet-val<=>increasing+meet-modular",
                     check_semivaluation(lattice, f, "meet-val", backend),
                     [inc, modularity(lattice, f, ">=")])
    if not m:
        return m
    return CheckResult.passed("prop3", checked=2, join_val=j.detail["detail_holds"],
                              meet_val=m.detail["detail_holds"])


def corollary_check(lattice: FiniteOrder, f, backend=None) -> CheckResult:
    """valuation <=> join-val and meet-val; co-valuation <=> join-coval and meet-coval.

    A valuation is increasing and modular; a co-valuation is decreasing and modular.
    """
    _require_lattice(lattice)
    f = _as_f(f)
    mod = modularity(lattice, f, "==")
    val = _equivalence("valuation<=>join-val+meet-val",
                       _all_of("valuation", [is_increasing(lattice, f), mod]),
                       [check_semivaluation(lattice, f, "join-val", backend),
                        check_semivaluation(lattice, f, "meet-val", backend)])
    if not val:
        return val
    coval = _equivalence("co-valuation<=>join-coval+meet-coval",
                         _all_of("co-valuation", [is_decreasing(lattice, f), mod]),
                         [check_semivaluation(lattice, f, "join-coval", backend),
                          check_semivaluation(lattice, f, "meet-coval", backend)])
    if not coval:
        return coval
    return CheckResult.passed("valuation-split", checked=2, valuation=val.detail["detail_holds"],
                              co_valuation=coval.detail["detail_holds"])


def _all_of(law, parts):
    for p in parts:
        if not p:
            return p
    return CheckResult.passed(law)


# ---------------------------------------------------------------------------
# distance structures


@dataclass(frozen=True, eq=False)
class DistanceStructure:
    labels: tuple
    d: tuple[tuple[Fraction, ...], ...]
    kind: str
    weight: FunctionOnPoset | None = None

    def __post_init__(self):
        if self.kind not in (QUASI, PARTIAL):
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def from_matrix(cls, labels, matrix, kind, weight=None):
        d = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        return cls(tuple(labels), d, kind, None if weight is None else _as_f(weight))

    @property
    def size(self):
        return len(self.labels)

    def __call__(self, x, y):
        return self.d[x][y]

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "carrier": [str(x) for x in self.labels],
            "d": [[rational_str(v) for v in row] for row in self.d],
        }
        if self.weight is not None:
            out["weight"] = self.weight.to_json(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "DistanceStructure":
        labels = data["carrier"]
        w = data.get("weight")
        return cls.from_matrix(labels, [[parse_rational(v) for v in row] for row in data["d"]],
                               data["kind"], None if w is None else FunctionOnPoset.from_json(w, labels))

    def to_csv(self) -> str:
        rows = [",".join([""] + [str(x) for x in self.labels])]
        for lab, row in zip(self.labels, self.d):
            rows.append(",".join([str(lab)] + [rational_str(v) for v in row]))
        return "\n".join(rows) + "\n"


def quasi_metric_from_covaluation(order: FiniteOrder, f, argument_order="conjugate",
                                  backend=None) -> DistanceStructure:
    """d(x,y) = f(x) - f(x v y) (literal) or f(y) - f(x v y) (conjugate).

    Requires f to be a join co-valuation with f(x v y) <= min(f(x), f(y)).
    """
    if argument_order not in ("literal", "conjugate"):
        raise ValueError(f"argument_order must be literal or conjugate, got {argument_order!r}")
    f = _as_f(f)
    cov = check_semivaluation(order, f, "join-coval", backend)
    if not cov:
        raise ConstructionError("f is not a join co-valuation", cov)
    n = order.size
    J = order.join
    for x in range(n):
        for y in range(n):
            fj = f[J[x, y]]
            if fj > f[x] or fj > f[y]:
                res = CheckResult.failed("f(x v y) <= min(f(x), f(y))", (x, y), fj, min(f[x], f[y]))
                raise ConstructionError(f"negative distance at pair {(x, y)}", res)
    if argument_order == "literal":
        d = [[f[x] - f[J[x, y]] for y in range(n)] for x in range(n)]
    else:
        d = [[f[y] - f[J[x, y]] for y in range(n)] for x in range(n)]
    return DistanceStructure.from_matrix(order.labels, d, QUASI)


def weightability(q: DistanceStructure, w) -> CheckResult:
    """q(x,y) + w(x) == q(y,x) + w(y) for every pair, exactly."""
    w = _as_f(w)
    n = q.size
    for x in range(n):
        for y in range(x + 1, n):
            lhs = q.d[x][y] + w[x]
            rhs = q.d[y][x] + w[y]
            if lhs != rhs:
                return CheckResult.failed("weightable", (x, y), lhs, rhs, checked=n * n)
    return CheckResult.passed("weightable", checked=n * n)


def solve_weight(q: DistanceStructure) -> tuple[FunctionOnPoset | None, CheckResult]:
    """Weight making ``q`` weightable, normalized so its minimum is 0.

    Returns ``(w, result)``; ``w`` is None when no weight exists, and
    ``result`` then carries the inconsistent pair.
    """
    n = q.size
    if n == 0:
        return FunctionOnPoset(()), CheckResult.passed("weightable")
    # w(y) - w(x) = q(x,y) - q(y,x); propagate from element 0
    raw = [q.d[0][y] - q.d[y][0] for y in range(n)]
    low = min(raw)
    w = FunctionOnPoset(v - low for v in raw)
    res = weightability(q, w)
    return (w if res else None), res


def partial_metric_from(q: DistanceStructure, w) -> DistanceStructure:
    """p(x,y) = q(x,y) + w(x) for a weightable pair (q, w)."""
    w = _as_f(w)
    res = weightability(q, w)
    if not res:
        raise ConstructionError("weightability identity violated", res)
    n = q.size
    p = [[q.d[x][y] + w[x] for y in range(n)] for x in range(n)]
    return DistanceStructure.from_matrix(q.labels, p, PARTIAL, w)


# axiom names: quasi  Q0 self-distance 0, Q1 triangle, Q2 separation
#              partial P1 separation, P2 small self-distance, P3 symmetry, P4 triangle
QUASI_AXIOMS = ("nonnegative", "Q0", "Q1", "Q2")
PARTIAL_AXIOMS = ("nonnegative", "P1", "P2", "P3", "P4")


def _triangle(d, self_weight, law, backend):
    n = len(d)
    sc = _scaled([v for row in d for v in row])
    if sc is not None:
        count, x, y, z = _kernels.triangle_scan(sc[0].reshape(n, n), self_weight, backend)
        w = (x, y, z) if count else None
    else:
        count, w = 0, None
        for x, y, z in product(range(n), repeat=3):
            if d[x][z] > d[x][y] + d[y][z] - self_weight * d[y][y]:
                count += 1
                w = w or (x, y, z)
    if not count:
        return CheckResult.passed(law, checked=n**3)
    x, y, z = w
    return CheckResult.failed(law, w, d[x][z], d[x][y] + d[y][z] - self_weight * d[y][y],
                              checked=n**3, violations=count)


def _pairwise(law, n, bad):
    for x in range(n):
        for y in range(n):
            r = bad(x, y)
            if r is not None:
                return CheckResult.failed(law, (x, y), r[0], r[1], checked=n * n)
    return CheckResult.passed(law, checked=n * n)


def axiom_report(ds: DistanceStructure, kind: str | None = None, backend=None) -> dict[str, CheckResult]:
    """Each axiom of ``kind`` (default: the structure's own kind) checked separately."""
    kind = kind or ds.kind
    d, n = ds.d, ds.size
    out = {"nonnegative": _pairwise("nonnegative", n, lambda x, y: (d[x][y], 0) if d[x][y] < 0 else None)}
    if kind == QUASI:
        out["Q0"] = _pairwise("Q0", n, lambda x, y: (d[x][x], 0) if x == y and d[x][x] != 0 else None)
        out["Q1"] = _triangle(d, 0, "Q1", backend)
        out["Q2"] = _pairwise("Q2", n, lambda x, y: (d[x][y], d[y][x])
                              if x != y and d[x][y] == 0 and d[y][x] == 0 else None)
    elif kind == PARTIAL:
        out["P1"] = _pairwise("P1", n, lambda x, y: (d[x][y], d[x][x])
                              if x != y and d[x][x] == d[x][y] == d[y][y] else None)
        out["P2"] = _pairwise("P2", n, lambda x, y: (d[x][x], d[x][y]) if d[x][x] > d[x][y] else None)
        out["P3"] = _pairwise("P3", n, lambda x, y: (d[x][y], d[y][x]) if d[x][y] != d[y][x] else None)
        out["P4"] = _triangle(d, 1, "P4", backend)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return out


def verify_axioms(ds: DistanceStructure, backend=None) -> CheckResult:
    report = axiom_report(ds, backend=backend)
    for res in report.values():
        if not res:
            return res
    return CheckResult.passed(ds.kind, checked=sum(r.checked for r in report.values()))


def tree_level_function(tree: BinTree) -> FunctionOnPoset:
    return FunctionOnPoset(tree.level)


def tree_partial_metric(tree: BinTree) -> DistanceStructure:
    """p(x,y) = l(x) + l(y) - l(x v y) on the nodes of ``tree``."""
    lca = tree.lca_table()
    lv = tree.level
    n = tree.size
    d = [[lv[x] + lv[y] - lv[lca[x, y]] for y in range(n)] for x in range(n)]
    return DistanceStructure.from_matrix(range(n), d, PARTIAL, FunctionOnPoset(lv))


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)
