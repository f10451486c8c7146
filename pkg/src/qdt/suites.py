"""Property-check suites behind ``qdt check``.

Each suite returns ``(payload, results)`` where ``results`` is a list of
``(name, CheckResult)``; a suite passes iff every result passes.
"""

from __future__ import annotations

from itertools import product
from math import factorial

import numpy as np

from .dtree import (
    ALGORITHMS,
    DEFAULT_SAMPLE,
    build_decision_tree,
    closed_form_worst,
    complexity_report,
    max_n,
    verify_star_inequality,
)
from .imbalance import build_balance_poset, chain_pmetric, relation_matches_epl, verify_lattice
from .semival import (
    FiniteOrder,
    FunctionOnPoset,
    axiom_report,
    check_semivaluation,
    corollary_check,
    partial_metric_from,
    prop3_equivalence,
    quasi_metric_from_covaluation,
    solve_weight,
    tree_partial_metric,
    verify_axioms,
    weightability,
)
from .topo import (
    alexandrov_topologies,
    chain_open_sets,
    down_sets,
    lawson_check,
    maximal_chain_open,
    root_paths,
)
from .treecore import CheckResult, all_trees, format_seq, rational_str, seq_from_tree

SUITES = ("semival", "pmetric", "covaluation", "lattice", "topology", "all")
SEMIVAL_TRIALS = 1000
EXHAUSTIVE_DT_MAX = 4


def semival_lattices():
    out = [(f"powerset({k})", FiniteOrder.powerset(k)) for k in range(1, 5)]
    out += [("divisors(36)", FiniteOrder.divisors(36)), ("divisors(360)", FiniteOrder.divisors(360))]
    out += [(f"chain({k})", FiniteOrder.chain(k)) for k in range(1, 9)]
    return out


def random_function(order: FiniteOrder, rng, trial: int) -> list[int]:
    """Arbitrary, increasing or decreasing integer function, cycling with ``trial``."""
    n = order.size
    kind = trial % 3
    if kind == 0:
        return [int(v) for v in rng.integers(0, 10, n)]
    # sums of non-negative weights over principal ideals/filters are monotone
    weights = rng.integers(0, 4, n)
    rel = order.leq if kind == 1 else order.leq.T
    return [int(weights[rel[:, x]].sum()) for x in range(n)]


def suite_semival(n=None, seed=0, trials=SEMIVAL_TRIALS, **_):
    rng = np.random.default_rng(seed)
    results = []
    per_lattice = {}
    for name, lat in semival_lattices():
        bad3 = badc = 0
        holds = {"join_val": 0, "meet_val": 0, "valuation": 0, "co_valuation": 0}
        first = None
        for t in range(trials):
            f = random_function(lat, rng, t)
            r3 = prop3_equivalence(lat, f)
            rc = corollary_check(lat, f)
            bad3 += not r3
            badc += not rc
            if r3:
                holds["join_val"] += r3.detail["join_val"]
                holds["meet_val"] += r3.detail["meet_val"]
            if rc:
                holds["valuation"] += rc.detail["valuation"]
                holds["co_valuation"] += rc.detail["co_valuation"]
            first = first or (None if r3 else r3) or (None if rc else rc)
        per_lattice[name] = {"size": lat.size, "trials": trials, "prop3_discrepancies": bad3,
                             "corollary_discrepancies": badc, **holds}
        if first is None:
            results.append((f"semival:{name}", CheckResult.passed("monotone+modular", checked=trials)))
        else:
            results.append((f"semival:{name}", first))
    # exhaustive 0/1 functions on the 3-atom powerset
    lat = FiniteOrder.powerset(3)
    bad = None
    count = 0
    for f in product((0, 1), repeat=lat.size):
        count += 1
        for r in (prop3_equivalence(lat, f), corollary_check(lat, f)):
            if not r and bad is None:
                bad = r
    results.append(("semival:powerset(3) 0/1 exhaustive",
                    bad or CheckResult.passed("monotone+modular", checked=count)))
    payload = {"seed": seed, "lattices": per_lattice, "boolean_functions": count}
    return payload, results


def tree_pmetric_checks(tree):
    """All metric-construction checks for one tree; list of (name, CheckResult)."""
    order = FiniteOrder.from_tree(tree)
    lv = FunctionOnPoset(tree.level)
    out = [("join-coval", check_semivaluation(order, lv, "join-coval"))]
    p = tree_partial_metric(tree)
    out.append(("p axioms", verify_axioms(p)))
    top = max(tree.level)
    for ao, expected_w in (("conjugate", list(tree.level)), ("literal", [top - v for v in tree.level])):
        q = quasi_metric_from_covaluation(order, lv, ao)
        out.append((f"{ao} quasi axioms", verify_axioms(q)))
        w, res = solve_weight(q)
        if res and list(w.values) != expected_w:
            res = CheckResult.failed("weight", (ao,), detail="solved weight differs from expectation")
        out.append((f"{ao} weight", res))
        if w is not None:
            pp = partial_metric_from(q, w)
            out.append((f"{ao} p axioms", verify_axioms(pp)))
        # a constant shift of f leaves the quasi-metric unchanged
        q2 = quasi_metric_from_covaluation(order, lv.shifted(3), ao)
        out.append((f"{ao} shift-invariant",
                    CheckResult.passed("shift") if q2.d == q.d else CheckResult.failed("shift", ())))
    qc = quasi_metric_from_covaluation(order, lv, "conjugate")
    out.append(("weightable with w=level", weightability(qc, lv)))
    same = partial_metric_from(qc, lv).d == p.d
    out.append(("q+w equals l(x)+l(y)-l(x v y)",
                CheckResult.passed("pmetric-formula") if same else CheckResult.failed("pmetric-formula", ())))
    return out


def suite_pmetric(n=6, **_):
    results = []
    trees = all_trees(n)
    for t in trees:
        s = format_seq(seq_from_tree(t).depths)
        for name, r in tree_pmetric_checks(t):
            results.append((f"pmetric:{s}:{name}", r))
    # which partial-metric axioms the literal construction meets, as reported data
    literal_profile = {}
    for t in trees:
        order = FiniteOrder.from_tree(t)
        q = quasi_metric_from_covaluation(order, FunctionOnPoset(t.level), "literal")
        rep = axiom_report(q, "partial-metric")
        literal_profile[format_seq(seq_from_tree(t).depths)] = {k: bool(v) for k, v in rep.items()}
    payload = {"max_leaves": n, "trees": len(trees), "literal_as_partial_metric": literal_profile}
    return payload, results


def suite_covaluation(n=4, seed=0, sample=DEFAULT_SAMPLE, **_):
    results = []
    for t in all_trees(min(n, 10)):
        results.append((f"star:T:{format_seq(seq_from_tree(t).depths)}", verify_star_inequality(t)))
    reports = []
    for alg in ALGORITHMS:
        for k in range(1, min(n, max_n()) + 1):
            dt = build_decision_tree(alg, k)
            rep = complexity_report(dt)
            reports.append(rep.to_json())
            mode = "exhaustive" if k <= EXHAUSTIVE_DT_MAX else "sampled"
            results.append((f"star:{alg}:{k}", verify_star_inequality(dt, mode, k=sample, seed=seed)))
            leaves = len(dt.leaf_perm)
            results.append((f"leaves:{alg}:{k}",
                            CheckResult.passed("n!-leaves") if leaves == factorial(k)
                            else CheckResult.failed("n!-leaves", (leaves,))))
            cf = closed_form_worst(alg, k)
            results.append((f"worst:{alg}:{k}",
                            CheckResult.passed("closed-form-worst") if rep.worst == cf
                            else CheckResult.failed("closed-form-worst", (k,), rep.worst, cf)))
    payload = {"n": n, "seed": seed, "sample": sample, "reports": reports}
    return payload, results


def suite_lattice(n=7, **_):
    results = []
    posets = []
    for k in range(1, n + 1):
        p = build_balance_poset(k)
        v = verify_lattice(p)
        results.append((f"lattice:{k}", v))
        results.append((f"raw==epl:{k}", relation_matches_epl(p)))
        pd, qd = chain_pmetric(p)
        results.append((f"chain pmetric:{k}", verify_axioms(pd)))
        results.append((f"chain quasi:{k}", verify_axioms(qd)))
        results.append((f"chain weightable:{k}", weightability(qd, qd.weight)))
        posets.append({"n": k, "classes": len(p.classes),
                       "antisymmetry_witnesses": v.detail["antisymmetry_witnesses"]})
    balance = []
    for k in range(2, min(n, max_n()) + 1):
        em = complexity_report(build_decision_tree("merge", k))
        ei = complexity_report(build_decision_tree("insertion", k))
        ok = em.epl <= ei.epl and (k < 4 or em.epl < ei.epl) and (em.average <= ei.average)
        res = CheckResult.passed("merge-more-balanced") if ok else CheckResult.failed(
            "merge-more-balanced", (k,), em.epl, ei.epl)
        results.append((f"balance:{k}", res))
        balance.append({"n": k, "epl_merge": em.epl, "epl_insertion": ei.epl,
                        "average_merge": rational_str(em.average), "average_insertion": rational_str(ei.average)})
    return {"n": n, "posets": posets, "balance": balance}, results


def suite_topology(n=6, **_):
    results = []
    summary = []
    for t in all_trees(min(n, 6)):
        s = format_seq(seq_from_tree(t).depths)
        order = FiniteOrder.from_tree(t)
        up, low = alexandrov_topologies(order)
        results.append((f"topo:{s}:upper", up.verify()))
        results.append((f"topo:{s}:lower", low.verify()))
        results.append((f"topo:{s}:lawson", lawson_check(order)))
        fam = down_sets(t, "root-as-bottom")
        m = maximal_chain_open(fam)
        paths_ok = list(m.sets) == root_paths(t)
        co_ok = sorted(x for x in chain_open_sets(fam) if x) == root_paths(t, leaves_only=False)
        results.append((f"topo:{s}:maximal=paths",
                        CheckResult.passed("maximal-chain-open") if paths_ok and co_ok
                        else CheckResult.failed("maximal-chain-open", (s,))))
        rec_ok = m.recovered == seq_from_tree(t)
        results.append((f"topo:{s}:recovered",
                        CheckResult.passed("recovered") if rec_ok
                        else CheckResult.failed("recovered", (format_seq(m.recovered.depths),))))
        summary.append({"seq": s, "down_sets": len(fam.sets), "maximal": len(m.sets),
                        "base_check": m.base_check.ok})
    for k in range(1, min(n, 7) + 1):
        q = build_balance_poset(k).quotient_order()
        up, low = alexandrov_topologies(q)
        results.append((f"topo:balance{k}:upper", up.verify()))
        results.append((f"topo:balance{k}:lower", low.verify()))
        results.append((f"topo:balance{k}:lawson", lawson_check(q)))
    return {"n": n, "trees": summary}, results


def run_suite(name, n, seed=0, sample=DEFAULT_SAMPLE):
    fns = {
        "semival": suite_semival,
        "pmetric": suite_pmetric,
        "covaluation": suite_covaluation,
        "lattice": suite_lattice,
        "topology": suite_topology,
    }
    if name == "all":
        payload, results = {}, []
        for key, fn in fns.items():
            p, r = fn(n=n, seed=seed, sample=sample)
            payload[key] = p
            results.extend(r)
        return payload, results
    return fns[name](n=n, seed=seed, sample=sample)

