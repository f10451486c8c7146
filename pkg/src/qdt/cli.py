"""Command-line front end.

    qdt enumerate --leaves N [--format json|csv]
    qdt analyze --alg insertion|merge --n N [--dot PATH]
    qdt lattice --leaves N [--dot PATH]
    qdt topo (--alg A --n N | --seq "<...>") [--orientation O] [--dot PATH]
    qdt check --suite S --n N [--seed K] [--sample M] [--format json|csv]

Exit codes: 0 all checks pass, 1 some property fails, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from itertools import permutations
from pathlib import Path

from . import dtree, imbalance, schemas, suites, topo
from .semival import FiniteOrder, verify_axioms, weightability
from .treecore import (
    CheckResult,
    InvalidSequence,
    enumerate_Tn,
    format_seq,
    kraft_sum,
    parse_seq,
    rational_str,
    seq_from_tree,
    tree_from_seq,
)

COMMANDS = ("enumerate", "analyze", "lattice", "topo", "check")
MAX_LEAVES = 24
MAX_TOPO_NODES = 31


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunPlan:
    command: str
    n: int | None = None
    alg: str | None = None
    seq: str | None = None
    suite: str | None = None
    orientation: str = "root-as-bottom"
    format: str = "json"
    out: str | None = None
    dot: str | None = None
    seed: int = 0
    sample: int = dtree.DEFAULT_SAMPLE


@dataclass
class RunReport:
    plan: RunPlan
    payload: dict
    verdicts: list
    exit_code: int
    csv_rows: list | None = None

    def to_json(self) -> dict:
        plan = {k: v for k, v in asdict(self.plan).items() if v is not None}
        return {
            "command": self.plan.command,
            "plan": plan,
            "payload": self.payload,
            "verdicts": self.verdicts,
            "exit_code": self.exit_code,
        }

    def render(self) -> str:
        if self.plan.format == "csv" and self.csv_rows is not None:
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.csv_rows)
            return buf.getvalue()
        return dumps(self.to_json())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _build_parser():
    p = _Parser(prog="qdt", description="Semivaluations, decision trees and the balance order.")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def common(sp, fmt=True):
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", metavar="PATH", help="also write the report here")

    sp = sub.add_parser("enumerate", help="list T_n")
    sp.add_argument("--leaves", type=int, required=True, dest="n")
    common(sp)

    sp = sub.add_parser("analyze", help="decision-tree complexity of a sort")
    sp.add_argument("--alg", choices=dtree.ALGORITHMS, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dot", metavar="PATH")
    common(sp, fmt=False)

    sp = sub.add_parser("lattice", help="balance order on T_n")
    sp.add_argument("--leaves", type=int, required=True, dest="n")
    sp.add_argument("--dot", metavar="PATH")
    common(sp, fmt=False)

    sp = sub.add_parser("topo", help="chain-open down sets of a tree")
    sp.add_argument("--alg", choices=dtree.ALGORITHMS)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seq")
    sp.add_argument("--orientation", choices=topo.ORIENTATIONS, default="root-as-bottom")
    sp.add_argument("--dot", metavar="PATH")
    common(sp, fmt=False)

    sp = sub.add_parser("check", help="run a property suite")
    sp.add_argument("--suite", choices=suites.SUITES, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sample", type=int, default=dtree.DEFAULT_SAMPLE)
    common(sp)
    return p


def parse_args(argv) -> RunPlan:
    """Validated plan for ``argv``; raises ``UsageError`` naming the offending flag."""
    ns = _build_parser().parse_args(list(argv))
    fields = {k: v for k, v in vars(ns).items() if v is not None}
    plan = RunPlan(**fields)
    n = plan.n
    if plan.command == "enumerate" and not 1 <= n <= MAX_LEAVES:
        raise UsageError(f"--leaves must be in 1..{MAX_LEAVES}, got {n}")
    if plan.command == "lattice" and not 1 <= n <= MAX_LEAVES:
        raise UsageError(f"--leaves must be in 1..{MAX_LEAVES}, got {n}")
    if plan.command == "analyze" and not 1 <= n <= dtree.max_n():
        raise UsageError(f"--n must be in 1..{dtree.max_n()} (QDT_MAX_N), got {n}")
    if plan.command == "check":
        if n < 1:
            raise UsageError(f"--n must be >= 1, got {n}")
        if plan.sample < 1:
            raise UsageError(f"--sample must be >= 1, got {plan.sample}")
    if plan.command == "topo":
        if plan.seq is not None and (plan.alg is not None or plan.n is not None):
            raise UsageError("--seq cannot be combined with --alg/--n")
        if plan.seq is None and (plan.alg is None or plan.n is None):
            raise UsageError("topo needs --seq, or both --alg and --n")
        if plan.n is not None and not 1 <= n <= dtree.max_n():
            raise UsageError(f"--n must be in 1..{dtree.max_n()}, got {n}")
        if plan.seq is not None:
            try:
                s = parse_seq(plan.seq)
            except ValueError as exc:
                raise UsageError(f"--seq: {exc}") from None
            if kraft_sum(s) != 1:
                raise UsageError(f"--seq: kraft sum {kraft_sum(s)} != 1")
    return plan


def _verdicts(results):
    return [{"name": name, **r.summary()} for name, r in results]


def _exit(results):
    return 0 if all(r for _, r in results) else 1


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _enumerate(plan):
    seqs = enumerate_Tn(plan.n)
    rows = [{"depths": list(s.depths), "text": str(s), "epl": sum(s.depths), "kraft": rational_str(kraft_sum(s))}
            for s in seqs]
    bad = [s for s in seqs if kraft_sum(s) != 1 or len(s) != plan.n]
    res = CheckResult.passed("kraft=1", checked=len(seqs)) if not bad else CheckResult.failed(
        "kraft=1", (str(bad[0]),))
    results = [("enumerate:kraft", res)]
    payload = {"n": plan.n, "count": len(seqs), "sequences": rows}
    csv_rows = [["index", "sequence", "epl", "kraft"]] + [
        [i, r["text"], r["epl"], r["kraft"]] for i, r in enumerate(rows)]
    return payload, results, csv_rows


def _analyze(plan):
    dt = dtree.build_decision_tree(plan.alg, plan.n)
    rep = dtree.complexity_report(dt)
    leaves_ok = sorted(dt.leaf_perm.values()) == sorted(permutations(range(plan.n)))
    results = [
        ("analyze:leaf-bijection", CheckResult.passed("leaf-bijection", checked=len(dt.leaf_perm))
         if leaves_ok else CheckResult.failed("leaf-bijection", ())),
    ]
    if plan.dot:
        _write(plan.dot, dt.to_dot())
    return rep.to_json(), results, None


def _lattice(plan):
    p = imbalance.build_balance_poset(plan.n)
    v = imbalance.verify_lattice(p)
    pd, qd = imbalance.chain_pmetric(p)
    results = [
        ("lattice:quotient", v),
        ("lattice:raw==epl", imbalance.relation_matches_epl(p)),
        ("lattice:partial-metric", verify_axioms(pd)),
        ("lattice:quasi-metric", verify_axioms(qd)),
        ("lattice:weightable", weightability(qd, qd.weight)),
    ]
    payload = {
        "n": plan.n,
        "classes": p.to_json()["classes"],
        "antisymmetry_witnesses": v.detail["antisymmetry_witnesses"],
        "quotient_lattice": "pass" if v else "fail",
        "partial_metric": pd.to_json(),
        "quasi_metric": qd.to_json(),
    }
    if plan.dot:
        _write(plan.dot, p.to_dot())
    return payload, results, None


def _topo(plan):
    if plan.seq is not None:
        seq = parse_seq(plan.seq)
        tree = tree_from_seq(seq)
        source = f"seq {format_seq(seq.depths)}"
    else:
        tree = dtree.build_decision_tree(plan.alg, plan.n).tree
        source = f"{plan.alg} n={plan.n}"
    if tree.size > MAX_TOPO_NODES:
        raise UsageError(f"tree has {tree.size} nodes; down-set enumeration is limited to {MAX_TOPO_NODES}")
    fam = topo.down_sets(tree, plan.orientation)
    m = topo.maximal_chain_open(fam)
    order = FiniteOrder.from_tree(tree, plan.orientation)
    up, low = topo.alexandrov_topologies(order)
    results = [
        ("topo:upper", up.verify()),
        ("topo:lower", low.verify()),
        ("topo:lawson", topo.lawson_check(order)),
    ]
    if plan.orientation == "root-as-bottom":
        rec = m.recovered == seq_from_tree(tree)
        results.append(("topo:recovered", CheckResult.passed("recovered") if rec else CheckResult.failed(
            "recovered", (str(m.recovered),))))
    payload = {
        "source": source,
        "sequence": list(seq_from_tree(tree).depths),
        "orientation": plan.orientation,
        "down_sets": len(fam.sets),
        "chain_open": len(topo.chain_open_sets(fam)),
        "maximal": [topo.members(s) for s in m.sets],
        "recovered": list(m.recovered.depths),
        "base_check": "pass" if m.base_check else "fail",
    }
    if plan.dot:
        _write(plan.dot, topo.chain_open_dot(tree, m.sets))
    return payload, results, None


def _check(plan):
    payload, results = suites.run_suite(plan.suite, plan.n, plan.seed, plan.sample)
    payload = {"suite": plan.suite, **payload}
    csv_rows = [["name", "law", "verdict", "checked", "witness"]]
    for name, r in results:
        csv_rows.append([name, r.law, "pass" if r else "fail", r.checked,
                         "" if r.witness is None else " ".join(str(w) for w in r.witness)])
    return payload, results, csv_rows


_RUNNERS = {"enumerate": _enumerate, "analyze": _analyze, "lattice": _lattice, "topo": _topo, "check": _check}


def execute(plan: RunPlan) -> RunReport:
    payload, results, csv_rows = _RUNNERS[plan.command](plan)
    report = RunReport(plan, payload, _verdicts(results), _exit(results), csv_rows)
    schemas.validate_report(report.to_json())
    if plan.out:
        _write(plan.out, report.render())
    return report


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        plan = parse_args(argv)
        report = execute(plan)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (InvalidSequence, dtree.BoundExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
