import numpy as np
import pytest

from qdt.imbalance import (
    audit_antisymmetry,
    balance_compare,
    build_balance_poset,
    chain_pmetric,
    epl,
    is_chain,
    lattice_laws,
    more_balanced,
    relation_matches_epl,
    verify_lattice,
)
from qdt.semival import FiniteOrder, verify_axioms, weightability
from qdt.dtree import build_decision_tree
from qdt.treecore import PathLenSeq


@pytest.mark.parametrize("seq, expected", [((2, 2, 2, 2), 8), ((0,), 0), ((1, 3, 3, 4, 4, 4, 4), 23)])
def test_epl(seq, expected):
    assert epl(PathLenSeq(seq)) == expected


def test_more_balanced():
    assert more_balanced(PathLenSeq((2, 2, 2, 2)), PathLenSeq((1, 2, 3, 3)))
    x = PathLenSeq((1, 2, 3, 3))
    assert more_balanced(x, x)
    m = build_decision_tree("merge", 4).profile()
    i = build_decision_tree("insertion", 4).profile()
    assert more_balanced(m, i) and not more_balanced(i, m)
    with pytest.raises(ValueError):
        more_balanced(PathLenSeq((0,)), PathLenSeq((1, 1)))


def test_poset_five():
    p = build_balance_poset(5)
    assert p.class_epl == (12, 13, 14)
    assert all(len(c) == 1 for c in p.classes)


def test_poset_one():
    p = build_balance_poset(1)
    assert p.classes == ((PathLenSeq((0,)),),)
    assert verify_lattice(p)


def test_poset_seven():
    p = build_balance_poset(7)
    assert len(p.seqs) == 9 and len(p.classes) == 8
    c23 = p.classes[p.class_epl.index(23)]
    assert c23 == (PathLenSeq((1, 3, 3, 4, 4, 4, 4)), PathLenSeq((2, 2, 2, 3, 4, 5, 5)))


@pytest.mark.parametrize("n", range(1, 7))
def test_small_posets_are_partial_orders(n):
    p = build_balance_poset(n)
    assert audit_antisymmetry(p) == []
    v = verify_lattice(p)
    assert v and v.detail["raw_partial_order"]


def test_seven_antisymmetry_witness():
    p = build_balance_poset(7)
    assert audit_antisymmetry(p) == [(PathLenSeq((1, 3, 3, 4, 4, 4, 4)), PathLenSeq((2, 2, 2, 3, 4, 5, 5)))]
    v = verify_lattice(p)
    assert v and v.detail["antisymmetry_witnesses"] == [["⟨1,3,3,4,4,4,4⟩", "⟨2,2,2,3,4,5,5⟩"]]


@pytest.mark.parametrize("n", range(1, 9))
def test_raw_relation_is_epl_order(n):
    assert relation_matches_epl(build_balance_poset(n))


@pytest.mark.parametrize("n", range(1, 11))
def test_quotient_is_lattice_chain(n):
    p = build_balance_poset(n)
    q = p.quotient_order()
    assert is_chain(q) and lattice_laws(q)
    k = q.size
    for a in range(k):
        for b in range(k):
            assert q.meet[a, b] == min(a, b) and q.join[a, b] == max(a, b)


def test_pluggable_step_relation():
    # per-position dominance: a finer order that is antisymmetric at n=7
    def dominated(x, y):
        return all(a <= b for a, b in zip(sorted(x.depths, reverse=True), sorted(y.depths, reverse=True)))

    p = build_balance_poset(7, step=dominated)
    assert audit_antisymmetry(p) == []
    assert not relation_matches_epl(p)


def test_lattice_laws_detects_non_lattice():
    v = FiniteOrder.from_leq("abc", [[1, 0, 1], [0, 1, 1], [0, 0, 1]])
    assert not lattice_laws(v)


def test_chain_pmetric_examples():
    pd, qd = chain_pmetric(build_balance_poset(5))
    assert pd(0, 2) == 2
    assert all(pd(c, c) == c for c in range(3))
    pd6, qd6 = chain_pmetric(build_balance_poset(6))
    assert qd6(0, 4) == 4 and qd6(4, 0) == 0
    for c in range(5):
        for d in range(5):
            assert pd6(c, d) == max(c, d)


@pytest.mark.parametrize("n", range(1, 9))
def test_chain_pmetric_axioms(n):
    pd, qd = chain_pmetric(build_balance_poset(n))
    assert verify_axioms(pd) and verify_axioms(qd)
    assert weightability(qd, qd.weight)


def test_balance_compare():
    r = balance_compare("merge", "insertion", 4)
    assert r.verdict == "A-more-balanced" and (r.epl_a, r.epl_b) == (112, 118)
    assert balance_compare("insertion", "insertion", 4).verdict == "equal"
    assert balance_compare("insertion", "merge", 5).verdict == "B-more-balanced"
    r5 = balance_compare("merge", "insertion", 5)
    assert r5.verdict == "A-more-balanced" and r5.average_a < r5.average_b


@pytest.mark.parametrize("n", range(2, 9))
def test_merge_at_least_as_balanced(n):
    r = balance_compare("merge", "insertion", n)
    assert r.epl_a <= r.epl_b
    assert (r.epl_a < r.epl_b) == (n >= 4)
    assert (r.average_a <= r.average_b)


def test_dot_and_json():
    p = build_balance_poset(6)
    dot = p.to_dot()
    assert 'label="EPL=16, size=1"' in dot and dot.count("->") == 4
    assert p.to_json()["classes"][0] == {"rank": 0, "epl": 16, "members": [[2, 2, 3, 3, 3, 3]]}
    assert np.array_equal(p.raw, p.raw)
