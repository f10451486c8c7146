import pytest

from qdt.imbalance import build_balance_poset
from qdt.semival import FiniteOrder
from qdt.topo import (
    Topology,
    alexandrov_topologies,
    bits,
    chain_open_dot,
    chain_open_sets,
    down_sets,
    is_chain_open,
    lawson_check,
    maximal_chain_open,
    members,
    principal_down_sets,
    root_paths,
)
from qdt.treecore import all_trees, caterpillar, figure1_tree, seq_from_tree, tree_from_seq


def brute_closed(order, upward):
    n = order.size
    out = []
    for s in range(2**n):
        ok = True
        for x in members(s):
            for y in range(n):
                rel = order.leq[x, y] if upward else order.leq[y, x]
                if rel and not (s >> y) & 1:
                    ok = False
        if ok:
            out.append(s)
    return out


def test_two_chain():
    up, low = alexandrov_topologies(FiniteOrder.chain(2))
    assert up.opens == (0, 0b10, 0b11)
    assert low.opens == (0, 0b01, 0b11)


def test_antichain_is_discrete():
    up, low = alexandrov_topologies(FiniteOrder.antichain(3))
    assert up.is_discrete() and low.is_discrete() and len(up.opens) == 8


def test_leaf_singleton_is_lower_open():
    t = figure1_tree()
    _, low = alexandrov_topologies(FiniteOrder.from_tree(t))
    for leaf in t.leaves():
        assert bits([leaf]) in low


@pytest.mark.parametrize("order", [FiniteOrder.divisors(12), FiniteOrder.powerset(3),
                                   FiniteOrder.from_tree(tree_from_seq((1, 2, 3, 3)))])
def test_closed_sets_match_brute_force(order):
    up, low = alexandrov_topologies(order)
    assert list(up.opens) == brute_closed(order, True)
    assert list(low.opens) == brute_closed(order, False)


def test_topology_verify_catches_gap():
    assert not Topology(2, (0, 1, 2)).verify()
    assert Topology(2, (0, 1, 2, 3)).verify()


def test_down_sets_root_as_bottom():
    t = figure1_tree()
    fam = down_sets(t, "root-as-bottom")
    assert bits([0]) in fam
    path = bits(t.ancestors(t.leaves()[0]))
    assert path in fam and is_chain_open(fam, path)
    for s in fam.sets:
        if s:
            nodes = members(s)
            assert 0 in nodes and all(t.parent[v] in nodes for v in nodes)


def test_down_sets_root_as_top():
    t = figure1_tree()
    fam = down_sets(t, "root-as-top")
    assert bits([t.leaves()[0]]) in fam


def test_chain_open_examples():
    t = figure1_tree()
    fam = down_sets(t)
    assert is_chain_open(fam, bits([0]))
    assert not is_chain_open(fam, (1 << t.size) - 1)
    with pytest.raises(ValueError):
        is_chain_open(fam, bits([1]))


def test_maximal_chain_open_example_tree():
    t = figure1_tree()
    m = maximal_chain_open(down_sets(t))
    assert len(m.sets) == 7
    assert m.recovered.depths == (1, 3, 3, 4, 4, 4, 4)
    assert list(m.sets) == root_paths(t)
    # proper initial subtrees with two branches are not unions of full paths
    assert not m.base_check


def test_maximal_single_node_and_caterpillar():
    m = maximal_chain_open(down_sets(tree_from_seq((0,))))
    assert m.sets == (1,) and m.recovered.depths == (0,)
    m = maximal_chain_open(down_sets(caterpillar(4)))
    assert len(m.sets) == 4 and m.recovered.depths == (1, 2, 3, 3)


def test_chain_open_sets_are_root_paths_exhaustive():
    for t in all_trees(6):
        fam = down_sets(t)
        assert sorted(s for s in chain_open_sets(fam) if s) == root_paths(t, leaves_only=False)
        m = maximal_chain_open(fam)
        assert list(m.sets) == root_paths(t)
        assert m.recovered == seq_from_tree(t)


def test_principal_filter():
    fam = down_sets(tree_from_seq((1, 1)))
    assert principal_down_sets(fam) == [0b001, 0b011, 0b101]


def test_lawson_examples():
    assert lawson_check(FiniteOrder.chain(2))
    assert lawson_check(build_balance_poset(6).quotient_order())
    assert lawson_check(FiniteOrder.from_tree(figure1_tree()))


def test_alexandrov_axioms_all_small():
    for t in all_trees(6):
        o = FiniteOrder.from_tree(t)
        up, low = alexandrov_topologies(o)
        assert up.verify() and low.verify() and lawson_check(o)
    for n in range(1, 8):
        o = build_balance_poset(n).quotient_order()
        up, low = alexandrov_topologies(o)
        assert up.verify() and low.verify() and lawson_check(o)


def test_json_and_dot():
    t = figure1_tree()
    fam = down_sets(t)
    data = fam.to_json()
    assert data["orientation"] == "root-as-bottom" and data["sets"][0] == "0"
    dot = chain_open_dot(t, maximal_chain_open(fam).sets)
    assert dot.count("fillcolor") == t.size
