"""Semivaluations, partial metrics, decision trees of sorts and the balance order on binary trees."""

from .treecore import (
    BinTree,
    CheckResult,
    PathLenSeq,
    enumerate_Tn,
    kraft_sum,
    lca,
    level,
    seq_from_tree,
    tree_from_seq,
)

__version__ = "0.1.0"

__all__ = [
    "BinTree",
    "CheckResult",
    "PathLenSeq",
    "enumerate_Tn",
    "kraft_sum",
    "lca",
    "level",
    "seq_from_tree",
    "tree_from_seq",
]
