"""Independent reference computations used to freeze expected values.

Nothing here imports the code paths it checks; only plain data is shared.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product


@lru_cache(maxsize=None)
def shapes(n):
    """All full binary tree shapes with n leaves as nested tuples; a leaf is ()."""
    if n == 1:
        return ((),)
    out = []
    for k in range(1, n):
        for left in shapes(k):
            for right in shapes(n - k):
                out.append((left, right))
    return tuple(out)


def leaf_depths(shape, depth=0):
    if shape == ():
        return [depth]
    return leaf_depths(shape[0], depth + 1) + leaf_depths(shape[1], depth + 1)


def tn_by_shapes(n):
    return sorted({tuple(sorted(leaf_depths(s))) for s in shapes(n)})


def ancestors(parent, v):
    out = [v]
    while parent[v] != v:
        v = parent[v]
        out.append(v)
    return out


def brute_lca(parent, a, b):
    anc = set(ancestors(parent, a))
    for v in ancestors(parent, b):
        if v in anc:
            return v


def brute_star_violations(parent, level):
    n = len(parent)
    j = [[brute_lca(parent, a, b) for b in range(n)] for a in range(n)]
    bad = []
    for x, y, z in product(range(n), repeat=3):
        if level[j[x][z]] < level[j[x][y]] + level[j[y][z]] - level[y]:
            bad.append((x, y, z))
    return bad


def insertion_count(values):
    """Comparisons made by right-to-left insertion sort with early exit."""
    a = list(values)
    c = 0
    for i in range(1, len(a)):
        key = a.pop(i)
        j = i
        while j > 0:
            c += 1
            if a[j - 1] <= key:
                break
            j -= 1
        a.insert(j, key)
    assert a == sorted(values)
    return c


def merge_count(values):
    """(sorted list, comparisons) for top-down merge sort with the larger half on the left."""
    if len(values) <= 1:
        return list(values), 0
    mid = -(-len(values) // 2)
    left, cl = merge_count(values[:mid])
    right, cr = merge_count(values[mid:])
    out, c = [], cl + cr
    while left and right:
        c += 1
        out.append(left.pop(0) if left[0] <= right[0] else right.pop(0))
    return out + left + right, c


def count_profile(alg, n):
    counter = insertion_count if alg == "insertion" else (lambda v: merge_count(v)[1])
    return sorted(counter(p) for p in permutations(range(n)))


def insertion_average(n):
    """Inserting into a sorted prefix of k costs i for rank position i<k and k for the smallest."""
    total = Fraction(0)
    for k in range(1, n):
        total += Fraction(sum(range(1, k + 1)) + k, k + 1)
    return total


def kraft(depths):
    return sum(Fraction(1, 2**d) for d in depths)
