"""Integer hot loops: exhaustive triple scans and lowest-common-ancestor queries.

Every kernel exists twice, a numba ``@njit`` version and a pure-numpy version
with identical results. The public names at the bottom of the module point at
one of the two, chosen once at import time:

    QDT_DISABLE_NUMBA=1   force the numpy path

All inputs are int64 arrays. Callers are responsible for scaling exact
rationals to a common integer denominator first.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAVE_NUMBA and not _flag("QDT_DISABLE_NUMBA")

NO_WITNESS = (-1, -1, -1)


# ---------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _triple_scan_nb(op, vals, sign):
    # violation iff sign * (f(op[x,z]) - f(op[x,y]) - f(op[y,z]) + f(y)) > 0
    n = vals.shape[0]
    count = 0
    wx = -1
    wy = -1
    wz = -1
    for x in range(n):
        for y in range(n):
            base = vals[op[x, y]] - vals[y]
            for z in range(n):
                diff = vals[op[x, z]] - base - vals[op[y, z]]
                if sign * diff > 0:
                    if count == 0:
                        wx = x
                        wy = y
                        wz = z
                    count += 1
    return count, wx, wy, wz


@njit(cache=True)
def _triangle_scan_nb(d, self_weight):
    # violation iff d[x,z] > d[x,y] + d[y,z] - self_weight * d[y,y]
    n = d.shape[0]
    count = 0
    wx = -1
    wy = -1
    wz = -1
    for x in range(n):
        for y in range(n):
            rhs = d[x, y] - self_weight * d[y, y]
            for z in range(n):
                if d[x, z] > rhs + d[y, z]:
                    if count == 0:
                        wx = x
                        wy = y
                        wz = z
                    count += 1
    return count, wx, wy, wz


@njit(cache=True)
def _lca_one(parent, level, a, b):
    while level[a] > level[b]:
        a = parent[a]
    while level[b] > level[a]:
        b = parent[b]
    while a != b:
        a = parent[a]
        b = parent[b]
    return a


@njit(cache=True)
def _lca_table_nb(parent, level):
    n = parent.shape[0]
    out = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        out[a, a] = a
        for b in range(a + 1, n):
            c = _lca_one(parent, level, a, b)
            out[a, b] = c
            out[b, a] = c
    return out


@njit(cache=True)
def _lca_pairs_nb(parent, level, a, b):
    k = a.shape[0]
    out = np.empty(k, dtype=np.int64)
    for i in range(k):
        out[i] = _lca_one(parent, level, a[i], b[i])
    return out


@njit(cache=True)
def _star_sampled_nb(parent, level, triples):
    # (x, y, z) violates iff l(x v z) < l(x v y) + l(y v z) - l(y)
    k = triples.shape[0]
    count = 0
    first = -1
    for i in range(k):
        x = triples[i, 0]
        y = triples[i, 1]
        z = triples[i, 2]
        lhs = level[_lca_one(parent, level, x, z)]
        rhs = (
            level[_lca_one(parent, level, x, y)]
            + level[_lca_one(parent, level, y, z)]
            - level[y]
        )
        if lhs < rhs:
            if count == 0:
                first = i
            count += 1
    return count, first


# ---------------------------------------------------------------------------
# numpy fallbacks


def _first_true(mask):
    flat = np.flatnonzero(mask)
    return int(flat.size), (np.unravel_index(int(flat[0]), mask.shape) if flat.size else None)


def _triple_scan_np(op, vals, sign):
    n = vals.shape[0]
    count = 0
    witness = NO_WITNESS
    fop = vals[op]  # fop[x, y] = f(op(x, y))
    for x in range(n):
        # rows y, columns z
        diff = fop[x][None, :] - fop[x][:, None] + vals[:, None] - fop
        c, idx = _first_true(sign * diff > 0)
        if c and count == 0:
            witness = (x, int(idx[0]), int(idx[1]))
        count += c
    return count, *witness


def _triangle_scan_np(d, self_weight):
    n = d.shape[0]
    count = 0
    witness = NO_WITNESS
    diag = np.diagonal(d)
    for x in range(n):
        rhs = (d[x] - self_weight * diag)[:, None] + d
        c, idx = _first_true(d[x][None, :] > rhs)
        if c and count == 0:
            witness = (x, int(idx[0]), int(idx[1]))
        count += c
    return count, *witness


def _lca_pairs_np(parent, level, a, b):
    a = np.array(a, dtype=np.int64, copy=True)
    b = np.array(b, dtype=np.int64, copy=True)
    while True:
        la = level[a]
        lb = level[b]
        up_a = la > lb
        up_b = lb > la
        same = ~(up_a | up_b) & (a != b)
        if not (up_a.any() or up_b.any() or same.any()):
            return a
        a = np.where(up_a | same, parent[a], a)
        b = np.where(up_b | same, parent[b], b)


def _lca_table_np(parent, level):
    n = parent.shape[0]
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return _lca_pairs_np(parent, level, a.ravel(), b.ravel()).reshape(n, n)


def _star_sampled_np(parent, level, triples):
    x, y, z = triples[:, 0], triples[:, 1], triples[:, 2]
    lhs = level[_lca_pairs_np(parent, level, x, z)]
    rhs = (
        level[_lca_pairs_np(parent, level, x, y)]
        + level[_lca_pairs_np(parent, level, y, z)]
        - level[y]
    )
    bad = np.flatnonzero(lhs < rhs)
    return int(bad.size), (int(bad[0]) if bad.size else -1)


# ---------------------------------------------------------------------------
# dispatch

NUMBA_KERNELS = {
    "triple_scan": _triple_scan_nb,
    "triangle_scan": _triangle_scan_nb,
    "lca_table": _lca_table_nb,
    "lca_pairs": _lca_pairs_nb,
    "star_sampled": _star_sampled_nb,
}

NUMPY_KERNELS = {
    "triple_scan": _triple_scan_np,
    "triangle_scan": _triangle_scan_np,
    "lca_table": _lca_table_np,
    "lca_pairs": _lca_pairs_np,
    "star_sampled": _star_sampled_np,
}


def backend_name():
    return "numba" if USE_NUMBA else "numpy"


def get_kernels(backend=None):
    """Return the kernel table for ``backend`` ("numba", "numpy" or None for the active one)."""
    if backend is None:
        backend = backend_name()
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        return NUMBA_KERNELS
    if backend == "numpy":
        return NUMPY_KERNELS
    raise ValueError(f"unknown backend {backend!r}")


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def triple_scan(op, vals, sign, backend=None):
    """Scan all ordered triples of the valuation-style inequality.

    Returns ``(count, x, y, z)`` where the witness is the lexicographically
    first violating triple, or ``(-1, -1, -1)`` when there is none.
    """
    count, x, y, z = get_kernels(backend)["triple_scan"](_i64(op), _i64(vals), int(sign))
    return int(count), int(x), int(y), int(z)


def triangle_scan(d, self_weight, backend=None):
    count, x, y, z = get_kernels(backend)["triangle_scan"](_i64(d), int(self_weight))
    return int(count), int(x), int(y), int(z)


def lca_table(parent, level, backend=None):
    return get_kernels(backend)["lca_table"](_i64(parent), _i64(level))


def lca_pairs(parent, level, a, b, backend=None):
    return get_kernels(backend)["lca_pairs"](_i64(parent), _i64(level), _i64(a), _i64(b))


def star_sampled(parent, level, triples, backend=None):
    count, first = get_kernels(backend)["star_sampled"](_i64(parent), _i64(level), _i64(triples))
    return int(count), int(first)
