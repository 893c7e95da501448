"""Growable sorted-set adjacency store usable from numba kernels.

Each node owns a contiguous slice of one shared int64 pool. The slice is
kept sorted so membership is a binary search, and it is relocated to the
end of the pool (with doubled capacity) when it fills up.
"""

import numpy as np
from numba import int64, njit
from numba.experimental import jitclass

_spec = [
    ("pool", int64[:]),
    ("start", int64[:]),
    ("size", int64[:]),
    ("cap", int64[:]),
    ("fill", int64),
    ("n_nodes", int64),
]


@jitclass(_spec)
class SortedAdjacency:
    def __init__(self, node_capacity, pool_capacity):
        node_capacity = max(node_capacity, 1)
        self.pool = np.empty(max(pool_capacity, 16), dtype=np.int64)
        self.start = np.zeros(node_capacity, dtype=np.int64)
        self.size = np.zeros(node_capacity, dtype=np.int64)
        self.cap = np.zeros(node_capacity, dtype=np.int64)
        self.fill = 0
        self.n_nodes = 0

    def add_node(self):
        if self.n_nodes == self.start.shape[0]:
            n = 2 * self.n_nodes
            start = np.zeros(n, dtype=np.int64)
            size = np.zeros(n, dtype=np.int64)
            cap = np.zeros(n, dtype=np.int64)
            start[: self.n_nodes] = self.start[: self.n_nodes]
            size[: self.n_nodes] = self.size[: self.n_nodes]
            cap[: self.n_nodes] = self.cap[: self.n_nodes]
            self.start = start
            self.size = size
            self.cap = cap
        node = self.n_nodes
        self.start[node] = self.fill
        self.size[node] = 0
        self.cap[node] = 0
        self.n_nodes += 1
        return node

    def degree(self, node):
        return self.size[node]

    def get(self, node, idx):
        return self.pool[self.start[node] + idx]

    def neighbors(self, node):
        s = self.start[node]
        return self.pool[s : s + self.size[node]]

    def _find(self, node, value):
        # leftmost insertion point of value in node's slice
        lo = self.start[node]
        hi = lo + self.size[node]
        while lo < hi:
            mid = (lo + hi) >> 1
            if self.pool[mid] < value:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def contains(self, node, value):
        pos = self._find(node, value)
        return pos < self.start[node] + self.size[node] and self.pool[pos] == value

    def _grow(self, node):
        s = self.size[node]
        newcap = max(4, 2 * self.cap[node])
        if self.fill + newcap > self.pool.shape[0]:
            pool = np.empty(max(2 * self.pool.shape[0], self.fill + newcap), dtype=np.int64)
            pool[: self.fill] = self.pool[: self.fill]
            self.pool = pool
        old = self.start[node]
        for k in range(s):
            self.pool[self.fill + k] = self.pool[old + k]
        self.start[node] = self.fill
        self.cap[node] = newcap
        self.fill += newcap

    def insert(self, node, value):
        """Insert value into node's set; False if it was already there."""
        pos = self._find(node, value)
        end = self.start[node] + self.size[node]
        if pos < end and self.pool[pos] == value:
            return False
        if self.size[node] == self.cap[node]:
            offset = pos - self.start[node]
            self._grow(node)
            pos = self.start[node] + offset
            end = self.start[node] + self.size[node]
        k = end
        while k > pos:
            self.pool[k] = self.pool[k - 1]
            k -= 1
        self.pool[pos] = value
        self.size[node] += 1
        return True


def new_adjacency(node_capacity=16, pool_capacity=64):
    return SortedAdjacency(node_capacity, pool_capacity)


@njit(cache=True)
def sorted_intersects(a, b):
    """True if the sorted arrays a and b share an element."""
    if a.shape[0] > b.shape[0]:
        a, b = b, a
    if a.shape[0] == 0:
        return False
    # galloping is overkill here; binary-search the short side into the long one
    for x in a:
        lo = 0
        hi = b.shape[0]
        while lo < hi:
            mid = (lo + hi) >> 1
            if b[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo < b.shape[0] and b[lo] == x:
            return True
    return False
