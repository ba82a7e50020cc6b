# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled component kernel: same surface as ``_kernel_py.ComponentKernel``.

Elements are (lam, u) pairs with lam a tuple of ints (coweight coordinates)
and u an int index into the finite Weyl group tables.  Only the per-element
primitives live here; group-level logic stays in Python.
"""

import array

cimport cython
from cpython cimport array

DEF MAXRANK = 8


cdef class ComponentKernel:
    cdef public object t
    cdef public int rank, nroots, order, highest
    cdef int[::1] roots_f     # nroots x rank
    cdef int[::1] mats_f      # order x rank x rank
    cdef int[::1] invs_f      # order
    cdef int[::1] rmul_f      # order x rank
    cdef int[::1] posimg_f    # order x nroots
    cdef list words
    cdef dict _mat_index
    cdef object _coroot_highest

    def __init__(self, tables):
        self.t = tables
        self.rank = tables.rank
        self.nroots = len(tables.roots)
        self.order = tables.order
        self.highest = tables.highest
        if self.rank > MAXRANK:
            raise ValueError("component rank exceeds compiled kernel bound")
        cdef array.array buf

        buf = array.array("i", [x for r in tables.roots for x in r])
        self.roots_f = buf
        buf = array.array(
            "i", [x for m in tables.mats for row in m for x in row]
        )
        self.mats_f = buf
        buf = array.array("i", list(tables.invs))
        self.invs_f = buf
        buf = array.array("i", [x for r in tables.rmul for x in r])
        self.rmul_f = buf
        buf = array.array("i", [x for r in tables.posimg for x in r])
        self.posimg_f = buf
        self.words = list(tables.words)
        self._mat_index = None
        self._coroot_highest = tuple(tables.coroots[tables.highest])

    # -- W0 primitives -------------------------------------------------
    cpdef int u_mul(self, int u1, int u2):
        cdef int u = u1
        cdef int rank = self.rank
        for j in self.words[u2]:
            u = self.rmul_f[u * rank + (<int> j) - 1]
        return u

    def u_act(self, int u, lam):
        cdef int rank = self.rank
        cdef int i, j
        cdef long acc
        cdef long lv[MAXRANK]
        for i in range(rank):
            lv[i] = lam[i]
        out = []
        cdef Py_ssize_t base = u * rank * rank
        for i in range(rank):
            acc = 0
            for j in range(rank):
                acc += self.mats_f[base + i * rank + j] * lv[j]
            out.append(acc)
        return tuple(out)

    # -- element primitives ---------------------------------------------
    def mul(self, a, b):
        cdef int rank = self.rank
        cdef int u1 = a[1]
        cdef int u2 = b[1]
        cdef int i, j
        cdef long acc
        cdef long l1[MAXRANK]
        cdef long l2[MAXRANK]
        t1 = a[0]
        t2 = b[0]
        for i in range(rank):
            l1[i] = t1[i]
            l2[i] = t2[i]
        cdef Py_ssize_t base = u1 * rank * rank
        out = []
        for i in range(rank):
            acc = l1[i]
            for j in range(rank):
                acc += self.mats_f[base + i * rank + j] * l2[j]
            out.append(acc)
        return (tuple(out), self.u_mul(u1, u2))

    def inv(self, a):
        cdef int rank = self.rank
        cdef int u = a[1]
        cdef int ui = self.invs_f[u]
        cdef int i, j
        cdef long acc
        cdef long lv[MAXRANK]
        t1 = a[0]
        for i in range(rank):
            lv[i] = t1[i]
        cdef Py_ssize_t base = ui * rank * rank
        out = []
        for i in range(rank):
            acc = 0
            for j in range(rank):
                acc -= self.mats_f[base + i * rank + j] * lv[j]
            out.append(acc)
        return (tuple(out), ui)

    cpdef long pair(self, lam, int k):
        cdef int rank = self.rank
        cdef long acc = 0
        cdef int j
        for j in range(rank):
            acc += (<long> lam[j]) * self.roots_f[k * rank + j]
        return acc

    def length(self, a):
        cdef int rank = self.rank
        cdef int nroots = self.nroots
        cdef int u = a[1]
        cdef int k, j
        cdef long c, total = 0
        cdef long lv[MAXRANK]
        t1 = a[0]
        for j in range(rank):
            lv[j] = t1[j]
        cdef Py_ssize_t ibase = self.invs_f[u] * nroots
        for k in range(nroots):
            c = 0
            for j in range(rank):
                c += lv[j] * self.roots_f[k * rank + j]
            if self.posimg_f[ibase + k] < 0:
                c -= 1
            total += c if c >= 0 else -c
        return total

    def left_descents(self, a):
        cdef int rank = self.rank
        cdef int u = a[1]
        cdef int j, k
        cdef long c
        cdef long mask = 0
        cdef long lv[MAXRANK]
        t1 = a[0]
        for j in range(rank):
            lv[j] = t1[j]
        cdef Py_ssize_t ibase = self.invs_f[u] * self.nroots
        for j in range(1, rank + 1):
            c = lv[j - 1]
            if c < 0 or (c == 0 and self.posimg_f[ibase + j - 1] < 0):
                mask |= 1 << j
        c = 1
        for j in range(rank):
            c -= lv[j] * self.roots_f[self.highest * rank + j]
        if c < 0 or (c == 0 and self.posimg_f[ibase + self.highest] > 0):
            mask |= 1
        return mask

    def right_descents(self, a):
        cdef int rank = self.rank
        cdef int u = a[1]
        cdef int j, k, s
        cdef long c
        cdef long mask = 0
        cdef long lv[MAXRANK]
        t1 = a[0]
        for j in range(rank):
            lv[j] = t1[j]
        cdef Py_ssize_t base = u * self.nroots
        for j in range(1, rank + 1):
            s = self.posimg_f[base + j - 1]
            k = (s if s > 0 else -s) - 1
            c = 0
            for i in range(rank):
                c += lv[i] * self.roots_f[k * rank + i]
            if s > 0:
                c = -c
            if c < 0 or (c == 0 and s < 0):
                mask |= 1 << j
        s = self.posimg_f[base + self.highest]
        k = (s if s > 0 else -s) - 1
        c = 0
        for i in range(rank):
            c += lv[i] * self.roots_f[k * rank + i]
        if s < 0:
            c = -c
        c += 1
        if c < 0 or (c == 0 and s > 0):
            mask |= 1
        return mask

    def simple(self, int j):
        if j == 0:
            return (self._coroot_highest, self._reflection_index(self.highest))
        zero = (0,) * self.rank
        return (zero, self.rmul_f[j - 1])

    def _reflection_index(self, int k):
        cdef int rank = self.rank
        r = self.t.roots[k]
        cr = self.t.coroots[k]
        mat = tuple(
            tuple((1 if i == jj else 0) - cr[i] * r[jj] for jj in range(rank))
            for i in range(rank)
        )
        if self._mat_index is None:
            self._mat_index = {m: i for i, m in enumerate(self.t.mats)}
        return self._mat_index[mat]
