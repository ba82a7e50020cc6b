"""Pure-Python component kernel: the hot per-element primitives.

An element of the extended affine Weyl group of one component is the pair
(lam, u): the affine map v -> u(v) + lam, with lam in coweight coordinates
and u an index into the finite Weyl group tables.  The compiled kernel in
``_kernel_c`` implements the same surface; ``kernels.get_kernel`` picks one.
"""

from __future__ import annotations


class ComponentKernel:
    """Length, descents and products for one component.

    Conventions: t^lam translates by +lam; the Iwahori-Matsumoto length of
    (lam, u) is sum over positive roots alpha of |<lam, alpha>| when
    u^{-1}(alpha) > 0 and |<lam, alpha> - 1| when u^{-1}(alpha) < 0.
    """

    def __init__(self, tables):
        self.t = tables
        self.rank = tables.rank
        self.nroots = len(tables.roots)
        self.roots = tables.roots
        self.mats = tables.mats
        self.invs = tables.invs
        self.rmul = tables.rmul
        self.words = tables.words
        self.posimg = tables.posimg
        self.highest = tables.highest

    # -- W0 primitives -------------------------------------------------
    def u_mul(self, u1: int, u2: int) -> int:
        rmul = self.rmul
        u = u1
        for j in self.words[u2]:
            u = rmul[u][j - 1]
        return u

    def u_act(self, u: int, lam):
        m = self.mats[u]
        rank = self.rank
        return tuple(
            sum(m[i][j] * lam[j] for j in range(rank)) for i in range(rank)
        )

    # -- element primitives ---------------------------------------------
    def mul(self, a, b):
        """(lam1,u1)*(lam2,u2) = (lam1 + u1(lam2), u1 u2)."""
        l1, u1 = a
        l2, u2 = b
        m = self.mats[u1]
        rank = self.rank
        lam = tuple(
            l1[i] + sum(m[i][j] * l2[j] for j in range(rank)) for i in range(rank)
        )
        return (lam, self.u_mul(u1, u2))

    def inv(self, a):
        lam, u = a
        ui = self.invs[u]
        m = self.mats[ui]
        rank = self.rank
        return (
            tuple(-sum(m[i][j] * lam[j] for j in range(rank)) for i in range(rank)),
            ui,
        )

    def pair(self, lam, k: int) -> int:
        """<lam, alpha_k> for the k-th positive root."""
        r = self.roots[k]
        return sum(lam[j] * r[j] for j in range(self.rank))

    def length(self, a) -> int:
        lam, u = a
        img = self.posimg[self.invs[u]]
        roots = self.roots
        rank = self.rank
        total = 0
        for k in range(self.nroots):
            r = roots[k]
            c = 0
            for j in range(rank):
                c += lam[j] * r[j]
            if img[k] < 0:
                c -= 1
            total += c if c >= 0 else -c
        return total

    def left_descents(self, a) -> int:
        """Bitmask over local nodes 0..rank: node j set iff l(s_j a) < l(a)."""
        lam, u = a
        img = self.posimg[self.invs[u]]
        mask = 0
        for j in range(1, self.rank + 1):
            c = lam[j - 1]
            if c < 0 or (c == 0 and img[j - 1] < 0):
                mask |= 1 << j
        c = 1 - self.pair(lam, self.highest)
        if c < 0 or (c == 0 and img[self.highest] > 0):
            mask |= 1
        return mask

    def right_descents(self, a) -> int:
        """Bitmask over local nodes: node j set iff l(a s_j) < l(a)."""
        lam, u = a
        img = self.posimg[u]
        mask = 0
        for j in range(1, self.rank + 1):
            s = img[j - 1]
            k = abs(s) - 1
            c = -self.pair(lam, k) if s > 0 else self.pair(lam, k)
            if c < 0 or (c == 0 and s < 0):
                mask |= 1 << j
        s = img[self.highest]
        k = abs(s) - 1
        c = 1 + (self.pair(lam, k) if s > 0 else -self.pair(lam, k))
        if c < 0 or (c == 0 and s > 0):
            mask |= 1
        return mask

    def simple(self, j: int):
        """Element for local node j (0 = affine node)."""
        rank = self.rank
        if j == 0:
            lam = tuple(self.t.coroots[self.highest])
            # index of s_beta: fold the reflection through the root word
            u = self._reflection_index(self.highest)
            return (lam, u)
        zero = (0,) * rank
        return (zero, self.rmul[0][j - 1])

    def _reflection_index(self, k: int) -> int:
        """Index of the reflection in the k-th positive root."""
        # build its matrix and look it up
        rank = self.rank
        r = self.roots[k]
        cr = self.t.coroots[k]
        mat = tuple(
            tuple((1 if i == jj else 0) - cr[i] * r[jj] for jj in range(rank))
            for i in range(rank)
        )
        # mats index lookup
        try:
            return self._mat_index[mat]
        except AttributeError:
            self._mat_index = {m: i for i, m in enumerate(self.mats)}
            return self._mat_index[mat]
