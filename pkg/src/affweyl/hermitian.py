"""Brute-force finite hermitian geometry, grounding the q-polynomial counts.

GF(p^k) is realized as F_p[x] modulo a fixed irreducible polynomial found by
trial division; conjugation on GF(q^2) is the q-power map.  All counts are
exhaustive enumerations of projective points, exact and deterministic.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


class DegenerateForm(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factor_prime_power(q: int):
    """(p, e) with q = p^e, or raise ValueError."""
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m == 1:
                return p, e
            raise ValueError(f"{q} is not a prime power")
    raise ValueError(f"{q} is not a prime power")


class GF:
    """GF(p^k) with dense multiplication tables (intended for p^k <= a few hundred)."""

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.size = p**k
        self.modulus = self._find_irreducible(p, k)
        self.elements = list(itertools.product(range(p), repeat=k))
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.zero = self.index[(0,) * k]
        self.one = self.index[((1,) + (0,) * (k - 1)) if k > 1 else (1,)]
        self._mul = [
            [self._mul_raw(a, b) for b in range(self.size)]
            for a in range(self.size)
        ]
        self._add = [
            [
                self.index[
                    tuple((x + y) % p for x, y in zip(self.elements[a], self.elements[b]))
                ]
                for b in range(self.size)
            ]
            for a in range(self.size)
        ]

    @staticmethod
    def _poly_mulmod(a, b, modulus, p):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        # reduce by the monic modulus
        k = len(modulus) - 1
        for i in range(len(out) - 1, k - 1, -1):
            c = out[i]
            if c:
                for j in range(k + 1):
                    out[i - k + j] = (out[i - k + j] - c * modulus[j]) % p
        return tuple(out[:k]) if len(out) >= k else tuple(out) + (0,) * (k - len(out))

    @staticmethod
    def _find_irreducible(p, k):
        """Monic degree-k polynomial with no factor of degree <= k//2."""
        if k == 1:
            return (0, 1)

        def poly_mod(num, den):
            num = list(num)
            dk = len(den) - 1
            while len(num) - 1 >= dk and any(num):
                if num[-1] == 0:
                    num.pop()
                    continue
                c = num[-1]
                off = len(num) - 1 - dk
                for j in range(dk + 1):
                    num[off + j] = (num[off + j] - c * den[j]) % p
                num.pop()
            return num

        smalls = []
        for d in range(1, k // 2 + 1):
            for tail in itertools.product(range(p), repeat=d):
                smalls.append(tuple(tail) + (1,))
        for tail in itertools.product(range(p), repeat=k):
            cand = tuple(tail) + (1,)
            if cand[0] == 0:
                continue
            if all(any(poly_mod(cand, s)) for s in smalls):
                return cand
        raise RuntimeError("no irreducible polynomial found")

    def _mul_raw(self, a, b):
        prod = self._poly_mulmod(self.elements[a], self.elements[b], self.modulus, self.p)
        return self.index[prod]

    def add(self, a, b):
        return self._add[a][b]

    def mul(self, a, b):
        return self._mul[a][b]

    def neg(self, a):
        return self.index[tuple((-x) % self.p for x in self.elements[a])]

    def power(self, a, n):
        out = self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out


@lru_cache(maxsize=None)
def hermitian_field(q: int) -> GF:
    """GF(q^2) with conjugation x -> x^q available via power."""
    p, e = factor_prime_power(q)
    return GF(p, 2 * e)


class FiniteHermitianSpace:
    """A nondegenerate hermitian space over GF(q^2) with the identity Gram matrix."""

    def __init__(self, q: int, n: int, gram=None):
        self.q = q
        self.n = n
        self.field = hermitian_field(q)
        f = self.field
        if gram is None:
            gram = [
                [f.one if i == j else f.zero for j in range(n)] for i in range(n)
            ]
        self.gram = gram
        if not self._nondegenerate():
            raise DegenerateForm("Gram matrix is singular")
        for i in range(n):
            for j in range(n):
                if f.power(self.gram[i][j], q) != self.gram[j][i]:
                    raise DegenerateForm("Gram matrix is not hermitian")

    def _nondegenerate(self) -> bool:
        f = self.field
        m = [row[:] for row in self.gram]
        n = self.n
        rank = 0
        for col in range(n):
            piv = next((r for r in range(rank, n) if m[r][col] != f.zero), None)
            if piv is None:
                continue
            m[rank], m[piv] = m[piv], m[rank]
            inv = f.power(m[rank][col], f.size - 2)
            m[rank] = [f.mul(inv, x) for x in m[rank]]
            for r in range(n):
                if r != rank and m[r][col] != f.zero:
                    c = m[r][col]
                    m[r] = [
                        f.add(x, f.neg(f.mul(c, y))) for x, y in zip(m[r], m[rank])
                    ]
            rank += 1
        return rank == n

    def norm(self, v) -> int:
        """h(v, v) = sum conj(v_i) G_ij v_j."""
        f = self.field
        total = f.zero
        for i in range(self.n):
            if v[i] == f.zero:
                continue
            ci = f.power(v[i], self.q)
            for j in range(self.n):
                if v[j] != f.zero and self.gram[i][j] != f.zero:
                    total = f.add(total, f.mul(f.mul(ci, self.gram[i][j]), v[j]))
        return total

    def projective_points(self):
        """One representative per line: first nonzero coordinate = 1."""
        f = self.field
        for lead in range(self.n):
            head = (f.zero,) * lead + (f.one,)
            for tail in itertools.product(range(f.size), repeat=self.n - lead - 1):
                yield head + tail


def isotropic_lines(space: FiniteHermitianSpace) -> int:
    """Exhaustive count of isotropic lines, h(v, v) = 0."""
    z = space.field.zero
    return sum(1 for v in space.projective_points() if space.norm(v) == z)


def projective_line_points(q: int) -> int:
    """Lines through the origin of GF(q)^2, by enumeration."""
    p, e = factor_prime_power(q)
    f = GF(p, e)
    count = 0
    for lead in range(2):
        head = (f.zero,) * lead + (f.one,)
        for tail in itertools.product(range(f.size), repeat=1 - lead):
            count += 1
            _ = head + tail
    return count


def verify_flag_polynomial(kind: str, q: int) -> tuple[int, int]:
    """(geometric count, polynomial value) for the two grounded pairs.

    kind "A1-split": points of the projective line over GF(q) versus 1 + q.
    kind "A2-twisted": isotropic lines of a hermitian 3-space versus 1 + q^3.
    """
    if kind == "A1-split":
        geo = projective_line_points(q)
        val = 1 + q
    elif kind == "A2-twisted":
        geo = isotropic_lines(FiniteHermitianSpace(q, 3))
        val = 1 + q**3
    else:
        raise ValueError(f"unsupported pair {kind!r}")
    return geo, val
