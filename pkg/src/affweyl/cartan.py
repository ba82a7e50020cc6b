"""Exact realizations of the untwisted affine families A, B, C, D.

Coweights live in the fundamental-coweight basis of the *adjoint* group, so
the translation lattice is Z^rank and every pairing used by the length and
descent formulas is an integer dot product:

    <lam, alpha> = sum_j m_j(alpha) * lam_j,

where m_j(alpha) are the simple-root coefficients of the root alpha.  The
finite Weyl group acts through integer matrices in the same basis.  All
tables are built once per (family, rank) and shared.

Local node numbering inside one component: 0 is the affine node, 1..rank are
the finite nodes with the standard Bourbaki labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

FAMILIES = ("A", "B", "C", "D")

# Coxeter bond label from <a_i^vee, a_j><a_j^vee, a_i>; 0 stands for infinity.
_BOND = {0: 2, 1: 3, 2: 4, 3: 6}


class UnsupportedComponent(ValueError):
    """Family/rank combination outside the supported untwisted A-D range."""


def _min_rank(family: str) -> int:
    return {"A": 1, "B": 2, "C": 2, "D": 4}[family]


def cartan_matrix(family: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix, entries cartan[i][j] = <alpha_{i+1}^vee, alpha_{j+1}>."""
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    for i in range(rank - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if family == "B" and rank >= 2:
        # alpha_rank is the short root: <alpha_rank^vee, alpha_{rank-1}> = -2
        a[rank - 1][rank - 2] = -2
    elif family == "C" and rank >= 2:
        # alpha_rank is the long root
        a[rank - 2][rank - 1] = -2
    elif family == "D":
        a[rank - 1][rank - 2] = a[rank - 2][rank - 1] = 0
        a[rank - 1][rank - 3] = a[rank - 3][rank - 1] = -1
    return tuple(tuple(row) for row in a)


def _symmetrizer(cartan) -> tuple[Fraction, ...]:
    """Positive rationals d_i with d_i * cartan[i][j] symmetric."""
    rank = len(cartan)
    d = [None] * rank
    d[0] = Fraction(1)
    pending = [0]
    while pending:
        i = pending.pop()
        for j in range(rank):
            if i != j and cartan[i][j] != 0 and d[j] is None:
                # d_i a_ij = d_j a_ji
                d[j] = d[i] * cartan[i][j] / cartan[j][i]
                pending.append(j)
    assert all(x is not None and x > 0 for x in d)
    return tuple(d)


def _positive_roots(cartan):
    """All positive roots as simple-coefficient vectors, simples first."""
    rank = len(cartan)
    simples = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
    index = {v: i for i, v in enumerate(simples)}
    roots = list(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for v in frontier:
            for j in range(rank):
                # <v, alpha_j^vee> = sum_i v_i cartan[j][i]
                c = sum(v[i] * cartan[j][i] for i in range(rank))
                w = list(v)
                w[j] -= c
                w = tuple(w)
                if all(x >= 0 for x in w) and any(x > 0 for x in w) and w not in index:
                    index[w] = len(roots)
                    roots.append(w)
                    nxt.append(w)
        frontier = nxt
    return tuple(roots), index


def _coroot_coords(cartan, dsym, root) -> tuple[int, ...]:
    """Coroot of `root` in fundamental-coweight coordinates."""
    rank = len(cartan)
    # (root, root)/2 where (a_i, a_j) = d_i * cartan[i][j]
    q = sum(
        Fraction(root[i] * root[j]) * dsym[i] * cartan[i][j]
        for i in range(rank)
        for j in range(rank)
    ) / 2
    coeff = [Fraction(root[i]) * dsym[i] / q for i in range(rank)]
    out = [Fraction(0)] * rank
    for i in range(rank):
        if coeff[i]:
            for j in range(rank):
                out[j] += coeff[i] * cartan[i][j]
    assert all(x.denominator == 1 for x in out)
    return tuple(int(x) for x in out)


@dataclass(frozen=True)
class ComponentTables:
    """Immutable per-component data: root system plus finite Weyl group tables.

    Weyl group elements are indices into the table arrays.  `mats[u]` is the
    action on coweight coordinates (rows act on column vectors), `words[u]` a
    reduced word in finite nodes 1..rank, `posimg[u][k]` the signed 1-based
    index of u(alpha_k) in the positive-root list, `rmul[u][j-1]` the index
    of u*s_j.
    """

    family: str
    rank: int
    cartan: tuple
    roots: tuple
    root_index: dict
    coroots: tuple
    highest: int
    marks: tuple  # simple coefficients of the highest root
    cox: tuple  # (rank+1) x (rank+1) affine Coxeter matrix, 0 = infinity bond
    order: int
    mats: tuple
    words: tuple
    invs: tuple
    rmul: tuple
    posimg: tuple

    @property
    def nnodes(self) -> int:
        return self.rank + 1

    def special_local_nodes(self) -> tuple[int, ...]:
        """Local nodes whose base-alcove vertex is special (mark 1, plus 0)."""
        return (0,) + tuple(
            i + 1 for i in range(self.rank) if self.marks[i] == 1
        )

    def vertex_point(self, local_node: int) -> tuple[Fraction, ...]:
        """Base-alcove vertex for a local node, in coweight coordinates."""
        if local_node == 0:
            return tuple(Fraction(0) for _ in range(self.rank))
        m = self.marks[local_node - 1]
        return tuple(
            Fraction(1, m) if j == local_node - 1 else Fraction(0)
            for j in range(self.rank)
        )


def _build_w0(cartan, roots, root_index):
    rank = len(cartan)
    nroots = len(roots)

    def smat(j):
        # s_j: lam' = lam - lam_j * coroot_j, coroot_j = cartan row j
        return tuple(
            tuple((1 if i == k else 0) - (cartan[j][i] if k == j else 0) for k in range(rank))
            for i in range(rank)
        )

    def mat_mul(m1, m2):
        return tuple(
            tuple(sum(m1[i][k] * m2[k][j] for k in range(rank)) for j in range(rank))
            for i in range(rank)
        )

    # signed action of s_j on positive roots
    sroot = []
    for j in range(rank):
        row = []
        for k in range(nroots):
            v = roots[k]
            c = sum(v[i] * cartan[j][i] for i in range(rank))
            w = tuple(v[i] - (c if i == j else 0) for i in range(rank))
            if all(x >= 0 for x in w):
                row.append(root_index[w] + 1)
            else:
                neg = tuple(-x for x in w)
                row.append(-(root_index[neg] + 1))
        sroot.append(tuple(row))

    ident = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    mats = [ident]
    words = [()]
    posimg = [tuple(range(1, nroots + 1))]
    index = {ident: 0}
    rmul = []
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            while len(rmul) <= u:
                rmul.append([None] * rank)
            for j in range(rank):
                m = mat_mul(mats[u], smat(j))
                v = index.get(m)
                if v is None:
                    v = len(mats)
                    index[m] = v
                    mats.append(m)
                    words.append(words[u] + (j + 1,))
                    img = posimg[u]
                    posimg.append(
                        tuple(
                            (img[abs(s) - 1] if s > 0 else -img[abs(s) - 1])
                            for s in sroot[j]
                        )
                    )
                    nxt.append(v)
                rmul[u][j] = v
        frontier = nxt
    for u in range(len(mats)):
        while len(rmul) <= u:
            rmul.append([None] * rank)

    invs = []
    for u, w in enumerate(words):
        v = 0
        for j in reversed(w):
            v = rmul[v][j - 1]
        invs.append(v)
    return (
        len(mats),
        tuple(mats),
        tuple(words),
        tuple(invs),
        tuple(tuple(r) for r in rmul),
        tuple(posimg),
    )


@lru_cache(maxsize=None)
def build_component(family: str, rank: int) -> ComponentTables:
    """Construct the affine component tables for one untwisted family.

    Raises UnsupportedComponent for families/ranks outside A (rank >= 1),
    B/C (rank >= 2), D (rank >= 4).
    """
    if family not in FAMILIES:
        raise UnsupportedComponent(f"unknown family {family!r}; expected one of {FAMILIES}")
    if rank < _min_rank(family):
        raise UnsupportedComponent(
            f"family {family} needs rank >= {_min_rank(family)}, got {rank}"
        )
    cartan = cartan_matrix(family, rank)
    dsym = _symmetrizer(cartan)
    roots, root_index = _positive_roots(cartan)
    coroots = tuple(_coroot_coords(cartan, dsym, r) for r in roots)

    # highest root: componentwise maximal among positive roots
    highest = max(range(len(roots)), key=lambda k: (sum(roots[k]), roots[k]))
    assert all(
        all(roots[highest][i] >= roots[k][i] for i in range(rank))
        for k in range(len(roots))
    ), "highest root must dominate all positive roots"
    marks = roots[highest]

    # affine Coxeter matrix; local node 0 is the affine node
    nn = rank + 1
    cox = [[2] * nn for _ in range(nn)]
    for i in range(nn):
        cox[i][i] = 1
    beta_covec = coroots[highest]  # <beta^vee, alpha_j> = beta_covec[j]
    for i in range(1, nn):
        for j in range(1, nn):
            if i != j:
                n = cartan[i - 1][j - 1] * cartan[j - 1][i - 1]
                cox[i][j] = _BOND.get(n, 0)
    for j in range(1, nn):
        a0j = beta_covec[j - 1]
        aj0 = sum(marks[i] * cartan[j - 1][i] for i in range(rank))
        n = a0j * aj0
        cox[0][j] = cox[j][0] = _BOND.get(n, 0)

    order, mats, words, invs, rmul, posimg = _build_w0(cartan, roots, root_index)

    return ComponentTables(
        family=family,
        rank=rank,
        cartan=cartan,
        roots=roots,
        root_index=root_index,
        coroots=coroots,
        highest=highest,
        marks=marks,
        cox=tuple(tuple(r) for r in cox),
        order=order,
        mats=mats,
        words=words,
        invs=invs,
        rmul=rmul,
        posimg=posimg,
    )
