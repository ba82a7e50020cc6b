"""Coxeter data over the base field: diagram automorphisms and Frobenius shadows.

A ``DiagramMap`` is a Coxeter-matrix-preserving bijection of affine nodes
between two groups (usually an automorphism of one), realized exactly as an
alcove-preserving affine transformation of the coweight space.  It therefore
acts on elements, on node sets, and on coweights.

A ``CoxeterDatumOverF`` bundles a group, a diagram automorphism sigma and a
coweight orbit mu; it carries the derived length-zero element tau(mu), the
composite node action Ad(tau) o sigma, sigma-supports and the exact
fixed-point test on the closed base alcove.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .weyl import AffineWeylGroup, standard_group


class InvalidSigma(ValueError):
    """Node permutation is not a diagram automorphism of the given data."""


class CollapseError(ValueError):
    """Restriction-of-scalars collapse is not applicable."""


def _mat_inv_int(a):
    """Inverse of an integer matrix with det +-1, as integer tuples."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    inv = tuple(tuple(m[i][n + j] for j in range(n)) for i in range(n))
    assert all(x.denominator == 1 for row in inv for x in row)
    return tuple(tuple(int(x) for x in row) for row in inv)


class DiagramMap:
    """An affine-diagram isomorphism acting on nodes, elements and coweights."""

    def __init__(self, src: AffineWeylGroup, dst: AffineWeylGroup, node_perm, name=""):
        self.src = src
        self.dst = dst
        self.perm = tuple(node_perm)
        self.name = name
        if sorted(self.perm) != list(range(src.nnodes)) or dst.nnodes != src.nnodes:
            raise InvalidSigma("node map is not a bijection of the node sets")
        for i in range(src.nnodes):
            for j in range(src.nnodes):
                if src.coxeter_m(i, j) != dst.coxeter_m(self.perm[i], self.perm[j]):
                    raise InvalidSigma(
                        f"Coxeter matrix not preserved at nodes ({i},{j})"
                    )
        # component permutation
        self.comp_map = []
        for c in range(src.ncomp):
            imgs = {
                dst.local_node(self.perm[src.global_node(c, j)])[0]
                for j in range(src.components[c].nnodes)
            }
            if len(imgs) != 1:
                raise InvalidSigma(f"component {c} is split by the node map")
            self.comp_map.append(next(iter(imgs)))
        if sorted(self.comp_map) != list(range(src.ncomp)):
            raise InvalidSigma("node map does not permute the components")
        self._build_linear()
        self._umaps = [dict() for _ in range(src.ncomp)]
        self._mat_index = [None] * src.ncomp
        self._check_on_simples()

    def _build_linear(self):
        # per source component: integer (A, b) with v |-> A v + b realizing the map
        self.lin = []
        for c in range(self.src.ncomp):
            tsrc = self.src.components[c]
            c2 = self.comp_map[c]
            tdst = self.dst.components[c2]
            rank = tsrc.rank
            loc = [
                self.dst.local_node(self.perm[self.src.global_node(c, j)])[1]
                for j in range(tsrc.nnodes)
            ]
            b = tdst.vertex_point(loc[0])
            if any(x.denominator != 1 for x in b):
                raise InvalidSigma("affine node must map to a special vertex")
            cols = []
            for i in range(1, rank + 1):
                tgt = tdst.vertex_point(loc[i])
                col = [tsrc.marks[i - 1] * (tgt[r] - b[r]) for r in range(rank)]
                if any(x.denominator != 1 for x in col):
                    raise InvalidSigma("node map does not preserve the coweight lattice")
                cols.append([int(x) for x in col])
            a = tuple(tuple(cols[j][i] for j in range(rank)) for i in range(rank))
            self.lin.append((a, tuple(int(x) for x in b), _mat_inv_int(a)))

    def _check_on_simples(self):
        for node in range(self.src.nnodes):
            img = self.apply_key(self.src.simple_key(node))
            if img != self.dst.simple_key(self.perm[node]):
                raise InvalidSigma(
                    f"affine realization disagrees with the node map at node {node}"
                )

    # -- actions ---------------------------------------------------------
    def apply_nodes(self, nodes):
        return frozenset(self.perm[n] for n in nodes)

    def _apply_u(self, c, u):
        cached = self._umaps[c].get(u)
        if cached is not None:
            return cached
        c2 = self.comp_map[c]
        a, _b, ainv = self.lin[c]
        tsrc = self.src.components[c]
        tdst = self.dst.components[c2]
        rank = tsrc.rank
        mu = tsrc.mats[u]
        prod = [
            [
                sum(a[i][k] * mu[k][l] for k in range(rank))
                for l in range(rank)
            ]
            for i in range(rank)
        ]
        mat = tuple(
            tuple(sum(prod[i][k] * ainv[k][j] for k in range(rank)) for j in range(rank))
            for i in range(rank)
        )
        if self._mat_index[c] is None:
            self._mat_index[c] = {m: i for i, m in enumerate(tdst.mats)}
        try:
            u2 = self._mat_index[c][mat]
        except KeyError:
            raise InvalidSigma("conjugated reflection leaves the Weyl group") from None
        self._umaps[c][u] = u2
        return u2

    def apply_key(self, key):
        """Image of an element: conjugation by the realizing affine map."""
        out = [None] * self.dst.ncomp
        for c in range(self.src.ncomp):
            lam, u = key[c]
            c2 = self.comp_map[c]
            a, b, _ainv = self.lin[c]
            rank = len(lam)
            u2 = self._apply_u(c, u)
            m2 = self.dst.components[c2].mats[u2]
            alam = [sum(a[i][j] * lam[j] for j in range(rank)) for i in range(rank)]
            ub = [sum(m2[i][j] * b[j] for j in range(rank)) for i in range(rank)]
            out[c2] = (tuple(b[i] + alam[i] - ub[i] for i in range(rank)), u2)
        return tuple(out)

    def apply_coweight(self, coords):
        """Linear transport of a coweight (translation parts conjugate linearly)."""
        out = [None] * self.dst.ncomp
        for c in range(self.src.ncomp):
            a, _b, _ai = self.lin[c]
            lam = coords[c]
            rank = len(lam)
            out[self.comp_map[c]] = tuple(
                sum(a[i][j] * lam[j] for j in range(rank)) for i in range(rank)
            )
        return tuple(out)

    def apply_point(self, pts):
        """Image of an apartment point (per-component Fraction vectors)."""
        out = [None] * self.dst.ncomp
        for c in range(self.src.ncomp):
            a, b, _ai = self.lin[c]
            v = pts[c]
            rank = len(v)
            out[self.comp_map[c]] = tuple(
                b[i] + sum(a[i][j] * v[j] for j in range(rank)) for i in range(rank)
            )
        return tuple(out)

    def compose(self, other: "DiagramMap") -> "DiagramMap":
        """self o other (apply `other` first)."""
        if other.dst is not self.src:
            raise ValueError("maps are not composable")
        perm = tuple(self.perm[other.perm[i]] for i in range(other.src.nnodes))
        return DiagramMap(other.src, self.dst, perm, name=f"{self.name}*{other.name}")

    def inverse(self) -> "DiagramMap":
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p] = i
        return DiagramMap(self.dst, self.src, tuple(inv), name=f"{self.name}^-1")

    def is_identity(self) -> bool:
        return self.src is self.dst and all(p == i for i, p in enumerate(self.perm))

    def power(self, k: int) -> "DiagramMap":
        if self.src is not self.dst:
            raise ValueError("powers need an endomorphism")
        out = identity_map(self.src)
        for _ in range(k):
            out = self.compose(out)
        return out

    def __repr__(self):
        return f"DiagramMap({self.name or self.perm})"


def identity_map(group: AffineWeylGroup) -> DiagramMap:
    return DiagramMap(group, group, tuple(range(group.nnodes)), name="id")


def sigma_by_name(group: AffineWeylGroup, name: str) -> DiagramMap:
    """Named automorphisms of a single-component group.

    id            identity
    flip          fix node 0, nontrivial finite-diagram automorphism (types A, D)
    rot:k         type A rotation s_i -> s_{i+k}
    adtau:i       conjugation by the length-zero element of class omega_i^vee
    explicit perm may be given as comma-separated node images.
    """
    name = name.strip()
    if name == "id":
        return identity_map(group)
    if group.ncomp != 1:
        raise InvalidSigma("named automorphisms apply to single-component groups")
    t = group.components[0]
    n = t.nnodes
    if name == "flip":
        if t.family == "A":
            perm = tuple((n - i) % n for i in range(n))
        elif t.family == "D":
            perm = tuple(range(n))
            perm = perm[: n - 2] + (n - 1, n - 2)
        else:
            raise InvalidSigma(f"family {t.family} has no 'flip' automorphism")
        return DiagramMap(group, group, perm, name="flip")
    if name.startswith("rot:"):
        if t.family != "A":
            raise InvalidSigma("rotations exist only in type A")
        k = int(name.split(":", 1)[1])
        perm = tuple((i + k) % n for i in range(n))
        return DiagramMap(group, group, perm, name=name)
    if name.startswith("adtau:"):
        i = int(name.split(":", 1)[1])
        return ad_tau_map(group, omega_class_of_coweight(group, i), name=name)
    raise InvalidSigma(f"unknown automorphism name {name!r}")


def omega_class_of_coweight(group: AffineWeylGroup, i: int):
    """Length-zero element whose class is that of the fundamental coweight i."""
    t = group.components[0]
    if i == 0:
        return group.id_key
    coords = tuple(1 if j == i - 1 else 0 for j in range(t.rank))
    return group.omega_of(group.translation_key((coords,)))


def ad_tau_map(group: AffineWeylGroup, tau_key, name="") -> DiagramMap:
    """Conjugation by a length-zero element, as a DiagramMap."""
    if group.length(tau_key) != 0:
        raise InvalidSigma("conjugation map needs a length-zero element")
    tau_inv = group.inv(tau_key)
    perm = []
    simple_index = {group.simple_key(nn): nn for nn in range(group.nnodes)}
    for node in range(group.nnodes):
        img = group.mul(tau_key, group.mul(group.simple_key(node), tau_inv))
        perm.append(simple_index[img])
    return DiagramMap(group, group, tuple(perm), name=name or "adtau")


def parse_sigma(group: AffineWeylGroup, spec) -> DiagramMap:
    """Accept a DiagramMap, a name, or an explicit node-image sequence."""
    if isinstance(spec, DiagramMap):
        if spec.src is not group or spec.dst is not group:
            raise InvalidSigma("sigma belongs to a different group")
        return spec
    if isinstance(spec, str) and not spec.replace(",", "").replace(" ", "").isdigit():
        return sigma_by_name(group, spec)
    if isinstance(spec, str):
        spec = [int(x) for x in spec.replace(",", " ").split()]
    return DiagramMap(group, group, tuple(int(x) for x in spec), name="perm")


@dataclass(frozen=True)
class LevelSet:
    """A sigma-stable finite-type subset K of the affine nodes."""

    nodes: frozenset

    @staticmethod
    def of(datum: "CoxeterDatumOverF", nodes, require_sigma_stable=True) -> "LevelSet":
        nodes = frozenset(int(n) for n in nodes)
        group = datum.group
        if any(n < 0 or n >= group.nnodes for n in nodes):
            raise ValueError("level set contains unknown nodes")
        if not group.parabolic_is_finite(nodes):
            raise ValueError("level set must generate a finite group")
        if require_sigma_stable and datum.sigma.apply_nodes(nodes) != nodes:
            raise ValueError("level set is not sigma-stable")
        return LevelSet(nodes)


class CoxeterDatumOverF:
    """A product affine diagram with Frobenius automorphism and coweight orbit."""

    def __init__(self, group: AffineWeylGroup, sigma, mu, name=""):
        self.group = group
        self.sigma = parse_sigma(group, sigma)
        mu = tuple(tuple(int(x) for x in comp) for comp in mu)
        if len(mu) != group.ncomp or any(
            len(c) != t.rank for c, t in zip(mu, group.components)
        ):
            raise ValueError("mu must give one coweight vector per component")
        self.mu = mu
        self.name = name
        self.mu_dom = group.dominant_rep(mu)
        self.mu_orbit = group.w0_orbit(self.mu_dom)
        self.t_mu = group.translation_key(self.mu_dom)
        self.tau = group.omega_of(self.t_mu)
        self.ad_tau = ad_tau_map(group, self.tau, name="adtau")
        self.two_rho_pairing = group.pairing_two_rho(self.mu_dom)
        self._adtau_sigma = tuple(
            self.ad_tau.perm[self.sigma.perm[i]] for i in range(group.nnodes)
        )

    # -- structure ---------------------------------------------------------
    @property
    def is_irreducible(self) -> bool:
        return self.group.ncomp == 1

    def component_permutation(self):
        return tuple(self.sigma.comp_map)

    def is_f_quasi_simple(self) -> bool:
        """sigma acts transitively on the set of components."""
        seen = {0}
        c = 0
        for _ in range(self.group.ncomp):
            c = self.sigma.comp_map[c]
            seen.add(c)
        return len(seen) == self.group.ncomp

    def noncentral_components(self):
        group = self.group
        out = []
        for c in range(group.ncomp):
            kern = group.kernels[c]
            if any(
                kern.pair(self.mu[c], k)
                for k in range(len(group.components[c].roots))
            ):
                out.append(c)
        return tuple(out)

    def is_central_mu(self) -> bool:
        return self.group.is_central(self.mu)

    def adtau_sigma_perm(self):
        """Node permutation of Ad(tau(mu)) o sigma."""
        return self._adtau_sigma

    # -- sigma-support -------------------------------------------------------
    def sigma_support(self, key) -> frozenset:
        """Smallest Ad(tau(w)) o sigma stable node set containing supp(w tau^-1)."""
        group = self.group
        letters, tail = group.reduced_word(key)
        ad = ad_tau_map(group, tail) if tail != self.tau else self.ad_tau
        perm = tuple(ad.perm[self.sigma.perm[i]] for i in range(group.nnodes))
        supp = set(letters)
        frontier = list(supp)
        while frontier:
            nxt = []
            for n in frontier:
                p = perm[n]
                if p not in supp:
                    supp.add(p)
                    nxt.append(p)
            frontier = nxt
        return frozenset(supp)

    def has_finite_sigma_support(self, key) -> bool:
        return self.group.parabolic_is_finite(self.sigma_support(key))

    def sigma_element(self, key):
        """sigma applied to a group element."""
        return self.sigma.apply_key(key)

    # -- exact fixed-point test (twisted action on the closed base alcove) ----
    def twisted_fixed_point_in_alcove(self, key) -> bool:
        """Does v -> key(sigma(v)) fix a point of the closed base alcove?"""
        group = self.group
        nc = group.ncomp
        ranks = [t.rank for t in group.components]
        dim = sum(ranks)
        offs = [sum(ranks[:c]) for c in range(nc)]

        amat = [[Fraction(0)] * dim for _ in range(dim)]
        bvec = [Fraction(0)] * dim
        for c in range(nc):
            a, b, _ai = self.sigma.lin[c]
            c2 = self.sigma.comp_map[c]
            lam, u = key[c2]
            m = group.components[c2].mats[u]
            rank = ranks[c]
            rank2 = ranks[c2]
            # v_c -> M_u (A v_c + b) + lam, placed in block c2
            for i in range(rank2):
                for j in range(rank):
                    amat[offs[c2] + i][offs[c] + j] = Fraction(
                        sum(m[i][k] * a[k][j] for k in range(rank2))
                    )
                bvec[offs[c2] + i] = Fraction(
                    sum(m[i][k] * b[k] for k in range(rank2)) + lam[i]
                )

        # solve (A - I) v = -b over the rationals
        rows = [
            [amat[i][j] - (1 if i == j else 0) for j in range(dim)] + [-bvec[i]]
            for i in range(dim)
        ]
        piv_cols = []
        r = 0
        for col in range(dim):
            piv = next((k for k in range(r, dim) if rows[k][col] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            pv = rows[r][col]
            rows[r] = [x / pv for x in rows[r]]
            for k in range(dim):
                if k != r and rows[k][col] != 0:
                    f = rows[k][col]
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
            piv_cols.append(col)
            r += 1
        for k in range(r, dim):
            if rows[k][dim] != 0:
                return False  # inconsistent: no fixed points at all
        free_cols = [c for c in range(dim) if c not in piv_cols]
        v0 = [Fraction(0)] * dim
        for idx, col in enumerate(piv_cols):
            v0[col] = rows[idx][dim]
        basis = []
        for fc in free_cols:
            vec = [Fraction(0)] * dim
            vec[fc] = Fraction(1)
            for idx, col in enumerate(piv_cols):
                vec[col] = -rows[idx][fc]
            basis.append(vec)

        # closed alcove: v_j >= 0 and <v_c, beta_c> <= 1 per component
        cons = []  # c0 + sum c_k t_k >= 0
        for j in range(dim):
            cons.append([v0[j]] + [b[j] for b in basis])
        for c in range(nc):
            marks = group.components[c].marks
            rank = ranks[c]
            c0 = Fraction(1) - sum(marks[i] * v0[offs[c] + i] for i in range(rank))
            row = [c0]
            for b in basis:
                row.append(-sum(marks[i] * b[offs[c] + i] for i in range(rank)))
            cons.append(row)
        return _fm_feasible(cons, len(basis))


def _fm_feasible(cons, nvars) -> bool:
    """Fourier-Motzkin feasibility for constraints c0 + sum c_k t_k >= 0."""
    cons = [list(c) for c in cons]
    for var in range(nvars, 0, -1):
        pos, neg, rest = [], [], []
        for c in cons:
            coef = c[var]
            if coef > 0:
                pos.append(c)
            elif coef < 0:
                neg.append(c)
            else:
                rest.append(c[:var])
        new = rest
        for p in pos:
            for q in neg:
                # eliminate t_var between p (coef>0) and q (coef<0)
                cp, cq = p[var], q[var]
                row = [cp * q[i] - cq * p[i] for i in range(var)]
                new.append(row)
        # prune duplicates to keep FM growth in check
        seen = set()
        cons = []
        for c in new:
            t = tuple(c)
            if t not in seen:
                seen.add(t)
                cons.append(c)
    return all(c[0] >= 0 for c in cons)


def restrict_scalars(inner: CoxeterDatumOverF, d: int, mu=None, name=""):
    """Product of d copies with cyclic sigma; copy d maps to copy 1 via inner sigma.

    mu defaults to the inner coweight on the first copy and zero elsewhere;
    pass a length-d list of coweight vectors to override.
    """
    if d < 1:
        raise ValueError("degree must be >= 1")
    if inner.group.ncomp != 1:
        raise CollapseError("restriction of scalars expects a one-component datum")
    if d == 1:
        return CoxeterDatumOverF(inner.group, inner.sigma, inner.mu, name=name or inner.name)
    spec = inner.group.specs[0]
    group = AffineWeylGroup(spec for _ in range(d))
    nn = inner.group.nnodes
    perm = [0] * group.nnodes
    for c in range(d):
        for j in range(nn):
            if c < d - 1:
                perm[c * nn + j] = (c + 1) * nn + j
            else:
                perm[c * nn + j] = inner.sigma.perm[j]
    if mu is None:
        mu = [inner.mu[0]] + [(0,) * inner.group.components[0].rank] * (d - 1)
    return CoxeterDatumOverF(group, perm, mu, name=name)


class Collapse:
    """Reduction of a one-noncentral restriction-of-scalars datum to degree one."""

    def __init__(self, datum: CoxeterDatumOverF):
        group = datum.group
        if not datum.is_f_quasi_simple():
            raise CollapseError("collapse needs sigma transitive on the components")
        noncentral = [
            c
            for c in range(group.ncomp)
            if any(
                group.kernels[c].pair(datum.mu[c], k)
                for k in range(len(group.components[c].roots))
            )
        ]
        if len(noncentral) != 1:
            raise CollapseError(
                f"collapse needs exactly one non-central component, found {len(noncentral)}"
            )
        self.datum = datum
        self.comp = noncentral[0]
        d = group.ncomp
        # sigma^d restricted to the distinguished component, in local labels
        perm_d = list(range(group.nnodes))
        for _ in range(d):
            perm_d = [datum.sigma.perm[p] for p in perm_d]
        t = group.components[self.comp]
        off = group.offsets[self.comp]
        local = []
        for j in range(t.nnodes):
            img = perm_d[off + j]
            c2, l2 = group.local_node(img)
            assert c2 == self.comp
            local.append(l2)
        self.inner_group = standard_group(t.family, t.rank)
        self.inner = CoxeterDatumOverF(
            self.inner_group,
            tuple(local),
            (datum.mu[self.comp],),
            name=f"{datum.name}|collapsed" if datum.name else "collapsed",
        )

    def map_nodes(self, nodes) -> frozenset:
        """K -> K_1: the component-local part of a level set."""
        group = self.datum.group
        off = group.offsets[self.comp]
        t = group.components[self.comp]
        return frozenset(n - off for n in nodes if off <= n < off + t.nnodes)

    def map_key(self, key):
        return (key[self.comp],)


def collapse_restriction(datum: CoxeterDatumOverF) -> Collapse:
    return Collapse(datum)
