"""Extended affine Weyl groups W~ = P^vee x| W0 of products of A-D components.

An element key is a tuple with one (lam, u) pair per component; lam is an
integer coweight vector in fundamental-coweight coordinates and u an index
into the component's finite Weyl group tables.  The class below provides
products, inverses, length, reduced words, descent masks, the Bruhat order,
the length-zero group Omega and the Kottwitz class.

Global node numbering: component c contributes nodes offset_c + 0..rank_c,
with local node 0 the affine one.  Node names append one prime per extra
component: s0, s1, s0', s1', ...
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .cartan import ComponentTables, build_component
from .kernels import get_kernel

_BRUHAT_MEMO_CAP = 1_500_000


class BudgetExceeded(RuntimeError):
    """An enumeration outgrew its configured budget."""


def _hnf(rows, rank):
    """Row Hermite normal form of an integer matrix with full column rank."""
    m = [list(r) for r in rows]
    h = []
    for col in range(rank):
        piv = None
        for r in m:
            if r[col] != 0 and all(x == 0 for x in r[:col]):
                if piv is None or abs(r[col]) < abs(piv[col]):
                    piv = r
        assert piv is not None, "lattice basis is not full rank"
        m.remove(piv)
        if piv[col] < 0:
            piv = [-x for x in piv]
        changed = True
        while changed:
            changed = False
            for r in m:
                if all(x == 0 for x in r[:col]) and r[col] != 0:
                    q = r[col] // piv[col]
                    for i in range(rank):
                        r[i] -= q * piv[i]
                    if r[col] != 0:
                        piv, r[:] = r[:], piv
                        if piv[col] < 0:
                            piv = [-x for x in piv]
                        changed = True
        h.append(piv)
    # reduce above-pivot entries for canonical residues
    for i in range(rank - 1, -1, -1):
        for k in range(i):
            q = h[k][i] // h[i][i]
            if q:
                for j in range(rank):
                    h[k][j] -= q * h[i][j]
    return h


class AffineWeylGroup:
    """A product of affine components, with shared element machinery."""

    def __init__(self, specs, kernel_force=None):
        """specs: sequence of (family, rank) pairs, one per component."""
        specs = tuple(specs)
        if not specs:
            raise ValueError("need at least one component")
        self.specs = specs
        self.components: tuple[ComponentTables, ...] = tuple(
            build_component(f, r) for f, r in specs
        )
        self.kernels = tuple(get_kernel(t, kernel_force) for t in self.components)
        self.ncomp = len(specs)
        self.offsets = []
        off = 0
        for t in self.components:
            self.offsets.append(off)
            off += t.nnodes
        self.nnodes = off
        self.id_key = tuple(((0,) * t.rank, 0) for t in self.components)
        self._simple = {}
        for node in range(self.nnodes):
            c, j = self.local_node(node)
            parts = list(self.id_key)
            parts[c] = self.kernels[c].simple(j)
            self._simple[node] = tuple(parts)
        self._kappa_hnf = [
            _hnf(t.cartan, t.rank) for t in self.components
        ]
        self._omega = None
        self._bruhat_memo = {}
        self._parabolic_cache = {}
        self._qrig_cache = None

    # -- node bookkeeping -------------------------------------------------
    def local_node(self, node: int):
        for c in range(self.ncomp - 1, -1, -1):
            if node >= self.offsets[c]:
                return c, node - self.offsets[c]
        raise IndexError(node)

    def global_node(self, comp: int, local: int) -> int:
        return self.offsets[comp] + local

    def node_name(self, node: int) -> str:
        c, j = self.local_node(node)
        return f"s{j}" + "'" * c

    def parse_node(self, token: str) -> int:
        tok = token.strip()
        if tok.startswith("s"):
            tok = tok[1:]
        c = len(tok) - len(tok.rstrip("'"))
        j = int(tok.rstrip("'"))
        if c >= self.ncomp or j >= self.components[c].nnodes:
            raise ValueError(f"node {token!r} out of range")
        return self.global_node(c, j)

    def coxeter_m(self, n1: int, n2: int) -> int:
        c1, j1 = self.local_node(n1)
        c2, j2 = self.local_node(n2)
        if c1 != c2:
            return 2
        return self.components[c1].cox[j1][j2]

    # -- basic element operations ------------------------------------------
    def simple_key(self, node: int):
        return self._simple[node]

    def translation_key(self, coords):
        """coords: per-component integer coweight vectors."""
        coords = tuple(tuple(int(x) for x in c) for c in coords)
        if len(coords) != self.ncomp or any(
            len(c) != t.rank for c, t in zip(coords, self.components)
        ):
            raise ValueError("coweight shape does not match the components")
        return tuple((c, 0) for c in coords)

    def mul(self, a, b):
        return tuple(k.mul(x, y) for k, x, y in zip(self.kernels, a, b))

    def inv(self, a):
        return tuple(k.inv(x) for k, x in zip(self.kernels, a))

    def length(self, a) -> int:
        return sum(k.length(x) for k, x in zip(self.kernels, a))

    def left_descents(self, a) -> int:
        mask = 0
        for c in range(self.ncomp - 1, -1, -1):
            mask = (mask << self.components[c].nnodes) | self.kernels[c].left_descents(a[c])
        return mask

    def right_descents(self, a) -> int:
        mask = 0
        for c in range(self.ncomp - 1, -1, -1):
            mask = (mask << self.components[c].nnodes) | self.kernels[c].right_descents(a[c])
        return mask

    def descent_left(self, a) -> frozenset:
        m = self.left_descents(a)
        return frozenset(n for n in range(self.nnodes) if m >> n & 1)

    def node_mask(self, nodes) -> int:
        m = 0
        for n in nodes:
            m |= 1 << n
        return m

    def is_K_minimal(self, a, nodes) -> bool:
        """True iff no left descent of `a` lies in the node set."""
        return not (self.left_descents(a) & self.node_mask(nodes))

    def translation_part(self, a):
        return tuple(x[0] for x in a)

    def is_translation(self, a) -> bool:
        return all(x[1] == 0 for x in a)

    # -- Kottwitz class and Omega -------------------------------------------
    def kottwitz_class(self, a):
        """Canonical residue of the translation part modulo the coroot lattice."""
        out = []
        for c in range(self.ncomp):
            lam = list(a[c][0])
            h = self._kappa_hnf[c]
            rank = self.components[c].rank
            for i in range(rank):
                q = lam[i] // h[i][i]
                if q:
                    for j in range(rank):
                        lam[j] -= q * h[i][j]
            out.append(tuple(lam))
        return tuple(out)

    def omega_keys(self):
        """All length-zero elements, as a class -> key mapping."""
        if self._omega is None:
            residues = []
            for c in range(self.ncomp):
                h = self._kappa_hnf[c]
                rank = self.components[c].rank
                res = []
                for combo in itertools.product(*(range(h[i][i]) for i in range(rank))):
                    res.append(tuple(combo))
                residues.append(res)
            omega = {}
            for combo in itertools.product(*residues):
                key = self.translation_key(combo)
                tau = self._strip_to_length0(key)
                omega[self.kottwitz_class(tau)] = tau
            self._omega = omega
        return self._omega

    def _strip_to_length0(self, a):
        while True:
            m = self.left_descents(a)
            if not m:
                return a
            n = (m & -m).bit_length() - 1
            a = self.mul(self.simple_key(n), a)

    def omega_of(self, a):
        """The length-zero element in the same W_a-coset."""
        return self.omega_keys()[self.kottwitz_class(a)]

    def kappa_label(self, a) -> tuple:
        """Human-oriented Kottwitz label, one entry per component.

        For type A the quotient is Z/n and the label is sum(i * lam_i) mod n;
        other families keep the canonical residue vector.
        """
        kappa = self.kottwitz_class(a)
        out = []
        for c, res in enumerate(kappa):
            t = self.components[c]
            if t.family == "A":
                n = t.rank + 1
                out.append(sum((i + 1) * res[i] for i in range(t.rank)) % n)
            else:
                out.append(res)
        return tuple(out)

    def omega_name(self, tau_key) -> str:
        kappa = self.kottwitz_class(tau_key)
        if all(all(x == 0 for x in c) for c in kappa):
            return "e"
        parts = []
        for lab in self.kappa_label(tau_key):
            if isinstance(lab, int):
                parts.append(str(lab))
            else:
                parts.append(",".join(str(x) for x in lab))
        return "tau" + "|".join(parts)

    # -- words ---------------------------------------------------------------
    def reduced_word(self, a):
        """Canonical reduced word (letters, omega_tail_key); greedy lowest node."""
        letters = []
        cur = a
        while True:
            m = self.left_descents(cur)
            if not m:
                return tuple(letters), cur
            n = (m & -m).bit_length() - 1
            letters.append(n)
            cur = self.mul(self.simple_key(n), cur)

    def word_key(self, letters, tail=None):
        cur = tail if tail is not None else self.id_key
        for n in reversed(letters):
            cur = self.mul(self.simple_key(n), cur)
        return cur

    def word_string(self, a) -> str:
        letters, tail = self.reduced_word(a)
        word = " ".join(self.node_name(n) for n in letters)
        tau = self.omega_name(tail)
        return f"{word} . {tau}" if word else tau

    def support(self, a) -> frozenset:
        """Support of the W_a-part: letters of any reduced word of a*tau^-1."""
        letters, _tail = self.reduced_word(a)
        return frozenset(letters)

    # -- Bruhat order ---------------------------------------------------------
    def bruhat_leq(self, a, b) -> bool:
        """Bruhat order; False across different W_a-cosets."""
        if self.kottwitz_class(a) != self.kottwitz_class(b):
            return False
        return self._bruhat(a, b)

    def _bruhat(self, a, b) -> bool:
        if a == b:
            return True
        la, lb = self.length(a), self.length(b)
        if la >= lb:
            return False
        memo = self._bruhat_memo
        key = (a, b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        m = self.left_descents(b)
        n = (m & -m).bit_length() - 1
        s = self.simple_key(n)
        sb = self.mul(s, b)
        if self.left_descents(a) >> n & 1:
            res = self._bruhat(self.mul(s, a), sb)
        else:
            res = self._bruhat(a, sb)
        if len(memo) > _BRUHAT_MEMO_CAP:
            memo.clear()
        memo[key] = res
        return res

    # -- coweight helpers ------------------------------------------------------
    def pairing_two_rho(self, coords) -> int:
        """<lam, 2 rho> = sum over positive roots of <lam, alpha> (dominant lam)."""
        total = 0
        for c, lam in enumerate(coords):
            kern = self.kernels[c]
            for k in range(kern.nroots if hasattr(kern, "nroots") else len(self.components[c].roots)):
                total += kern.pair(lam, k)
        return total

    def dominant_rep(self, coords):
        """Dominant W0-orbit representative, componentwise."""
        out = []
        for c, lam in enumerate(coords):
            lam = list(lam)
            rank = self.components[c].rank
            cartan = self.components[c].cartan
            changed = True
            while changed:
                changed = False
                for j in range(rank):
                    if lam[j] < 0:
                        cj = lam[j]
                        for i in range(rank):
                            lam[i] -= cj * cartan[j][i]
                        changed = True
            out.append(tuple(lam))
        return tuple(out)

    def w0_orbit(self, coords):
        """The full W0-orbit of a coweight, as a frozenset of coordinate tuples."""
        seen = {tuple(tuple(c) for c in coords)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for lam in frontier:
                for c in range(self.ncomp):
                    rank = self.components[c].rank
                    cartan = self.components[c].cartan
                    for j in range(rank):
                        cj = lam[c][j]
                        if cj:
                            new_c = tuple(
                                lam[c][i] - cj * cartan[j][i] for i in range(rank)
                            )
                            cand = lam[:c] + (new_c,) + lam[c + 1 :]
                            if cand not in seen:
                                seen.add(cand)
                                nxt.append(cand)
            frontier = nxt
        return frozenset(seen)

    def is_minuscule(self, coords) -> bool:
        """|<lam, alpha>| <= 1 for all roots alpha."""
        for c, lam in enumerate(coords):
            kern = self.kernels[c]
            for k in range(len(self.components[c].roots)):
                if abs(kern.pair(lam, k)) > 1:
                    return False
        return True

    def is_central(self, coords) -> bool:
        for c, lam in enumerate(coords):
            kern = self.kernels[c]
            for k in range(len(self.components[c].roots)):
                if kern.pair(lam, k):
                    return False
        return True

    # -- finite parabolic subgroups ---------------------------------------------
    def parabolic_is_finite(self, nodes) -> bool:
        """W_K is finite iff K misses at least one node of every component."""
        nodes = set(nodes)
        for c in range(self.ncomp):
            comp_nodes = set(
                range(self.offsets[c], self.offsets[c] + self.components[c].nnodes)
            )
            if comp_nodes <= nodes:
                return False
        return True

    def parabolic_elements(self, nodes):
        """All elements of W_K, K a finite-type set of affine nodes."""
        nodes = frozenset(nodes)
        cached = self._parabolic_cache.get(nodes)
        if cached is not None:
            return cached
        if not self.parabolic_is_finite(nodes):
            raise BudgetExceeded(f"W_K is infinite for K={sorted(nodes)}")
        gens = [self.simple_key(n) for n in sorted(nodes)]
        seen = {self.id_key}
        frontier = [self.id_key]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(g, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        out = tuple(sorted(seen, key=lambda k: (self.length(k), k)))
        self._parabolic_cache[nodes] = out
        return out

    # -- finite-support pool (quasi-rigid enumeration) ----------------------------
    def finite_support_wa_elements(self):
        """All w in W_a whose support generates a finite group.

        This is the union of the standard parabolic subgroups W_J over the
        subsets J missing at least one node per component; it is finite.
        """
        if self._qrig_cache is None:
            pool = set()
            all_nodes = set(range(self.nnodes))
            for rem in itertools.product(
                *(
                    [
                        self.global_node(c, j)
                        for j in range(self.components[c].nnodes)
                    ]
                    for c in range(self.ncomp)
                )
            ):
                j_set = all_nodes - set(rem)
                pool.update(self.parabolic_elements(frozenset(j_set)))
            self._qrig_cache = tuple(
                sorted(pool, key=lambda k: (self.length(k), k))
            )
        return self._qrig_cache

    # -- down-sets ------------------------------------------------------------------
    def bruhat_down_set(self, seeds, max_elements=2_000_000):
        """Bruhat down-set of the given elements, as {key: (length, word)}.

        Words are subwords of the seeds' reduced words; the stored word for a
        key is the first one found and is not necessarily reduced.
        """
        out = {}
        queue = []
        for key in seeds:
            letters, tail = self.reduced_word(key)
            if key not in out:
                out[key] = (self.length(key), letters)
                queue.append((key, letters, tail))
        while queue:
            key, word, tail = queue.pop()
            if not word:
                continue
            n = len(word)
            suffix = [None] * (n + 1)
            suffix[n] = tail
            for i in range(n - 1, -1, -1):
                suffix[i] = self.mul(self.simple_key(word[i]), suffix[i + 1])
            prefix = self.id_key
            for i in range(n):
                child = self.mul(prefix, suffix[i + 1])
                if child not in out:
                    if len(out) >= max_elements:
                        raise BudgetExceeded(
                            f"down-set enumeration exceeded {max_elements} elements"
                        )
                    cw = word[:i] + word[i + 1 :]
                    out[child] = (self.length(child), cw)
                    queue.append((child, cw, tail))
                prefix = self.mul(prefix, self.simple_key(word[i]))
        return out


@lru_cache(maxsize=None)
def standard_group(family: str, rank: int) -> AffineWeylGroup:
    """Shared single-component group for (family, rank)."""
    return AffineWeylGroup(((family, rank),))


class AffineWeylElement:
    """Thin immutable wrapper over an element key of an AffineWeylGroup."""

    __slots__ = ("group", "key")

    def __init__(self, group: AffineWeylGroup, key):
        self.group = group
        self.key = key

    def __mul__(self, other):
        if isinstance(other, AffineWeylElement):
            if other.group is not self.group:
                raise ValueError("elements of different groups")
            other = other.key
        return AffineWeylElement(self.group, self.group.mul(self.key, other))

    def inverse(self):
        return AffineWeylElement(self.group, self.group.inv(self.key))

    def __eq__(self, other):
        return (
            isinstance(other, AffineWeylElement)
            and other.group is self.group
            and other.key == self.key
        )

    def __hash__(self):
        return hash(self.key)

    @property
    def length(self) -> int:
        return self.group.length(self.key)

    @property
    def word(self):
        return self.group.reduced_word(self.key)[0]

    @property
    def omega_part(self):
        return AffineWeylElement(self.group, self.group.omega_of(self.key))

    @property
    def kottwitz(self):
        return self.group.kottwitz_class(self.key)

    def __le__(self, other):
        return self.group.bruhat_leq(self.key, other.key)

    def __repr__(self):
        return f"<{self.group.word_string(self.key)}>"
