"""Admissible sets, parahoric refinements and the twisted partial order.

Adm(mu) is the Bruhat down-set of the translations t^lam over the W0-orbit
of the dominant representative; the raw enumeration (keys, lengths,
canonical reduced words, supports) depends only on (group, mu) and is cached
and shared across all Frobenius choices.  Per-datum annotations add the
sigma-support and its finiteness flag.  On top of that live the K-minimal
refinement, the basic subset, the twisted partial order
w' <= w iff x w' sigma(x)^{-1} <= w for some x in W_K, and its maximal
elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frobenius import CoxeterDatumOverF
from .weyl import BudgetExceeded

DEFAULT_PAIRING_BUDGET = 12
DEFAULT_ELEMENT_BUDGET = 2_000_000

_RAW_CACHE: dict = {}


@dataclass(frozen=True)
class ElementRecord:
    key: tuple
    length: int
    word: tuple  # canonical reduced word of the W_a part
    support: frozenset
    sigma_support: frozenset
    finite_sigma_support: bool
    is_translation: bool


def _raw_down_set(group, mu_dom, orbit, max_elements):
    """sigma-independent part: key -> (length, reduced word, support, is_translation)."""
    cache_key = (id(group), mu_dom)
    got = _RAW_CACHE.get(cache_key)
    if got is not None:
        return got
    seeds = [group.translation_key(lam) for lam in sorted(orbit)]
    raw = group.bruhat_down_set(seeds, max_elements=max_elements)
    out = {}
    for key, (length, word) in raw.items():
        if len(word) != length:
            word, _tail = group.reduced_word(key)
        out[key] = (length, word, frozenset(word), group.is_translation(key))
    _RAW_CACHE[cache_key] = out
    return out


class AdmissibleSet:
    """Adm(mu) with per-element annotations, ordered deterministically."""

    def __init__(self, datum: CoxeterDatumOverF, records, orbit):
        self.datum = datum
        self.records = records  # key -> ElementRecord
        self.orbit = orbit
        self.sorted_keys = tuple(
            sorted(records, key=lambda k: (records[k].length, records[k].word))
        )
        self._filter_cache = {}

    def __len__(self):
        return len(self.records)

    def __contains__(self, key):
        return key in self.records

    def keys(self):
        return self.sorted_keys

    def max_length(self) -> int:
        return max(self.records[k].length for k in self.records)

    def words(self):
        return tuple(self.records[k].word for k in self.sorted_keys)

    def k_minimal_keys(self, nodes):
        """^K Adm(mu): elements without left descents in K."""
        nodes = frozenset(nodes)
        got = self._filter_cache.get(("kmin", nodes))
        if got is None:
            group = self.datum.group
            mask = group.node_mask(nodes)
            got = tuple(
                k for k in self.sorted_keys if not (group.left_descents(k) & mask)
            )
            self._filter_cache[("kmin", nodes)] = got
        return got

    def k_minimal_zero_keys(self, nodes):
        """^K Adm(mu)_0: the K-minimal elements with finite sigma-support."""
        nodes = frozenset(nodes)
        got = self._filter_cache.get(("kmin0", nodes))
        if got is None:
            got = tuple(
                k
                for k in self.k_minimal_keys(nodes)
                if self.records[k].finite_sigma_support
            )
            self._filter_cache[("kmin0", nodes)] = got
        return got

    def translations(self):
        return tuple(k for k in self.sorted_keys if self.records[k].is_translation)

    def w_mu_k_fin(self, nodes):
        """Coweights lam in W0(mu) with t^lam in ^K Adm(mu)_0."""
        group = self.datum.group
        nodes = frozenset(nodes)
        out = []
        for k in self.translations():
            rec = self.records[k]
            if not rec.finite_sigma_support:
                continue
            if group.left_descents(k) & group.node_mask(nodes):
                continue
            lam = group.translation_part(k)
            if lam in self.orbit:
                out.append(lam)
        return tuple(sorted(out))


def admissible_set(
    datum: CoxeterDatumOverF,
    max_pairing: int = DEFAULT_PAIRING_BUDGET,
    max_elements: int = DEFAULT_ELEMENT_BUDGET,
) -> AdmissibleSet:
    """Enumerate Adm(mu) as the union of subword sets of the orbit translations."""
    group = datum.group
    if datum.two_rho_pairing > max_pairing:
        raise BudgetExceeded(
            f"<mu, 2 rho> = {datum.two_rho_pairing} exceeds the budget {max_pairing}"
        )
    raw = _raw_down_set(group, datum.mu_dom, datum.mu_orbit, max_elements)
    perm = datum.adtau_sigma_perm()
    records = {}
    for key, (length, word, supp, is_tr) in raw.items():
        closure = set(supp)
        frontier = list(closure)
        while frontier:
            nxt = []
            for n in frontier:
                p = perm[n]
                if p not in closure:
                    closure.add(p)
                    nxt.append(p)
            frontier = nxt
        ssupp = frozenset(closure)
        records[key] = ElementRecord(
            key=key,
            length=length,
            word=word,
            support=supp,
            sigma_support=ssupp,
            finite_sigma_support=group.parabolic_is_finite(ssupp),
            is_translation=is_tr,
        )
    return AdmissibleSet(datum, records, datum.mu_orbit)


def twisted_orbit(datum: CoxeterDatumOverF, key, nodes):
    """{x w sigma(x)^{-1} : x in W_K} computed as a generator closure."""
    group = datum.group
    seen = {key}
    frontier = [key]
    gens = sorted(nodes)
    while frontier:
        nxt = []
        for w in frontier:
            for n in gens:
                s = group.simple_key(n)
                ss = group.simple_key(datum.sigma.perm[n])
                y = group.mul(s, group.mul(w, ss))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def preceq_k_sigma(datum: CoxeterDatumOverF, w1, w2, nodes) -> bool:
    """w1 <=_{K,sigma} w2: some W_K-twisted conjugate of w1 is Bruhat-below w2."""
    group = datum.group
    l2 = group.length(w2)
    for y in twisted_orbit(datum, w1, nodes):
        if group.length(y) <= l2 and group.bruhat_leq(y, w2):
            return True
    return False


def maximal_elements(datum: CoxeterDatumOverF, subset, nodes):
    """Maximal elements of `subset` under the twisted partial order.

    Output sorted by (length desc, canonical word lex) for stable reports.
    """
    group = datum.group
    subset = list(subset)
    orbits = {w: twisted_orbit(datum, w, nodes) for w in subset}
    by_len = sorted(subset, key=group.length, reverse=True)
    out = []
    for w in subset:
        lw = group.length(w)
        dominated = False
        for v in by_len:
            if v == w:
                continue
            lv = group.length(v)
            if any(
                group.length(y) <= lv and group.bruhat_leq(y, v)
                for y in orbits[w]
            ):
                # antisymmetry guard: mutual domination would break the order
                if lv == lw and any(
                    group.length(y) <= lw and group.bruhat_leq(y, w)
                    for y in orbits[v]
                ):
                    raise AssertionError("twisted order is not antisymmetric here")
                dominated = True
                break
        if not dominated:
            out.append(w)
    return tuple(
        sorted(
            out,
            key=lambda k: (-group.length(k), group.reduced_word(k)[0]),
        )
    )


def k_adm_double_coset(datum: CoxeterDatumOverF, adm: AdmissibleSet, nodes):
    """W_K Adm(mu) W_K intersected with ^K W~, computed literally (small data)."""
    group = datum.group
    wk = group.parabolic_elements(frozenset(nodes))
    mask = group.node_mask(nodes)
    out = set()
    for x in wk:
        for k in adm.sorted_keys:
            xk = group.mul(x, k)
            for y in wk:
                z = group.mul(xk, y)
                if not (group.left_descents(z) & mask):
                    out.add(z)
    return out
