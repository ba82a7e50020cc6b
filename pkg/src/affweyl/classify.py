"""Verdict engines for the dimension-zero / discrete-fiber / maximal-dimension
/ equi-maximal classification statements.

Each verdict is computed twice: a first-principles side from the enumerated
combinatorics (admissible sets, twisted order, critical indices) and a
table-driven side from the finite classification patterns, matched up to
isomorphism of the underlying diagram datum.  Reports carry a witness and an
agreement flag; disagreement is a hard failure in the test suites.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import alcove
from .admissible import AdmissibleSet, admissible_set, maximal_elements
from .frobenius import (
    Collapse,
    CollapseError,
    CoxeterDatumOverF,
    DiagramMap,
    InvalidSigma,
    collapse_restriction,
    sigma_by_name,
)
from .weyl import AffineWeylGroup, standard_group


class NotFullyHN(ValueError):
    """Operation needs the dimension formula, available on classified data only."""


class CentralMu(ValueError):
    """Operation requires a non-central coweight orbit."""


@dataclass(frozen=True)
class VerdictReport:
    predicate: str
    datum: str
    verdict: bool
    witness: tuple
    agreement: bool
    details: dict = field(default_factory=dict)


def datum_signature(datum: CoxeterDatumOverF):
    return (datum.group.specs, datum.sigma.perm, datum.mu_dom)


def datum_summary(datum: CoxeterDatumOverF) -> str:
    comps = "x".join(f"{f}{r}~" for f, r in datum.group.specs)
    mu = ";".join(",".join(str(x) for x in c) for c in datum.mu_dom)
    return f"{comps} sigma={datum.sigma.perm} mu=({mu})"


# -- datum isomorphism ------------------------------------------------------


@lru_cache(maxsize=None)
def _component_isos(spec1, spec2):
    """All local node bijections spec1 -> spec2 preserving the Coxeter matrix."""
    g1 = standard_group(*spec1)
    g2 = standard_group(*spec2)
    if g1.nnodes != g2.nnodes:
        return ()
    n = g1.nnodes
    out = []

    def extend(partial):
        i = len(partial)
        if i == n:
            out.append(tuple(partial))
            return
        used = set(partial)
        for cand in range(n):
            if cand in used:
                continue
            if all(
                g1.coxeter_m(i, j) == g2.coxeter_m(cand, partial[j])
                for j in range(i)
            ):
                extend(partial + [cand])

    extend([])
    good = []
    for perm in out:
        try:
            DiagramMap(g1, g2, perm)
        except InvalidSigma:
            continue
        good.append(perm)
    return tuple(good)


def _component_assignments(specs1, specs2):
    """Bijections c -> c' with compatible component types."""
    n = len(specs1)
    if n != len(specs2):
        return

    def extend(partial, used):
        c = len(partial)
        if c == n:
            yield tuple(partial)
            return
        for c2 in range(n):
            if c2 in used:
                continue
            if _component_isos(specs1[c], specs2[c2]):
                yield from extend(partial + [c2], used | {c2})

    yield from extend([], set())


def datum_isomorphisms(d1: CoxeterDatumOverF, d2: CoxeterDatumOverF):
    """All DiagramMaps phi with phi sigma1 = sigma2 phi and phi(mu1) = mu2."""
    g1, g2 = d1.group, d2.group
    if g1.nnodes != g2.nnodes or g1.ncomp != g2.ncomp:
        return
    for assign in _component_assignments(g1.specs, g2.specs):
        import itertools

        iso_lists = [
            _component_isos(g1.specs[c], g2.specs[assign[c]])
            for c in range(g1.ncomp)
        ]
        for combo in itertools.product(*iso_lists):
            perm = [0] * g1.nnodes
            for c in range(g1.ncomp):
                for j in range(g1.components[c].nnodes):
                    perm[g1.global_node(c, j)] = g2.global_node(
                        assign[c], combo[c][j]
                    )
            # node-level sigma conjugation check before building the map
            ok = all(
                perm[d1.sigma.perm[i]] == d2.sigma.perm[perm[i]]
                for i in range(g1.nnodes)
            )
            if not ok:
                continue
            try:
                phi = DiagramMap(g1, g2, tuple(perm))
            except InvalidSigma:
                continue
            if g2.dominant_rep(phi.apply_coweight(d1.mu_dom)) == d2.mu_dom:
                yield phi


def is_isomorphic_datum(d1: CoxeterDatumOverF, d2: CoxeterDatumOverF) -> bool:
    return next(datum_isomorphisms(d1, d2), None) is not None


# -- classification tables ---------------------------------------------------


def _omega_vec(rank, i):
    return tuple(1 if j == i - 1 else 0 for j in range(rank))


@lru_cache(maxsize=None)
def _std_datum(family, rank, sigma_name, mu):
    group = standard_group(family, rank)
    if sigma_name.startswith("rotflip"):
        # rotation-then-flip: the fixed-point-free involution class in type A
        rot = sigma_by_name(group, "rot:1")
        flip = sigma_by_name(group, "flip")
        sig = rot.compose(flip)
    else:
        sig = sigma_by_name(group, sigma_name)
    return CoxeterDatumOverF(group, sig, (mu,), name=f"{family}{rank}:{sigma_name}")


@lru_cache(maxsize=None)
def _hn_rows(family, rank):
    """Classified one-component triples, instantiated at the given rank."""
    rows = []
    if family == "A":
        n = rank + 1
        rows.append(("id", _omega_vec(rank, 1)))
        if n >= 2:
            rows.append((f"rot:{n - 1}", _omega_vec(rank, 1)))
        if n >= 3:
            rows.append(("flip", _omega_vec(rank, 1)))
        if n % 2 == 0:
            rows.append(("rotflip", _omega_vec(rank, 1)))
        if rank >= 2:
            two = tuple(
                (1 if j in (0, rank - 1) else 0) for j in range(rank)
            )
            rows.append(("id", two))
        else:
            rows.append(("id", (2,)))  # omega_1 + omega_{n-1} for n = 2
        if rank == 3:
            rows.append(("id", _omega_vec(rank, 2)))
            rows.append(("flip", _omega_vec(rank, 2)))
            rows.append(("rot:2", _omega_vec(rank, 2)))
    elif family == "B":
        if rank >= 3:
            rows.append(("id", _omega_vec(rank, 1)))
            rows.append(("adtau:1", _omega_vec(rank, 1)))
    elif family == "C":
        rows.append(("id", _omega_vec(rank, 1)))
        if rank == 2:
            rows.append(("id", _omega_vec(rank, 2)))
            rows.append(("adtau:2", _omega_vec(rank, 2)))
    elif family == "D":
        rows.append(("id", _omega_vec(rank, 1)))
        rows.append(("flip", _omega_vec(rank, 1)))
    return tuple(rows)


def _iso_spec_candidates(spec):
    """Component specs whose affine diagram can match the given one."""
    fam, rank = spec
    if rank == 2 and fam in ("B", "C"):
        return (("B", 2), ("C", 2))
    return (spec,)


class _MatchCache:
    def __init__(self):
        self.cache = {}

    def match(self, datum: CoxeterDatumOverF, rows_for) -> bool:
        key = (datum_signature(datum), rows_for.__name__)
        got = self.cache.get(key)
        if got is None:
            got = any(
                is_isomorphic_datum(datum, std)
                for std in rows_for(datum.group.specs[0])
            )
            self.cache[key] = got
        return got


_cachebox = _MatchCache()


def _rows_fully_hn(spec):
    out = []
    for fam2, rank2 in _iso_spec_candidates(spec):
        for sigma_name, mu in _hn_rows(fam2, rank2):
            out.append(_std_datum(fam2, rank2, sigma_name, mu))
    return out


def _rows_lt(spec):
    out = []
    for fam2, rank2 in _iso_spec_candidates(spec):
        if fam2 == "A":
            out.append(_std_datum(fam2, rank2, "id", _omega_vec(rank2, 1)))
    return out


def _rows_exotic(spec):
    out = []
    for fam2, rank2 in _iso_spec_candidates(spec):
        if fam2 == "A" and rank2 >= 2:
            out.append(_std_datum(fam2, rank2, "flip", _omega_vec(rank2, 1)))
    return out


def _rows_drinfeld(spec):
    out = []
    for fam2, rank2 in _iso_spec_candidates(spec):
        if fam2 == "A":
            n = rank2 + 1
            out.append(_std_datum(fam2, rank2, f"rot:{n - 1}", _omega_vec(rank2, 1)))
    return out


def _rows_a3_rot2(spec):
    out = []
    for fam2, rank2 in _iso_spec_candidates(spec):
        if fam2 == "A" and rank2 == 3:
            out.append(_std_datum(fam2, rank2, "rot:2", _omega_vec(rank2, 2)))
    return out


# -- structural pattern tests -------------------------------------------------


def _transport_to_component(datum: CoxeterDatumOverF, coords, src: int, dst: int):
    """Move a one-component coweight along sigma until it sits in `dst`."""
    group = datum.group
    full = [
        coords if c == src else (0,) * group.components[c].rank
        for c in range(group.ncomp)
    ]
    full = tuple(tuple(v) for v in full)
    cur = src
    guard = 0
    while cur != dst:
        full = datum.sigma.apply_coweight(full)
        cur = datum.sigma.comp_map[cur]
        guard += 1
        if guard > group.ncomp:
            raise CollapseError("sigma does not connect the two components")
    return full[dst]


def is_hilbert_blumenthal(datum: CoxeterDatumOverF) -> bool:
    """Two dual non-central slots on a sigma-transitive product of A components
    with trivial return map."""
    group = datum.group
    if not datum.is_f_quasi_simple():
        return False
    if any(t.family != "A" for t in group.components):
        return False
    nc = datum.noncentral_components()
    if len(nc) != 2:
        return False
    d = group.ncomp
    perm_d = list(range(group.nnodes))
    for _ in range(d):
        perm_d = [datum.sigma.perm[p] for p in perm_d]
    if perm_d != list(range(group.nnodes)):
        return False
    i, j = nc
    rank = group.components[i].rank
    g1 = standard_group(group.specs[i][0], group.specs[i][1])
    lam_i = g1.dominant_rep((datum.mu_dom[i],))[0]
    lam_j_raw = _transport_to_component(datum, datum.mu_dom[j], j, i)
    lam_j = g1.dominant_rep((lam_j_raw,))[0]
    w1 = _omega_vec(rank, 1)
    wn = _omega_vec(rank, rank)
    return {lam_i, lam_j} == {w1, wn} or (rank == 1 and lam_i == lam_j == w1)


def fully_hn_lookup(datum: CoxeterDatumOverF) -> bool:
    """Membership in the classified fully decomposable list, up to isomorphism."""
    if datum.group.is_central(datum.mu):
        raise CentralMu("classification requires a non-central coweight orbit")
    if not datum.is_f_quasi_simple():
        raise ValueError("classification requires sigma transitive on components")
    nc = datum.noncentral_components()
    if len(nc) == 1:
        inner = collapse_restriction(datum).inner
        return _cachebox.match(inner, _rows_fully_hn)
    if len(nc) == 2:
        return is_hilbert_blumenthal(datum)
    return False


def is_extended_lubin_tate(datum: CoxeterDatumOverF) -> bool:
    nc = datum.noncentral_components()
    if len(nc) != 1 or not datum.is_f_quasi_simple():
        return False
    inner = collapse_restriction(datum).inner
    return _cachebox.match(inner, _rows_lt)


def exotic_iso(datum: CoxeterDatumOverF):
    """Isomorphism from the collapsed datum to the standard exotic datum, if any."""
    nc = datum.noncentral_components()
    if len(nc) != 1 or not datum.is_f_quasi_simple():
        return None, None
    co = collapse_restriction(datum)
    for std in _rows_exotic(co.inner.group.specs[0]):
        phi = next(datum_isomorphisms(co.inner, std), None)
        if phi is not None:
            return co, phi
    return None, None


def condition_star(datum: CoxeterDatumOverF, K, Kp) -> bool:
    """Exotic-case level condition on the collapsed pair (K1, K1').

    In standard labels with sigma = flip: every new node is flip-fixed and
    if node i is new then node i+1 is not in K1.
    """
    co, phi = exotic_iso(datum)
    if co is None:
        return False
    k1 = frozenset(phi.perm[n] for n in co.map_nodes(K))
    k1p = frozenset(phi.perm[n] for n in co.map_nodes(Kp))
    std = phi.dst
    n = std.nnodes
    flip = sigma_by_name(std, "flip")
    for node in k1p - k1:
        if flip.perm[node] != node:
            return False
        if (node + 1) % n in k1:
            return False
    return True


# -- verdict engines -----------------------------------------------------------


class DatumAnalysis:
    """Shared per-datum state: the admissible set and derived subsets."""

    def __init__(self, datum: CoxeterDatumOverF, max_pairing=12, max_elements=2_000_000):
        self.datum = datum
        self.adm = admissible_set(datum, max_pairing, max_elements)
        self._stable_crit = None

    def k_adm(self, K):
        return self.adm.k_minimal_keys(K)

    def k_adm_zero(self, K):
        return self.adm.k_minimal_zero_keys(K)

    def max_len_zero(self, K) -> int:
        keys = self.k_adm_zero(K)
        return max((self.adm.records[k].length for k in keys), default=0)

    def w_fin(self, K):
        return self.adm.w_mu_k_fin(K)

    def stable_crit_coweights(self):
        """Orbit coweights whose translation has a twisted-stable critical index."""
        if self._stable_crit is None:
            datum = self.datum
            group = datum.group
            out = set()
            for lam in datum.mu_orbit:
                key = group.translation_key(lam)
                if alcove.stable_critical_indices(datum, key):
                    out.add(lam)
            self._stable_crit = frozenset(out)
        return self._stable_crit

    def w_fin_by_critical_index(self, K):
        """The independent route to W(mu)_{K,fin}: stable critical index plus
        K-minimality of the translation."""
        group = self.datum.group
        return tuple(
            sorted(
                lam
                for lam in self.stable_crit_coweights()
                if group.is_K_minimal(group.translation_key(lam), K)
            )
        )


def zero_dim_verdict(analysis: DatumAnalysis, K) -> VerdictReport:
    datum = analysis.datum
    if not fully_hn_lookup(datum):
        raise NotFullyHN(
            "dimension of the basic locus is only computed on classified data"
        )
    top = analysis.max_len_zero(K)
    fp = top == 0
    table = is_extended_lubin_tate(datum)
    group = datum.group
    witness_keys = [
        k
        for k in analysis.k_adm_zero(K)
        if analysis.adm.records[k].length == top
    ]
    return VerdictReport(
        predicate="zero_dim",
        datum=datum_summary(datum),
        verdict=fp,
        witness=tuple(group.word_string(k) for k in witness_keys[:4]),
        agreement=fp == table,
        details={"max_length": top, "table": table, "K": sorted(K)},
    )


def discrete_fiber_witness(analysis: DatumAnalysis, K, Kp):
    """A pair (s, k) with s tau sigma^k(s) admissible, or None."""
    datum = analysis.datum
    group = datum.group
    diff = sorted(set(Kp) - set(K))
    for s in diff:
        skey = group.simple_key(s)
        img = s
        for k in range(1, group.ncomp + 1):
            img_prev = img
            img = datum.sigma.perm[img]
            cand = group.mul(skey, group.mul(datum.tau, group.simple_key(img)))
            if cand in analysis.adm.records:
                return (s, k, cand)
    return None


def discrete_fiber_verdict(analysis: DatumAnalysis, K, Kp) -> VerdictReport:
    datum = analysis.datum
    group = datum.group
    K, Kp = frozenset(K), frozenset(Kp)
    if not K < Kp:
        raise ValueError("need K strictly inside K'")
    if not group.parabolic_is_finite(Kp):
        raise ValueError("K' must generate a finite group")
    if datum.sigma.apply_nodes(K) != K or datum.sigma.apply_nodes(Kp) != Kp:
        raise ValueError("levels must be sigma-stable")
    if group.is_central(datum.mu):
        raise CentralMu("discrete-fiber classification needs non-central mu")
    wit = discrete_fiber_witness(analysis, K, Kp)
    fp = wit is None
    table = is_extended_lubin_tate(datum) or (
        exotic_iso(datum)[0] is not None and condition_star(datum, K, Kp)
    )
    return VerdictReport(
        predicate="discrete_fibers",
        datum=datum_summary(datum),
        verdict=fp,
        witness=(group.word_string(wit[2]),) if wit else (),
        agreement=fp == table,
        details={
            "table": table,
            "K": sorted(K),
            "Kp": sorted(Kp),
            "witness_node": wit[0] if wit else None,
            "witness_power": wit[1] if wit else None,
        },
    )


def max_dim_verdict(analysis: DatumAnalysis, K) -> VerdictReport:
    datum = analysis.datum
    group = datum.group
    K = frozenset(K)
    wfin = analysis.w_fin(K)
    fp = bool(wfin)
    length_route = analysis.max_len_zero(K) == datum.two_rho_pairing
    crit_route = analysis.w_fin_by_critical_index(K)
    agreement = (
        fp == length_route
        and tuple(sorted(wfin)) == tuple(sorted(crit_route))
    )
    details = {
        "length_route": length_route,
        "crit_route_size": len(crit_route),
        "K": sorted(K),
        "top_component_orbits": len(wfin),
    }
    if not K:
        structural = alcove.is_j_quasisplit(datum) and group.is_minuscule(
            datum.mu_dom
        )
        agreement = agreement and fp == structural
        details["j_quasisplit_route"] = structural
    return VerdictReport(
        predicate="max_dim",
        datum=datum_summary(datum),
        verdict=fp,
        witness=tuple(
            group.word_string(group.translation_key(lam)) for lam in wfin
        ),
        agreement=agreement,
        details=details,
    )


def star_condition(analysis: DatumAnalysis, K):
    """Maximal elements of ^K Adm(mu)_0 versus the top translations."""
    datum = analysis.datum
    subset = analysis.k_adm_zero(K)
    mx = maximal_elements(datum, subset, K)
    top_translations = tuple(
        sorted(
            datum.group.translation_key(lam) for lam in analysis.w_fin(K)
        )
    )
    holds = tuple(sorted(mx)) == top_translations
    return holds, mx


def equi_max_verdict(analysis: DatumAnalysis, K) -> VerdictReport:
    datum = analysis.datum
    group = datum.group
    K = frozenset(K)
    details = {"K": sorted(K)}
    table = _thm_equi_max_table(datum, K)
    if not fully_hn_lookup(datum):
        fp = False
        details["reason"] = "not fully decomposable"
        witness = ()
    elif not analysis.w_fin(K):
        fp = False
        details["reason"] = "maximal dimension not attained"
        witness = ()
    else:
        holds, mx = star_condition(analysis, K)
        fp = holds
        witness = tuple(group.word_string(k) for k in mx)
        details["maximal_elements"] = witness
    return VerdictReport(
        predicate="equi_max",
        datum=datum_summary(datum),
        verdict=fp,
        witness=witness,
        agreement=fp == table,
        details={**details, "table": table},
    )


def _thm_equi_max_table(datum: CoxeterDatumOverF, K) -> bool:
    if K:
        return False
    nc = datum.noncentral_components()
    if len(nc) == 1 and datum.is_f_quasi_simple():
        inner = collapse_restriction(datum).inner
        if _cachebox.match(inner, _rows_drinfeld):
            return True
        if _cachebox.match(inner, _rows_a3_rot2):
            return True
        return False
    if len(nc) == 2:
        return is_hilbert_blumenthal(datum)
    return False


def drinfeld_qrig_verdict(analysis: DatumAnalysis, K) -> VerdictReport:
    """Containment of ^K Adm(mu) in the quasi-rigid set, with the equality check."""
    datum = analysis.datum
    group = datum.group
    if group.ncomp != 1:
        raise ValueError("quasi-rigid comparison is defined for irreducible data")
    K = frozenset(K)
    if not group.parabolic_is_finite(K):
        raise ValueError("W_K must be finite")
    kadm = analysis.k_adm(K)
    records = analysis.adm.records
    offenders = [
        k
        for k in kadm
        if not group.parabolic_is_finite(records[k].support)
    ]
    containment = not offenders
    # table side is sigma-independent: type A with a one-slot minuscule orbit
    rank = group.components[0].rank
    table = group.specs[0][0] == "A" and datum.mu_dom[0] in (
        _omega_vec(rank, 1),
        _omega_vec(rank, rank),
    )
    bound = datum.two_rho_pairing
    window = set()
    for w in group.finite_support_wa_elements():
        x = group.mul(w, datum.tau)
        if group.length(x) <= bound and group.is_K_minimal(x, K):
            window.add(x)
    equality = window == set(kadm)
    return VerdictReport(
        predicate="qrig_containment",
        datum=datum_summary(datum),
        verdict=containment,
        witness=tuple(group.word_string(k) for k in offenders[:4]),
        agreement=containment == table,
        details={
            "table": table,
            "K": sorted(K),
            "equality_on_window": equality,
            "window_size": len(window),
            "k_adm_size": len(kadm),
        },
    )
