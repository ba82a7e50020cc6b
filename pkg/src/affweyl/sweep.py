"""Corpus generation and the classification agreement engine.

The irreducible corpus ranges over untwisted components (A up to rank 5,
B/C up to rank 4, D rank 4), all diagram automorphisms, all dominant
non-central coweights with pairing against 2 rho at most a configurable
bound, and all sigma-stable proper level sets.  On every instance the
first-principles verdict engines are compared with the table-driven
classification, and the lemma/proposition property suites are evaluated.
Failures are collected, never swallowed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import alcove
from .admissible import admissible_set
from .classify import (
    DatumAnalysis,
    NotFullyHN,
    condition_star,
    datum_summary,
    discrete_fiber_verdict,
    drinfeld_qrig_verdict,
    equi_max_verdict,
    exotic_iso,
    fully_hn_lookup,
    is_extended_lubin_tate,
    max_dim_verdict,
    zero_dim_verdict,
)
from .fibers import UnsupportedSituation, fiber_cardinality_table, pi_prime
from .frobenius import CollapseError, CoxeterDatumOverF, collapse_restriction, restrict_scalars
from .weyl import AffineWeylGroup, standard_group

DEFAULT_FAMILIES = (
    ("A", (1, 2, 3, 4, 5)),
    ("B", (2, 3, 4)),
    ("C", (2, 3, 4)),
    ("D", (4,)),
)


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, message: str):
        self.instances += 1
        if not ok:
            self.failures.append(message)


@dataclass
class SweepReport:
    checks: dict = field(default_factory=dict)

    def check(self, name: str) -> CheckResult:
        got = self.checks.get(name)
        if got is None:
            got = CheckResult(name)
            self.checks[name] = got
        return got

    @property
    def ok(self) -> bool:
        return all(not c.failures for c in self.checks.values())

    def summary_lines(self):
        lines = []
        for name in sorted(self.checks):
            c = self.checks[name]
            status = "PASS" if not c.failures else f"FAIL ({len(c.failures)})"
            lines.append(f"{name}: {status} [{c.instances} instances]")
        return lines

    def failure_lines(self, limit=20):
        lines = []
        for name in sorted(self.checks):
            for msg in self.checks[name].failures[:limit]:
                lines.append(f"{name}: {msg}")
        return lines


def dominant_coweights(group: AffineWeylGroup, max_pairing: int):
    """Nonzero dominant coweights of a one-component group, bounded by pairing."""
    t = group.components[0]
    weights = [
        group.pairing_two_rho(((1 if j == i else 0,) * 0 + tuple(1 if j == i else 0 for j in range(t.rank)),))
        for i in range(t.rank)
    ]
    out = []

    def rec(i, partial, total):
        if i == t.rank:
            if total > 0:
                out.append(tuple(partial))
            return
        c = 0
        while total + c * weights[i] <= max_pairing:
            rec(i + 1, partial + [c], total + c * weights[i])
            c += 1

    rec(0, [], 0)
    return tuple(out)


def diagram_automorphism_perms(group: AffineWeylGroup):
    return tuple(m.perm for m in alcove.automorphism_node_perms(group))


def sigma_stable_levels(datum: CoxeterDatumOverF, proper=True):
    """All sigma-stable K with W_K finite, grouped from sigma-orbits of nodes."""
    group = datum.group
    perm = datum.sigma.perm
    orbits = []
    seen = set()
    for n in range(group.nnodes):
        if n in seen:
            continue
        orb = {n}
        m = perm[n]
        while m not in orb:
            orb.add(m)
            m = perm[m]
        seen |= orb
        orbits.append(frozenset(orb))
    out = []
    for mask in itertools.product((False, True), repeat=len(orbits)):
        K = frozenset().union(*(o for o, chosen in zip(orbits, mask) if chosen)) if any(mask) else frozenset()
        if proper and not group.parabolic_is_finite(K):
            continue
        out.append(K)
    return tuple(sorted(out, key=lambda k: (len(k), sorted(k))))


def irreducible_corpus(max_pairing=10, families=DEFAULT_FAMILIES):
    """All (group, mu_dom, sigma_perm) triples of the irreducible sweep."""
    for family, ranks in families:
        for rank in ranks:
            group = standard_group(family, rank)
            sigmas = diagram_automorphism_perms(group)
            for mu in dominant_coweights(group, max_pairing):
                yield group, mu, sigmas


def run_sweep(max_pairing=10, families=DEFAULT_FAMILIES, progress=None) -> SweepReport:
    rep = SweepReport()
    for group, mu, sigmas in irreducible_corpus(max_pairing, families):
        _sweep_mu_sigma_free(rep, group, mu, max_pairing)
        for perm in sigmas:
            datum = CoxeterDatumOverF(group, perm, (mu,))
            analysis = DatumAnalysis(datum, max_pairing=max_pairing)
            _sweep_datum(rep, analysis)
        if progress is not None:
            progress(f"{group.specs[0][0]}{group.specs[0][1]} mu={mu}")
    return rep


# -- sigma-independent per-(group, mu) checks ---------------------------------


def _sweep_mu_sigma_free(rep: SweepReport, group, mu, max_pairing):
    datum = CoxeterDatumOverF(group, "id", (mu,))
    analysis = DatumAnalysis(datum, max_pairing=max_pairing)
    adm = analysis.adm
    tag = datum_summary(datum)
    t = group.components[0]
    rank = t.rank

    # every s tau lies in the admissible set
    c = rep.check("lemma_s_tau_admissible")
    for n in range(group.nnodes):
        key = group.mul(group.simple_key(n), datum.tau)
        c.record(key in adm.records, f"{tag}: s{n} tau missing")

    # a full-support element exists iff the pair is not the one-slot type-A shape
    c = rep.check("prop_full_support")
    is_a_one = t.family == "A" and mu in (
        tuple(1 if j == 0 else 0 for j in range(rank)),
        tuple(1 if j == rank - 1 else 0 for j in range(rank)),
    )
    full = frozenset(range(group.nnodes))
    has_full = any(rec.support == full for rec in adm.records.values())
    c.record(has_full != is_a_one, f"{tag}: full-support {has_full} vs shape {is_a_one}")

    # type A, mu away from the two one-slot shapes: all products s s' tau admissible
    if t.family == "A" and not is_a_one:
        c = rep.check("lemma_pairs_admissible")
        ok = True
        for n1 in range(group.nnodes):
            for n2 in range(group.nnodes):
                key = group.mul(
                    group.simple_key(n1), group.mul(group.simple_key(n2), datum.tau)
                )
                if key not in adm.records:
                    ok = False
        c.record(ok, f"{tag}: some s s' tau missing")

    # critical indices of orbit translations: nonempty iff an automorphism image
    # is dominant minuscule; then unique and special
    c = rep.check("prop_translation_critical_index")
    for lam in sorted(datum.mu_orbit):
        key = group.translation_key(lam)
        crit = alcove.critical_indices(group, key)
        lpa = alcove.translation_is_lpa_image_of_dominant_minuscule(group, (lam,))
        ok = bool(crit) == lpa
        if crit and not group.is_central((lam,)):
            ok = ok and len(crit) == 1 and alcove.is_special_vertex(group, crit[0])
        c.record(ok, f"{tag}: lam={lam} crit={crit} lpa={lpa}")

    # support of an orbit translation misses at most one node
    c = rep.check("cor_translation_support_size")
    for lam in sorted(datum.mu_orbit):
        key = group.translation_key(lam)
        supp = adm.records[key].support if key in adm.records else group.support(key)
        c.record(len(supp) >= group.nnodes - 1, f"{tag}: lam={lam} supp={sorted(supp)}")

    # critical index nonempty iff the support group is finite, on all of Adm
    c = rep.check("crit_vs_finite_support")
    for key in adm.sorted_keys:
        rec = adm.records[key]
        geo = bool(alcove.critical_indices(group, key))
        comb = group.parabolic_is_finite(rec.support)
        c.record(geo == comb, f"{tag}: {group.word_string(key)}")

    # quasi-rigid containment classification (sigma-free on both sides)
    sigma_id_datum = datum
    for K in sigma_stable_levels_all(group):
        r = drinfeld_qrig_verdict(analysis, K)
        rep.check("thm_qrig_containment").record(
            r.agreement, f"{tag} K={sorted(K)}: containment {r.verdict} vs table"
        )
        if r.verdict:
            rep.check("thm_qrig_equality").record(
                r.details["equality_on_window"],
                f"{tag} K={sorted(K)}: window {r.details['window_size']} "
                f"vs kadm {r.details['k_adm_size']}",
            )

    # extreme length elements of ^K Adm are exactly the K-minimal orbit translations
    c = rep.check("prop_extreme_elements")
    bound = datum.two_rho_pairing
    for K in sigma_stable_levels_all(group):
        kadm = adm.k_minimal_keys(K)
        extremes = {k for k in kadm if adm.records[k].length == bound}
        expected = {
            group.translation_key(lam)
            for lam in datum.mu_orbit
            if group.is_K_minimal(group.translation_key(lam), K)
        }
        ok = extremes == expected
        # each orbit coweight has a W_K-conjugate whose translation is K-minimal
        for lam in sorted(datum.mu_orbit):
            key = group.translation_key(lam)
            x = key
            guard = 0
            while True:
                m = group.left_descents(x) & group.node_mask(K)
                if not m:
                    break
                n = (m & -m).bit_length() - 1
                x = group.mul(group.simple_key(n), x)
                guard += 1
                assert guard < 10_000
            w = group.mul(x, group.inv(key))
            conj = group.mul(w, group.mul(key, group.inv(w)))
            ok = ok and group.is_translation(conj) and group.is_K_minimal(conj, K)
        c.record(ok, f"{tag} K={sorted(K)}")


_LEVELS_CACHE: dict = {}


def sigma_stable_levels_all(group: AffineWeylGroup):
    """All finite-type subsets of the nodes of a one-component group."""
    key = id(group)
    got = _LEVELS_CACHE.get(key)
    if got is None:
        nodes = range(group.nnodes)
        out = []
        for r in range(group.nnodes):
            for comb in itertools.combinations(nodes, r):
                out.append(frozenset(comb))
        got = tuple(out)
        _LEVELS_CACHE[key] = got
    return got


# -- per-datum (sigma-dependent) checks ----------------------------------------


def _sweep_datum(rep: SweepReport, analysis: DatumAnalysis):
    datum = analysis.datum
    group = datum.group
    tag = datum_summary(datum)
    levels = sigma_stable_levels(datum)
    hn = fully_hn_lookup(datum)

    # J quasi-split and minuscule versus nonempty top-translation set (K = empty)
    r_empty = max_dim_verdict(analysis, frozenset())
    rep.check("prop_jquasisplit_wfin").record(
        r_empty.agreement, f"{tag}: {r_empty.details}"
    )

    for K in levels:
        r = max_dim_verdict(analysis, K)
        rep.check("thm_max_dim").record(r.agreement, f"{tag} K={sorted(K)}: {r.details}")
        rep.check("cor_dim_bound").record(
            analysis.max_len_zero(K) <= datum.two_rho_pairing,
            f"{tag} K={sorted(K)}",
        )
        if hn:
            rz = zero_dim_verdict(analysis, K)
            rep.check("thm_zero_dim").record(
                rz.agreement, f"{tag} K={sorted(K)}: {rz.details}"
            )
        re = equi_max_verdict(analysis, K)
        rep.check("thm_equi_max").record(
            re.agreement, f"{tag} K={sorted(K)}: {re.details}"
        )

    # discrete fibers across all sigma-stable pairs K < K'
    for Kp in levels:
        if not Kp:
            continue
        sub = [K for K in levels if K < Kp]
        for K in sub:
            r = discrete_fiber_verdict(analysis, K, Kp)
            rep.check("thm_discrete_fibers").record(
                r.agreement,
                f"{tag} K={sorted(K)} K'={sorted(Kp)}: {r.details}",
            )
            if r.details["table"]:
                _check_fibers(rep, analysis, K, Kp, tag)


def _check_fibers(rep: SweepReport, analysis: DatumAnalysis, K, Kp, tag):
    """Table rows validate degrees, trichotomy and the allowed product set."""
    c = rep.check("fiber_tables")
    try:
        fiber_cardinality_table(analysis, K, Kp)
        c.record(True, "")
    except (AssertionError, UnsupportedSituation) as exc:
        c.record(False, f"{tag} K={sorted(K)} K'={sorted(Kp)}: {exc}")


# -- restriction-of-scalars corpus ----------------------------------------------


def res_corpus():
    """Quasi-simple products used for the collapse-commutation checks."""
    out = []

    def mk(family, rank, sigma_d, d, mu_list, name):
        inner = CoxeterDatumOverF(
            standard_group(family, rank),
            sigma_d,
            (mu_list[0],),
        )
        out.append(restrict_scalars(inner, d, mu=mu_list, name=name))

    w1 = lambda rank: tuple(1 if j == 0 else 0 for j in range(rank))
    wlast = lambda rank: tuple(1 if j == rank - 1 else 0 for j in range(rank))
    zero = lambda rank: (0,) * rank
    # extended Lubin-Tate shapes
    mk("A", 1, "id", 2, [(1,), (0,)], "res-lt-n2-d2")
    mk("A", 2, "id", 2, [w1(2), zero(2)], "res-lt-n3-d2")
    mk("A", 2, "id", 3, [w1(2), zero(2), zero(2)], "res-lt-n3-d3")
    # extended Drinfeld
    mk("A", 2, "rot:2", 2, [w1(2), zero(2)], "res-drinfeld-n3-d2")
    # extended exotic unitary
    mk("A", 2, "flip", 2, [w1(2), zero(2)], "res-exotic-n3-d2")
    mk("A", 3, "flip", 2, [w1(3), zero(3)], "res-exotic-n4-d2")
    # a non-type-A shape
    mk("C", 2, "adtau:2", 2, [(0, 1), zero(2)], "res-c2-d2")
    # two-slot shapes (not collapsible)
    mk("A", 1, "id", 2, [(1,), (1,)], "stamm")
    mk("A", 2, "id", 2, [w1(2), wlast(2)], "res-hb-n3")
    mk("A", 3, "id", 2, [w1(3), wlast(3)], "res-hb-n4")
    return tuple(out)


def lift_level(datum: CoxeterDatumOverF, co, K1):
    """sigma-stable level of the product datum from an inner-stable K1."""
    group = datum.group
    off = group.offsets[co.comp]
    nodes = {off + n for n in K1}
    out = set(nodes)
    cur = nodes
    for _ in range(group.ncomp - 1):
        cur = {datum.sigma.perm[n] for n in cur}
        out |= cur
    return frozenset(out)


def run_res_sweep(max_pairing=12) -> SweepReport:
    rep = SweepReport()
    for datum in res_corpus():
        analysis = DatumAnalysis(datum, max_pairing=max_pairing)
        tag = datum.name or datum_summary(datum)
        try:
            co = collapse_restriction(datum)
        except CollapseError:
            rep.check("collapse_rejects_two_slots").record(
                len(datum.noncentral_components()) != 1, f"{tag}: collapse applicability"
            )
            _sweep_datum(rep, analysis)
            continue

        inner_analysis = DatumAnalysis(co.inner, max_pairing=max_pairing)
        inner_sigma_d = co.inner
        rep.check("collapse_fully_hn").record(
            fully_hn_lookup(datum) == fully_hn_lookup(co.inner), tag
        )

        inner_levels = [
            K1
            for K1 in sigma_stable_levels(co.inner)
        ]
        for K1 in inner_levels:
            K = lift_level(datum, co, K1)
            if not datum.group.parabolic_is_finite(K):
                continue
            r_prod = max_dim_verdict(analysis, K)
            r_inner = max_dim_verdict(inner_analysis, K1)
            rep.check("collapse_max_dim").record(
                r_prod.agreement
                and r_inner.agreement
                and r_prod.verdict == r_inner.verdict
                and len(r_prod.witness) == len(r_inner.witness),
                f"{tag} K1={sorted(K1)}",
            )
            r_prod = equi_max_verdict(analysis, K)
            r_inner = equi_max_verdict(inner_analysis, K1)
            rep.check("collapse_equi_max").record(
                r_prod.agreement
                and r_inner.agreement
                and r_prod.verdict == r_inner.verdict,
                f"{tag} K1={sorted(K1)}",
            )
            if fully_hn_lookup(datum):
                rz_p = zero_dim_verdict(analysis, K)
                rz_i = zero_dim_verdict(inner_analysis, K1)
                rep.check("collapse_zero_dim").record(
                    rz_p.agreement and rz_i.agreement and rz_p.verdict == rz_i.verdict,
                    f"{tag} K1={sorted(K1)}",
                )
        # pairs for the fiber statements
        for K1p in inner_levels:
            if not K1p:
                continue
            for K1 in inner_levels:
                if not K1 < K1p:
                    continue
                K = lift_level(datum, co, K1)
                Kp = lift_level(datum, co, K1p)
                if not datum.group.parabolic_is_finite(Kp):
                    continue
                r_prod = discrete_fiber_verdict(analysis, K, Kp)
                r_inner = discrete_fiber_verdict(inner_analysis, K1, K1p)
                rep.check("collapse_discrete_fibers").record(
                    r_prod.agreement
                    and r_inner.agreement
                    and r_prod.verdict == r_inner.verdict,
                    f"{tag} K1={sorted(K1)} K1'={sorted(K1p)}",
                )
                if r_prod.details["table"]:
                    _check_pi_prime_commutes(rep, analysis, inner_analysis, co, K, Kp, K1, K1p, tag)
    return rep


def _check_pi_prime_commutes(rep, analysis, inner_analysis, co, K, Kp, K1, K1p, tag):
    datum = analysis.datum
    c = rep.check("collapse_pi_prime")
    d = datum.group.ncomp
    for w in analysis.k_adm_zero(K):
        lhs = co.map_key(pi_prime(datum, w, K, Kp))
        rhs = pi_prime(co.inner, co.map_key(w), K1, K1p)
        c.record(lhs == rhs, f"{tag}: element {datum.group.word_string(w)}")
    # fiber degrees of the product are the inner degrees with exponents scaled by d
    try:
        t_prod = fiber_cardinality_table(analysis, K, Kp)
        t_inner = fiber_cardinality_table(inner_analysis, K1, K1p)
    except UnsupportedSituation:
        return
    c = rep.check("collapse_fiber_degrees")
    prod_rows = {row.target: row for row in t_prod.rows}
    for row in t_inner.rows:
        target = co.inner.group.word_string(
            inner_analysis.adm.records[
                next(
                    k
                    for k in inner_analysis.k_adm_zero(K1p)
                    if co.inner.group.word_string(k) == row.target
                )
            ].key
        )
        scaled = row.total.scale_exponents(d)
        match = [
            p
            for p in t_prod.rows
            if co.map_key_word(p.target) == row.target
        ] if hasattr(co, "map_key_word") else []
        # match rows through the collapse bijection on elements instead
    # row-level comparison is done through elements below
    prod_by_key = {}
    for wp in analysis.k_adm_zero(Kp):
        prod_by_key[co.map_key(wp)] = wp
    for wp1 in inner_analysis.k_adm_zero(K1p):
        wp = prod_by_key.get(wp1)
        ok = wp is not None
        if ok:
            row_p = next(r for r in t_prod.rows if r.target == datum.group.word_string(wp))
            row_i = next(
                r
                for r in t_inner.rows
                if r.target == co.inner.group.word_string(wp1)
            )
            ok = row_p.total == row_i.total.scale_exponents(d)
        c.record(ok, f"{tag}: stratum {co.inner.group.word_string(wp1)}")
