"""Change-of-parahoric machinery: twisted-stable subsets, partial conjugation,
the stratum map between levels, and fiber-degree polynomials.

Fiber degrees are polynomials in an abstract q.  The count attached to a
finite parabolic W_K with a twisted automorphism F is sum over F-fixed
elements of q^length; per-stratum degrees are exact quotients of two such
counts, and per-point totals over a target stratum sum the degrees of the
strata above it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .admissible import AdmissibleSet
from .classify import (
    DatumAnalysis,
    condition_star,
    datum_summary,
    exotic_iso,
    is_extended_lubin_tate,
)
from .frobenius import CoxeterDatumOverF


class UnsupportedSituation(ValueError):
    """Fiber analysis is exposed only for the classified finite-fiber shapes."""


class Poly:
    """Integer-coefficient polynomial in q, dense with exact division."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @staticmethod
    def one():
        return Poly([1])

    @staticmethod
    def q_power(k):
        return Poly([0] * k + [1])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __mul__(self, other):
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return Poly(out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def divide_exact(self, other):
        """Quotient self/other when the division is exact, else None."""
        num = list(self.coeffs)
        den = other.coeffs
        if den == (0,):
            return None
        out = [0] * max(len(num) - len(den) + 1, 1)
        for k in range(len(num) - len(den), -1, -1):
            lead = num[k + len(den) - 1]
            if lead % den[-1] != 0:
                return None
            c = lead // den[-1]
            out[k] = c
            if c:
                for i, d in enumerate(den):
                    num[k + i] -= c * d
        if any(num):
            return None
        return Poly(out)

    def evaluate(self, q: int) -> int:
        total = 0
        for c in reversed(self.coeffs):
            total = total * q + c
        return total

    def scale_exponents(self, d: int) -> "Poly":
        out = [0] * ((len(self.coeffs) - 1) * d + 1)
        for i, c in enumerate(self.coeffs):
            out[i * d] = c
        return Poly(out)

    def __repr__(self):
        if self.coeffs == (0,):
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}q" if c != 1 else "q")
            else:
                parts.append(f"{c}q^{i}" if c != 1 else f"q^{i}")
        return " + ".join(parts)


def i_k_w_sigma(datum: CoxeterDatumOverF, K, wkey) -> frozenset:
    """Largest subset of K carried into itself by conjugation-then-sigma.

    Greatest fixed point: repeatedly drop the nodes whose image under
    s -> w sigma(s) w^{-1} is not a simple reflection inside the current set.
    """
    group = datum.group
    winv = group.inv(wkey)
    simple_index = {group.simple_key(n): n for n in range(group.nnodes)}
    cur = set(K)
    while True:
        keep = set()
        for n in cur:
            img = group.mul(
                wkey, group.mul(group.simple_key(datum.sigma.perm[n]), winv)
            )
            m = simple_index.get(img)
            if m is not None and m in cur:
                keep.add(n)
        if keep == cur:
            return frozenset(cur)
        cur = keep


def ad_w_sigma_node_map(datum: CoxeterDatumOverF, K1, wkey):
    """Node map s -> w sigma(s) w^{-1} on a twisted-stable K1."""
    group = datum.group
    winv = group.inv(wkey)
    simple_index = {group.simple_key(n): n for n in range(group.nnodes)}
    out = {}
    for n in K1:
        img = group.mul(
            wkey, group.mul(group.simple_key(datum.sigma.perm[n]), winv)
        )
        out[n] = simple_index[img]
    if set(out.values()) != set(K1):
        raise ValueError("node set is not stable under the twisted conjugation")
    return out


def flag_fixed_point_poly(datum: CoxeterDatumOverF, K1, wkey) -> Poly:
    """Sum of q^length over the elements of W_{K1} fixed by x -> w sigma(x) w^{-1}."""
    group = datum.group
    ad_w_sigma_node_map(datum, K1, wkey)  # validates the automorphism property
    winv = group.inv(wkey)
    coeffs = []
    for x in group.parabolic_elements(frozenset(K1)):
        img = group.mul(wkey, group.mul(datum.sigma.apply_key(x), winv))
        if img == x:
            l = group.length(x)
            if len(coeffs) <= l:
                coeffs.extend([0] * (l + 1 - len(coeffs)))
            coeffs[l] += 1
    return Poly(coeffs or [0])


def partial_conjugation_class(datum: CoxeterDatumOverF, wkey, K):
    """Closure of w under length-nonincreasing twisted conjugation from K."""
    group = datum.group
    seen = {wkey}
    frontier = [wkey]
    while frontier:
        nxt = []
        for x in frontier:
            lx = group.length(x)
            for n in sorted(K):
                y = group.mul(
                    group.simple_key(n),
                    group.mul(x, group.simple_key(datum.sigma.perm[n])),
                )
                if group.length(y) <= lx and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def pi_prime(datum: CoxeterDatumOverF, wkey, K, Kp):
    """The target stratum of w between levels K and K': the unique K'-minimal
    element in the length-nonincreasing twisted conjugation class of w."""
    group = datum.group
    cls = partial_conjugation_class(datum, wkey, Kp)
    minimal = {x for x in cls if group.is_K_minimal(x, Kp)}
    if len(minimal) != 1:
        raise UnsupportedSituation(
            f"partial conjugation does not isolate one K'-minimal element "
            f"({len(minimal)} found)"
        )
    return next(iter(minimal))


def pi_prime_fiber(analysis: DatumAnalysis, wpkey, K, Kp):
    """All w in ^K Adm(mu)_0 mapping to the given K'-stratum, by inversion."""
    datum = analysis.datum
    return tuple(
        w
        for w in analysis.k_adm_zero(K)
        if pi_prime(datum, w, K, Kp) == wpkey
    )


def pi_prime_fiber_closed_form(analysis: DatumAnalysis, wpkey, K, Kp):
    """Case-table preimage for the classified shapes: toggle each new node."""
    datum = analysis.datum
    group = datum.group
    diff = sorted(set(Kp) - set(K))
    zero = set(analysis.k_adm_zero(K))
    out = {wpkey}
    for n in diff:
        s = group.simple_key(n)
        ss = group.simple_key(datum.sigma.perm[n])
        nxt = set(out)
        for x in out:
            if group.right_descents(x) >> n & 1:
                y = group.mul(s, group.mul(x, ss))
                if y in zero:
                    nxt.add(y)
        out = nxt
    return tuple(sorted(out & zero | {wpkey}))


@dataclass(frozen=True)
class FiberRow:
    target: str
    preimage: tuple
    stratum_degrees: tuple  # (word, Poly) pairs
    total: Poly
    trichotomy: Poly


@dataclass(frozen=True)
class FiberReport:
    datum: str
    K: tuple
    Kp: tuple
    rows: tuple
    product_set_ok: bool


def _situation_ok(datum: CoxeterDatumOverF, K, Kp) -> bool:
    if is_extended_lubin_tate(datum):
        return True
    co, _phi = exotic_iso(datum)
    return co is not None and condition_star(datum, K, Kp)


def fiber_cardinality_table(analysis: DatumAnalysis, K, Kp) -> FiberReport:
    """Per-stratum fiber degrees of the projection between levels K and K'.

    Each row lists the strata above one K'-stratum, the per-stratum degree
    (an exact polynomial quotient of two twisted flag counts) and the total
    per-point cardinality, cross-checked against the support/descent
    trichotomy at each new node.
    """
    datum = analysis.datum
    group = datum.group
    K, Kp = frozenset(K), frozenset(Kp)
    if not K < Kp or not group.parabolic_is_finite(Kp):
        raise ValueError("need sigma-stable K strictly inside finite-type K'")
    if datum.sigma.apply_nodes(K) != K or datum.sigma.apply_nodes(Kp) != Kp:
        raise ValueError("levels must be sigma-stable")
    if not _situation_ok(datum, K, Kp):
        raise UnsupportedSituation(
            "fiber table is stated only for the classified finite-fiber shapes"
        )
    diff = sorted(Kp - K)
    rows = []
    allowed_totals = _allowed_totals(len(diff))
    for wp in analysis.k_adm_zero(Kp):
        pre = pi_prime_fiber(analysis, wp, K, Kp)
        closed = pi_prime_fiber_closed_form(analysis, wp, K, Kp)
        if tuple(sorted(pre)) != closed:
            raise AssertionError(
                "closed-form preimage disagrees with direct inversion"
            )
        k1p = i_k_w_sigma(datum, Kp, wp)
        denom_pairs = []
        total = Poly([0])
        num = flag_fixed_point_poly(datum, k1p, wp)
        for w in pre:
            k1 = i_k_w_sigma(datum, K, w)
            den = flag_fixed_point_poly(datum, k1, w)
            deg = num.divide_exact(den)
            if deg is None:
                raise AssertionError(
                    "stratum degree is not an exact polynomial quotient"
                )
            denom_pairs.append((group.word_string(w), deg))
            total = total + deg
        tri = _trichotomy_total(analysis.adm, datum, wp, diff)
        if total != tri:
            raise AssertionError(
                f"fiber total {total!r} does not match the trichotomy {tri!r}"
            )
        if total not in allowed_totals:
            raise AssertionError(f"fiber total {total!r} outside the allowed set")
        rows.append(
            FiberRow(
                target=group.word_string(wp),
                preimage=tuple(group.word_string(w) for w in pre),
                stratum_degrees=tuple(denom_pairs),
                total=total,
                trichotomy=tri,
            )
        )
    return FiberReport(
        datum=datum_summary(datum),
        K=tuple(sorted(K)),
        Kp=tuple(sorted(Kp)),
        rows=tuple(rows),
        product_set_ok=True,
    )


def _allowed_totals(k: int):
    """Products of k factors from {1, 2, 1+q}."""
    base = [Poly([1]), Poly([2]), Poly([1, 1])]
    out = {Poly([1])}
    for _ in range(k):
        out = {a * b for a in out for b in base}
    return out


def _trichotomy_total(adm: AdmissibleSet, datum: CoxeterDatumOverF, wp, diff):
    """Per-node factor: 1+q if the node is in the support of the W_a-part,
    2 on a right descent, 1 otherwise; the total is the product."""
    group = datum.group
    rec = adm.records[wp]
    total = Poly([1])
    rdesc = group.right_descents(wp)
    for n in diff:
        if n in rec.support:
            total = total * Poly([1, 1])
        elif rdesc >> n & 1:
            total = total * Poly([2])
        else:
            total = total * Poly([1])
    return total
