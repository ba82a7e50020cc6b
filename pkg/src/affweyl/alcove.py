"""Base-alcove geometry: vertices, critical indices, quasi-rigid sets.

Vertices of the base alcove correspond to affine nodes: node 0 is the
origin and finite node i the point omega_i^vee / <omega_i^vee, beta>.  For a
product group a vertex is a tuple of per-component vertices, recorded by its
node labels.  The finite Weyl group W_a acts type-preservingly, so a common
vertex of the base alcove and w(base alcove), w in W_a, is exactly a vertex
fixed by w; for x = w tau the two alcoves share the vertices fixed by w.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .frobenius import CoxeterDatumOverF, DiagramMap
from .weyl import AffineWeylGroup


def vertex_points(group: AffineWeylGroup, vertex_nodes):
    """Coordinates of a product vertex given one local node per component."""
    return tuple(
        group.components[c].vertex_point(vertex_nodes[c])
        for c in range(group.ncomp)
    )


def special_vertex_nodes(group: AffineWeylGroup):
    """Per-component tuples of the special local nodes."""
    return tuple(t.special_local_nodes() for t in group.components)


def is_special_vertex(group: AffineWeylGroup, vertex_nodes) -> bool:
    return all(
        vertex_nodes[c] in group.components[c].special_local_nodes()
        for c in range(group.ncomp)
    )


def critical_indices(group: AffineWeylGroup, key):
    """Common vertices of the base alcove and x(base alcove).

    Returned as tuples of local node labels, one per component; x = w tau
    shares exactly the vertices fixed by its W_a-part w.
    """
    tau = group.omega_of(key)
    w = group.mul(key, group.inv(tau))
    fixed_per_comp = []
    for c in range(group.ncomp):
        t = group.components[c]
        lam, u = w[c]
        mat = t.mats[u]
        rank = t.rank
        fixed = []
        for node in range(t.nnodes):
            v = t.vertex_point(node)
            img = tuple(
                sum(mat[i][j] * v[j] for j in range(rank)) + lam[i]
                for i in range(rank)
            )
            if img == v:
                fixed.append(node)
        fixed_per_comp.append(tuple(fixed))
    if any(not f for f in fixed_per_comp):
        return ()
    return tuple(itertools.product(*fixed_per_comp))


def is_quasi_rigid(group: AffineWeylGroup, key) -> bool:
    """Nonempty critical index set; equals finiteness of W_supp(w tau^-1)."""
    return bool(critical_indices(group, key))


def q_rig_keys(group: AffineWeylGroup, tau_key):
    """The full quasi-rigid set for tau: finitely many elements w tau."""
    return tuple(
        group.mul(w, tau_key) for w in group.finite_support_wa_elements()
    )


def stable_critical_indices(datum: CoxeterDatumOverF, key):
    """Critical indices fixed by the node action of Ad(tau(mu)) o sigma."""
    group = datum.group
    perm = datum.adtau_sigma_perm()
    comp_perm = [None] * group.ncomp
    local_maps = []
    for c in range(group.ncomp):
        img_comp = None
        lm = {}
        for j in range(group.components[c].nnodes):
            g = perm[group.global_node(c, j)]
            c2, l2 = group.local_node(g)
            img_comp = c2
            lm[j] = l2
        comp_perm[c] = img_comp
        local_maps.append(lm)
    out = []
    for vert in critical_indices(group, key):
        img = [None] * group.ncomp
        for c in range(group.ncomp):
            img[comp_perm[c]] = local_maps[c][vert[c]]
        if tuple(img) == vert:
            out.append(vert)
    return tuple(out)


def w_mu_fin_by_critical_index(datum: CoxeterDatumOverF, nodes=frozenset()):
    """W(mu)_{K,fin} via stable critical indices: the independent route.

    lam is kept iff t^lam is K-minimal and has an Ad(tau) o sigma stable
    critical index.
    """
    group = datum.group
    out = []
    for lam in sorted(datum.mu_orbit):
        key = group.translation_key(lam)
        if not group.is_K_minimal(key, nodes):
            continue
        if stable_critical_indices(datum, key):
            out.append(lam)
    return tuple(sorted(out))


def is_j_quasisplit(datum: CoxeterDatumOverF) -> bool:
    """Existence of an Ad(tau) o sigma stable system of special vertices.

    One special node per component, permuted among themselves by the
    composite node action.
    """
    group = datum.group
    perm = datum.adtau_sigma_perm()
    specials = [
        [group.global_node(c, j) for j in group.components[c].special_local_nodes()]
        for c in range(group.ncomp)
    ]
    for combo in itertools.product(*specials):
        chosen = set(combo)
        if {perm[n] for n in chosen} == chosen:
            return True
    return False


def automorphism_node_perms(group: AffineWeylGroup):
    """All Coxeter-diagram automorphisms of the group's affine diagram.

    Backtracking over node bijections preserving the Coxeter matrix;
    components may be permuted when their diagrams agree.
    """
    n = group.nnodes
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
            ok = True
            for j in range(i):
                if group.coxeter_m(i, j) != group.coxeter_m(cand, partial[j]):
                    ok = False
                    break
            if ok:
                extend(partial + [cand])

    extend([])
    maps = []
    for perm in out:
        try:
            maps.append(DiagramMap(group, group, perm, name="aut"))
        except Exception:
            continue
    return tuple(maps)


def translation_is_lpa_image_of_dominant_minuscule(
    group: AffineWeylGroup, coords
) -> bool:
    """Is some diagram-automorphism image of the coweight dominant minuscule?"""
    for amap in _cached_autos(group):
        img = amap.apply_coweight(coords)
        if group.is_minuscule(img) and img == group.dominant_rep(img):
            return True
    return False


_AUTOS = {}


def _cached_autos(group: AffineWeylGroup):
    key = id(group)
    got = _AUTOS.get(key)
    if got is None:
        got = automorphism_node_perms(group)
        _AUTOS[key] = got
    return got


def mu_two_rho(datum: CoxeterDatumOverF) -> int:
    return datum.two_rho_pairing


def is_minuscule(datum: CoxeterDatumOverF, coords=None) -> bool:
    return datum.group.is_minuscule(datum.mu_dom if coords is None else coords)


def is_central(datum: CoxeterDatumOverF, coords=None) -> bool:
    return datum.group.is_central(datum.mu_dom if coords is None else coords)
