"""The sheaf of graded algebras H = ⊕ H^{ab} on the face space.

Per ordered label pair (a, b) the block H^{ab} is supported on

  fab       = faces (Δ,J) with Δ_a ∪ Δ_b ⊆ Δ ⊆ V ∖ (Δ'_a ∪ Δ'_b),
  fab_prime = faces with Δ_a ∪ Δ_b ⊆ Δ ⊆ V ∖ (Δ'_a symdiff Δ'_b) that
              meet Δ'_a ∩ Δ'_b,

where Δ'_x is the forbidden-divisor set of the label.  A fab face
carries Q[X_v; v ∈ Δ] placed so its unit sits in degree 2 d_ab
(d_ab = |Δ_a ∖ Δ_b|), tensored with the balanced K-part at its J; a
fab_prime face carries the stalk of its transport (Δ ∖ (Δ'_a ∩ Δ'_b), J)
and everything else is zero.  Restrictions kill dropped variables and
push K-monomials through the input maps; the product multiplies
polynomial parts twisted by the support-correction monomial and composes
K-parts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import mono_degree, mono_mul, monomials_of_degree, twist_factor, twisted_tensor
from .faces import FacePoint, SymmetricDatum, build_faces
from .isotropy import DatumError, orbit_key
from .posets import FiniteSpace, GradedSheaf, GradedSpace

ONE = Fraction(1)


@dataclass
class BlockSupport:
    fab: tuple            # face keys
    fab_prime: tuple      # face keys
    transport: dict       # fab_prime key -> fab key
    d: int
    dab_prime: tuple      # symmetric difference of the forbidden sets

    def members(self):
        return set(self.fab) | set(self.fab_prime)

    def rep(self, face_key):
        return self.transport.get(face_key, face_key)


def support_sets(datum: SymmetricDatum, catalog, i, j) -> BlockSupport:
    """Support data of the block for catalog labels i, j."""
    la, lb = catalog.labels[i], catalog.labels[j]
    dpa, dpb = set(catalog.dprime(i)), set(catalog.dprime(j))
    lower = set(la.orbit) | set(lb.orbit)
    sym = (dpa - dpb) | (dpb - dpa)
    both = dpa & dpb
    fab, fprime, transport = [], [], {}
    for f in datum.faces():
        delta = set(f.orbit)
        if not lower <= delta:
            continue
        if not delta & (dpa | dpb):
            fab.append(f.key())
        elif not delta & sym and delta & both:
            fprime.append(f.key())
            transport[f.key()] = FacePoint(orbit=orbit_key(delta - both), j=f.j).key()
    return BlockSupport(
        fab=tuple(sorted(fab)),
        fab_prime=tuple(sorted(fprime)),
        transport=transport,
        d=len(set(la.orbit) - set(lb.orbit)),
        dab_prime=tuple(sorted(sym)),
    )


def validate_support_facts(space: FiniteSpace, datum: SymmetricDatum, sup: BlockSupport):
    """The three structural facts about supports; returns a problem list.

    (a) fab empty forces fab_prime empty; (b) fab ⊔ fab_prime is open in
    the closure of fab; (c) each fab_prime face has a unique transport
    in fab cut out by removing the shared forbidden divisors from its
    minimal open.
    """
    problems = []
    if not sup.fab and sup.fab_prime:
        problems.append("fab is empty but fab_prime is not")
    members = sup.members()
    closure = {p for f in sup.fab for p in space.points if space.leq(p, f)}
    for f in members:
        for p in set(space.minimal_open(f)) & closure:
            if p not in members:
                problems.append(f"support not open in the closure of fab at {f} via {p}")
    for f in sup.fab_prime:
        fp = FacePoint.from_key(f)
        # divisors removed by the transport; faces of U_f meeting them are cut out
        removed = set(fp.orbit) - set(FacePoint.from_key(sup.transport[f]).orbit)
        remaining = [p for p in space.minimal_open(f)
                     if not set(FacePoint.from_key(p).orbit) & removed]
        hits = [p for p in remaining if set(space.minimal_open(p)) == set(remaining)]
        if len(hits) != 1 or hits[0] != sup.transport[f] or hits[0] not in set(sup.fab):
            problems.append(f"transport of {f} is not the unique minimal open complement")
    return problems


class Block:
    """One block H^{ab}: support, graded sheaf, and stalk bases."""

    def __init__(self, datum, catalog, i, j, space, cutoff):
        self.i, self.j = i, j
        self.support = support_sets(datum, catalog, i, j)
        self.cutoff = cutoff
        la, lb = catalog.labels[i], catalog.labels[j]
        kdata = datum.kdata
        self._kparts = {}     # J -> GradedSpace of surviving K-monomials
        self._faces = {}      # face key -> FacePoint (members only)
        stalks = {}
        twod = 2 * self.support.d
        members = self.support.members()
        for key in sorted(members):
            f = FacePoint.from_key(key)
            self._faces[key] = f
            rep = FacePoint.from_key(self.support.rep(key))
            jkey = rep.j
            if jkey not in self._kparts:
                module = kdata.module(jkey)
                chi_a = kdata.char_at(jkey, la.char)
                chi_b = kdata.char_at(jkey, lb.char)
                self._kparts[jkey] = twisted_tensor(module, chi_a, chi_b, cutoff)
            kpart = self._kparts[jkey]
            basis = {}
            for kd, kms in (kpart.basis or {}).items():
                for pd in range(0, cutoff - twod - kd + 1, 2):
                    d = twod + kd + pd
                    for pm in monomials_of_degree(rep.orbit, pd // 2):
                        for km in kms:
                            basis.setdefault(d, []).append((pm, km))
            basis = {d: tuple(sorted(b)) for d, b in basis.items()}
            stalks[key] = GradedSpace(basis=basis)
        restrictions = {}
        for f1, f2 in space.covering_pairs():
            if f1 in members and f2 in members:
                restrictions[(f1, f2)] = self._restriction_map(datum, f1, f2, stalks)
        self.sheaf = GradedSheaf(space, stalks, restrictions)
        self.zero = all(not st.dims for st in stalks.values())

    def rep_point(self, key):
        return FacePoint.from_key(self.support.rep(key))

    def _restriction_map(self, datum, key1, key2, stalks):
        rep1, rep2 = self.rep_point(key1), self.rep_point(key2)
        keep = set(rep2.orbit)
        out = {}
        for labs in (stalks[key1].basis or {}).values():
            for pm, km in labs:
                if not set(v for v, _ in pm) <= keep:
                    out[(pm, km)] = ()
                    continue
                img = datum.kdata.apply_restriction(rep1.j, rep2.j, km)
                out[(pm, km)] = tuple(sorted(((pm, km2), c) for km2, c in img.items()))
        return out

    def stalk(self, key) -> GradedSpace:
        return self.sheaf.stalks.get(key, GradedSpace())


class HSheaf:
    """All blocks of H over the face space, with the twisted product."""

    def __init__(self, datum: SymmetricDatum, catalog, cutoff: int):
        self.datum = datum
        self.catalog = catalog
        self.cutoff = cutoff
        self.space = build_faces(datum)
        self.blocks = {}
        n = len(catalog)
        for i in range(n):
            for j in range(n):
                self.blocks[(i, j)] = Block(datum, catalog, i, j, self.space, cutoff)
        self._twists = {}

    def block(self, i, j) -> Block:
        return self.blocks[(i, j)]

    def stalk(self, i, j, face_key) -> GradedSpace:
        return self.blocks[(i, j)].stalk(face_key)

    def product_twist(self, a, b, c, face_key):
        """Twist monomial for composing (a,b) with (b,c) into (a,c) at a face.

        Returns the monomial (possibly 1) or None for the zero map; the
        triple must be alive at the face, i.e. the face lies in all
        three supports, whose transports then agree.
        """
        key = (a, b, c, face_key)
        if key in self._twists:
            return self._twists[key]
        sab, sbc, sac = (self.blocks[(a, b)].support, self.blocks[(b, c)].support,
                         self.blocks[(a, c)].support)
        members = sab.members(), sbc.members(), sac.members()
        if any(face_key not in m for m in members):
            tw = None
        else:
            reps = {sab.rep(face_key), sbc.rep(face_key), sac.rep(face_key)}
            if len(reps) != 1:
                raise DatumError("support transports disagree on a common face")
            rep = FacePoint.from_key(reps.pop())
            la = self.catalog.labels[a].orbit
            lb = self.catalog.labels[b].orbit
            lc = self.catalog.labels[c].orbit
            tw = twist_factor(rep.orbit, la, lb, lc)
        self._twists[key] = tw
        return tw

    def compose(self, a, b, c, face_key, xlab, ylab):
        """Stalk-level product of x ∈ H^{ab} and y ∈ H^{bc} at a face.

        Returns (label in H^{ac}, coefficient), None for the zero map, or
        the string "truncated" when the product escapes the cutoff.  The
        coefficient is always 1: the twist only contributes a monomial.
        """
        tw = self.product_twist(a, b, c, face_key)
        if tw is None:
            return None
        (pmx, kmx), (pmy, kmy) = xlab, ylab
        pm = mono_mul(mono_mul(pmx, pmy), tw)
        km = tuple(x + y for x, y in zip(kmx, kmy))
        blk = self.blocks[(a, c)]
        repj = FacePoint.from_key(blk.support.rep(face_key)).j
        mod = self.datum.kdata.module(repj)
        d = 2 * blk.support.d + mono_degree(pm) + sum(dd * e for dd, e in zip(mod.degrees, km))
        if d > self.cutoff:
            return "truncated"
        return ((pm, km), ONE)

    def label_degree(self, i, j, face_key, lab):
        pm, km = lab
        blk = self.blocks[(i, j)]
        repj = FacePoint.from_key(blk.support.rep(face_key)).j
        mod = self.datum.kdata.module(repj)
        return 2 * blk.support.d + mono_degree(pm) + sum(dd * e for dd, e in zip(mod.degrees, km))

    def multiply_sections(self, a, b, c, xvec, yvec):
        """Facewise product of section vectors of H^{ab} and H^{bc}.

        Vectors are sparse dicts over (face key, stalk label); the result
        is a vector over H^{ac} coordinates, or the string "truncated"
        when a facewise product escapes the cutoff.
        """
        by_face_x, by_face_y = {}, {}
        for (f, lab), cv in xvec.items():
            by_face_x.setdefault(f, []).append((lab, cv))
        for (f, lab), cv in yvec.items():
            by_face_y.setdefault(f, []).append((lab, cv))
        out = {}
        for f in sorted(set(by_face_x) & set(by_face_y)):
            for xlab, cx in by_face_x[f]:
                for ylab, cy in by_face_y[f]:
                    z = self.compose(a, b, c, f, xlab, ylab)
                    if z is None:
                        continue
                    if z == "truncated":
                        return "truncated"
                    lab, cz = z
                    key = (f, lab)
                    v = out.get(key, Fraction(0)) + cx * cy * cz
                    if v:
                        out[key] = v
                    else:
                        del out[key]
        return out


def build_H(datum: SymmetricDatum, catalog, cutoff: int) -> HSheaf:
    return HSheaf(datum, catalog, cutoff)


# ---------------------------------------------------------------------------
# structural checks used by the CLI battery and the tests


def check_vanishing_pattern(H: HSheaf):
    """Stalks vanish off fab ⊔ fab_prime, and fab stalks of a block with a
    surviving K-part are nonzero (the polynomial factor never dies)."""
    bad = []
    for (i, j), blk in H.blocks.items():
        members = blk.support.members()
        for key in H.space.points:
            st = blk.stalk(key)
            if key not in members and st.dims:
                bad.append((i, j, key, "stalk off the support"))
        if not blk.zero and H.datum.kdata.trivial:
            # with the default K-datum a nonzero block is nonzero on all of fab
            for key in blk.support.fab:
                if not blk.stalk(key).dims:
                    bad.append((i, j, key, "dead stalk on the support"))
    return bad


def check_transport_identity(H: HSheaf):
    """Restriction between a fab_prime face and its transport is the identity."""
    bad = []
    for (i, j), blk in H.blocks.items():
        for f in blk.support.fab_prime:
            t = blk.support.transport[f]
            if H.space.leq(f, t):
                m = blk.sheaf.restriction(f, t)
                for labs in (blk.stalk(f).basis or {}).values():
                    for lab in labs:
                        if m.get(lab) != ((lab, ONE),):
                            bad.append((i, j, f, t, lab))
    return bad


def check_diagonal_units(H: HSheaf):
    """Diagonal stalks contain the unit in degree 0; restrictions fix it;
    the unit acts as identity on every composable stalk basis element."""
    bad = []
    n = len(H.catalog)
    for a in range(n):
        blk = H.blocks[(a, a)]
        unit = None
        for key in sorted(blk.support.members()):
            st = blk.stalk(key)
            labs = (st.basis or {}).get(0, ())
            kml = None
            for pm, km in labs:
                if pm == () and not any(km):
                    kml = (pm, km)
            if kml is None:
                bad.append((a, key, "missing unit"))
            unit = kml
        for f1, f2 in H.space.covering_pairs():
            if f1 in blk.support.members() and f2 in blk.support.members():
                u1 = next(((pm, km) for pm, km in (blk.stalk(f1).basis or {}).get(0, ())
                           if pm == () and not any(km)), None)
                m = blk.sheaf.restriction(f1, f2)
                if u1 is not None and m.get(u1) is not None:
                    imgs = dict(m[u1])
                    u2 = next(((pm, km) for pm, km in (blk.stalk(f2).basis or {}).get(0, ())
                               if pm == () and not any(km)), None)
                    if u2 is not None and imgs != {u2: ONE}:
                        bad.append((a, f1, f2, "restriction does not fix the unit"))
    # unit acts as identity
    for (a, b), blk in H.blocks.items():
        for key in sorted(blk.support.members()):
            for d, labs in sorted((blk.stalk(key).basis or {}).items()):
                for lab in labs:
                    ua = ((), tuple(0 for _ in lab[1]))
                    left = H.compose(a, a, b, key, ua, lab)
                    right = H.compose(a, b, b, key, lab, ua)
                    if left != (lab, ONE) or right != (lab, ONE):
                        bad.append((a, b, key, lab, "unit law fails"))
    return bad


def check_restriction_product(H: HSheaf, max_degree=None):
    """Restriction commutes with the product on covering pairs."""
    cut = H.cutoff if max_degree is None else max_degree
    bad = []
    n = len(H.catalog)
    pairs = H.space.covering_pairs()
    for a in range(n):
        for b in range(n):
            for c in range(n):
                bab, bbc, bac = H.blocks[(a, b)], H.blocks[(b, c)], H.blocks[(a, c)]
                for f1, f2 in pairs:
                    if f1 not in bab.support.members() or f1 not in bbc.support.members():
                        continue
                    for d1, labsx in sorted((bab.stalk(f1).basis or {}).items()):
                        for d2, labsy in sorted((bbc.stalk(f1).basis or {}).items()):
                            if d1 + d2 > cut:
                                continue
                            for xl in labsx:
                                for yl in labsy:
                                    z = H.compose(a, b, c, f1, xl, yl)
                                    zr = {}
                                    if isinstance(z, tuple):
                                        zr = _apply(bac.sheaf, f1, f2, {z[0]: z[1]})
                                    xr = _apply(bab.sheaf, f1, f2, {xl: ONE})
                                    yr = _apply(bbc.sheaf, f1, f2, {yl: ONE})
                                    prod = {}
                                    for xl2, cx in xr.items():
                                        for yl2, cy in yr.items():
                                            z2 = H.compose(a, b, c, f2, xl2, yl2)
                                            if isinstance(z2, tuple):
                                                lab, cz = z2
                                                prod[lab] = prod.get(lab, Fraction(0)) + cx * cy * cz
                                    prod = {k: v for k, v in prod.items() if v}
                                    if z == "truncated":
                                        continue
                                    if prod != zr:
                                        bad.append((a, b, c, f1, f2, xl, yl))
    return bad


def _apply(sheaf, f1, f2, vec):
    return sheaf.apply(f1, f2, vec)


def check_face_local_associativity(H: HSheaf):
    """Exhaustive twist-cocycle form of associativity over all label
    quadruples and faces; covers every basis triple in every degree
    because stalk products are twist monomials times exponent addition."""
    bad = []
    n = len(H.catalog)
    for f in H.space.points:
        for a, b, c, d in itertools.product(range(n), repeat=4):
            if f not in H.blocks[(a, b)].support.members():
                continue
            if f not in H.blocks[(b, c)].support.members():
                continue
            if f not in H.blocks[(c, d)].support.members():
                continue
            # (x*y)*z path: twists for (a,b,c) then (a,c,d)
            left = _twist_chain(H, f, (a, b, c), (a, c, d))
            right = _twist_chain(H, f, (b, c, d), (a, b, d))
            if left != right:
                bad.append((f, a, b, c, d, left, right))
    return bad


def _twist_chain(H, f, trip1, trip2):
    t1 = H.product_twist(*trip1, f)
    if t1 is None:
        return None
    t2 = H.product_twist(*trip2, f)
    if t2 is None:
        return None
    return mono_mul(t1, t2)
