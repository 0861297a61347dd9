"""Global sections of H with the face-wise product: the extension algebra.

The algebra is computed blockwise as compatible families; the Čech path
over the full minimal-open cover is a second, independent route to the
same answer and is exposed as a verification report
(concentration_check), together with the vanishing report over all
G-stable opens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .faces import FacePoint, downward_closed_families, g_stable_open
from .hsheaf import HSheaf
from .isotropy import DatumError
from .linalg import Eliminator, Tag, solve_in_span
from .posets import cech_cohomology, global_sections

ONE = Fraction(1)


@dataclass
class BasisElement:
    index: int
    block: tuple      # (i, j) catalog indices
    degree: int
    vector: dict      # (face key, stalk label) -> Fraction
    name: str


class ExtAlgebra:
    """Graded associative unital algebra presented degreewise by basis
    and (lazily cached) multiplication table."""

    def __init__(self, H: HSheaf):
        self.H = H
        self.catalog = H.catalog
        self.cutoff = H.cutoff
        self.sections = {}
        self.basis = []
        self.by_block = {}
        self.truncated_pairs = 0
        self._table = {}
        self._coord = {}
        n = len(self.catalog)
        for i in range(n):
            for j in range(n):
                sec = global_sections(H.space, H.space.points, H.blocks[(i, j)].sheaf, H.cutoff)
                self.sections[(i, j)] = sec
                ids = []
                for d in sorted(sec.vectors):
                    for v in sec.vectors[d]:
                        idx = len(self.basis)
                        name = f"e{idx}"
                        self.basis.append(BasisElement(idx, (i, j), d, dict(v), name))
                        ids.append(idx)
                self.by_block[(i, j)] = tuple(ids)
        self.idempotents = {}
        for a in range(n):
            vec = self._unit_vector(a)
            coeffs = self.express((a, a), vec)
            if coeffs is None:
                raise DatumError("diagonal unit is not a global section")
            self.idempotents[a] = coeffs

    # -- coordinates

    def _elim(self, block, degree):
        key = (block, degree)
        if key not in self._coord:
            e = Eliminator()
            ids = [i for i in self.by_block[block] if self.basis[i].degree == degree]
            for t, i in enumerate(ids):
                v = dict(self.basis[i].vector)
                v[Tag(t)] = ONE
                e.add(v)
            self._coord[key] = (e, ids)
        return self._coord[key]

    def express(self, block, vector):
        """Coefficients {basis index: c} of a vector in the block basis, or None."""
        if not vector:
            return {}
        degs = {self.H.label_degree(block[0], block[1], f, lab) for (f, lab) in vector}
        if len(degs) != 1:
            raise DatumError("vector is not homogeneous")
        e, ids = self._elim(block, degs.pop())
        _, res = e.coordinates(dict(vector))
        out = {}
        for k, v in res.items():
            if not isinstance(k, Tag):
                return None
            if v:
                out[ids[k.idx]] = -v
        return out

    def _unit_vector(self, a):
        blk = self.H.blocks[(a, a)]
        vec = {}
        for key in sorted(blk.support.members()):
            st = blk.stalk(key)
            for pm, km in (st.basis or {}).get(0, ()):
                if pm == () and not any(km):
                    vec[(key, (pm, km))] = ONE
        return vec

    # -- products

    def multiply(self, x: int, y: int):
        """Structure constants of basis[x] * basis[y].

        Returns a dict {z index: coefficient}, {} for non-composable
        blocks or zero products, or the string "truncated" if the
        face-wise product escapes the cutoff.
        """
        key = (x, y)
        if key in self._table:
            return self._table[key]
        bx, by = self.basis[x], self.basis[y]
        (a, b), (b2, c) = bx.block, by.block
        if b != b2:
            out = {}
        elif bx.degree + by.degree > self.cutoff:
            self.truncated_pairs += 1
            out = "truncated"
        else:
            vec = self.H.multiply_sections(a, b, c, bx.vector, by.vector)
            if vec == "truncated":
                self.truncated_pairs += 1
                out = "truncated"
            else:
                coeffs = self.express((a, c), vec)
                if coeffs is None:
                    raise DatumError("product of sections is not a section")
                out = coeffs
        self._table[key] = out
        return out

    def unit_coeffs(self):
        """The unit of the algebra as {basis index: coefficient}."""
        out = {}
        for coeffs in self.idempotents.values():
            for k, v in coeffs.items():
                out[k] = out.get(k, Fraction(0)) + v
        return {k: v for k, v in out.items() if v}

    def act_by(self, coeffs, x: int):
        """Left action of an algebra element (basis combination) on basis[x]."""
        out = {}
        for e, ce in coeffs.items():
            prod = self.multiply(e, x)
            if prod == "truncated":
                return "truncated"
            for z, cz in prod.items():
                v = out.get(z, Fraction(0)) + ce * cz
                if v:
                    out[z] = v
                else:
                    del out[z]
        return out

    def block_hilbert(self, block, cutoff=None):
        return self.sections[block].hilbert(self.cutoff if cutoff is None else cutoff)

    def dims(self):
        out = {}
        for b in self.basis:
            out[b.degree] = out.get(b.degree, 0) + 1
        return out


def ext_algebra(H: HSheaf) -> ExtAlgebra:
    return ExtAlgebra(H)


@dataclass
class ExtModule:
    label: int
    elements: tuple          # basis indices of the column blocks (b, label)
    ext: ExtAlgebra

    def action(self, e: int, x: int):
        """Left action of algebra basis element e on module element x."""
        if x not in set(self.elements):
            raise DatumError("element is not in the module")
        return self.ext.multiply(e, x)


def ext_module(ext: ExtAlgebra, a: int) -> ExtModule:
    n = len(ext.catalog)
    if not 0 <= a < n:
        raise DatumError(f"unknown label index {a}")
    ids = []
    for b in range(n):
        ids.extend(ext.by_block[(b, a)])
    return ExtModule(label=a, elements=tuple(sorted(ids)), ext=ext)


# ---------------------------------------------------------------------------
# reports


@dataclass
class ReportEntry:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)


@dataclass
class Report:
    ok: bool
    entries: list

    def failures(self):
        return [e for e in self.entries if not e.ok]


def vanishing_report(H: HSheaf, cutoff=None) -> Report:
    """Čech cohomology of H' vanishes in positive degrees on every
    G-stable open, and the closed-face sections surject onto the
    punctured-star sections in the Mayer-Vietoris step."""
    cutoff = H.cutoff if cutoff is None else cutoff
    entries = []
    datum = H.datum
    for fam in downward_closed_families(datum):
        U = g_stable_open(datum, H.space, fam)
        famname = ",".join("+".join(s) if s else "-" for s in fam) or "(empty)"
        for (i, j), blk in sorted(H.blocks.items()):
            if blk.zero:
                continue
            hs = cech_cohomology(H.space, U, blk.sheaf, cutoff)
            nonzero = {p: h.dims for p, h in enumerate(hs) if p > 0 and h.dims}
            entries.append(ReportEntry(
                name=f"vanishing[{famname}][{i}:{j}]",
                ok=not nonzero,
                details={"open": famname, "block": [i, j], "higher": {str(k): v for k, v in nonzero.items()}},
            ))
        # Mayer-Vietoris step at each maximal nonempty orbit of the family
        for delta in fam:
            if any(set(delta) < set(other) for other in fam):
                continue
            if not delta:
                continue
            ok, detail = _mv_surjectivity(H, delta, fam, cutoff)
            entries.append(ReportEntry(
                name=f"mv-surjectivity[{famname}][{'+'.join(delta)}]",
                ok=ok, details=detail))
    return Report(ok=all(e.ok for e in entries), entries=entries)


def _mv_surjectivity(H: HSheaf, delta, family, cutoff):
    """The Mayer-Vietoris step of the vanishing argument, blockwise.

    A block only sees the part of the variety away from its forbidden
    divisors, so the induction family is restricted accordingly before
    peeling the orbit delta; sections over the punctured star must be
    hit by the closed-face stalk, and the punctured star itself carries
    no higher cohomology.
    """
    datum = H.datum
    cf = FacePoint(orbit=delta, j=tuple(sorted(datum.Jmap[delta]))).key()
    star = set(H.space.minimal_open(cf))
    detail = {"closed_face": cf}
    for (i, j), blk in sorted(H.blocks.items()):
        if blk.zero:
            continue
        forbidden = set(H.catalog.dprime(i)) | set(H.catalog.dprime(j))
        if set(delta) & forbidden:
            continue
        region = [s for s in family if not set(s) & forbidden and s != delta]
        w = set(g_stable_open(datum, H.space, region))
        uprime = tuple(sorted(star & w))
        if not uprime:
            continue
        hs = cech_cohomology(H.space, uprime, blk.sheaf, cutoff)
        if any(h.dims for h in hs[1:]):
            detail["block"] = [i, j]
            detail["higher"] = [h.dims for h in hs[1:]]
            return False, detail
        sec = global_sections(H.space, uprime, blk.sheaf, cutoff)
        st = blk.stalk(cf)
        for d in sec.dims:
            elim = Eliminator()
            rk = 0
            for lab in (st.basis or {}).get(d, ()):
                fam_vec = {}
                for q in uprime:
                    img = blk.sheaf.apply(cf, q, {lab: ONE})
                    for lab2, c in img.items():
                        fam_vec[(q, lab2)] = c
                if elim.add(fam_vec):
                    rk += 1
            if rk != sec.dim(d):
                detail["block"] = [i, j]
                detail["degree"] = d
                detail["intersection"] = list(uprime)
                return False, detail
    return True, detail


def concentration_check(H: HSheaf, ext: ExtAlgebra = None, cutoff=None, pair_cap=4000) -> Report:
    """Čech complex over the full minimal-open cover of the whole space:
    positive degrees vanish and H^0 matches the section algebra
    degreewise, as subspaces of the stalk product, and on structure
    constants (all composable pairs up to pair_cap, then a deterministic
    truncation of the pair list)."""
    cutoff = H.cutoff if cutoff is None else cutoff
    if ext is None:
        ext = ext_algebra(H)
    entries = []
    whole = H.space.points
    cech_bases = {}
    for (i, j), blk in sorted(H.blocks.items()):
        hs = cech_cohomology(H.space, whole, blk.sheaf, cutoff)
        higher = {p: h.dims for p, h in enumerate(hs) if p > 0 and h.dims}
        entries.append(ReportEntry(
            name=f"concentration[{i}:{j}]", ok=not higher,
            details={"block": [i, j], "higher": {str(k): v for k, v in higher.items()}}))
        sec = ext.sections[(i, j)]
        dims_match = hs[0].dims == dict(sec.dims)
        span_match = True
        vecs = getattr(hs[0], "h0_vectors", {})
        for d, vs in vecs.items():
            secv = list(sec.vectors.get(d, ()))
            for v in vs:
                if solve_in_span(secv, v) is None:
                    span_match = False
            for v in secv:
                if solve_in_span(list(vs), v) is None:
                    span_match = False
        entries.append(ReportEntry(
            name=f"dual-path[{i}:{j}]", ok=dims_match and span_match,
            details={"block": [i, j], "cech": {str(k): v for k, v in hs[0].dims.items()},
                     "sections": {str(k): v for k, v in sec.dims.items()}}))
        cech_bases[(i, j)] = vecs
    # structure constants along the Čech bases against the section table
    pairs_checked = 0
    ok_products = True
    n = len(H.catalog)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if pairs_checked >= pair_cap:
                    break
                for d1, vs1 in sorted(cech_bases[(a, b)].items()):
                    for d2, vs2 in sorted(cech_bases[(b, c)].items()):
                        if d1 + d2 > cutoff:
                            continue
                        for v1 in vs1:
                            for v2 in vs2:
                                if pairs_checked >= pair_cap:
                                    break
                                prod = H.multiply_sections(a, b, c, v1, v2)
                                if prod == "truncated":
                                    continue
                                pairs_checked += 1
                                c1 = ext.express((a, b), v1)
                                c2 = ext.express((b, c), v2)
                                want = {}
                                for e1, x1 in c1.items():
                                    for e2, x2 in c2.items():
                                        t = ext.multiply(e1, e2)
                                        if t == "truncated":
                                            continue
                                        for z, cz in t.items():
                                            want[z] = want.get(z, Fraction(0)) + x1 * x2 * cz
                                got = ext.express((a, c), prod)
                                want = {k: v for k, v in want.items() if v}
                                if got != want:
                                    ok_products = False
    entries.append(ReportEntry(
        name="dual-path-products", ok=ok_products,
        details={"pairs_checked": pairs_checked}))
    return Report(ok=all(e.ok for e in entries), entries=entries)
