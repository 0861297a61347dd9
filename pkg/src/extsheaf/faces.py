"""Face spaces of symmetric varieties and orbit spaces of toric varieties.

A face is a pair (Δ, J): Δ runs over the orbit set S (a downward-closed
family of divisor subsets) and J over supersets of Jmap(Δ) inside
{1..l}.  The closure relation is (Δ,J) <= (Δ',J') iff Δ' ⊆ Δ and
J ⊆ J', so the minimal open around (Δ,J) consists of the faces with
smaller orbit set and larger J.  Toric data is the l = 0 specialization
where every face is just its orbit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import TwoGroupModule, char_add, char_compose
from .isotropy import DatumError, IsotropyFamily, orbit_key
from .posets import FiniteSpace

ONE = Fraction(1)


@dataclass(frozen=True)
class FacePoint:
    orbit: tuple
    j: tuple

    def key(self):
        ob = "+".join(self.orbit) if self.orbit else "-"
        jj = "+".join(str(i) for i in self.j) if self.j else "-"
        return f"{ob}|{jj}"

    @staticmethod
    def from_key(key):
        ob, jj = key.split("|")
        orbit = () if ob == "-" else tuple(ob.split("+"))
        j = () if jj == "-" else tuple(int(x) for x in jj.split("+"))
        return FacePoint(orbit=orbit, j=j)


def jkey(j):
    return "+".join(str(i) for i in sorted(j)) if j else "-"


class KData:
    """Per-J invariant algebras with their component-group actions.

    Entries, one per subset J of {1..l}:
      tau_rank: rank of tau_J over F2;
      to_open:  rows mapping the tau_J basis into D (the open-orbit
                component group), used to pull label characters back;
      generators: (degree, sign-bits) pairs defining a free graded
                commutative algebra with a diagonal tau_J action;
      restrictions: for covering pairs J ⊂ J' a group map tau_{J'} ->
                tau_J (rows) and an image polynomial per generator.

    The default (absent) K-datum takes tau_J = D, to_open = identity and
    the scalar algebra everywhere; this is exactly the toric
    specialization of the stalk formula.
    """

    def __init__(self, m, l, entries=None):
        self.m = m
        self.l = l
        self.trivial = entries is None
        self.entries = {}
        js = [tuple(sorted(c)) for k in range(l + 1) for c in itertools.combinations(range(1, l + 1), k)]
        if entries is None:
            ident = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
            for j in js:
                self.entries[j] = {
                    "tau_rank": m,
                    "to_open": ident,
                    "generators": (),
                }
            self._restrictions = {}
            for j in js:
                for jp in js:
                    if set(j) < set(jp) and len(jp) == len(j) + 1:
                        self._restrictions[(j, jp)] = {"tau_map": ident, "gens": ()}
        else:
            for j in js:
                if jkey(j) not in entries:
                    raise DatumError(f"K-datum entry missing for J = {jkey(j)}")
                e = entries[jkey(j)]
                gens = tuple((int(g["degree"]), tuple(int(b) for b in g["signs"])) for g in e.get("generators", ()))
                rank = int(e["tau_rank"])
                to_open = tuple(tuple(int(b) for b in row) for row in e["to_open"])
                if len(to_open) != rank or any(len(r) != m for r in to_open):
                    raise DatumError(f"to_open at J = {jkey(j)} must be a {rank} x {m} bit matrix")
                if any(len(s) != rank for _, s in gens):
                    raise DatumError(f"generator signs at J = {jkey(j)} must have length {rank}")
                if any(d <= 0 or d % 2 for d, _ in gens):
                    raise DatumError("K-datum generator degrees must be positive even integers")
                self.entries[j] = {"tau_rank": rank, "to_open": to_open, "generators": gens}
            self._restrictions = {}
            rest = entries.get("restrictions", {})
            for j in js:
                for jp in js:
                    if set(j) < set(jp) and len(jp) == len(j) + 1:
                        key = f"{jkey(j)}>{jkey(jp)}"
                        if key not in rest:
                            raise DatumError(f"K-datum restriction missing for {key}")
                        r = rest[key]
                        tau_map = tuple(tuple(int(b) for b in row) for row in r["tau_map"])
                        gens = tuple(
                            tuple((tuple(int(e) for e in exps), Fraction(str(c))) for c, exps in poly)
                            for poly in r.get("gens", ()))
                        self._restrictions[(j, jp)] = {"tau_map": tau_map, "gens": gens}
            self._validate()
        self._module_cache = {}
        self._chain_cache = {}

    def module(self, j) -> TwoGroupModule:
        j = tuple(sorted(j))
        if j not in self._module_cache:
            e = self.entries[j]
            degs = tuple(d for d, _ in e["generators"])
            signs = tuple(s for _, s in e["generators"])
            self._module_cache[j] = TwoGroupModule(rank=e["tau_rank"], degrees=degs, signs=signs)
        return self._module_cache[j]

    def char_at(self, j, rho):
        """Character of tau_J induced from a character of D via to_open."""
        return char_compose(rho, self.entries[tuple(sorted(j))]["to_open"])

    def restriction_data(self, j, jp):
        """Composite (tau_map, generator image polynomials) for J ⊆ J'."""
        j, jp = tuple(sorted(j)), tuple(sorted(jp))
        if j == jp:
            e = self.entries[j]
            ident = tuple(tuple(1 if a == b else 0 for b in range(e["tau_rank"])) for a in range(e["tau_rank"]))
            gens = tuple(((tuple(1 if a == b else 0 for b in range(len(e["generators"]))), ONE),)
                         for a in range(len(e["generators"])))
            return {"tau_map": ident, "gens": gens}
        key = (j, jp)
        if key in self._chain_cache:
            mid = None
        else:
            mid = tuple(sorted(set(j) | {min(set(jp) - set(j))}))
            step = self._restrictions[(j, mid)]
            rest = self.restriction_data(mid, jp)
            self._chain_cache[key] = self._compose(step, rest, len(self.entries[jp]["generators"]))
        return self._chain_cache[key]

    def _compose(self, first, second, n_out):
        # group maps compose tau_{J'} -> tau_mid -> tau_J
        tau = tuple(_f2_matmul_row(row, first["tau_map"]) for row in second["tau_map"])
        gens = []
        for poly in first["gens"]:  # image of a J-generator in mid-generators
            acc = {}
            for exps, coeff in poly:
                prod = _poly_one(n_out)
                for gi, e in enumerate(exps):
                    for _ in range(e):
                        prod = _poly_mul(prod, dict(second["gens"][gi]))
                for k, v in prod.items():
                    acc[k] = acc.get(k, Fraction(0)) + coeff * v
            gens.append(tuple(sorted((k, v) for k, v in acc.items() if v)))
        return {"tau_map": tau, "gens": tuple(gens)}

    def apply_restriction(self, j, jp, exps):
        """Image of the monomial with the given exponents under J -> J'."""
        data = self.restriction_data(j, jp)
        prod = _poly_one(len(self.entries[tuple(sorted(jp))]["generators"]))
        for gi, e in enumerate(exps):
            for _ in range(e):
                prod = _poly_mul(prod, dict(data["gens"][gi]))
        return {k: v for k, v in prod.items() if v}

    def _validate(self):
        for (j, jp), r in self._restrictions.items():
            ej, ejp = self.entries[j], self.entries[jp]
            if len(r["tau_map"]) != ejp["tau_rank"] or any(len(row) != ej["tau_rank"] for row in r["tau_map"]):
                raise DatumError(f"tau_map for {jkey(j)}>{jkey(jp)} has the wrong shape")
            # t-compatibility: to_open_{J'} = tau_map . to_open_J
            for row, target in zip(r["tau_map"], ejp["to_open"]):
                img = _f2_matmul_row(row, ej["to_open"])
                if img != tuple(target):
                    raise DatumError(f"to_open maps for {jkey(j)}>{jkey(jp)} are incompatible")
            if len(r["gens"]) != len(ej["generators"]):
                raise DatumError(f"restriction {jkey(j)}>{jkey(jp)} must cover every generator")
            modp = TwoGroupModule(
                rank=ejp["tau_rank"],
                degrees=tuple(d for d, _ in ejp["generators"]),
                signs=tuple(s for _, s in ejp["generators"]))
            for (deg, sign), poly in zip(ej["generators"], r["gens"]):
                pulled = char_compose(sign, r["tau_map"])
                for exps, coeff in poly:
                    if len(exps) != len(ejp["generators"]):
                        raise DatumError("restriction image has the wrong number of exponents")
                    d2 = sum(d * e for (d, _), e in zip(ejp["generators"], exps))
                    if d2 != deg:
                        raise DatumError(f"restriction {jkey(j)}>{jkey(jp)} does not preserve degree")
                    if modp.monomial_character(exps) != pulled:
                        raise DatumError(f"restriction {jkey(j)}>{jkey(jp)} is not equivariant")
        # diamond path-independence
        js = sorted(self.entries)
        for j in js:
            for add in itertools.combinations(sorted(set(range(1, self.l + 1)) - set(j)), 2):
                jp = tuple(sorted(set(j) | set(add)))
                paths = []
                for x in add:
                    mid = tuple(sorted(set(j) | {x}))
                    a = self._restrictions[(j, mid)]
                    b = self._restrictions[(mid, jp)]
                    paths.append(self._compose(a, b, j, mid, jp))
                if paths[0] != paths[1]:
                    raise DatumError(f"K-datum restrictions around {jkey(j)}..{jkey(jp)} do not commute")


def _f2_matmul_row(row, matrix_rows):
    """Image of a bit row under the map sending basis i to matrix_rows[i]."""
    width = len(matrix_rows[0]) if matrix_rows else 0
    out = tuple(0 for _ in range(width))
    for bit, mrow in zip(row, matrix_rows):
        if bit:
            out = char_add(out, mrow)
    return out


def _poly_one(nvars):
    return {tuple(0 for _ in range(nvars)): ONE}


def _poly_mul(p, q):
    out = {}
    for ka, va in p.items():
        for kb, vb in q.items():
            k = tuple(a + b for a, b in zip(ka, kb))
            out[k] = out.get(k, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


@dataclass
class SymmetricDatum:
    """Combinatorial input: divisors, orbit set, Jmap, isotropy, K-datum."""

    V: tuple
    S: tuple
    l: int
    Jmap: dict
    isotropy: IsotropyFamily
    kdata: KData
    mode: str = "symmetric"

    def __post_init__(self):
        self.V = tuple(sorted(self.V))
        if any(("|" in v or "+" in v) for v in self.V):
            raise DatumError("divisor names must not contain '|' or '+'")
        self.S = tuple(sorted(orbit_key(s) for s in self.S))
        sset = set(self.S)
        if len(sset) != len(self.S):
            raise DatumError("duplicate orbits in S")
        if () not in sset:
            raise DatumError("S must contain the empty orbit")
        for s in self.S:
            if not set(s) <= set(self.V):
                raise DatumError(f"orbit {s} uses unknown divisors")
            for k in range(len(s) + 1):
                for sub in itertools.combinations(s, k):
                    if tuple(sub) not in sset:
                        raise DatumError(f"S is not downward closed: {sub} missing under {s}")
        self.Jmap = {orbit_key(k): frozenset(int(x) for x in v) for k, v in self.Jmap.items()}
        if set(self.Jmap) != sset:
            raise DatumError("Jmap must be defined exactly on S")
        if self.Jmap[()]:
            raise DatumError("Jmap(∅) must be empty")
        for s in self.S:
            if not self.Jmap[s] <= set(range(1, self.l + 1)):
                raise DatumError(f"Jmap({s}) escapes 1..l")
            for t in self.S:
                if set(t) <= set(s) and not self.Jmap[t] <= self.Jmap[s]:
                    raise DatumError(f"Jmap is not monotone between {t} and {s}")
        if set(self.isotropy.orbits) != sset:
            raise DatumError("isotropy family must be indexed exactly by S")
        if self.isotropy.mode != self.mode:
            raise DatumError("isotropy family mode does not match the datum mode")
        if self.kdata.m != self.isotropy.m or self.kdata.l != self.l:
            raise DatumError("K-datum shape does not match the datum")

    def faces(self):
        out = []
        full = set(range(1, self.l + 1))
        for s in self.S:
            base = self.Jmap[s]
            extra = sorted(full - base)
            for k in range(len(extra) + 1):
                for add in itertools.combinations(extra, k):
                    out.append(FacePoint(orbit=s, j=tuple(sorted(base | set(add)))))
        return sorted(out, key=lambda f: (f.orbit, f.j))


def build_faces(datum: SymmetricDatum) -> FiniteSpace:
    """The face space: points (Δ,J), with (Δ,J) <= (Δ',J') iff Δ' ⊆ Δ and J ⊆ J'."""
    faces = datum.faces()
    keys = {f: f.key() for f in faces}
    leq = []
    for f in faces:
        for g in faces:
            if f != g and set(g.orbit) <= set(f.orbit) and set(f.j) <= set(g.j):
                leq.append((keys[f], keys[g]))
    return FiniteSpace([keys[f] for f in faces], leq)


def orbit_space(datum: SymmetricDatum) -> FiniteSpace:
    """Toric specialization: the orbit poset (no J direction)."""
    if datum.l != 0:
        raise DatumError("orbit_space expects toric-mode data (l = 0)")
    return build_faces(datum)


def closed_face(datum: SymmetricDatum, orbit) -> FacePoint:
    key = orbit_key(orbit)
    if key not in set(datum.S):
        raise DatumError(f"{key} is not an orbit")
    return FacePoint(orbit=key, j=tuple(sorted(datum.Jmap[key])))


def g_stable_open(datum: SymmetricDatum, space: FiniteSpace, sprime):
    """Faces over a downward-closed subfamily of S, as a sorted key tuple."""
    sp = {orbit_key(s) for s in sprime}
    if not sp <= set(datum.S):
        raise DatumError("S' must be a subset of S")
    for s in sp:
        for k in range(len(s)):
            for sub in itertools.combinations(s, k):
                if tuple(sub) not in sp:
                    raise DatumError(f"S' is not downward closed at {s}")
    out = [f.key() for f in datum.faces() if f.orbit in sp]
    return tuple(sorted(out))


def downward_closed_families(datum: SymmetricDatum):
    """All downward-closed subfamilies of S (the G-stable opens), sorted."""
    out = []
    ss = list(datum.S)
    for mask in range(1 << len(ss)):
        fam = {ss[i] for i in range(len(ss)) if mask >> i & 1}
        if all(tuple(sub) in fam for s in fam for k in range(len(s)) for sub in itertools.combinations(s, k)):
            out.append(tuple(sorted(fam)))
    return sorted(out)
