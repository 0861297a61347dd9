"""Finite T0 spaces as posets, graded sheaves on them, sections and Čech cohomology.

A finite T0 space is encoded by its specialization order: ``i <= j``
means the point i lies in the closure of {j}, so the minimal open set
around i is U_i = {j : i <= j}.  A set O is open iff U_i is contained in
O for every i in O.  Sheaves of graded Q-vector spaces are given by
their stalks (= sections over minimal opens) and restriction maps along
the order; sections over any open are compatible families.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Eliminator, Tag, kernel_basis, rank as sparse_rank

ONE = Fraction(1)


class SpaceError(ValueError):
    """Raised for malformed finite-space data or non-open query sets."""


# ---------------------------------------------------------------------------
# finite spaces


class FiniteSpace:
    """Finite poset viewed as a T0 topological space.

    points: iterable of hashable, mutually comparable point ids.
    leq: iterable of pairs (i, j) with i in closure({j}).  Reflexivity is
    added automatically; transitivity and antisymmetry are required.
    """

    def __init__(self, points, leq):
        self.points = tuple(sorted(points))
        pset = set(self.points)
        if len(pset) != len(self.points):
            raise SpaceError("duplicate point ids")
        up = {p: {p} for p in self.points}
        for i, j in leq:
            if i not in pset or j not in pset:
                raise SpaceError(f"leq pair ({i!r}, {j!r}) uses unknown points")
            up[i].add(j)
        for i in self.points:
            for k in up[i]:
                if not up[k] <= up[i]:
                    raise SpaceError(f"leq is not transitive at ({i!r}, {k!r})")
        for i in self.points:
            for j in up[i]:
                if i != j and i in up[j]:
                    raise SpaceError(f"antisymmetry fails on ({i!r}, {j!r})")
        self._up = {p: frozenset(s) for p, s in up.items()}

    def leq(self, i, j):
        return j in self._up[i]

    def minimal_open(self, i):
        """The smallest open set containing i, as a sorted tuple."""
        if i not in self._up:
            raise SpaceError(f"unknown point id {i!r}")
        return tuple(sorted(self._up[i]))

    def is_open(self, pts):
        s = set(pts)
        if not s <= set(self.points):
            raise SpaceError("set contains unknown points")
        return all(self._up[i] <= s for i in s)

    def comparable_pairs(self, within=None):
        """All strict pairs (i, j) with i <= j, optionally inside a subset."""
        dom = sorted(self.points if within is None else within)
        dset = set(dom)
        return [(i, j) for i in dom for j in sorted(self._up[i]) if j != i and j in dset]

    def covering_pairs(self, within=None):
        """Hasse edges (i, j): i < j with nothing strictly between."""
        dom = set(self.points if within is None else within)
        out = []
        for i in sorted(dom):
            ups = [j for j in self._up[i] if j != i and j in dom]
            for j in sorted(ups):
                if not any(k != i and k != j and self.leq(i, k) and self.leq(k, j) for k in ups):
                    out.append((i, j))
        return out


def minimal_open(space: FiniteSpace, i):
    return space.minimal_open(i)


@dataclass
class IntersectionReport:
    ok: bool
    violations: list = field(default_factory=list)
    empty_pairs: int = 0
    checked_pairs: int = 0


def validate_intersection_axiom(space: FiniteSpace) -> IntersectionReport:
    """Check that U_i ∩ U_j is empty or equals U_k for a unique point k."""
    rep = IntersectionReport(ok=True)
    opens = {p: set(space.minimal_open(p)) for p in space.points}
    for i, j in itertools.combinations(space.points, 2):
        rep.checked_pairs += 1
        inter = opens[i] & opens[j]
        if not inter:
            rep.empty_pairs += 1
            continue
        hits = [k for k in inter if opens[k] == inter]
        if len(hits) != 1:
            rep.ok = False
            rep.violations.append({"pair": [i, j], "intersection": sorted(inter), "minima": sorted(hits)})
    return rep


# ---------------------------------------------------------------------------
# graded spaces and sheaves


class GradedSpace:
    """Finite-dimensional space per integer degree, with optional basis labels."""

    def __init__(self, dims=None, basis=None):
        if basis is not None:
            self.basis = {d: tuple(b) for d, b in basis.items() if b}
            dims = {d: len(b) for d, b in self.basis.items()}
        else:
            self.basis = None
        dims = {d: n for d, n in (dims or {}).items() if n}
        if any(n < 0 for n in dims.values()):
            raise ValueError("negative dimension")
        self.dims = dims

    def dim(self, d):
        return self.dims.get(d, 0)

    def degrees(self):
        return sorted(self.dims)

    def hilbert(self, cutoff):
        return [self.dim(d) for d in range(cutoff + 1)]

    def total_dim(self, cutoff=None):
        return sum(n for d, n in self.dims.items() if cutoff is None or d <= cutoff)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __repr__(self):
        return f"GradedSpace({self.dims})"


class GradedSheaf:
    """Sheaf of graded vector spaces on a FiniteSpace.

    stalks: point -> GradedSpace with basis labels (hashable, unique per
    stalk).  restrictions: (i, j) -> {source_label: ((target_label,
    Fraction), ...)} for i < j; at least the covering pairs out of every
    point with a nonzero stalk must be present, the rest are composed.
    """

    def __init__(self, space: FiniteSpace, stalks, restrictions):
        self.space = space
        self.stalks = dict(stalks)
        for p in space.points:
            self.stalks.setdefault(p, GradedSpace(basis={}))
        self._rest = {}
        for (i, j), m in restrictions.items():
            if i == j or not space.leq(i, j):
                raise SpaceError(f"restriction on non-comparable pair ({i!r}, {j!r})")
            self._rest[(i, j)] = {s: tuple(t) for s, t in m.items()}
        self._degree_of = {}
        for p, st in self.stalks.items():
            if st.basis is None:
                raise SpaceError("sheaf stalks need explicit bases")
            for d, labs in st.basis.items():
                for lab in labs:
                    self._degree_of[(p, lab)] = d

    def degree(self, point, label):
        return self._degree_of[(point, label)]

    def min_degree(self):
        degs = [d for st in self.stalks.values() for d in st.dims]
        return min(degs) if degs else None

    def restriction(self, i, j):
        """Restriction map stalk(i) -> stalk(j) for i <= j, as a label map."""
        if i == j:
            return {lab: ((lab, ONE),) for labs in self.stalks[i].basis.values() for lab in labs}
        key = (i, j)
        if key in self._rest:
            return self._rest[key]
        if not self.space.leq(i, j):
            raise SpaceError(f"({i!r}, {j!r}) not comparable")
        if self.stalks[i].total_dim() == 0 or self.stalks[j].total_dim() == 0:
            self._rest[key] = {}
            return {}
        for k in sorted(self.space.minimal_open(i)):
            if k not in (i, j) and self.space.leq(k, j) and (i, k) in self._rest:
                comp = _compose(self._rest[(i, k)], self.restriction(k, j))
                self._rest[key] = comp
                return comp
        raise SpaceError(f"no restriction data from {i!r} towards {j!r}")

    def apply(self, i, j, vec):
        """Apply restriction to a sparse stalk vector {label: coeff}."""
        m = self.restriction(i, j)
        out = {}
        for s, c in vec.items():
            for t, c2 in m.get(s, ()):
                v = out.get(t, Fraction(0)) + c * c2
                if v:
                    out[t] = v
                else:
                    del out[t]
        return out

    def validate_functoriality(self):
        """Check the chain-composition law on all comparable pairs; returns problems."""
        problems = []
        for i, j in self.space.comparable_pairs():
            direct = self.restriction(i, j)
            for k in self.space.minimal_open(i):
                if k in (i, j) or not self.space.leq(k, j):
                    continue
                via = _compose(self.restriction(i, k), self.restriction(k, j))
                srcs = {lab for labs in self.stalks[i].basis.values() for lab in labs}
                for s in srcs:
                    left = {t: c for t, c in via.get(s, ()) if c}
                    right = {t: c for t, c in direct.get(s, ()) if c}
                    if left != right:
                        problems.append((i, k, j, s))
        return problems


def _compose(first, second):
    out = {}
    for s, terms in first.items():
        acc = {}
        for mid, c in terms:
            for t, c2 in second.get(mid, ()):
                acc[t] = acc.get(t, Fraction(0)) + c * c2
        out[s] = tuple(sorted(((t, c) for t, c in acc.items() if c), key=lambda kv: repr(kv[0])))
    return out


# ---------------------------------------------------------------------------
# sections


class SectionSpace(GradedSpace):
    """Sections over an open set with explicit basis vectors.

    vectors[d] is a tuple of sparse dicts over (point, label) columns,
    echelonized against the canonical column order.
    """

    def __init__(self, vectors_by_degree, columns_by_degree):
        self.vectors = {d: tuple(vs) for d, vs in vectors_by_degree.items() if vs}
        self.columns = columns_by_degree
        super().__init__(basis={d: tuple(min(v) for v in vs) for d, vs in self.vectors.items()})


def _section_columns(U, sheaf, cutoff):
    cols = {}
    for p in sorted(U):
        for d, labs in sheaf.stalks[p].basis.items():
            if d <= cutoff:
                cols.setdefault(d, []).extend((p, lab) for lab in labs)
    for d in cols:
        cols[d].sort()
    return cols


def _check_cutoff(sheaf, cutoff):
    lo = sheaf.min_degree()
    if lo is not None and cutoff < lo:
        raise SpaceError(f"cutoff {cutoff} below minimal occupied degree {lo}")


def global_sections(space: FiniteSpace, U, sheaf: GradedSheaf, cutoff) -> SectionSpace:
    """Compatible families (s_i) with restriction(i,j)(s_i) = s_j, degreewise.

    Constraints are imposed incrementally along the covering pairs of U;
    functoriality makes the remaining comparable pairs redundant.  (The
    brute-force oracle in oracles.py instead assembles every comparable
    pair into one system with its own elimination.)
    """
    U = tuple(sorted(U))
    if not space.is_open(U):
        raise SpaceError("global_sections needs an open set")
    _check_cutoff(sheaf, cutoff)
    cols = _section_columns(U, sheaf, cutoff)
    edges = space.covering_pairs(within=U)
    vectors = {}
    for d in sorted(cols):
        elim = Eliminator()
        for i, j in edges:
            m = sheaf.restriction(i, j)
            rows = {t: {(j, t): -ONE} for t in sheaf.stalks[j].basis.get(d, ())}
            for s in sheaf.stalks[i].basis.get(d, ()):
                for t, c in m.get(s, ()):
                    if sheaf.degree(j, t) != d:
                        raise SpaceError("restriction map is not degree-preserving")
                    row = rows[t]
                    row[(i, s)] = row.get((i, s), Fraction(0)) + c
            for t in sorted(rows, key=repr):
                row = {k: v for k, v in rows[t].items() if v}
                if row:
                    elim.add(row)
        vectors[d] = kernel_basis(list(elim.pivots.values()), cols[d])
    return SectionSpace(vectors, cols)


# ---------------------------------------------------------------------------
# Čech cohomology over the full minimal-open cover


class _Gamma:
    """Sections over an intersection of minimal opens, with coordinates.

    Fast path: the open is U_m for a unique minimum point m and the
    coordinates are the stalk labels at m (sections over U_m are exactly
    the stalk).  General path (posets violating the intersection axiom):
    an echelonized basis of compatible families.
    """

    def __init__(self, space, sheaf, opens, cutoff):
        self.open = opens
        pts = set(opens)
        minima = [p for p in opens if pts <= set(space.minimal_open(p))]
        if minima:
            m = minima[0]
            self.min_point = m
            self.cols = {d: [(m, lab) for lab in sheaf.stalks[m].basis.get(d, ())]
                         for d in sheaf.stalks[m].dims if d <= cutoff}
        else:
            self.min_point = None
            self.sec = global_sections(space, opens, sheaf, cutoff)
            self.cols = {d: list(range(len(self.sec.vectors.get(d, ())))) for d in self.sec.dims}

    def dim(self, d):
        return len(self.cols.get(d, ()))

    def family(self, d, col_index):
        """The compatible family behind one coordinate."""
        if self.min_point is not None:
            return {self.cols[d][col_index]: ONE}
        return dict(self.sec.vectors[d][col_index])

    def express(self, d, family):
        """Coordinates of a compatible family on this open."""
        if self.min_point is not None:
            m = self.min_point
            return {(m, lab): c for (p, lab), c in family.items() if p == m and c}
        elim = Eliminator()
        for i, v in enumerate(self.sec.vectors.get(d, ())):
            tagged = dict(v)
            tagged[Tag(i)] = ONE
            elim.add(tagged)
        _, res = elim.coordinates(dict(family))
        out = {}
        for k, v in res.items():
            if not isinstance(k, Tag):
                raise SpaceError("family is not a section over the intersection")
            if v:
                out[k.idx] = -v
        return out


def _restrict_family(space, sheaf, family, dst_open):
    """Restrict a compatible family (given by its nonzero seeds) to a smaller open."""
    by_point = {}
    for (p, lab), c in family.items():
        by_point.setdefault(p, {})[lab] = c
    out = {}
    for q in sorted(dst_open):
        if q in by_point:
            vec = by_point[q]
        else:
            donors = sorted(p for p in by_point if space.leq(p, q))
            vec = sheaf.apply(donors[0], q, by_point[donors[0]]) if donors else {}
        for lab, c in vec.items():
            if c:
                out[(q, lab)] = c
    return out


def cech_cohomology(space: FiniteSpace, U, sheaf: GradedSheaf, cutoff):
    """Ordered Čech cohomology of sheaf over U for the cover {U_i : i in U}.

    Terms are sections over the intersections U_{i_0} ∩ ... ∩ U_{i_r},
    i_0 < ... < i_r in the ambient point order, with the alternating
    face differential (da)_{i_0..i_{r+1}} = sum_k (-1)^k a_{.. without
    i_k ..}.  Returns one GradedSpace per Čech degree; the p = 0 entry
    additionally carries the kernel families on attribute h0_vectors.
    """
    U = tuple(sorted(U))
    if not space.is_open(U):
        raise SpaceError("cech_cohomology needs an open set")
    _check_cutoff(sheaf, cutoff)
    degrees = sorted({d for p in U for d in sheaf.stalks[p].dims if d <= cutoff})
    if not U or not degrees:
        out = GradedSpace()
        out.h0_vectors = {}
        return [out]

    opens = {p: frozenset(space.minimal_open(p)) for p in U}
    gammas = {}

    def gamma(chain):
        inter = frozenset.intersection(*(opens[p] for p in chain))
        if inter not in gammas:
            gammas[inter] = _Gamma(space, sheaf, tuple(sorted(inter)), cutoff) if inter else None
        return gammas[inter]

    chains_by_level = []
    for r in range(len(U)):
        chains = []
        for c in itertools.combinations(U, r + 1):
            g = gamma(c)
            if g is not None and any(g.dim(d) for d in degrees):
                chains.append((c, g))
        chains_by_level.append(chains)

    ranks = {}      # (r, d) -> rank of d^r : C^r -> C^{r+1}
    cdims = {}      # (r, d) -> dim C^r_d
    kernel0 = {}

    for r, chains in enumerate(chains_by_level):
        index = dict(chains)
        for d in degrees:
            cdims[(r, d)] = sum(g.dim(d) for _, g in chains)
        nxt = chains_by_level[r + 1] if r + 1 < len(chains_by_level) else []
        rows_by_degree = {d: {} for d in degrees}
        for tchain, tg in nxt:
            for k in range(len(tchain)):
                schain = tchain[:k] + tchain[k + 1:]
                sg = index.get(schain)
                if sg is None:
                    continue
                sign = ONE if k % 2 == 0 else -ONE
                for d in degrees:
                    if not sg.dim(d) or not tg.dim(d):
                        continue
                    for ci in range(sg.dim(d)):
                        fam = _restrict_family(space, sheaf, sg.family(d, ci), tg.open)
                        for tcol, cval in tg.express(d, fam).items():
                            key = (tchain, tcol)
                            row = rows_by_degree[d].setdefault(key, {})
                            row[(schain, ci if sg.min_point is None else sg.cols[d][ci])] = \
                                row.get((schain, ci if sg.min_point is None else sg.cols[d][ci]), Fraction(0)) + sign * cval
                    # column key: coordinate index for solved Γ, stalk label for fast path
        for d in degrees:
            rows = [r_ for _, r_ in sorted(rows_by_degree[d].items(), key=lambda kv: repr(kv[0])) if r_]
            if r == 0:
                cols0 = [(c, col) for c, g in chains for col in g.cols.get(d, ())]
                kernel0[d] = kernel_basis(rows, cols0)
                ranks[(r, d)] = len(cols0) - len(kernel0[d])
            else:
                ranks[(r, d)] = sparse_rank(rows)

    out = []
    for r, chains in enumerate(chains_by_level):
        dims = {}
        for d in degrees:
            n = cdims.get((r, d), 0) - ranks.get((r, d), 0) - ranks.get((r - 1, d), 0)
            if n:
                dims[d] = n
        gs = GradedSpace(dims=dims)
        if r == 0:
            gs.h0_vectors = {d: tuple(_flatten_chain_vec(v) for v in kernel0.get(d, ()))
                             for d in degrees}
        out.append(gs)
    while len(out) > 1 and not out[-1].dims:
        out.pop()
    return out


def _flatten_chain_vec(vec):
    """Rewrite a C^0 kernel vector over ((point,), (point, label)) columns
    to plain stalk coordinates (point, label)."""
    out = {}
    for (chain, coord), c in vec.items():
        out[coord] = out.get(coord, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}
