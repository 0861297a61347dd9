"""The full invariant and oracle battery behind `check-all`.

Each check yields a ReportEntry; the battery is deterministic given the
seed, and every failure carries a counterexample payload in details.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .algebra import twisted_tensor, twisted_tensor_relations
from .extalg import ExtAlgebra, Report, ReportEntry, concentration_check, vanishing_report
from .faces import FacePoint
from .hsheaf import (
    HSheaf,
    check_diagonal_units,
    check_face_local_associativity,
    check_restriction_product,
    check_transport_identity,
    check_vanishing_pattern,
    support_sets,
    validate_support_facts,
)
from .oracles import brute_sections, identity_fuzz, pp_hilbert, quadrant_check
from .posets import validate_intersection_axiom

ONE = Fraction(1)


def _entry(name, ok, **details):
    return ReportEntry(name=name, ok=bool(ok), details=details)


def poset_axiom_checks(H: HSheaf):
    sp = H.space
    out = []
    rep = validate_intersection_axiom(sp)
    out.append(_entry("poset.intersection-axiom", rep.ok, violations=rep.violations[:3]))
    bad = []
    for a in sp.points:
        fa = FacePoint.from_key(a)
        for b in sp.points:
            fb = FacePoint.from_key(b)
            want = set(fb.orbit) <= set(fa.orbit) and set(fa.j) <= set(fb.j)
            if sp.leq(a, b) != want:
                bad.append([a, b])
    out.append(_entry("poset.closure-biconditional", not bad, counterexamples=bad[:3]))
    bad = []
    for a, b in itertools.combinations(sp.points, 2):
        fa, fb = FacePoint.from_key(a), FacePoint.from_key(b)
        meet = FacePoint(orbit=tuple(sorted(set(fa.orbit) & set(fb.orbit))),
                         j=tuple(sorted(set(fa.j) | set(fb.j))))
        inter = set(sp.minimal_open(a)) & set(sp.minimal_open(b))
        if inter != set(sp.minimal_open(meet.key())):
            bad.append([a, b])
    out.append(_entry("poset.minimal-open-intersection-law", not bad, counterexamples=bad[:3]))
    return out


def sheaf_structure_checks(H: HSheaf, rng: random.Random):
    out = []
    bad = []
    for i in range(len(H.catalog)):
        for j in range(len(H.catalog)):
            sup = support_sets(H.datum, H.catalog, i, j)
            probs = validate_support_facts(H.space, H.datum, sup)
            if probs:
                bad.append({"block": [i, j], "problems": probs[:2]})
    out.append(_entry("sheaf.support-facts", not bad, counterexamples=bad[:3]))
    v = check_vanishing_pattern(H)
    out.append(_entry("sheaf.stalk-vanishing-pattern", not v, counterexamples=[list(map(repr, x)) for x in v[:3]]))
    t = check_transport_identity(H)
    out.append(_entry("sheaf.transport-identity", not t, counterexamples=[list(map(repr, x)) for x in t[:3]]))
    bad = []
    for (i, j), blk in sorted(H.blocks.items()):
        probs = blk.sheaf.validate_functoriality()
        if probs:
            bad.append({"block": [i, j], "problems": [list(map(repr, p)) for p in probs[:2]]})
    out.append(_entry("sheaf.restriction-functoriality", not bad, counterexamples=bad[:3]))
    u = check_diagonal_units(H)
    out.append(_entry("sheaf.units", not u, counterexamples=[list(map(repr, x)) for x in u[:3]]))
    rp = check_restriction_product(H, max_degree=min(H.cutoff, 8))
    out.append(_entry("sheaf.restriction-product", not rp,
                      counterexamples=[list(map(repr, x)) for x in rp[:3]], max_degree=min(H.cutoff, 8)))
    a = check_face_local_associativity(H)
    out.append(_entry("sheaf.associativity-twist-cocycle", not a,
                      counterexamples=[list(map(repr, x)) for x in a[:3]]))
    out.append(_entry("sheaf.associativity-sampled-triples", _sampled_triples(H, rng)))
    return out


def _sampled_triples(H: HSheaf, rng: random.Random, count=400):
    """Direct stalk-level triple products both ways, seeded sample."""
    labels = range(len(H.catalog))
    pool = []
    for f in H.space.points:
        for a, b in itertools.product(labels, repeat=2):
            blk = H.blocks[(a, b)]
            if f in blk.support.members():
                for d, labs in sorted((blk.stalk(f).basis or {}).items()):
                    for lab in labs:
                        pool.append((f, a, b, d, lab))
    if not pool:
        return True
    for _ in range(count):
        f, a, b, d1, x = pool[rng.randrange(len(pool))]
        # pick composable partners at the same face
        ys = [(c, d2, lab) for c in labels
              for d2, labs in sorted((H.blocks[(b, c)].stalk(f).basis or {}).items())
              for lab in labs if f in H.blocks[(b, c)].support.members()]
        if not ys:
            continue
        c, d2, y = ys[rng.randrange(len(ys))]
        zs = [(dd, d3, lab) for dd in labels
              for d3, labs in sorted((H.blocks[(c, dd)].stalk(f).basis or {}).items())
              for lab in labs if f in H.blocks[(c, dd)].support.members()]
        if not zs:
            continue
        dd, d3, z = zs[rng.randrange(len(zs))]
        if d1 + d2 + d3 > H.cutoff:
            continue
        xy = H.compose(a, b, c, f, x, y)
        yz = H.compose(b, c, dd, f, y, z)
        left = H.compose(a, c, dd, f, xy[0], z) if isinstance(xy, tuple) else None
        right = H.compose(a, b, dd, f, x, yz[0]) if isinstance(yz, tuple) else None
        if left != right:
            return False
    return True


def section_algebra_checks(H: HSheaf, ext: ExtAlgebra, rng: random.Random, full_triples=True):
    out = []
    unit = ext.unit_coeffs()
    bad = []
    for x in range(len(ext.basis)):
        if ext.act_by(unit, x) != {x: ONE}:
            bad.append(x)
            break
    right_bad = []
    for x in range(len(ext.basis)):
        bx = ext.basis[x]
        a = bx.block[1]
        acted = {}
        for e, ce in ext.idempotents[a].items():
            prod = ext.multiply(x, e)
            if prod == "truncated":
                continue
            for z, cz in prod.items():
                acted[z] = acted.get(z, Fraction(0)) + ce * cz
        if {k: v for k, v in acted.items() if v} != {x: ONE}:
            right_bad.append(x)
            break
    out.append(_entry("ext.unit-laws", not bad and not right_bad,
                      left_failures=bad[:3], right_failures=right_bad[:3]))
    gys = []
    for (i, j), blk in sorted(H.blocks.items()):
        floor = 2 * blk.support.d
        if blk.support.members():
            hil = ext.block_hilbert((i, j))
            if any(hil[d] for d in range(min(floor, len(hil)))):
                gys.append([i, j])
    out.append(_entry("ext.gysin-floor", not gys, counterexamples=gys[:3]))
    ok, tested = _section_associativity(H, ext, rng, full=full_triples)
    out.append(_entry("ext.associativity", ok, triples_tested=tested, exhaustive=full_triples))
    return out


def _section_associativity(H, ext, rng, full, sample=600):
    n = len(ext.catalog)

    def followers(x, budget):
        b = ext.basis[x].block[1]
        return [y for c in range(n) for y in ext.by_block[(b, c)]
                if ext.basis[y].degree <= budget]

    def all_triples():
        for x in range(len(ext.basis)):
            for y in followers(x, ext.cutoff - ext.basis[x].degree):
                left = ext.cutoff - ext.basis[x].degree - ext.basis[y].degree
                for z in followers(y, left):
                    yield x, y, z

    def sampled_triples():
        produced = 0
        attempts = 0
        while produced < sample and attempts < 50 * sample:
            attempts += 1
            x = rng.randrange(len(ext.basis))
            ys = followers(x, ext.cutoff - ext.basis[x].degree)
            if not ys:
                continue
            y = ys[rng.randrange(len(ys))]
            zs = followers(y, ext.cutoff - ext.basis[x].degree - ext.basis[y].degree)
            if not zs:
                continue
            z = zs[rng.randrange(len(zs))]
            produced += 1
            yield x, y, z

    tested = 0
    for x, y, z in (all_triples() if full else sampled_triples()):
        xy = ext.multiply(x, y)
        yz = ext.multiply(y, z)
        if xy == "truncated" or yz == "truncated":
            continue
        left = {}
        for w, cw in xy.items():
            t = ext.multiply(w, z)
            if t == "truncated":
                left = None
                break
            for v, cv in t.items():
                left[v] = left.get(v, Fraction(0)) + cw * cv
        right = {}
        for w, cw in yz.items():
            t = ext.multiply(x, w)
            if t == "truncated":
                right = None
                break
            for v, cv in t.items():
                right[v] = right.get(v, Fraction(0)) + cw * cv
        if left is None or right is None:
            continue
        tested += 1
        if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
            return False, tested
    return True, tested


def oracle_checks(H: HSheaf, ext: ExtAlgebra, seed: int, fan=None):
    out = []
    rng = random.Random(seed)
    # sections: brute force vs incremental on every block over the whole space
    bad = []
    for (i, j), blk in sorted(H.blocks.items()):
        got = brute_sections(H.space, H.space.points, blk.sheaf, H.cutoff)
        want = ext.sections[(i, j)]
        if got.dims != dict(want.dims):
            bad.append({"block": [i, j], "brute": got.dims, "sections": dict(want.dims)})
    out.append(_entry("oracle.brute-sections", not bad, counterexamples=bad[:3]))
    # piecewise polynomials vs the trivial-label diagonal block (toric data)
    if H.datum.mode == "toric" and fan is not None:
        trivial = next((k for k, lab in enumerate(H.catalog.labels)
                        if lab.orbit == () and not any(lab.char)), None)
        if trivial is not None:
            hil = ext.block_hilbert((trivial, trivial))
            pp = pp_hilbert(fan, H.cutoff)
            out.append(_entry("oracle.piecewise-polynomials", hil == pp, block=hil, fan=pp))
    # twisted tensor: definitional relations vs the isotypic shortcut
    bad = []
    kdata = H.datum.kdata
    chars = sorted({lab.char for lab in H.catalog.labels})
    for jkey in sorted(kdata.entries):
        mod = kdata.module(jkey)
        if mod.rank > 3:
            continue
        for ra in chars:
            for rb in chars:
                ca, cb = kdata.char_at(jkey, ra), kdata.char_at(jkey, rb)
                fast = twisted_tensor(mod, ca, cb, min(H.cutoff, 12))
                slow = twisted_tensor_relations(mod, ca, cb, min(H.cutoff, 12))
                if fast.dims != slow.dims:
                    bad.append({"J": list(jkey), "chars": [list(ca), list(cb)]})
    out.append(_entry("oracle.twisted-tensor-dual-implementation", not bad, counterexamples=bad[:3]))
    # quadrant components drawn from the S_Δ data of this datum
    phis = set()
    for s in H.datum.S:
        for i in range(len(H.catalog)):
            for j in range(len(H.catalog)):
                la, lb = H.catalog.labels[i], H.catalog.labels[j]
                phi = tuple(sorted(set(s) - (set(la.orbit) | set(lb.orbit))))
                if phi:
                    phis.add(phi)
    qbad = []
    for phi in sorted(phis):
        comps = [tuple(sorted(c)) for k in range(len(phi) + 1)
                 for c in itertools.combinations(phi, k)]
        if len(comps) > 16:
            comps = sorted(rng.sample(comps, 16))
        rep = quadrant_check(phi, comps)
        if not rep.ok:
            qbad.append({"phi": list(phi), "entries": [e for e in rep.entries if not e["ok"]][:2]})
    out.append(_entry("oracle.quadrant", not qbad, counterexamples=qbad[:3], phis=len(phis)))
    fz = identity_fuzz(10_000, seed=seed)
    out.append(_entry("oracle.identity-fuzz", fz.ok, trials=fz.trials, seed=fz.seed,
                      failures=fz.failures[:3]))
    return out


def run_battery(H: HSheaf, ext: ExtAlgebra, seed: int, fan=None, full_triples=None) -> Report:
    rng = random.Random(seed)
    if full_triples is None:
        full_triples = len(ext.basis) <= 220
    entries = []
    entries += poset_axiom_checks(H)
    entries += sheaf_structure_checks(H, rng)
    entries += section_algebra_checks(H, ext, rng, full_triples=full_triples)
    entries += oracle_checks(H, ext, seed, fan=fan)
    conc = concentration_check(H, ext)
    entries += conc.entries
    van = vanishing_report(H)
    ok = van.ok
    entries.append(_entry("vanishing-report", ok,
                          failures=[{"name": e.name, "details": e.details} for e in van.failures()[:3]],
                          opens_checked=len({e.details.get("open") for e in van.entries if "open" in e.details})))
    return Report(ok=all(e.ok for e in entries), entries=entries)
