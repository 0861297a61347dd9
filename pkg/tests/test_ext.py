from fractions import Fraction

from extsheaf.extalg import concentration_check, ext_algebra, ext_module, vanishing_report
from extsheaf.fans import Fan, toric_datum
from extsheaf.hsheaf import build_H
from extsheaf.isotropy import build_catalog

ONE = Fraction(1)

P1 = Fan(rank=1, overlattice_gens=(), rays=((1,), (-1,)), max_cones=((0,), (1,)))
P1_HALF = Fan(rank=1, overlattice_gens=((1,),), rays=((1,), (-1,)), max_cones=((0,), (1,)))


def build_ext(fan, cutoff=10):
    datum, _ = toric_datum(fan)
    catalog = build_catalog(datum.isotropy, datum.V, "all")
    H = build_H(datum, catalog, cutoff)
    return H, ext_algebra(H)


class TestExtAlgebra:
    def test_p1_trivial_diagonal_hilbert(self):
        H, ext = build_ext(P1)
        assert ext.block_hilbert((0, 0)) == [1, 0, 2, 0, 2, 0, 2, 0, 2, 0, 2]

    def test_p1_gysin_block(self):
        H, ext = build_ext(P1)
        assert ext.block_hilbert((1, 0)) == [0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
        assert ext.block_hilbert((0, 1)) == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]

    def test_halfint_twisted_blocks(self):
        H, ext = build_ext(P1_HALF)
        # labels: 0 = (∅,0), 1 = (∅,1), 2 = ({r0},0), 3 = ({r1},0)
        assert ext.block_hilbert((1, 1)) == [1] + [0] * 10
        assert ext.block_hilbert((1, 0)) == [0] * 11
        assert ext.block_hilbert((1, 2)) == [0] * 11
        assert ext.block_hilbert((2, 1)) == [0] * 11

    def test_unit_is_sum_of_idempotents(self):
        H, ext = build_ext(P1)
        unit = ext.unit_coeffs()
        for x in range(len(ext.basis)):
            if ext.basis[x].degree > ext.cutoff - 0:
                continue
            acted = ext.act_by(unit, x)
            assert acted == {x: ONE}
        for a, coeffs in ext.idempotents.items():
            sq = {}
            for e1, c1 in coeffs.items():
                for e2, c2 in coeffs.items():
                    t = ext.multiply(e1, e2)
                    assert t != "truncated"
                    for z, cz in t.items():
                        sq[z] = sq.get(z, Fraction(0)) + c1 * c2 * cz
            assert {k: v for k, v in sq.items() if v} == coeffs

    def test_euler_class_in_section_algebra(self):
        H, ext = build_ext(P1)
        x0 = ext.by_block[(0, 1)][0]
        y0 = ext.by_block[(1, 0)][0]
        assert ext.basis[x0].degree == 0 and ext.basis[y0].degree == 2
        prod = ext.multiply(x0, y0)
        assert len(prod) == 1
        (z, c), = prod.items()
        assert ext.basis[z].block == (0, 0) and ext.basis[z].degree == 2 and c == ONE

    def test_gysin_floor(self):
        for fan in (P1, P1_HALF):
            H, ext = build_ext(fan)
            for (i, j), blk in H.blocks.items():
                if not blk.support.members():
                    continue
                hil = ext.block_hilbert((i, j))
                for d in range(min(2 * blk.support.d, len(hil))):
                    assert hil[d] == 0


class TestExtModules:
    def test_block_decomposition(self):
        H, ext = build_ext(P1)
        total = sorted(i for a in range(len(ext.catalog)) for i in ext_module(ext, a).elements)
        assert total == list(range(len(ext.basis)))

    def test_skyscraper_column_dims(self):
        H, ext = build_ext(P1)
        mod = ext_module(ext, 1)
        dims = {}
        for i in mod.elements:
            dims[ext.basis[i].degree] = dims.get(ext.basis[i].degree, 0) + 1
        by_hand = [ext.block_hilbert((b, 1)) for b in range(3)]
        for d in range(ext.cutoff + 1):
            assert dims.get(d, 0) == sum(h[d] for h in by_hand)

    def test_zero_column_module(self):
        H, ext = build_ext(P1_HALF)
        # the only nonzero block ending at the sign label is the diagonal one
        mod = ext_module(ext, 1)
        assert all(ext.basis[i].block == (1, 1) for i in mod.elements)

    def test_action_matches_table(self):
        H, ext = build_ext(P1)
        mod = ext_module(ext, 0)
        e = ext.by_block[(0, 1)][0]
        x = ext.by_block[(1, 0)][0]
        assert mod.action(e, x) == ext.multiply(e, x)


class TestReports:
    def test_vanishing_p1(self):
        H, _ = build_ext(P1, cutoff=8)
        rep = vanishing_report(H)
        assert rep.ok, rep.failures()[:3]

    def test_vanishing_halfint(self):
        H, _ = build_ext(P1_HALF, cutoff=8)
        rep = vanishing_report(H)
        assert rep.ok, rep.failures()[:3]

    def test_concentration_p1(self):
        H, ext = build_ext(P1, cutoff=8)
        rep = concentration_check(H, ext)
        assert rep.ok, rep.failures()[:3]

    def test_concentration_halfint(self):
        H, ext = build_ext(P1_HALF, cutoff=8)
        rep = concentration_check(H, ext)
        assert rep.ok, rep.failures()[:3]

    def test_one_point_space_collapses(self):
        fan = P1
        datum, _ = toric_datum(fan)
        catalog = build_catalog(datum.isotropy, datum.V, [((), ())])
        H = build_H(datum, catalog, 6)
        rep = concentration_check(H)
        assert rep.ok


class TestPolynomialKRestriction:
    def build(self):
        from extsheaf.faces import KData, SymmetricDatum
        from extsheaf.isotropy import IsotropyFamily

        # the degree-4 generator restricts to w4 + w2^2: a genuinely
        # polynomial image, still degree-preserving and equivariant
        entries = {
            "-": {"tau_rank": 1, "to_open": [[1]],
                  "generators": [{"degree": 2, "signs": [1]}, {"degree": 4, "signs": [0]}]},
            "1": {"tau_rank": 1, "to_open": [[1]],
                  "generators": [{"degree": 2, "signs": [1]}, {"degree": 4, "signs": [0]}]},
            "restrictions": {"->1": {"tau_map": [[1]],
                                     "gens": [[["1", [1, 0]]],
                                              [["1", [0, 1]], ["1", [2, 0]]]]}},
        }
        fam = IsotropyFamily(m=1, subspaces={(): (), ("v",): ((1,),)}, mode="symmetric")
        datum = SymmetricDatum(V=("v",), S=[(), ("v",)], l=1,
                               Jmap={(): (), ("v",): (1,)},
                               isotropy=fam, kdata=KData(m=1, l=1, entries=entries),
                               mode="symmetric")
        catalog = build_catalog(datum.isotropy, datum.V, "all")
        H = build_H(datum, catalog, 12)
        return H, ext_algebra(H)

    def test_full_battery(self):
        from extsheaf.checks import run_battery

        H, ext = self.build()
        rep = run_battery(H, ext, seed=3, full_triples=True)
        assert rep.ok, [e.name for e in rep.entries if not e.ok][:4]

    def test_sign_diagonal_counts_invariant_monomials(self):
        H, ext = self.build()
        # invariants of Q[u2 (sign), u4]: dimensions 1,2,3,4 in degrees 0,4,8,12
        assert ext.block_hilbert((1, 1), 12) == [1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 4]
