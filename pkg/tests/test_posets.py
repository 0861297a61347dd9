from fractions import Fraction

import pytest

from extsheaf.posets import (
    FiniteSpace,
    GradedSheaf,
    GradedSpace,
    SpaceError,
    cech_cohomology,
    global_sections,
    minimal_open,
    validate_intersection_axiom,
)

ONE = Fraction(1)


def constant_sheaf(space, gens=("c",)):
    stalks = {p: GradedSpace(basis={0: gens}) for p in space.points}
    rest = {(i, j): {g: ((g, ONE),) for g in gens} for i, j in space.covering_pairs()}
    return GradedSheaf(space, stalks, rest)


def chain_space():
    return FiniteSpace(["a", "b"], [("a", "b")])


def vee_space():
    # closed point c under both open points a and b
    return FiniteSpace(["a", "b", "c"], [("c", "a"), ("c", "b")])


def pseudo_circle():
    # two open points a, b; two closed points c, d, each below both
    return FiniteSpace(["a", "b", "c", "d"], [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")])


class TestFiniteSpace:
    def test_minimal_open_chain(self):
        assert minimal_open(chain_space(), "a") == ("a", "b")

    def test_minimal_open_maximal_point(self):
        assert minimal_open(chain_space(), "b") == ("b",)

    def test_minimal_open_closed_point_under_two(self):
        # 3-point interval model with the closed face under both others
        assert minimal_open(vee_space(), "c") == ("a", "b", "c")

    def test_unknown_point(self):
        with pytest.raises(SpaceError):
            minimal_open(chain_space(), "zz")

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(SpaceError):
            FiniteSpace(["a", "b"], [("a", "b"), ("b", "a")])

    def test_rejects_non_transitive(self):
        with pytest.raises(SpaceError):
            FiniteSpace(["a", "b", "c"], [("a", "b"), ("b", "c")])

    def test_openness(self):
        sp = vee_space()
        assert sp.is_open({"a"})
        assert sp.is_open({"a", "b", "c"})
        assert not sp.is_open({"c"})


class TestIntersectionAxiom:
    def test_incomparable_no_common_upper(self):
        sp = FiniteSpace(["a", "b"], [])
        rep = validate_intersection_axiom(sp)
        assert rep.ok and rep.empty_pairs == 1

    def test_vee_passes(self):
        assert validate_intersection_axiom(vee_space()).ok

    def test_diamond_violation(self):
        # U_c ∩ U_d = {a, b} has two minimal points -> not a minimal open
        rep = validate_intersection_axiom(pseudo_circle())
        assert not rep.ok
        assert rep.violations[0]["pair"] == ["c", "d"]


class TestCech:
    def test_constant_sheaf_contractible(self):
        sp = vee_space()
        sh = constant_sheaf(sp)
        hs = cech_cohomology(sp, sp.points, sh, 4)
        assert hs[0].dims == {0: 1}
        assert all(not h.dims for h in hs[1:])

    def test_pseudo_circle(self):
        sp = pseudo_circle()
        sh = constant_sheaf(sp)
        hs = cech_cohomology(sp, sp.points, sh, 4)
        # matches the simplicial cohomology of the circle
        assert hs[0].dims == {0: 1}
        assert hs[1].dims == {0: 1}
        assert all(not h.dims for h in hs[2:])

    def test_minimal_open_exactness(self):
        sp = pseudo_circle()
        sh = constant_sheaf(sp, gens=("x", "y"))
        for p in sp.points:
            hs = cech_cohomology(sp, sp.minimal_open(p), sh, 4)
            assert hs[0].dims == sh.stalks[p].dims
            assert all(not h.dims for h in hs[1:])

    def test_order_invariance(self):
        # same space with renamed (hence reordered) points gives equal dims
        sp1 = pseudo_circle()
        sh1 = constant_sheaf(sp1)
        ren = {"a": "p3", "b": "p0", "c": "p2", "d": "p1"}
        sp2 = FiniteSpace(ren.values(), [(ren[i], ren[j]) for i, j in [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")]])
        sh2 = constant_sheaf(sp2)
        h1 = cech_cohomology(sp1, sp1.points, sh1, 2)
        h2 = cech_cohomology(sp2, sp2.points, sh2, 2)
        assert [h.dims for h in h1] == [h.dims for h in h2]

    def test_non_open_rejected(self):
        sp = vee_space()
        with pytest.raises(SpaceError):
            cech_cohomology(sp, {"c"}, constant_sheaf(sp), 4)

    def test_cutoff_below_min_degree(self):
        sp = chain_space()
        stalks = {p: GradedSpace(basis={4: ("u",)}) for p in sp.points}
        sh = GradedSheaf(sp, stalks, {("a", "b"): {"u": (("u", ONE),)}})
        with pytest.raises(SpaceError):
            cech_cohomology(sp, sp.points, sh, 2)


class TestSections:
    def test_skyscraper_on_open_point(self):
        # stalk Q[X] on the open point b, zero on a
        sp = chain_space()
        xbasis = {2 * k: (("X", k),) for k in range(0, 4)}
        stalks = {"b": GradedSpace(basis=xbasis), "a": GradedSpace(basis={})}
        sh = GradedSheaf(sp, stalks, {})
        sec = global_sections(sp, ("b",), sh, 6)
        assert sec.dims == {0: 1, 2: 1, 4: 1, 6: 1}
        # over the whole space the zero stalk at the closed point forces 0
        sec2 = global_sections(sp, sp.points, sh, 6)
        assert sec2.dims == {}

    def test_empty_open(self):
        sp = chain_space()
        sec = global_sections(sp, (), constant_sheaf(sp), 3)
        assert sec.dims == {}

    def test_h0_equals_sections(self):
        sp = pseudo_circle()
        sh = constant_sheaf(sp, gens=("x", "y"))
        for U in [sp.points, sp.minimal_open("c"), ("a",), ("a", "b")]:
            if not sp.is_open(U):
                continue
            hs = cech_cohomology(sp, U, sh, 2)
            sec = global_sections(sp, U, sh, 2)
            assert hs[0].dims == sec.dims

    def test_negative_degree_carrier(self):
        # carriers admit negative degrees; only the H-sheaf stalks reject them
        sp = chain_space()
        stalks = {p: GradedSpace(basis={-2: ("w",), 0: ("c",)}) for p in sp.points}
        rest = {("a", "b"): {"w": (("w", ONE),), "c": (("c", ONE),)}}
        sh = GradedSheaf(sp, stalks, rest)
        sec = global_sections(sp, sp.points, sh, 0)
        assert sec.dims == {-2: 1, 0: 1}

    def test_p1_trivial_block_dims(self):
        # P^1 orbit poset: open orbit o, fixed points f+, f-; stalks Q, Q[X+], Q[X-]
        sp = FiniteSpace(["f+", "f-", "o"], [("f+", "o"), ("f-", "o")])
        cut = 8
        def poly(var):
            return {2 * k: ((var, k),) for k in range(cut // 2 + 1)}
        stalks = {
            "o": GradedSpace(basis={0: (("1", 0),)}),
            "f+": GradedSpace(basis=poly("X+")),
            "f-": GradedSpace(basis=poly("X-")),
        }
        rest = {
            ("f+", "o"): {("X+", 0): ((("1", 0), ONE),)},
            ("f-", "o"): {("X-", 0): ((("1", 0), ONE),)},
        }
        sh = GradedSheaf(sp, stalks, rest)
        sec = global_sections(sp, sp.points, sh, cut)
        assert sec.hilbert(cut) == [1, 0, 2, 0, 2, 0, 2, 0, 2]
        hs = cech_cohomology(sp, sp.points, sh, cut)
        assert hs[0].dims == sec.dims
        assert all(not h.dims for h in hs[1:])
