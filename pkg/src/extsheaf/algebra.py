"""Polynomial algebras on degree-2 generators, support twists, and the
balanced tensor product for elementary abelian 2-groups.

Monomials in divisor variables are sorted tuples of (name, exponent)
pairs; the variable X_v has degree 2.  Twists multiply a composed class
by the product of X_v over the support-correction set computed by
``nabla``; the correction is truncated to the variables alive on the
face at hand, everything else maps to 0.

Sign actions of F2^k are diagonal on chosen generators, so a character
is an F2 row vector evaluated multiplicatively as +-1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .linalg import Eliminator
from .posets import GradedSpace

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# monomials


def mono(*pairs):
    """Canonical monomial from (variable, exponent) pairs."""
    acc = {}
    for v, e in pairs:
        if e:
            acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items()))


MONO_ONE = ()


def mono_mul(a, b):
    return mono(*(list(a) + list(b)))


def mono_degree(m):
    return 2 * sum(e for _, e in m)


def mono_vars(m):
    return {v for v, _ in m}


def monomials_of_degree(variables, k):
    """All exponent patterns of total degree k in the given variables, sorted."""
    variables = sorted(variables)
    if k == 0:
        return [MONO_ONE]
    if not variables:
        return []
    out = []
    n = len(variables)

    def rec(i, remaining, acc):
        if i == n - 1:
            out.append(mono(*acc, (variables[i], remaining)))
            return
        for e in range(remaining + 1):
            rec(i + 1, remaining - e, acc + [(variables[i], e)])

    rec(0, k, [])
    return sorted(out)


# ---------------------------------------------------------------------------
# the support-correction set and twist factors


def nabla(d, dp, dpp):
    """(Δ' ∖ (Δ ∪ Δ'')) ∪ ((Δ ∩ Δ'') ∖ Δ')."""
    d, dp, dpp = set(d), set(dp), set(dpp)
    return (dp - (d | dpp)) | ((d & dpp) - dp)


def twist_factor(face_divisors, da, db, dc):
    """Product of X_v over nabla(da, db, dc) truncated to the face.

    Returns the monomial if every corrected variable is alive on the
    face, otherwise None (the zero element).
    """
    nab = nabla(da, db, dc)
    if not nab <= set(face_divisors):
        return None
    return mono(*((v, 1) for v in nab))


# ---------------------------------------------------------------------------
# characters and diagonal two-group modules


def character(bits):
    """F2 functional on F2^k given by a bit row; evaluates to +-1."""
    return tuple(int(b) % 2 for b in bits)


def char_add(a, b):
    return tuple((x + y) % 2 for x, y in zip(a, b))


def char_eval(chi, vec):
    """+1 or -1: the sign of chi on a group element given as bits."""
    return -1 if sum(x * y for x, y in zip(chi, vec)) % 2 else 1


def char_is_trivial(chi):
    return not any(chi)


def char_compose(chi, matrix_rows):
    """Pull chi back along the group map sending basis vector i to matrix_rows[i]."""
    return tuple(sum(x * y for x, y in zip(row, chi)) % 2 for row in matrix_rows)


@dataclass(frozen=True)
class TwoGroupModule:
    """Free graded-commutative algebra on generators with a diagonal
    action of F2^rank: generator i has even degree degrees[i] and sign
    character signs[i] (a bit row of length rank)."""

    rank: int
    degrees: tuple
    signs: tuple

    def __post_init__(self):
        if any(d <= 0 or d % 2 for d in self.degrees):
            raise ValueError("generator degrees must be positive even integers")
        if any(len(s) != self.rank for s in self.signs):
            raise ValueError("sign rows must match the group rank")

    def monomial_character(self, exps):
        chi = tuple(0 for _ in range(self.rank))
        for e, s in zip(exps, self.signs):
            if e % 2:
                chi = char_add(chi, s)
        return chi

    def monomials(self, degree):
        """Exponent tuples of the given total degree, lexicographically sorted."""
        if degree == 0:
            return [tuple(0 for _ in self.degrees)]
        if degree < 0 or degree % 2:
            return []
        out = []

        def rec(i, remaining, acc):
            if i == len(self.degrees):
                if remaining == 0:
                    out.append(tuple(acc))
                return
            step = self.degrees[i]
            for e in range(remaining // step + 1):
                rec(i + 1, remaining - e * step, acc + [e])

        rec(0, degree, [])
        return sorted(out)


TRIVIAL_MODULE = TwoGroupModule(rank=0, degrees=(), signs=())


def twisted_tensor(module: TwoGroupModule, rho, rhop, cutoff) -> GradedSpace:
    """Balanced tensor of the twisted group algebra against Hom(V_rho, V_rho').

    Production route (isotypic shortcut): for diagonal actions the
    balanced relations identify h ⊗ w ⊗ m with sign multiples of
    h ⊗ 1 ⊗ 1 and kill h unless the character of h equals rho + rho';
    the surviving monomials form the basis.
    """
    _check_chars(module, rho, rhop)
    target = char_add(rho, rhop)
    basis = {}
    for d in range(0, cutoff + 1, 2):
        keep = [m for m in module.monomials(d) if module.monomial_character(m) == target]
        if keep:
            basis[d] = tuple(keep)
    return GradedSpace(basis=basis)


def twisted_tensor_relations(module: TwoGroupModule, rho, rhop, cutoff) -> GradedSpace:
    """Definitional oracle: quotient of H ⊗ C[W] ⊗ Hom by the balanced
    bilinearity relations, solved degreewise by exact elimination.

    Only sensible for small groups (|W| <= 8 in the acceptance battery);
    shares no elimination strategy with the shortcut above.
    """
    _check_chars(module, rho, rhop)
    if module.rank > 3:
        raise ValueError("relation oracle is limited to groups of order <= 8")
    group = [tuple(bits) for bits in itertools.product((0, 1), repeat=module.rank)]
    dims = {}
    for d in range(0, cutoff + 1, 2):
        monos = module.monomials(d)
        cols = [(m, w) for m in monos for w in group]
        if not cols:
            continue
        colpos = {c: i for i, c in enumerate(cols)}
        rows = []
        # x = h ⊗ u;  x·(w ⊗ w') = (h·w) ⊗ (w' u w)  must equal  rho'(w) rho(w') x
        for m in monos:
            chi = module.monomial_character(m)
            for u in group:
                for w in group:
                    for wp in group:
                        lhs = (m, char_add(char_add(wp, u), w))
                        sign = char_eval(chi, w)
                        rhs_coeff = Fraction(char_eval(rhop, w) * char_eval(rho, wp))
                        row = {}
                        row[colpos[lhs]] = row.get(colpos[lhs], Fraction(0)) + sign
                        row[colpos[(m, u)]] = row.get(colpos[(m, u)], Fraction(0)) - rhs_coeff
                        row = {k: v for k, v in row.items() if v}
                        if row:
                            rows.append(row)
        elim = Eliminator()
        for r in rows:
            elim.add(r)
        n = len(cols) - elim.rank
        if n:
            dims[d] = n
    return GradedSpace(dims=dims)


def _check_chars(module, rho, rhop):
    for chi in (rho, rhop):
        if len(chi) != module.rank:
            raise ValueError("character length does not match the group rank")


@dataclass(frozen=True)
class TwistedElement:
    """Element of a twisted-tensor carrier Hom(V_rho, V_rho') ⊗-block.

    coeffs maps surviving monomial exponent tuples to rationals.
    """

    module: TwoGroupModule
    rho: tuple
    rhop: tuple
    coeffs: tuple  # sorted ((exps, Fraction), ...)

    @staticmethod
    def make(module, rho, rhop, coeffs):
        target = char_add(rho, rhop)
        for exps, _ in coeffs.items():
            if module.monomial_character(exps) != target:
                raise ValueError("monomial is killed by the balanced relations")
        return TwistedElement(module, tuple(rho), tuple(rhop),
                              tuple(sorted((e, c) for e, c in coeffs.items() if c)))


def twisted_product(x: TwistedElement, y: TwistedElement) -> TwistedElement:
    """Composition product (a ⊗ a', b ⊗ b') -> ab ⊗ a'b' on survivors.

    x composes after y, so x.rho must match y.rhop.
    """
    if x.module != y.module:
        raise ValueError("elements live over different modules")
    if x.rho != y.rhop:
        raise ValueError("non-composable character blocks")
    acc = {}
    for ex, cx in x.coeffs:
        for ey, cy in y.coeffs:
            key = tuple(a + b for a, b in zip(ex, ey))
            acc[key] = acc.get(key, Fraction(0)) + cx * cy
    return TwistedElement.make(x.module, y.rho, x.rhop, acc)


def hilbert_series(space: GradedSpace, cutoff):
    """Dimensions in degrees 0..cutoff as a plain list."""
    return space.hilbert(cutoff)
