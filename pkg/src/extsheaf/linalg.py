"""Exact sparse linear algebra over Q used by the engine.

Vectors are dicts mapping hashable column keys to nonzero Fractions.
Everything here is exact; no floating point. The oracle module carries
its own independent dense elimination (see oracles.py).
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)


class Tag:
    """Bookkeeping column key that sorts after every real column key."""

    __slots__ = ("idx",)

    def __init__(self, idx):
        self.idx = idx

    def __lt__(self, other):
        return isinstance(other, Tag) and self.idx < other.idx

    def __gt__(self, other):
        return not isinstance(other, Tag) or self.idx > other.idx

    def __eq__(self, other):
        return isinstance(other, Tag) and self.idx == other.idx

    def __hash__(self):
        return hash(("linalg.Tag", self.idx))

    def __repr__(self):
        return f"Tag({self.idx})"


def vec_add(u, v, c=Fraction(1)):
    """Return u + c*v, dropping zeros."""
    out = dict(u)
    for k, a in v.items():
        b = out.get(k, ZERO) + c * a
        if b:
            out[k] = b
        else:
            out.pop(k, None)
    return out


def vec_scale(u, c):
    if not c:
        return {}
    return {k: c * a for k, a in u.items()}


def vec_eq(u, v):
    return vec_add(u, v, Fraction(-1)) == {}


class Eliminator:
    """Incremental row echelon store over Q with sparse rows.

    Rows are reduced against the stored pivots as they arrive; each kept
    row owns one pivot column.  Column keys are ordered by their sort
    order so results do not depend on insertion order of equal systems.
    """

    def __init__(self):
        self.pivots = {}  # pivot column -> reduced row (dict), coefficient 1 at pivot

    def reduce(self, row):
        """Fully reduce row against current pivots; returns the residual.

        Stored pivot rows carry no entries at other pivot columns, so a
        single pass over the row's pivot-column entries suffices.
        """
        row = dict(row)
        hit = [c for c in row if c in self.pivots]
        for c in hit:
            v = row.get(c)
            if v:
                row = vec_add(row, self.pivots[c], -v)
        return row

    def add(self, row):
        """Insert a row; returns True if it increased the rank."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row)
        inv = Fraction(1) / row[col]
        row = vec_scale(row, inv)
        # keep stored rows fully reduced against each other
        for c, other in self.pivots.items():
            if col in other:
                self.pivots[c] = vec_add(other, row, -other[col])
        self.pivots[col] = row
        return True

    @property
    def rank(self):
        return len(self.pivots)

    def coordinates(self, row):
        """Express row as a combination of pivot rows.

        Returns (coeffs keyed by pivot column, residual).
        """
        coeffs = {}
        row = dict(row)
        hit = [c for c in row if c in self.pivots]
        for c in hit:
            v = row.get(c)
            if v:
                coeffs[c] = v
                row = vec_add(row, self.pivots[c], -v)
        return coeffs, row


def rank(rows):
    """Exact rank of a list of sparse rows."""
    e = Eliminator()
    for r in rows:
        e.add(r)
    return e.rank


def kernel_basis(rows, cols):
    """Exact kernel basis of the system {row . x = 0 for each row}.

    cols is the ordered list of column keys.  The result is the reduced
    echelon basis of the kernel (one pivot column with coefficient 1 per
    vector, pivots mutually eliminated), sorted by pivot column, so the
    output is canonical.
    """
    e = Eliminator()
    for r in rows:
        e.add(r)
    free = [c for c in cols if c not in e.pivots]
    raw = []
    for f in free:
        # each pivot row reads x_p + sum(row[c] * x_c over free c) = 0
        v = {f: Fraction(1)}
        for p, row in e.pivots.items():
            c = row.get(f)
            if c:
                v[p] = -c
        raw.append({k: a for k, a in v.items() if a})
    e2 = Eliminator()
    for v in raw:
        e2.add(v)
    return [e2.pivots[c] for c in sorted(e2.pivots)]


def solve_in_span(basis, target):
    """Write target as a combination of basis vectors if possible.

    Returns the coefficient list (aligned with basis) or None.  Used for
    change-of-basis checks between independently computed bases.
    """
    e = Eliminator()
    for i, b in enumerate(basis):
        tagged = dict(b)
        tagged[Tag(i)] = Fraction(1)
        e.add(tagged)
    _, res = e.coordinates(dict(target))
    if any(not isinstance(k, Tag) for k in res):
        return None
    out = [ZERO] * len(basis)
    for k, v in res.items():
        out[k.idx] = -v
    return out
