"""Twisted local systems on the half-integral P^1.

The overlattice (1/2)Z makes both fixed-point stabilizers contain the
order-2 subgroup D, so the open orbit carries a sign character whose
local system has monodromy -1 around both fixed points.  Its self-Ext
collapses to Q in degree 0 and it cannot see the trivial or skyscraper
labels at all.
"""

from extsheaf import Fan, build_H, build_catalog, ext_algebra, toric_datum
from extsheaf.isotropy import component_group

CUT = 8
fan = Fan(rank=1, overlattice_gens=((1,),), rays=((1,), (-1,)), max_cones=((0,), (1,)))
datum, dbasis = toric_datum(fan)
catalog = build_catalog(datum.isotropy, datum.V, "all")

print("D basis (bits in (Z/2)^1):", dbasis)
for orbit in datum.S:
    q = component_group(datum.isotropy, orbit)
    print(f"  component group at {orbit or '(open)'}: rank {q.rank}")

print("\nlabels and forbidden divisors:")
for k, lab in enumerate(catalog.labels):
    print(f"  {k} = {lab.name():10} delta' = {catalog.dprime(k) or '()'}")

H = build_H(datum, catalog, CUT)
ext = ext_algebra(H)
sign = 1
print("\nExt blocks against the sign label:")
for j in range(len(catalog)):
    print(f"  Ext(sign, {catalog.labels[j].name()}): {ext.block_hilbert((sign, j))}")
print("\nThe (sign, sign) sheaf is constant across the whole poset: the two")
print("fixed-point faces carry transported stalks, so sections are one copy of Q.")
