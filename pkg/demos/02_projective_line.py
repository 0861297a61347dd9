"""The extension algebra of P^1 with trivial isotropy.

Three labels (open orbit and the two fixed points), nine blocks.  The
trivial diagonal block reproduces the equivariant cohomology of P^1,
computed independently as piecewise polynomials on the fan; composing
the two unit classes between a fixed point and the open orbit lands on
the equivariant Euler class of the fixed point.
"""

from extsheaf import Fan, build_H, build_catalog, ext_algebra, toric_datum
from extsheaf.oracles import pp_hilbert

CUT = 12
fan = Fan(rank=1, overlattice_gens=(), rays=((1,), (-1,)), max_cones=((0,), (1,)))
datum, _ = toric_datum(fan)
catalog = build_catalog(datum.isotropy, datum.V, "all")
H = build_H(datum, catalog, CUT)
ext = ext_algebra(H)

print("labels:", ", ".join(f"{k} = {lab.name()}" for k, lab in enumerate(catalog.labels)))
print("\nHilbert series per block (degrees 0..12):")
for (i, j) in sorted(H.blocks):
    print(f"  {i}:{j}  {ext.block_hilbert((i, j))}")

print("\npiecewise-polynomial oracle for the fan:", pp_hilbert(fan, CUT))
print("matches block 0:0:", ext.block_hilbert((0, 0)) == pp_hilbert(fan, CUT))

x = ext.by_block[(0, 1)][0]   # unit of Hom(L_open -> L_fixed), degree 0
y = ext.by_block[(1, 0)][0]   # unit of Hom(L_fixed -> L_open), degree 2
prod = ext.multiply(x, y)
z, c = next(iter(prod.items()))
b = ext.basis[z]
print(f"\n{ext.basis[x].name} * {ext.basis[y].name} = {c} * {b.name}"
      f"  (block {b.block}, degree {b.degree}: the Euler class of the fixed point)")
