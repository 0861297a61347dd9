"""A rank-1 symmetric datum with a nontrivial invariant algebra.

Both J-levels carry Q[u] with the component group acting by -1 on the
generator, as for a rank-1 symmetric space whose compact isotropy has
two components.  The twisted tensor keeps even powers on the diagonal
blocks and odd powers between the trivial and sign labels; the forced
extension by zero then kills the mixed sections entirely.
"""

from pathlib import Path

from extsheaf import build_H, build_catalog, ext_algebra
from extsheaf.algebra import twisted_tensor, twisted_tensor_relations
from extsheaf.cli import document_datum, load_document

DATA = Path(__file__).resolve().parents[1] / "src" / "extsheaf" / "data"
doc = load_document(str(DATA / "synthetic_symmetric_rank1.json"))
datum, dbasis, labels, _ = document_datum(doc)
catalog = build_catalog(datum.isotropy, datum.V, labels)

CUT = 12
kd = datum.kdata
mod = kd.module(())
print("K-part at J = {}: generator degrees", mod.degrees, "signs", mod.signs)
for pair in [((0,), (0,)), ((0,), (1,)), ((1,), (1,))]:
    fast = twisted_tensor(mod, pair[0], pair[1], CUT)
    slow = twisted_tensor_relations(mod, pair[0], pair[1], CUT)
    print(f"  balanced tensor {pair}: dims {fast.dims} (relation oracle agrees: {fast.dims == slow.dims})")

H = build_H(datum, catalog, CUT)
ext = ext_algebra(H)
print("\nlabels:", ", ".join(f"{k} = {lab.name()}" for k, lab in enumerate(catalog.labels)))
for (i, j) in sorted(H.blocks):
    hil = ext.block_hilbert((i, j))
    if any(hil):
        print(f"  block {i}:{j}  {hil}")
print("\nThe diagonal of the sign label is Q[u^2]: the invariant part of Q[u],")
print("exactly the degrees 0, 4, 8, ... one expects for an orthogonal pair.")
