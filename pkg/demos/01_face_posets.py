"""Face posets of symmetric and toric data.

Builds the rank-1 and rank-2 canonical face spaces and the orbit poset
of P^1 x P^1, prints their points with minimal opens, and verifies the
minimal-open intersection axiom.
"""

from extsheaf import Fan, build_faces, toric_datum, validate_intersection_axiom
from extsheaf.cli import document_datum, load_document
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "extsheaf" / "data"


def show(title, space):
    print(f"\n== {title} ({len(space.points)} faces)")
    for p in space.points:
        print(f"  {p:12}  minimal open: {', '.join(space.minimal_open(p))}")
    rep = validate_intersection_axiom(space)
    print(f"  intersection axiom: {'ok' if rep.ok else rep.violations}")


for name in ["canonical_l1", "canonical_l2"]:
    datum, _, _, _ = document_datum(load_document(str(DATA / f"{name}.json")))
    show(name, build_faces(datum))

p1xp1 = Fan(rank=2, overlattice_gens=(),
            rays=((1, 0), (-1, 0), (0, 1), (0, -1)),
            max_cones=((0, 2), (0, 3), (1, 2), (1, 3)))
datum, _ = toric_datum(p1xp1)
show("P1 x P1 orbit poset", build_faces(datum))
print("\nFace keys read 'orbit|J'; '-' marks the empty set. The open face of a")
print("face space is the maximal point: its minimal open is itself.")
