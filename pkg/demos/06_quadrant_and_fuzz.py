"""The quadrant oracle and the identity fuzzer.

The punctured positive quadrant carries the component sheaves of the
symmetric algebra on the coordinate-hyperplane skyscrapers; its higher
cohomology vanishes and the constant sections restrict onto the
punctured part.  The fuzzer pounds both combinatorial identities behind
the twisted product.
"""

import itertools

from extsheaf.oracles import identity_fuzz, membership_table_check, quadrant_check

for n in (1, 2, 3):
    phi = tuple(f"x{i}" for i in range(n))
    comps = [tuple(sorted(c)) for k in range(n + 1) for c in itertools.combinations(phi, k)]
    rep = quadrant_check(phi, comps)
    print(f"|Phi| = {n}: {len(rep.entries)} components, all ok: {rep.ok}")
    for e in rep.entries:
        comp = "+".join(e["component"]) or "()"
        print(f"   component {comp:12}  h0 = {e['h0']}, higher = {e['higher'] or 'none'}")

rep = identity_fuzz(10_000, seed=7)
print(f"\nidentity fuzz: {rep.trials} trials, seed {rep.seed}, failures: {len(rep.failures)}")
print("singleton membership table of the degree identity:",
      "all eight patterns hold" if membership_table_check() == [] else "FAILED")
