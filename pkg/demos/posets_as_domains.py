"""Finite posets seen as categories over the two-element quantale.

Builds the V-shaped poset x, y < z, lists its presheaves (lower sets),
picks out the ideals with two different enriched predicates, and compares
the resulting way-below relation with a brute-force classical computation.
"""

from qdomain import (check_algebraic, check_continuous, check_flat, check_irreducible, named_poset,
                     phi_category, poset_oracle, poset_to_2cat, presheaf_category, way_below)

V = poset_to_2cat(named_poset("v"), name="V")
PA = presheaf_category(V)
print("presheaves on V:", [w.label() for w in PA.weights])

for w in PA.weights:
    flat, fw = check_flat(V, w)
    irr, iw = check_irreducible(V, w)
    print(f"  {w.label():10} flat={flat!s:5} irreducible={irr!s:5}",
          "" if flat else f"flat witness: {[c.label() for c in fw]}")

ideals = phi_category("inhabited-flat", V)
print("inhabited flat ideals:", [w.label() for w in ideals.weights])

wb = way_below("inhabited-flat", V)
print("way-below (enriched):", sorted(k for k, v in wb.names().items() if v == "1"))
orc = poset_oracle(named_poset("v"))
print("way-below (classical):", sorted(orc.way_below_pairs()))

print("continuous:", check_continuous("inhabited-flat", V).verdict,
      "algebraic:", check_algebraic("inhabited-flat", V).verdict)

# with every presheaf allowed, z = x ∨ y is no longer compact
print("compacts for class 'all':", check_algebraic("all", V).compacts)
