"""Locality profile and layering of a Heisenberg chain.

The chain splits into even and odd bonds; replicating the two layers to a
larger budget keeps the sum exact and only rescales each copy.
"""

from fewbody.decomposition import decompose
from fewbody.operators import analyze_profile, heisenberg_chain

op = heisenberg_chain(8)
p = analyze_profile(op)
print(f"N={op.n_sites} terms={len(op.terms)}  q={p.q} g={p.g:.3f} lambda={p.lam:.3f}")

for budget in (None, 3, 4):
    lay = decompose(op, budget)
    print(f"n_bar={lay.n_bar} chi={lay.chi} scales={lay.scales} "
          f"blocks={lay.block_counts} error={lay.reconstruction_error:.1e}")
    for ix in lay.term_indices:
        print("   layer terms", ix)
