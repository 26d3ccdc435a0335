"""Moment bounds and the Markov tail built from them.

Prints the per-order moment bounds next to the exact moments, then the tail
curve; finally the exact check of the combinatorial coefficients.
"""

import numpy as np

from fewbody.decomposition import decompose
from fewbody.moments import appendix_table, moment_tail_bound
from fewbody.operators import ProductState, heisenberg_chain
from fewbody.spectral import moment_exact, spectral_distribution, tail_exact

op = heisenberg_chain(8)
state = ProductState.named(op.lattice, ["zero", "one"] * 4)
lay = decompose(op, 4)
mt = moment_tail_bound(lay, state)
dist = spectral_distribution(lay.centered(state).op, state)

for m, b in mt.moment_bounds.items():
    print(f"m={m}  bound={b:10.4g}  exact |<A^m>|={abs(moment_exact(dist, m)):10.4g}")

xs = np.linspace(1, 1.1 * np.abs(dist.eigenvalues).max(), 6)
exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
for x, b, e in zip(xs, mt.tail(xs), exact):
    print(f"x={x:6.2f}  tail bound={b:.4f}  exact={e:.4f}")

# at this size the bound is only informative well past the spectrum edge
for x in (40.0, 80.0, 160.0):
    print(f"x={x:6.1f}  tail bound={mt.tail(x):.3e}  best order m={mt.best_order(x)}")

rows = appendix_table(30)
print(f"theta table: {len(rows)} cases, {sum(not (r['theta_ok'] and r['count_ok']) for r in rows)} mismatches")
