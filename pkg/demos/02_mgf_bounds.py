"""Exact log-MGF of a chain in a product state against three upper bounds.

Each bound is evaluated on its own admissible tau range; the margin column is
bound minus exact and must never be negative.
"""

from fewbody import bounds
from fewbody.decomposition import decompose
from fewbody.operators import ProductState, heisenberg_chain

op = heisenberg_chain(8)
state = ProductState.named(op.lattice, ["plus", "zero"] * 4)
lay = decompose(op, 4)

cor2 = bounds.certify_cor2(lay.layers, state)
thm3_mgf, thm3_tail = bounds.certify_thm3(lay, state)
l5_mgf, l5_tail = bounds.certify_lemma5(lay, state)

for cert in (cor2, thm3_mgf, l5_mgf, thm3_tail, l5_tail):
    mid = len(cert.grid) * 3 // 4
    print(f"{cert.theorem_id:8s} {cert.grid_name}={cert.grid[mid]:8.4f} bound={cert.bound[mid]:10.4g} "
          f"exact={cert.exact[mid]:10.4g}  worst margin={cert.margin_min:.3e} {cert.verdict}")

c = bounds.lemma5_constants(lay.centered(state))
print(f"C_tilde statement={c.c_tilde('statement'):.3f} proof={c.c_tilde('proof'):.3f} "
      f"tau domain |tau| <= {c.tau_max:.4f}")
