"""Weight of a local probe above energy x in a frustration-free ground state.

Compares the exponential excitation bound with the older baseline that
decays only like exp(-x / (5 k lambda)).
"""

import numpy as np

from fewbody import bounds
from fewbody.operators import FewBodyOperator, LocalTerm, analyze_profile, pauli_matrix
from fewbody.spectral import excitation_norm
from fewbody.verifier import ff_instance

h, omega = ff_instance(np.random.default_rng(7), 6, "singlet")
probe = FewBodyOperator(h.lattice, (LocalTerm((2,), pauli_matrix("X")),))

p = analyze_profile(h)
# the bound is stated for x >= lambda q
xs = p.lam * p.q * np.array([1.0, 1.5, 2.0, 3.0, 4.0])
exact = excitation_norm(h, probe, omega, xs)
ff = bounds.cor4_ff_bound(h, probe, omega, xs)
akl = bounds.akl_basic_bound(h, probe, xs)
print(f"{'x':>5} {'exact':>10} {'ff bound':>10} {'baseline':>10}")
for row in zip(xs, exact, ff, akl):
    print("{:5.1f} {:10.3e} {:10.3e} {:10.3e}".format(*row))
