"""Norm bound for nested commutators ``[A_n, [..., [A_1, O_X]...]]``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .operators import FewBodyOperator, LocalTerm, Profile, analyze_profile
from .spectral import embed, embed_term, operator_norm


@dataclass(frozen=True)
class MultiCommutatorBound:
    chain: tuple[tuple[int, float], ...]
    base_support_size: int
    base_norm: float
    K: tuple[int, ...]
    bound: float

    def as_dict(self) -> dict:
        return {"chain": [list(c) for c in self.chain], "base_support_size": self.base_support_size,
                "base_norm": self.base_norm, "K": list(self.K), "bound": self.bound}


def _profile(a) -> Profile:
    return a if isinstance(a, Profile) else analyze_profile(a)


def lemma1_bound(chain: Sequence[FewBodyOperator | Profile], base: LocalTerm) -> MultiCommutatorBound:
    """``prod_m (2 g_m K_m) ||O_X||`` with ``K_m = |X| + sum_{i<m} k_i``."""
    if not chain:
        raise ValueError("chain must be nonempty")
    profiles = [_profile(a) for a in chain]
    ks, bound, k_acc = [], base.norm, base.size
    for p in profiles:
        ks.append(k_acc)
        bound *= 2 * p.g * k_acc
        k_acc += p.q
    return MultiCommutatorBound(tuple((p.q, p.g) for p in profiles), base.size, base.norm,
                                tuple(ks), float(bound))


def nested_commutator(chain_mats: Sequence[np.ndarray], base: np.ndarray) -> np.ndarray:
    out = base
    for a in chain_mats:
        out = a @ out - out @ a
    return out


def multicommutator_exact(chain: Sequence[FewBodyOperator], base: FewBodyOperator | LocalTerm) -> float:
    """Exact norm of the nested commutator, ``A_1`` innermost."""
    lattice = chain[0].lattice
    if isinstance(base, LocalTerm):
        base_m = embed_term(base, lattice.n_sites, lattice.local_dim)
    else:
        base_m = embed(base)
    return operator_norm(nested_commutator([embed(a) for a in chain], base_m))


def multicommutator_reversed(chain: Sequence[FewBodyOperator], base) -> float:
    """Same with the opposite nesting order; used to catch convention slips."""
    return multicommutator_exact(list(reversed(chain)), base)
