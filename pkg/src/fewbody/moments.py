"""Moment decomposition ``A^m = sum_j theta_j S_{m-j}`` and the moment-based tail bound.

All combinatorial weights are exact Python integers (or ``Fraction``); floats
enter only when they multiply the quadrature moment bounds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from .bounds import BoundConstants, C_UNIVERSAL, lemma5_constants, two_branch_tail
from .decomposition import Layering
from .operators import ProductState
from .spectral import embed, operator_norm

DEFAULT_M_MAX = 12
SUBSET_BUDGET = 10**5
QUAD_RTOL = 1e-6


def binom(a: int, j: int) -> int:
    """Binomial with ``binom(a, 0) = 1`` for every ``a`` and zero when ``0 <= a < j``."""
    if j == 0:
        return 1
    if j < 0 or a < j:
        return 0
    return math.comb(a, j)


def theta_coefficients(n_bar: int, m: int) -> list[int]:
    """``theta_j = (-1)^j binom(n_bar - m + j - 1, j)`` for ``j = 0..m-1``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if n_bar < m:
        raise ValueError("decomposition requires n_bar >= m")
    return [(-1) ** j * binom(n_bar - m + j - 1, j) for j in range(m)]


def theta_recurrence(n_bar: int, m: int) -> list[int]:
    """Solve ``theta_j0 = 1 - sum_{j<j0} theta_j binom(n_bar - m + j0, j0 - j)``."""
    theta = [1]
    for j0 in range(1, m):
        theta.append(1 - sum(theta[j] * binom(n_bar - m + j0, j0 - j) for j in range(j0)))
    return theta


def theta_recurrence_check(n_bar: int, m: int) -> bool:
    return theta_coefficients(n_bar, m) == theta_recurrence(n_bar, m)


def summand_count(n_bar: int, m: int) -> tuple[int, int]:
    """Exact count ``sum_j |theta_j| binom(n_bar, m-j)`` and the cap ``2^m binom(n_bar, m)``."""
    theta = theta_coefficients(n_bar, m)
    exact = sum(abs(t) * math.comb(n_bar, m - j) for j, t in enumerate(theta))
    return exact, 2**m * math.comb(n_bar, m)


def appendix_table(nbar_max: int = 30) -> list[dict]:
    rows = []
    for n_bar in range(1, nbar_max + 1):
        for m in range(1, n_bar + 1):
            exact, cap = summand_count(n_bar, m)
            rows.append({"n_bar": n_bar, "m": m, "theta_ok": theta_recurrence_check(n_bar, m),
                         "count": exact, "count_cap": cap, "count_ok": exact <= cap})
    return rows


def subset_power_sum(layer_mats, size: int, m: int) -> np.ndarray:
    """``sum_{|Xi|=size} (sum_{i in Xi} A_i)^m``."""
    out = np.zeros_like(layer_mats[0])
    for xi in itertools.combinations(range(len(layer_mats)), size):
        out += np.linalg.matrix_power(sum(layer_mats[i] for i in xi), m)
    return out


def verify_moment_identity(layering: Layering, m: int, budget: int = SUBSET_BUDGET) -> float:
    """``|| A^m - sum_j theta_j S_{m-j} ||`` by dense evaluation."""
    n_bar = layering.n_bar
    theta = theta_coefficients(n_bar, m)
    needed = sum(math.comb(n_bar, m - j) for j in range(m))
    if needed > budget:
        raise ValueError(f"subset enumeration needs {needed} subsets, budget is {budget}")
    mats = [embed(layer) for layer in layering.layers]
    a = sum(mats) / n_bar
    rhs = sum(t * subset_power_sum(mats, m - j, m) for j, t in enumerate(theta)) / n_bar**m
    return operator_norm(np.linalg.matrix_power(a, m) - rhs)


def tail_moment_integral(m: int, tail, x_max: float | None = None, knots=()) -> float:
    """``m * int_0^x_max x^(m-1) min(1, 2 tail(x)) dx`` plus the quadrature error estimate.

    This is the ``m``-th absolute moment of the law whose two-sided tail is
    ``min(1, 2 tail(x))``; ``knots`` are interior break points handed to quad.
    """
    if m == 0:
        return 1.0
    upper = np.inf if x_max is None else float(x_max)
    if upper == 0:
        return 0.0

    def integrand(x):
        return m * x ** (m - 1) * min(1.0, 2 * tail(x))

    pts = sorted({p for p in knots if 0 < p < upper})
    total, err, lo = 0.0, 0.0, 0.0
    for hi in pts + [upper]:
        val, e = integrate.quad(integrand, lo, hi, epsrel=QUAD_RTOL, epsabs=0.0, limit=200)
        total, err, lo = total + val, err + e, hi
    return total + err + QUAD_RTOL * total


def moment_bound_subgaussian(n_xi: int, m: int, n_sites: int, g: float, k: int,
                             x_max: float | None = None, C: float = C_UNIVERSAL,
                             variant: str = "statement", k_eff: float | None = None) -> float:
    """Upper bound on ``E|A_Xi|^m`` for the average of ``n_xi`` centered layers.

    Integrates the two-branch tail of the ``n_xi``-layer average with
    ``tail_moment_integral``.
    """
    if m == 0:
        return 1.0
    const = BoundConstants(2 * g * k, g, k, n_xi, C, n_sites, k_eff)
    ct, lam = const.c_tilde(variant), const.lam
    # clamp point and branch crossover
    knots = (math.sqrt(4 * ct * n_sites * math.log(2)), 4 * ct * n_sites / (8 * lam))
    return tail_moment_integral(m, lambda x: two_branch_tail(ct, n_sites, lam, x), x_max, knots)


def closed_form_moment(m: int, n_sites: int, c1: float, c2: float) -> float:
    """``c1 Gamma((m+1)/2) (c2 N log m)^(m/2)``, reading the gamma argument as ``(m+1)/2``."""
    return c1 * math.gamma((m + 1) / 2) * (c2 * n_sites * math.log(m)) ** (m / 2)


@dataclass
class MomentTailBound:
    """Moment bounds ``B_m >= |<A^m>|`` and the Markov tail ``min_m B_m / x^m``."""

    n_bar: int
    n_sites: int
    moment_bounds: dict[int, float]
    sub_bounds: dict[tuple[int, int], float]
    c_tilde: dict[int, float]
    x_max: float | None
    constants: dict = field(default_factory=dict)

    @property
    def markov_orders(self) -> list[int]:
        # odd moments do not dominate x^m P(A >= x)
        return [m for m in self.moment_bounds if m % 2 == 0]

    def tail(self, x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(xs <= 0):
            raise ValueError("tail bound needs x > 0")
        best = np.ones_like(xs)
        for m in self.markov_orders:
            best = np.minimum(best, self.moment_bounds[m] / xs**m)
        return float(best[0]) if np.ndim(x) == 0 else best

    def best_order(self, x: float) -> int | None:
        vals = {m: self.moment_bounds[m] / x**m for m in self.markov_orders}
        return min(vals, key=vals.get) if vals else None


def moment_tail_bound(layering: Layering, state: ProductState, m_max: int = DEFAULT_M_MAX,
                      variant: str = "statement", cap: bool = True) -> MomentTailBound:
    """Assemble per-order moment bounds for a layering under a product state.

    ``cap=False`` drops the norm cap on the subset averages (pure analytic
    bound, used for scaling probes).
    """
    centered = layering.centered(state)
    n_bar = centered.n_bar
    if n_bar < 2:
        raise ValueError("moment tail bound needs n_bar >= 2")
    const = lemma5_constants(centered)
    n_sites = centered.n_sites
    x_max = max(sum(t.norm for t in layer.terms) for layer in centered.layers) if cap else None
    top = min(m_max, n_bar)
    sub, moments, cts = {}, {}, {}
    for m in range(1, top + 1):
        theta = theta_coefficients(n_bar, m)
        total = 0.0
        for j, t in enumerate(theta):
            size = m - j
            if t == 0:
                continue
            if (m, size) not in sub:
                sub[(m, size)] = moment_bound_subgaussian(size, m, n_sites, const.g, const.k, x_max,
                                                          const.C, variant, const.k_eff)
                cts[size] = BoundConstants(const.lam, const.g, const.k, size, const.C, n_sites,
                                           const.k_eff).c_tilde(variant)
            weight = Fraction(abs(t) * math.comb(n_bar, size) * size**m, n_bar**m)
            total += float(weight) * sub[(m, size)]
        moments[m] = total
    return MomentTailBound(n_bar, n_sites, moments, sub, cts, x_max,
                           const.as_dict() | {"variant": variant, "m_max": top})


def infinite_dim_tail(layering: Layering, state: ProductState, x, m_max: int = DEFAULT_M_MAX,
                      variant: str = "statement"):
    """Tail bound ``min(1, min_m B_m / x^m)`` for ``x > 0``."""
    if np.any(np.asarray(x, dtype=float) <= 0):
        raise ValueError("x must be positive")
    return moment_tail_bound(layering, state, m_max, variant).tail(x)
