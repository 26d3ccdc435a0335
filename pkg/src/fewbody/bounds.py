"""Right-hand sides of the concentration bounds and their certificates.

Every ``certify_*`` function evaluates one bound on a deterministic grid,
computes the matching exact quantity by dense diagonalization and returns a
:class:`BoundCertificate` recording both curves and the worst margin.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .decomposition import Layering, is_non_overlapping, localization_width
from .multicommutator import lemma1_bound, multicommutator_exact
from .operators import FewBodyOperator, LocalTerm, ProductState, analyze_profile, center
from .spectral import (
    StateVector,
    block_mgf,
    density_matrix,
    embed,
    embed_term,
    excitation_norm,
    mgf_exact,
    operator_norm,
    spectral_distribution,
    tail_exact,
    commutator_norm_exact,
)

C_UNIVERSAL = 0.5
GRID_POINTS = 101
TAU_SHRINK = 1e-6
MARGIN_TOL = 1e-9
VARIANT_DIVISOR = {"statement": 2.0, "proof": 8.0}


class DomainError(ValueError):
    pass


def ceil_log2(n: int) -> int:
    return (int(n) - 1).bit_length() if n > 1 else 0


@dataclass(frozen=True)
class BoundConstants:
    lam: float
    g: float
    k: int
    n_bar: int = 1
    C: float = C_UNIVERSAL
    n_sites: int = 0
    k_eff: float | None = None

    @property
    def m0(self) -> int:
        return ceil_log2(self.n_bar)

    @property
    def tau_max(self) -> float:
        return math.inf if self.lam == 0 else 1.0 / (4 * self.lam)

    def c_tilde(self, variant: str = "statement") -> float:
        k = self.k if self.k_eff is None else self.k_eff
        first = 2 * self.g**2 * self.C / k if k else 0.0
        return first + 3 * self.lam * self.g / VARIANT_DIVISOR[variant] * self.m0

    def as_dict(self) -> dict:
        return {"C": self.C, "lambda": self.lam, "g": self.g, "k": self.k, "k_eff": self.k_eff,
                "n_bar": self.n_bar, "m0": self.m0, "N": self.n_sites,
                "C_tilde_statement": self.c_tilde("statement"), "C_tilde_proof": self.c_tilde("proof"),
                "tau_domain": self.tau_max}


@dataclass
class BoundCertificate:
    theorem_id: str
    grid: np.ndarray
    bound: np.ndarray
    exact: np.ndarray
    constants: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    grid_name: str = "tau"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.grid = np.atleast_1d(np.asarray(self.grid, dtype=float))
        self.bound = np.atleast_1d(np.asarray(self.bound, dtype=float))
        self.exact = np.atleast_1d(np.asarray(self.exact, dtype=float))
        if not (self.grid.shape == self.bound.shape == self.exact.shape):
            raise ValueError("grid, bound and exact curves must align")

    @property
    def margins(self) -> np.ndarray:
        return self.bound - self.exact

    @property
    def margin_min(self) -> float:
        return float(self.margins.min()) if self.margins.size else math.inf

    @property
    def scaled_margin_min(self) -> float:
        if not self.margins.size:
            return math.inf
        return float((self.margins / (1 + np.abs(self.bound))).min())

    @property
    def verdict(self) -> str:
        return "pass" if self.scaled_margin_min >= -MARGIN_TOL else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {"theorem_id": self.theorem_id, "inputs": self.inputs, "constants": self.constants,
                "grid_name": self.grid_name, "grid": self.grid.tolist(), "bound": self.bound.tolist(),
                "exact": self.exact.tolist(), "margin_min": self.margin_min,
                "scaled_margin_min": self.scaled_margin_min, "verdict": self.verdict, **self.extra}


def digest(obj) -> str:
    """Short content hash of operators, states and arrays."""
    h = hashlib.sha256()

    def feed(o):
        if isinstance(o, FewBodyOperator):
            h.update(f"op{o.n_sites},{o.lattice.local_dim}".encode())
            for t in o.terms:
                h.update(str(t.support).encode())
                h.update(np.ascontiguousarray(np.round(t.matrix, 12)).tobytes())
        elif isinstance(o, ProductState):
            for f in o.factors:
                h.update(np.ascontiguousarray(np.round(f, 12)).tobytes())
        elif isinstance(o, StateVector):
            h.update(np.round(o.amplitudes, 12).tobytes())
        elif isinstance(o, Layering):
            for layer in o.layers:
                feed(layer)
        elif isinstance(o, (list, tuple)):
            for x in o:
                feed(x)
        else:
            h.update(np.ascontiguousarray(np.round(np.asarray(o, dtype=complex), 12)).tobytes())

    feed(obj)
    return h.hexdigest()[:16]


def tau_grid(tau_max: float, n: int = GRID_POINTS, closed: bool = False) -> np.ndarray:
    """Uniform grid on ``|tau| < tau_max`` (shrunk by a relative 1e-6 unless closed)."""
    half = tau_max if closed else tau_max * (1 - TAU_SHRINK)
    return np.linspace(-half, half, n)


def x_grid(lo: float, hi: float, n: int = GRID_POINTS) -> np.ndarray:
    return np.linspace(lo, max(hi, lo), n)


def _center_if_product(op: FewBodyOperator, state) -> FewBodyOperator:
    return center(op, state) if isinstance(state, ProductState) else op


def _check_domain(tau, tau_max: float, closed: bool, name: str):
    t = np.abs(np.asarray(tau, dtype=float))
    bad = t > tau_max if closed else t >= tau_max
    if np.any(bad):
        raise DomainError(f"tau outside {name} domain |tau| {'<=' if closed else '<'} {tau_max}")


def _scalar(x, like):
    return float(x) if np.ndim(like) == 0 else np.asarray(x)


# ---------------------------------------------------------------- Hoeffding


def hoeffding_block_mgf(layer: FewBodyOperator, state: ProductState, tau):
    """``sum_blocks tau^2 (2 ||a||)^2 / 8`` for a centered non-overlapping layer."""
    if not is_non_overlapping(layer):
        raise ValueError("layer terms overlap")
    norms = np.array([t.norm for t in center(layer, state).terms])
    tau = np.asarray(tau, dtype=float)
    return _scalar(tau**2 * np.sum(norms**2) / 2, tau)


def certify_lemma3(layer: FewBodyOperator, state: ProductState, n: int = GRID_POINTS) -> BoundCertificate:
    centered = center(layer, state)
    norm_max = max((t.norm for t in centered.terms), default=0.0)
    tau_max = 1.0 / norm_max if norm_max > 0 else 1.0
    grid = np.linspace(-tau_max, tau_max, n)
    exact = mgf_exact(spectral_distribution(embed(centered), state), grid)
    return BoundCertificate("lemma3", grid, hoeffding_block_mgf(layer, state, grid), exact,
                            {"C": C_UNIVERSAL, "blocks": len(layer.terms)},
                            {"layer": digest(layer), "state": digest(state)},
                            extra={"block_mgf": np.atleast_1d(block_mgf(centered, state, grid)).tolist()})


# ---------------------------------------------------------------- commutator MGF bounds


def joint_constants(*ops: FewBodyOperator, n_bar: int = 1) -> BoundConstants:
    profiles = [analyze_profile(o) for o in ops]
    g = max(p.g for p in profiles)
    k = max(p.q for p in profiles)
    return BoundConstants(2 * g * k, g, k, n_bar, n_sites=ops[0].n_sites)


def thm1_bound(a: FewBodyOperator, b: FewBodyOperator, state, tau, commutator_norm_mode: str = "exact"):
    """``[M(2A) + M(2B)]/2 + (3 tau^2 / 2) ||[A, B]||`` on ``|tau| < 1/(4 lambda)``."""
    a, b = _center_if_product(a, state), _center_if_product(b, state)
    const = joint_constants(a, b)
    _check_domain(tau, const.tau_max, False, "Theorem 1")
    return _thm1_curve(a, b, state, np.asarray(tau, dtype=float), const, commutator_norm_mode)[0]


def _thm1_curve(a, b, state, tau, const, mode):
    if mode == "exact":
        comm = commutator_norm_exact(a, b)
    elif mode == "lambda_gN":
        comm = const.lam * const.g * a.n_sites
    else:
        raise ValueError(f"unknown commutator mode {mode!r}")
    da, db = spectral_distribution(a, state), spectral_distribution(b, state)
    bound = (mgf_exact(da, 2 * tau) + mgf_exact(db, 2 * tau)) / 2 + 1.5 * tau**2 * comm
    return _scalar(bound, tau), comm


def certify_thm1(a: FewBodyOperator, b: FewBodyOperator, state, commutator_norm_mode: str = "exact",
                 n: int = GRID_POINTS) -> BoundCertificate:
    a, b = _center_if_product(a, state), _center_if_product(b, state)
    const = joint_constants(a, b)
    grid = tau_grid(const.tau_max, n)
    bound, comm = _thm1_curve(a, b, state, grid, const, commutator_norm_mode)
    exact = mgf_exact(spectral_distribution(embed(a) + embed(b), state), grid)
    return BoundCertificate("thm1", grid, bound, exact, const.as_dict(),
                            {"A": digest(a), "B": digest(b), "state": digest(_state_key(state))},
                            extra={"commutator_norm": comm, "commutator_norm_mode": commutator_norm_mode})


def _state_key(state):
    return state if isinstance(state, (ProductState, StateVector)) else density_matrix(state)


def cor2_bound(layers: Sequence[FewBodyOperator], state, tau):
    """Recursive-halving bound on ``M((1/n_bar) sum_j A_j)``."""
    layers = [_center_if_product(x, state) for x in layers]
    const = joint_constants(*layers, n_bar=len(layers))
    _check_domain(tau, const.tau_max, False, "Corollary 2")
    return _cor2_curve(layers, state, np.asarray(tau, dtype=float), const)


def _cor2_curve(layers, state, tau, const):
    n_bar, m0 = len(layers), const.m0
    s = 2**m0 / n_bar
    total = sum(mgf_exact(spectral_distribution(x, state), s * tau) for x in layers) / 2**m0
    return _scalar(total + 3 * const.lam * const.g * const.n_sites * tau**2 * m0 / 8, tau)


def certify_cor2(layers: Sequence[FewBodyOperator], state, n: int = GRID_POINTS) -> BoundCertificate:
    layers = [_center_if_product(x, state) for x in layers]
    const = joint_constants(*layers, n_bar=len(layers))
    grid = tau_grid(const.tau_max, n)
    avg = sum(embed(x) for x in layers) / len(layers)
    exact = mgf_exact(spectral_distribution(avg, state), grid)
    return BoundCertificate("cor2", grid, _cor2_curve(layers, state, grid, const), exact, const.as_dict(),
                            {"layers": digest(list(layers)), "state": digest(_state_key(state))})


# ---------------------------------------------------------------- localized layers, excitations


def thm3_mgf(sigma: float, lam: float, tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(lam * np.abs(tau) >= 1):
        raise DomainError("Theorem 3 needs lambda |tau| < 1")
    return _scalar(-sigma / lam * np.log1p(-lam * np.abs(tau)), tau)


def thm3_tail(sigma: float, lam: float, x):
    """``(x/sigma)^(sigma/lambda) exp(-(x - sigma)/lambda)`` for ``x >= sigma``, else 1."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if sigma > 0:
            val = np.exp(sigma / lam * np.log(np.maximum(x, sigma) / sigma) - (x - sigma) / lam)
        else:
            val = np.exp(-x / lam)
    val = np.where(x >= sigma, np.minimum(val, 1.0), 1.0)
    return _scalar(val, x)


@dataclass(frozen=True)
class LocalizedLayering:
    layering: Layering
    sigma: float
    widths: tuple[float, ...]

    @property
    def lam(self) -> float:
        return self.layering.lam


def localize(layering: Layering, state: ProductState, sigma: float | None = None) -> LocalizedLayering:
    """Center the layers and measure (or verify a claimed) localization width."""
    centered = layering.centered(state)
    widths = tuple(localization_width(layer, state) for layer in centered.layers)
    measured = max(widths, default=0.0)
    if sigma is not None:
        for j, w in enumerate(widths):
            if w > sigma + 1e-10:
                layer = centered.layers[j]
                dist = spectral_distribution(layer, state)
                leaked = float(dist.weights[np.abs(dist.eigenvalues) > sigma + dist.tol].sum())
                raise ValueError(f"layer {j} not localized within sigma={sigma}: width {w}, "
                                 f"leaked weight {leaked}")
        measured = sigma
    return LocalizedLayering(centered, measured, widths)


def thm3_bounds(layering: Layering, state: ProductState, tau=None, x=None, sigma: float | None = None) -> dict:
    loc = localize(layering, state, sigma)
    out = {"sigma": loc.sigma, "lambda": loc.lam}
    if tau is not None:
        out["mgf"] = thm3_mgf(loc.sigma, loc.lam, tau)
    if x is not None:
        out["tail"] = thm3_tail(loc.sigma, loc.lam, x)
    return out


def certify_thm3(layering: Layering, state: ProductState, n: int = GRID_POINTS,
                 lam_tau_max: float = 0.9) -> tuple[BoundCertificate, BoundCertificate]:
    """MGF certificate on ``lambda |tau| <= 0.9`` and two-sided tail certificate on ``x >= sigma``."""
    loc = localize(layering, state)
    lam, sigma = loc.lam, loc.sigma
    dist = spectral_distribution(loc.layering.op, state)
    consts = {"sigma": sigma, "lambda": lam, "g": loc.layering.g, "k": loc.layering.k,
              "widths": list(loc.widths), "n_bar": layering.n_bar}
    inputs = {"layering": digest(layering), "state": digest(state)}
    taus = np.linspace(-lam_tau_max / lam, lam_tau_max / lam, n) if lam > 0 else np.zeros(n)
    mgf_cert = BoundCertificate("thm3-mgf", taus, thm3_mgf(sigma, lam, taus) if lam > 0 else np.zeros(n),
                                mgf_exact(dist, taus), consts, inputs)
    top = float(np.max(np.abs(dist.eigenvalues)))
    xs = x_grid(sigma, max(top, sigma) * 1.2 + lam)
    exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
    tail_cert = BoundCertificate("thm3-tail", xs, thm3_tail(sigma, lam, xs) if lam > 0 else np.ones(n),
                                 exact, consts, inputs, grid_name="x")
    return mgf_cert, tail_cert


def frustration_residuals(h: FewBodyOperator, omega: StateVector) -> list[float]:
    n, d = h.n_sites, h.lattice.local_dim
    return [float(np.linalg.norm(embed_term(t, n, d) @ omega.amplitudes)) for t in h.terms]


def check_frustration_free(h: FewBodyOperator, omega: StateVector, tol: float = 1e-10) -> None:
    for t, r in zip(h.terms, frustration_residuals(h, omega)):
        if r > tol:
            raise ValueError(f"not frustration free: term on {t.support} has residual {r:.3e}")


def cor4_ff_bound(h: FewBodyOperator, a: FewBodyOperator, omega: StateVector, x, check: bool = True):
    """``(x/(lambda q))^(q/2k) exp(-x/(2 k lambda) + q/(2k))`` for ``x >= lambda q``."""
    if check:
        check_frustration_free(h, omega)
    ph, q = analyze_profile(h), analyze_profile(a).q
    k, lam = ph.q, ph.lam
    x = np.asarray(x, dtype=float)
    if np.any(x < lam * q - 1e-12):
        raise DomainError(f"below validity threshold x >= lambda q = {lam * q}")
    val = (x / (lam * q)) ** (q / (2 * k)) * np.exp(-x / (2 * k * lam) + q / (2 * k))
    return _scalar(val, x)


def akl_basic_bound(h: FewBodyOperator, a: FewBodyOperator, x):
    """``||A|| exp(-x/(5 k lambda) + q)``; general-ground-state comparison baseline."""
    ph, pa = analyze_profile(h), analyze_profile(a)
    norm_a = operator_norm(embed(a)) if a.terms else 0.0
    x = np.asarray(x, dtype=float)
    return _scalar(norm_a * np.exp(-x / (5 * ph.q * ph.lam) + pa.q), x)


def certify_cor4(h: FewBodyOperator, a: FewBodyOperator, omega: StateVector, n: int = GRID_POINTS,
                 x_max: float | None = None) -> BoundCertificate:
    check_frustration_free(h, omega)
    ph, q = analyze_profile(h), analyze_profile(a).q
    lo = ph.lam * q
    hi = x_max if x_max is not None else max(2 * lo, operator_norm(embed(h)) + 1)
    xs = x_grid(lo, hi, n)
    a_omega = np.linalg.norm(embed(a) @ omega.amplitudes)
    exact = excitation_norm(h, a, omega, xs) / a_omega if a_omega > 0 else np.zeros(n)
    return BoundCertificate("cor4", xs, cor4_ff_bound(h, a, omega, xs, check=False), exact,
                            {"k": ph.q, "g": ph.g, "lambda": ph.lam, "q": q},
                            {"H": digest(h), "A": digest(a), "omega": digest(omega)}, grid_name="x",
                            extra={"A_omega_norm": float(a_omega)})


def certify_akl(h: FewBodyOperator, a: FewBodyOperator, omega: StateVector, n: int = GRID_POINTS) -> BoundCertificate:
    ph = analyze_profile(h)
    xs = x_grid(0.0, operator_norm(embed(h)) + 1, n)
    exact = excitation_norm(h, a, omega, xs)
    return BoundCertificate("akl", xs, akl_basic_bound(h, a, xs), exact,
                            {"k": ph.q, "lambda": ph.lam, "q": analyze_profile(a).q},
                            {"H": digest(h), "A": digest(a), "omega": digest(omega)}, grid_name="x")


# ---------------------------------------------------------------- layered MGF and tails


def lemma5_constants(layering: Layering, C: float = C_UNIVERSAL) -> BoundConstants:
    """Constants of a centered layering.

    The quadratic block term assumes at most ``N/k`` blocks per layer; if a
    layer has more, ``k`` in that term is replaced by ``N / max_blocks``.
    """
    n = layering.n_sites
    k = layering.k
    max_blocks = max(layering.block_counts, default=0)
    k_eff = min(k, n / max_blocks) if max_blocks else k
    return BoundConstants(layering.lam, layering.g, k, layering.n_bar, C, n,
                          k_eff=k_eff if k_eff < k else None)


def lemma5_bound(layering: Layering, state: ProductState, tau, variant: str = "statement"):
    """``C_tilde N tau^2`` on ``|tau| <= 1/(4 lambda)``."""
    const = lemma5_constants(layering.centered(state))
    _check_domain(tau, const.tau_max, True, "Lemma 5")
    tau = np.asarray(tau, dtype=float)
    return _scalar(const.c_tilde(variant) * const.n_sites * tau**2, tau)


def two_branch_tail(c_tilde: float, n_sites: int, lam: float, x):
    """``max(exp(-x^2/(4 C_tilde N)), exp(-x/(8 lambda)))``."""
    x = np.asarray(x, dtype=float)
    val = np.maximum(np.exp(-x**2 / (4 * c_tilde * n_sites)), np.exp(-x / (8 * lam)))
    return _scalar(np.minimum(val, 1.0), x)


def mgf_to_tail(mgf_bound: Callable[[np.ndarray], np.ndarray], x, tau_max: float | None,
                n: int = 2001) -> np.ndarray | float:
    """``inf_tau exp(-tau x + mgf_bound(tau))`` over ``0 <= tau <= tau_max``, clamped to 1.

    The infimum is taken over a uniform grid and polished with a bounded
    scalar minimization; every evaluated ``tau`` is admissible, so the result
    is a valid bound regardless of optimizer accuracy.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if tau_max is not None and tau_max <= 0:
        raise DomainError("empty tau domain")
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        expo = lambda t: -t * xv + float(mgf_bound(t))  # noqa: E731
        if tau_max is None or math.isinf(tau_max):
            res = minimize_scalar(expo, bracket=(0.0, 1.0))
            cands = [0.0, expo(max(res.x, 0.0))]
        else:
            ts = np.linspace(0.0, tau_max, n)
            vals = -ts * xv + np.asarray(mgf_bound(ts), dtype=float)
            j = int(np.argmin(vals))
            lo, hi = ts[max(j - 1, 0)], ts[min(j + 1, n - 1)]
            cands = [float(vals[j])]
            if hi > lo:
                res = minimize_scalar(expo, bounds=(lo, hi), method="bounded")
                cands.append(expo(float(np.clip(res.x, 0.0, tau_max))))
        out[i] = min(1.0, math.exp(min(min(cands), 0.0)))
    return float(out[0]) if np.ndim(x) == 0 else out


def chebyshev_bound(sigma1: float, sigma2: float, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        val = np.where(np.abs(x) > 0, ((sigma1 + sigma2) / np.abs(x)) ** 2, 1.0)
    return _scalar(np.minimum(val, 1.0), x)


def certify_lemma5(layering: Layering, state: ProductState, variant: str = "statement",
                   n: int = GRID_POINTS, dist=None) -> tuple[BoundCertificate, BoundCertificate]:
    """MGF certificate on the closed domain and two-sided tail certificate for ``x`` in ``[0, ||A||]``.

    ``dist`` may carry the precomputed distribution of the centered operator.
    """
    centered = layering.centered(state)
    const = lemma5_constants(centered)
    ct = const.c_tilde(variant)
    if dist is None:
        dist = spectral_distribution(centered.op, state)
    taus = tau_grid(const.tau_max, n, closed=True)
    consts = const.as_dict() | {"variant": variant, "C_tilde": ct}
    inputs = {"layering": digest(layering), "state": digest(state)}
    mgf_cert = BoundCertificate("lemma5-mgf", taus, ct * const.n_sites * taus**2, mgf_exact(dist, taus),
                                consts, inputs)
    top = float(np.max(np.abs(dist.eigenvalues)))
    xs = x_grid(0.0, top, n)
    exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
    closed = two_branch_tail(ct, const.n_sites, const.lam, xs)
    optimized = mgf_to_tail(lambda t: ct * const.n_sites * np.asarray(t) ** 2, xs, const.tau_max)
    tail_cert = BoundCertificate("lemma5-tail", xs, closed, exact, consts, inputs, grid_name="x",
                                 extra={"optimized_tail": np.asarray(optimized).tolist()})
    return mgf_cert, tail_cert


def certify_chebyshev(a1: FewBodyOperator, a2: FewBodyOperator, state, n: int = GRID_POINTS) -> BoundCertificate:
    rho = density_matrix(state)
    m1, m2 = embed(a1), embed(a2)
    dim = m1.shape[0]
    m1 = m1 - np.trace(rho @ m1).real * np.eye(dim)
    m2 = m2 - np.trace(rho @ m2).real * np.eye(dim)
    s1 = math.sqrt(max(np.trace(rho @ m1 @ m1).real, 0.0))
    s2 = math.sqrt(max(np.trace(rho @ m2 @ m2).real, 0.0))
    dist = spectral_distribution(m1 + m2, rho)
    xs = x_grid(0.0, float(np.max(np.abs(dist.eigenvalues))) + 1, n)
    return BoundCertificate("chebyshev", xs, chebyshev_bound(s1, s2, xs), tail_exact(dist, xs),
                            {"sigma1": s1, "sigma2": s2}, {"A1": digest(a1), "A2": digest(a2)}, grid_name="x")


def certify_lemma1(chain: Sequence[FewBodyOperator], base: LocalTerm) -> BoundCertificate:
    b = lemma1_bound(chain, base)
    exact = multicommutator_exact(chain, base)
    return BoundCertificate("lemma1", [len(chain)], [b.bound], [exact], b.as_dict(),
                            {"chain": digest(list(chain)), "base": digest(base.matrix)}, grid_name="n")


def certify_commutator_lambda_gn(a: FewBodyOperator, b: FewBodyOperator) -> BoundCertificate:
    const = joint_constants(a, b)
    return BoundCertificate("commutator-lambda-gN", [0.0], [const.lam * const.g * a.n_sites],
                            [commutator_norm_exact(a, b)], const.as_dict(),
                            {"A": digest(a), "B": digest(b)}, grid_name="n")


def certificate_json(cert: BoundCertificate) -> str:
    return json.dumps(cert.as_dict(), default=float)


__all__ = [
    "BoundCertificate", "BoundConstants", "DomainError", "akl_basic_bound", "certify_akl", "certify_chebyshev",
    "certify_cor2", "certify_cor4", "certify_lemma1", "certify_lemma3", "certify_lemma5", "certify_thm1",
    "certify_thm3", "chebyshev_bound", "cor2_bound", "cor4_ff_bound", "hoeffding_block_mgf", "lemma5_bound",
    "lemma5_constants", "mgf_to_tail", "thm1_bound", "thm3_bounds", "thm3_mgf", "thm3_tail", "two_branch_tail",
]
