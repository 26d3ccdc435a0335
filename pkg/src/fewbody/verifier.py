"""Randomized soundness sweeps over instance families, with replayable instances.

Each instance is generated from ``numpy.random.default_rng([seed, family, index])``
so any instance can be rebuilt from its digest alone.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .bounds import (
    MARGIN_TOL,
    BoundCertificate,
    certify_commutator_lambda_gn,
    certify_cor2,
    certify_cor4,
    certify_lemma1,
    certify_lemma3,
    certify_lemma5,
    certify_thm1,
    certify_thm3,
)
from .decomposition import (
    band_block_norm_check,
    build_conflict_graph,
    decompose,
    is_non_overlapping,
    layering_from_layers,
)
from .moments import moment_tail_bound, verify_moment_identity
from .operators import (
    FewBodyOperator,
    Lattice,
    LocalTerm,
    ProductState,
    analyze_profile,
    random_hermitian,
    random_instance,
    random_product_state,
)
from .spectral import (
    StateVector,
    eigensystem,
    embed,
    moment_exact,
    operator_norm,
    spectral_distribution,
    tail_exact,
)

STATE_FAMILIES = ("computational", "random-product-pure", "random-product-mixed", "random-mixed")


@dataclass(frozen=True)
class Family:
    """One instance family of a sweep."""

    theorem_id: str
    instances: int
    n_range: tuple[int, ...] = (4, 6)
    q: int = 2
    g: float = 1.0
    n_bar_range: tuple[int, ...] = (2,)
    state_family: str = "random-product-pure"
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or f"{self.theorem_id}/{self.state_family}"

    @classmethod
    def from_dict(cls, d: dict) -> "Family":
        d = dict(d)
        for key in ("n_range", "n_bar_range"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)


@dataclass(frozen=True)
class SweepPlan:
    seed: int
    families: tuple[Family, ...]

    @classmethod
    def from_dict(cls, d: dict) -> "SweepPlan":
        return cls(int(d.get("seed", 0)), tuple(Family.from_dict(f) for f in d.get("families", [])))

    def as_dict(self) -> dict:
        return {"seed": self.seed, "families": [asdict(f) for f in self.families]}


@dataclass
class InstanceResult:
    index: int
    digest: str
    margin: float
    passed: bool
    error: str | None = None
    notes: dict = field(default_factory=dict)


@dataclass
class FamilyReport:
    label: str
    theorem_id: str
    instances: int
    passed: int
    worst_margin: float
    worst_digest: str | None
    failures: list[dict]
    notes: dict

    @property
    def ok(self) -> bool:
        return self.passed == self.instances


@dataclass
class SweepReport:
    seed: int
    version: str
    families: list[FamilyReport]

    @property
    def verdict(self) -> str:
        return "pass" if all(f.ok for f in self.families) else "fail"

    def as_dict(self) -> dict:
        return {"seed": self.seed, "version": self.version, "verdict": self.verdict,
                "families": [asdict(f) for f in self.families]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, default=float)


# ---------------------------------------------------------------- instance generators


def _state(rng: np.random.Generator, lattice: Lattice, family: str):
    if family == "computational":
        return ProductState.computational(lattice, rng.integers(0, lattice.local_dim, lattice.n_sites))
    if family == "random-product-pure":
        return random_product_state(rng, lattice)
    if family == "random-product-mixed":
        return random_product_state(rng, lattice, mixed=True)
    if family == "random-mixed":
        dim = lattice.hilbert_dim
        rank = int(rng.integers(1, dim + 1))
        g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
        rho = g @ g.conj().T
        return (rho + rho.conj().T) / (2 * np.trace(rho).real)
    raise ValueError(f"unknown state family {family!r}")


def _random_op(rng, n, q_max, g_max):
    q = int(rng.integers(1, min(q_max, n) + 1))
    count = int(rng.integers(1, min(math.comb(n, q), 2 * n) + 1))
    style = "pauli-string" if rng.uniform() < 0.5 else "dense-hermitian"
    return random_instance(rng, n, q, float(rng.uniform(0.3, 1.0)) * g_max, count, style)


def _random_layer(rng, lattice: Lattice, k: int, fill: float = 1.0, g: float = 1.0) -> FewBodyOperator:
    """Non-overlapping layer: random disjoint ``k``-site blocks with dense Hermitian terms."""
    sites = rng.permutation(lattice.n_sites)
    terms = []
    for b in range(lattice.n_sites // k):
        if rng.uniform() > fill and terms:
            continue
        support = tuple(sorted(int(s) for s in sites[b * k:(b + 1) * k]))
        m = random_hermitian(rng, lattice.local_dim**k)
        terms.append(LocalTerm(support, g * m / np.linalg.norm(m, 2)))
    return FewBodyOperator(lattice, tuple(terms))


def _layered_instance(rng, n, n_bar, k):
    lattice = Lattice.chain(n)
    return layering_from_layers([_random_layer(rng, lattice, k, fill=0.8) for _ in range(n_bar)])


def _chain_layering(rng, n, n_bar=None):
    lattice = Lattice.chain(n)
    terms = tuple(LocalTerm((i, i + 1), random_hermitian(rng, 4) / 4) for i in range(n - 1))
    return decompose(FewBodyOperator(lattice, terms), n_bar)


def _pick(rng, seq):
    return seq[int(rng.integers(0, len(seq)))]


def _worst(certs):
    return min(certs, key=lambda c: c.scaled_margin_min)


def _run_thm1(rng, fam):
    n = _pick(rng, fam.n_range)
    a = _random_op(rng, n, fam.q, fam.g)
    b = _random_op(rng, n, fam.q, fam.g)
    state = _state(rng, a.lattice, fam.state_family)
    return [certify_thm1(a, b, state, "exact"), certify_thm1(a, b, state, "lambda_gN")], {}


def _run_cor2(rng, fam):
    n, n_bar = _pick(rng, fam.n_range), _pick(rng, fam.n_bar_range)
    layers = [_random_op(rng, n, fam.q, fam.g) for _ in range(n_bar)]
    state = _state(rng, layers[0].lattice, fam.state_family)
    return [certify_cor2(layers, state)], {}


def _localized_layer(rng, lattice, k, vectors):
    """Layer whose blocks have the product state as eigenvector or nearly so."""
    d = lattice.local_dim
    sites = rng.permutation(lattice.n_sites)
    terms = []
    for b in range(lattice.n_sites // k):
        support = tuple(sorted(int(s) for s in sites[b * k:(b + 1) * k]))
        psi = np.ones(1, dtype=complex)
        for s in support:
            psi = np.kron(psi, vectors[s])
        basis = rng.normal(size=(d**k, d**k)) + 1j * rng.normal(size=(d**k, d**k))
        basis[:, 0] = psi
        if rng.uniform() < 0.5:
            theta = rng.uniform(0, 0.3)
            basis[:, 0] = np.cos(theta) * psi + np.sin(theta) * basis[:, 1] / np.linalg.norm(basis[:, 1])
        u, _ = np.linalg.qr(basis)
        evals = rng.uniform(-1, 1, size=d**k)
        terms.append(LocalTerm(support, (u * evals) @ u.conj().T))
    return FewBodyOperator(lattice, tuple(terms))


def _run_thm3(rng, fam):
    n, n_bar = _pick(rng, fam.n_range), _pick(rng, fam.n_bar_range)
    k = int(rng.integers(1, fam.q + 1))
    lattice = Lattice.chain(n)
    vecs = [v / np.linalg.norm(v) for v in rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))]
    layering = layering_from_layers([_localized_layer(rng, lattice, k, vecs) for _ in range(n_bar)])
    state = ProductState.from_vectors(lattice, vecs)
    mgf, tail = certify_thm3(layering, state)
    return [mgf, tail], {"sigma": mgf.constants["sigma"]}


SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)


def ff_instance(rng, n: int, kind: str):
    """Frustration-free Hamiltonian with its zero-energy product ground state."""
    lattice = Lattice.chain(n)
    if kind == "onsite":
        vecs = [v / np.linalg.norm(v) for v in rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))]
        terms = []
        for i, v in enumerate(vecs):
            perp = np.array([-v[1].conjugate(), v[0].conjugate()])
            terms.append(LocalTerm((i,), rng.uniform(0.5, 1.0) * np.outer(perp, perp.conj())))
        omega = StateVector.product(vecs)
    elif kind == "singlet":
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        proj = np.outer(SINGLET, SINGLET.conj())
        terms = [LocalTerm((i, i + 1), rng.uniform(0.5, 1.0) * proj) for i in range(n - 1)]
        omega = StateVector.product([v] * n)
    else:
        raise ValueError(f"unknown frustration-free family {kind!r}")
    return FewBodyOperator(lattice, tuple(terms)), omega


def _run_cor4(rng, fam):
    n = _pick(rng, fam.n_range)
    h, omega = ff_instance(rng, n, _pick(rng, ("onsite", "singlet")))
    q = int(rng.integers(1, fam.q + 1))
    a = random_instance(rng, n, q, 1.0, int(rng.integers(1, min(3, math.comb(n, q)) + 1)), "dense-hermitian")
    return [certify_cor4(h, a, omega)], {"q": q}


def _run_lemma5(rng, fam):
    n, n_bar = _pick(rng, fam.n_range), _pick(rng, fam.n_bar_range)
    if rng.uniform() < 0.5:
        layering = _chain_layering(rng, n, n_bar if n_bar >= 2 else None)
    else:
        layering = _layered_instance(rng, n, n_bar, int(rng.integers(1, fam.q + 1)))
    state = _state(rng, layering.op.lattice, fam.state_family)
    dist = spectral_distribution(layering.centered(state).op, state)
    statement = certify_lemma5(layering, state, "statement", dist=dist)
    proof = certify_lemma5(layering, state, "proof", dist=dist)
    return list(statement), {"proof_variant_pass": all(c.passed for c in proof),
                             "proof_variant_margin": min(c.scaled_margin_min for c in proof)}


def _run_lemma3(rng, fam):
    n = _pick(rng, fam.n_range)
    layer = _random_layer(rng, Lattice.chain(n), int(rng.integers(1, fam.q + 1)))
    return [certify_lemma3(layer, _state(rng, layer.lattice, fam.state_family))], {}


def _run_lemma1(rng, fam):
    n = _pick(rng, fam.n_range)
    depth = int(rng.integers(1, 4))
    chain = [_random_op(rng, n, fam.q, fam.g) for _ in range(depth)]
    size = int(rng.integers(1, min(fam.q, n) + 1))
    support = tuple(sorted(int(s) for s in rng.choice(n, size, replace=False)))
    base = LocalTerm(support, random_hermitian(rng, 2**size))
    from .multicommutator import multicommutator_reversed

    cert = certify_lemma1(chain, base)
    single = certify_commutator_lambda_gn(chain[0], FewBodyOperator(chain[0].lattice, (base,)) if depth == 1
                                          else chain[1])
    return [cert, single], {"reversed_exact": multicommutator_reversed(chain, base)}


def _run_band(rng, fam):
    n = _pick(rng, fam.n_range)
    lattice = Lattice.chain(n)
    layer = _random_layer(rng, lattice, int(rng.integers(1, fam.q + 1)), fill=0.8)
    q = int(rng.integers(1, fam.q + 1))
    o = random_instance(rng, n, q, 1.0, 1, "dense-hermitian")
    eig = eigensystem(embed(layer))
    o_norm = operator_norm(embed(o))
    threshold = 2 * analyze_profile(layer).g * q
    top = float(np.max(np.abs(eig[0])))
    eps_grid = np.linspace(-top, top, 10)
    deps_grid = np.linspace(0.05, 1.5 * threshold, 10)
    bounds, exacts, grid = [], [], []
    for eps in eps_grid:
        for de in deps_grid:
            chk = band_block_norm_check(layer, o, eps, de, _eig=eig)
            bounds.append(1e-10 * o_norm if chk.asserted_zero else o_norm + 1e-9)
            exacts.append(chk.norm)
            grid.append(de)
    cert = BoundCertificate("band-block", grid, bounds, exacts, {"threshold": threshold, "q": q}, grid_name="d_eps")
    return [cert], {}


def _run_decomposition(rng, fam):
    n = _pick(rng, fam.n_range)
    op = _random_op(rng, n, fam.q, fam.g)
    layering = decompose(op)
    prof = analyze_profile(op)
    graph = build_conflict_graph(op)
    disjoint = all(is_non_overlapping(layer) for layer in layering.layers)
    chi_ok = layering.chi <= graph.max_degree + 1
    cert = BoundCertificate("decomposition", [0.0], [1e-10 * (1 + prof.g * n)], [layering.reconstruction_error],
                            {"chi": layering.chi, "max_degree": graph.max_degree})
    if not (disjoint and chi_ok):
        cert.bound[:] = -1.0
    return [cert], {"chi": layering.chi, "max_degree": graph.max_degree}


def _run_moment_identity(rng, fam):
    n, n_bar = _pick(rng, fam.n_range), _pick(rng, fam.n_bar_range)
    layering = _layered_instance(rng, n, n_bar, int(rng.integers(1, fam.q + 1)))
    norm_a = operator_norm(embed(layering.op))
    certs = []
    for m in range(1, min(4, n_bar) + 1):
        res = verify_moment_identity(layering, m)
        certs.append(BoundCertificate("moment-identity", [m], [1e-9 * norm_a**m], [res], grid_name="m"))
    return certs, {}


def _run_thm6(rng, fam):
    n, n_bar = _pick(rng, fam.n_range), _pick(rng, fam.n_bar_range)
    if rng.uniform() < 0.5:
        layering = _chain_layering(rng, n, n_bar)
    else:
        layering = _layered_instance(rng, n, n_bar, int(rng.integers(1, fam.q + 1)))
    state = _state(rng, layering.op.lattice, fam.state_family)
    mt = moment_tail_bound(layering, state)
    centered = layering.centered(state)
    dist = spectral_distribution(centered.op, state)
    top = float(np.max(np.abs(dist.eigenvalues)))
    xs = np.linspace(top / 100, 1.1 * top + 1e-9, 101)
    exact = np.maximum(tail_exact(dist, xs, "geq"), tail_exact(dist, xs, "leq"))
    tail = BoundCertificate("thm6-tail", xs, mt.tail(xs), exact, mt.constants, grid_name="x")
    ms = [m for m in mt.moment_bounds if m <= 6]
    mom = BoundCertificate("thm6-moments", ms, [mt.moment_bounds[m] for m in ms],
                           [abs(moment_exact(dist, m)) for m in ms], grid_name="m")
    return [tail, mom], {}


RUNNERS = {
    "thm1": _run_thm1, "cor2": _run_cor2, "thm3": _run_thm3, "cor4": _run_cor4, "lemma5": _run_lemma5,
    "lemma3": _run_lemma3, "lemma1": _run_lemma1, "band-block": _run_band, "decomposition": _run_decomposition,
    "moment-identity": _run_moment_identity, "thm6": _run_thm6,
}


# ---------------------------------------------------------------- digests


def make_digest(seed: int, family: Family, family_index: int, index: int, version: str = __version__) -> str:
    payload = json.dumps({"v": version, "seed": seed, "family": asdict(family), "fi": family_index, "i": index},
                         sort_keys=True, separators=(",", ":"))
    body = base64.urlsafe_b64encode(payload.encode()).decode()
    return f"{body}.{hashlib.sha256(payload.encode()).hexdigest()[:12]}"


def parse_digest(digest: str) -> dict:
    try:
        body, check = digest.rsplit(".", 1)
        payload = base64.urlsafe_b64decode(body.encode()).decode()
    except Exception as exc:
        raise ValueError("unknown digest") from exc
    if hashlib.sha256(payload.encode()).hexdigest()[:12] != check:
        raise ValueError("unknown digest: checksum mismatch")
    return json.loads(payload)


def run_instance(seed: int, family: Family, family_index: int, index: int):
    rng = np.random.default_rng([seed, family_index, index])
    return RUNNERS[family.theorem_id](rng, family)


def replay(digest: str) -> BoundCertificate:
    """Rebuild an instance from its digest and return its worst certificate."""
    info = parse_digest(digest)
    if info["v"] != __version__:
        warnings.warn(f"digest from version {info['v']}, running {__version__}", stacklevel=2)
    certs, _ = run_instance(info["seed"], Family.from_dict(info["family"]), info["fi"], info["i"])
    return _worst(certs)


# ---------------------------------------------------------------- sweeps


def _evaluate(seed, fam, fi, i) -> InstanceResult:
    dg = make_digest(seed, fam, fi, i)
    try:
        certs, notes = run_instance(seed, fam, fi, i)
    except Exception as exc:  # recorded as a family failure, not a crash
        return InstanceResult(i, dg, -math.inf, False, f"{type(exc).__name__}: {exc}")
    worst = _worst(certs)
    return InstanceResult(i, dg, worst.scaled_margin_min, worst.scaled_margin_min >= -MARGIN_TOL, None, notes)


def run_family(seed: int, fam: Family, fi: int, workers: int = 1) -> FamilyReport:
    args = [(seed, fam, fi, i) for i in range(fam.instances)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda a: _evaluate(*a), args))
    else:
        results = [_evaluate(*a) for a in args]
    results.sort(key=lambda r: r.index)
    worst = min(results, key=lambda r: r.margin, default=None)
    notes: dict = {}
    if fam.theorem_id == "lemma5" and results:
        flags = [r.notes.get("proof_variant_pass") for r in results if r.notes]
        notes["proof_variant_failures"] = sum(1 for f in flags if f is False)
        notes["proof_variant_worst_margin"] = min((r.notes["proof_variant_margin"] for r in results if r.notes),
                                                  default=None)
    if fam.theorem_id == "lemma1" and results:
        notes["reversed_order_recorded"] = len([r for r in results if "reversed_exact" in r.notes])
    return FamilyReport(fam.label, fam.theorem_id, len(results), sum(r.passed for r in results),
                        worst.margin if worst else math.inf, worst.digest if worst else None,
                        [{"index": r.index, "digest": r.digest, "margin": r.margin, "error": r.error}
                         for r in results if not r.passed], notes)


def run_sweep(plan: SweepPlan, workers: int = 1) -> SweepReport:
    return SweepReport(plan.seed, __version__,
                       [run_family(plan.seed, fam, fi, workers) for fi, fam in enumerate(plan.families)])


def default_plan(seed: int = 42) -> SweepPlan:
    """Instance families matching the acceptance sweep."""
    F = Family
    fams = [
        F("thm1", 50, (4, 6, 8), 3, 2.0, state_family="computational"),
        F("thm1", 75, (4, 6, 8), 3, 2.0, state_family="random-product-pure"),
        F("thm1", 75, (4, 6, 8), 3, 2.0, state_family="random-product-mixed"),
        F("thm1", 50, (4, 6, 8), 3, 2.0, state_family="random-mixed"),
        F("cor2", 50, (4, 6, 8), 3, 2.0, (2, 3, 4, 5), "random-product-pure"),
        F("cor2", 25, (4, 6), 3, 2.0, (2, 3, 4, 5), "random-product-mixed"),
        F("cor2", 25, (4, 6), 3, 2.0, (2, 3, 4, 5), "random-mixed"),
        F("thm3", 50, (4, 6, 8), 2, 1.0, (1, 2, 3, 4), "random-product-pure"),
        F("cor4", 40, (4, 6, 8, 10), 3, 1.0, state_family="random-product-pure"),
        F("lemma5", 20, (4, 6, 8, 10), 2, 1.0, (2,), "random-product-pure", "lemma5/even-odd-and-layered"),
        F("lemma5", 20, (4, 6, 8), 2, 1.0, (2, 3, 4), "random-product-mixed"),
        F("lemma5", 10, (4, 6, 8), 2, 1.0, (1, 2, 3), "computational"),
        F("lemma3", 20, (4, 6, 8), 3, 1.0, state_family="random-product-mixed"),
        F("lemma1", 100, (4, 6, 8), 3, 2.0),
        F("band-block", 50, (4, 6, 8), 2, 1.0),
        F("decomposition", 200, (4, 6, 8), 3, 2.0),
        F("moment-identity", 30, (3, 4, 5, 6), 2, 1.0, (1, 2, 3, 4, 5)),
        F("thm6", 25, (4, 6, 8, 10), 2, 1.0, (4, 8), "random-product-pure"),
        F("thm6", 25, (4, 6, 8), 2, 1.0, (4, 8), "random-product-mixed"),
    ]
    return SweepPlan(seed, tuple(fams))
