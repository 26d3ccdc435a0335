"""Lattices, local terms, few-body operators and product states.

Conventions used everywhere in the package:

* a term matrix acts on its support sites in ascending index order;
* in a tensor product the lowest site index is the most significant digit,
  so ``sigma^z`` on site 0 of two qubits embeds as ``diag(1, 1, -1, -1)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
STATE_TOL = 1e-12

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(label: str) -> np.ndarray:
    """Kronecker product of single-qubit Paulis, e.g. ``"ZZ"``."""
    out = np.ones((1, 1), dtype=complex)
    for ch in label.upper():
        out = np.kron(out, PAULI[ch])
    return out


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def spectral_norm(matrix: np.ndarray, hermitian: bool = False) -> float:
    """Largest singular value, via eigendecomposition for Hermitian input."""
    if matrix.size == 0:
        return 0.0
    if hermitian:
        return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))
    return float(np.linalg.norm(matrix, 2))


@dataclass(frozen=True)
class Lattice:
    """A finite set of ``n_sites`` spins of local dimension ``local_dim``.

    ``dims`` optionally places the sites on an open regular grid (row-major,
    last axis fastest); distances are then shortest-path lengths on the grid.
    """

    n_sites: int
    local_dim: int = 2
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.local_dim < 2:
            raise ValueError("local_dim must be >= 2")
        if self.dims is not None:
            dims = tuple(int(x) for x in self.dims)
            if any(x < 1 for x in dims) or math.prod(dims) != self.n_sites:
                raise ValueError(f"grid {dims} does not hold {self.n_sites} sites")
            object.__setattr__(self, "dims", dims)

    @classmethod
    def chain(cls, n_sites: int, local_dim: int = 2) -> "Lattice":
        return cls(n_sites, local_dim, (n_sites,))

    @property
    def hilbert_dim(self) -> int:
        return self.local_dim**self.n_sites

    def coords(self, site: int) -> tuple[int, ...]:
        if self.dims is None:
            raise ValueError("no geometry")
        return tuple(int(c) for c in np.unravel_index(site, self.dims))

    def dist(self, x: int | Iterable[int], y: int | Iterable[int]) -> int:
        """Shortest-path distance between two sites or two site subsets."""
        xs = [x] if isinstance(x, (int, np.integer)) else list(x)
        ys = [y] if isinstance(y, (int, np.integer)) else list(y)
        best = None
        for i in xs:
            ci = self.coords(i)
            for j in ys:
                d = sum(abs(a - b) for a, b in zip(ci, self.coords(j)))
                best = d if best is None else min(best, d)
        if best is None:
            raise ValueError("empty site set")
        return best

    def diam(self, support: Sequence[int]) -> int:
        return max((self.dist(i, j) for i in support for j in support), default=0)


@dataclass(frozen=True)
class LocalTerm:
    """Matrix ``o_X`` acting on the sites ``support`` (ascending)."""

    support: tuple[int, ...]
    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        support = tuple(int(s) for s in self.support)
        if not support:
            raise ValueError("empty support")
        if list(support) != sorted(set(support)):
            raise ValueError(f"support {support} must be sorted and distinct")
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("term matrix must be square")
        d = int(round(m.shape[0] ** (1.0 / len(support))))
        if d < 2 or d ** len(support) != m.shape[0]:
            raise ValueError(f"matrix dimension {m.shape[0]} is not d^{len(support)} for any d >= 2")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "matrix", m)
        if self.hermitian and np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError(f"term on {support} is flagged hermitian but is not")

    @classmethod
    def pauli(cls, support: Sequence[int], label: str, coeff: float = 1.0) -> "LocalTerm":
        if len(label) != len(support):
            raise ValueError(f"label {label!r} does not match support {tuple(support)}")
        return cls(tuple(support), coeff * pauli_matrix(label), hermitian=True)

    @property
    def size(self) -> int:
        return len(self.support)

    @property
    def norm(self) -> float:
        return spectral_norm(self.matrix, self.hermitian)

    def scaled(self, c: float) -> "LocalTerm":
        return LocalTerm(self.support, c * self.matrix, self.hermitian and np.isreal(c))

    def local_dim(self) -> int:
        return int(round(self.matrix.shape[0] ** (1.0 / self.size)))


@dataclass(frozen=True)
class Profile:
    """Locality ``q``, extensiveness ``g`` and ``lam = 2 g q`` of an operator."""

    q: int
    g: float
    lam: float
    term_count: int
    norm_bound: float

    def as_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "lambda": self.lam,
                "term_count": self.term_count, "global_norm_bound": self.norm_bound}


@dataclass(frozen=True)
class FewBodyOperator:
    """A sum of local terms on a lattice."""

    lattice: Lattice
    terms: tuple[LocalTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple(self.terms)
        d = self.lattice.local_dim
        for t in terms:
            if t.support[-1] >= self.lattice.n_sites:
                raise ValueError(f"support {t.support} outside lattice of {self.lattice.n_sites} sites")
            if t.matrix.shape[0] != d**t.size:
                raise ValueError(f"term on {t.support} has dimension {t.matrix.shape[0]}, expected {d**t.size}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_paulis(cls, lattice: Lattice, items: Iterable[tuple[Sequence[int], str, float]]):
        return cls(lattice, tuple(LocalTerm.pauli(s, lab, c) for s, lab, c in items))

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites

    @property
    def hermitian(self) -> bool:
        return all(t.hermitian for t in self.terms)

    def profile(self) -> Profile:
        return analyze_profile(self)

    def scaled(self, c: float) -> "FewBodyOperator":
        return FewBodyOperator(self.lattice, tuple(t.scaled(c) for t in self.terms))

    def __add__(self, other: "FewBodyOperator") -> "FewBodyOperator":
        if other.lattice != self.lattice:
            raise ValueError("operators live on different lattices")
        return FewBodyOperator(self.lattice, self.terms + other.terms)

    def __len__(self) -> int:
        return len(self.terms)


def analyze_profile(op: FewBodyOperator) -> Profile:
    """Locality, extensiveness (with exact term norms) and ``lambda`` of ``op``."""
    if not op.terms:
        return Profile(0, 0.0, 0.0, 0, 0.0)
    site_load = np.zeros(op.n_sites)
    for t in op.terms:
        site_load[list(t.support)] += t.norm
    q = max(t.size for t in op.terms)
    g = float(site_load.max())
    return Profile(q, g, 2.0 * g * q, len(op.terms), g * op.n_sites)


def check_spatial_range(op: FewBodyOperator, r: int) -> bool:
    """True iff every term has diameter strictly below ``r``."""
    if op.lattice.dims is None:
        raise ValueError("no geometry")
    return all(op.lattice.diam(t.support) < r for t in op.terms)


NAMED_STATES = {
    "zero": np.array([[1, 0], [0, 0]], dtype=complex),
    "one": np.array([[0, 0], [0, 1]], dtype=complex),
    "plus": np.full((2, 2), 0.5, dtype=complex),
    "minus": np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=complex),
    "mixed": 0.5 * np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class ProductState:
    """``rho_1 (x) rho_2 (x) ... (x) rho_N`` with one density matrix per site."""

    lattice: Lattice
    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        factors = tuple(_frozen(f) for f in self.factors)
        d = self.lattice.local_dim
        if len(factors) != self.lattice.n_sites:
            raise ValueError(f"need {self.lattice.n_sites} factors, got {len(factors)}")
        for i, f in enumerate(factors):
            if f.shape != (d, d):
                raise ValueError(f"factor {i} has shape {f.shape}, expected {(d, d)}")
            if np.max(np.abs(f - f.conj().T)) > STATE_TOL:
                raise ValueError(f"factor {i} is not Hermitian")
            if abs(np.trace(f) - 1) > STATE_TOL:
                raise ValueError(f"factor {i} has trace {np.trace(f).real}")
            if np.linalg.eigvalsh(f).min() < -STATE_TOL:
                raise ValueError(f"factor {i} is not positive semidefinite")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_vectors(cls, lattice: Lattice, vectors: Iterable[np.ndarray]) -> "ProductState":
        fs = []
        for v in vectors:
            v = np.asarray(v, dtype=complex)
            v = v / np.linalg.norm(v)
            fs.append(np.outer(v, v.conj()))
        return cls(lattice, tuple(fs))

    @classmethod
    def named(cls, lattice: Lattice, names: str | Sequence[str]) -> "ProductState":
        if isinstance(names, str):
            names = [names] * lattice.n_sites
        return cls(lattice, tuple(NAMED_STATES[n] for n in names))

    @classmethod
    def computational(cls, lattice: Lattice, bits: Sequence[int]) -> "ProductState":
        d = lattice.local_dim
        return cls.from_vectors(lattice, (np.eye(d)[b] for b in bits))

    def reduced(self, support: Sequence[int]) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for s in support:
            out = np.kron(out, self.factors[s])
        return out

    def density(self) -> np.ndarray:
        return self.reduced(range(self.lattice.n_sites))


def center(op: FewBodyOperator, state: ProductState) -> FewBodyOperator:
    """Subtract ``tr(rho_X o_X)`` from every term so each term has zero mean."""
    terms = []
    for t in op.terms:
        mean = np.trace(state.reduced(t.support) @ t.matrix)
        if t.hermitian:
            mean = mean.real
        terms.append(LocalTerm(t.support, t.matrix - mean * np.eye(t.matrix.shape[0]), t.hermitian))
    return FewBodyOperator(op.lattice, tuple(terms))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_instance(seed, n_sites: int, q: int, g: float, term_count: int,
                    style: str = "pauli-string", local_dim: int = 2) -> FewBodyOperator:
    """Random operator on distinct ``q``-site supports rescaled to extensiveness ``g``.

    Deterministic in ``seed`` (an int or a ``numpy.random.Generator``).
    """
    if q < 1 or q > n_sites or term_count < 1:
        raise ValueError(f"infeasible parameters: q={q}, n_sites={n_sites}, term_count={term_count}")
    if math.comb(n_sites, q) < term_count:
        raise ValueError(f"only {math.comb(n_sites, q)} distinct {q}-site supports exist, "
                         f"{term_count} requested")
    if style == "pauli-string" and local_dim != 2:
        raise ValueError("pauli-string style needs local_dim=2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lattice = Lattice.chain(n_sites, local_dim)
    all_supports = list(itertools.combinations(range(n_sites), q))
    picks = rng.choice(len(all_supports), size=term_count, replace=False)
    terms = []
    for p in sorted(picks):
        support = all_supports[p]
        if style == "pauli-string":
            label = "".join(rng.choice(list("XYZ"), size=q))
            terms.append(LocalTerm.pauli(support, label, rng.uniform(0.2, 1.0) * rng.choice([-1, 1])))
        elif style == "dense-hermitian":
            terms.append(LocalTerm(support, random_hermitian(rng, local_dim**q)))
        else:
            raise ValueError(f"unknown style {style!r}")
    op = FewBodyOperator(lattice, tuple(terms))
    return op.scaled(g / analyze_profile(op).g)


def random_product_state(rng: np.random.Generator, lattice: Lattice, mixed: bool = False) -> ProductState:
    """Random pure product state, optionally mixed with the identity per site."""
    d = lattice.local_dim
    factors = []
    for _ in range(lattice.n_sites):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        v /= np.linalg.norm(v)
        rho = np.outer(v, v.conj())
        if mixed:
            p = rng.uniform()
            rho = (1 - p) * rho + p * np.eye(d) / d
        factors.append((rho + rho.conj().T) / 2)
    return ProductState(lattice, tuple(factors))


def nearest_neighbor_chain(n_sites: int, bond: np.ndarray | str, coeff: float = 1.0,
                           local_dim: int = 2) -> FewBodyOperator:
    """Open chain ``sum_i coeff * bond_{i,i+1}``; ``bond`` is a 2-site matrix or Pauli label."""
    lattice = Lattice.chain(n_sites, local_dim)
    mat = pauli_matrix(bond) if isinstance(bond, str) else np.asarray(bond, dtype=complex)
    return FewBodyOperator(lattice, tuple(LocalTerm((i, i + 1), coeff * mat) for i in range(n_sites - 1)))


def heisenberg_chain(n_sites: int, coupling: float = 1.0) -> FewBodyOperator:
    """Spin-1/2 Heisenberg chain ``J sum S_i . S_{i+1}`` with open ends."""
    bond = (pauli_matrix("XX") + pauli_matrix("YY") + pauli_matrix("ZZ")) / 4
    return nearest_neighbor_chain(n_sites, bond, coupling)
