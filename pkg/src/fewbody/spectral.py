"""Dense exact diagonalization: the brute-force side of every certificate."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import logsumexp

from .operators import FewBodyOperator, LocalTerm, ProductState

DEFAULT_DIM_CAP = 2**14
HERMITIAN_TOL = 1e-10
MERGE_TOL = 1e-9


class DimensionError(ValueError):
    """Raised when a dense embedding would exceed the configured cap."""

    def __init__(self, required: int, cap: int):
        super().__init__(f"Hilbert space dimension {required} exceeds cap {cap}")
        self.required = required
        self.cap = cap


def dim_cap() -> int:
    return int(os.environ.get("FEWBODY_DIM_CAP", DEFAULT_DIM_CAP))


@dataclass(frozen=True)
class StateVector:
    """A normalized pure state on the full Hilbert space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).ravel()
        if abs(np.linalg.norm(a) - 1) > 1e-10:
            raise ValueError(f"state vector has norm {np.linalg.norm(a)}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @classmethod
    def product(cls, vectors: Sequence[np.ndarray]) -> "StateVector":
        out = np.ones(1, dtype=complex)
        for v in vectors:
            v = np.asarray(v, dtype=complex)
            out = np.kron(out, v / np.linalg.norm(v))
        return cls(out)


State = Union[ProductState, StateVector, np.ndarray]


def density_matrix(state: State) -> np.ndarray:
    if isinstance(state, ProductState):
        return state.density()
    if isinstance(state, StateVector):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    rho = np.asarray(state, dtype=complex)
    if rho.ndim != 2:
        raise TypeError("expected ProductState, StateVector or density matrix")
    return rho


def embed_term(term: LocalTerm, n_sites: int, local_dim: int) -> np.ndarray:
    """Full ``d^N`` matrix of a single local term."""
    d, n, k = local_dim, n_sites, term.size
    full = np.kron(term.matrix, np.eye(d ** (n - k)))
    order = list(term.support) + [i for i in range(n) if i not in term.support]
    inv = list(np.argsort(order))
    t = full.reshape((d,) * (2 * n)).transpose(inv + [n + i for i in inv])
    return t.reshape(d**n, d**n)


def embed(op: FewBodyOperator, cap: int | None = None) -> np.ndarray:
    """Dense matrix of ``op``; Hermitian-symmetrized when every term is Hermitian."""
    cap = dim_cap() if cap is None else cap
    dim = op.lattice.hilbert_dim
    if dim > cap:
        raise DimensionError(dim, cap)
    out = np.zeros((dim, dim), dtype=complex)
    for t in op.terms:
        out += embed_term(t, op.n_sites, op.lattice.local_dim)
    if op.hermitian:
        out = (out + out.conj().T) / 2
    return out


def _as_dense(op) -> np.ndarray:
    return embed(op) if isinstance(op, FewBodyOperator) else np.asarray(op, dtype=complex)


def eigensystem(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigh(m)


@dataclass(frozen=True)
class SpectralDistribution:
    """Eigenvalues of an observable with their weights ``tr(rho Pi_lambda)``."""

    eigenvalues: np.ndarray
    weights: np.ndarray
    tol: float = MERGE_TOL

    @classmethod
    def from_spectrum(cls, evals: np.ndarray, weights: np.ndarray, scale: float | None = None):
        evals = np.asarray(evals, dtype=float)
        weights = np.asarray(weights, dtype=float)
        order = np.argsort(evals, kind="stable")
        evals, weights = evals[order], weights[order]
        if scale is None:
            scale = float(np.max(np.abs(evals), initial=0.0))
        tol = MERGE_TOL * max(1.0, scale)
        vals, ws = [], []
        for lam, w in zip(evals, weights):
            if vals and lam - vals[-1][0] <= tol:
                vals[-1].append(lam)
                ws[-1] += w
            else:
                vals.append([lam])
                ws.append(w)
        merged = np.array([np.mean(v) for v in vals])
        ws = np.clip(np.array(ws), 0.0, None)
        ws[ws < 1e-15] = 0.0
        total = ws.sum()
        if abs(total - 1) > 1e-9:
            raise ValueError(f"weights sum to {total}, state is not normalized")
        return cls(merged, ws / total, tol)

    def support(self, cutoff: float = 1e-12) -> np.ndarray:
        return self.eigenvalues[self.weights > cutoff]


def spectral_distribution(op, state: State) -> SpectralDistribution:
    """Distribution of ``op`` (operator or dense matrix) in ``state``."""
    evals, evecs = eigensystem(_as_dense(op))
    if isinstance(state, StateVector):
        weights = np.abs(evecs.conj().T @ state.amplitudes) ** 2
    else:
        rho = density_matrix(state)
        weights = np.sum(evecs.conj() * (rho @ evecs), axis=0).real
    return SpectralDistribution.from_spectrum(evals, weights)


def mgf_exact(dist: SpectralDistribution, tau):
    """``log sum_lambda w_lambda exp(tau lambda)``; vectorized over ``tau``."""
    tau = np.asarray(tau, dtype=float)
    keep = dist.weights > 0
    lam, w = dist.eigenvalues[keep], dist.weights[keep]
    out = logsumexp(np.multiply.outer(tau, lam), b=w, axis=-1)
    return float(out) if out.ndim == 0 else out


def tail_exact(dist: SpectralDistribution, x, side: str = "geq"):
    """Weight on eigenvalues ``>= x`` (``side="geq"``) or ``<= -x`` (``side="leq"``)."""
    x = np.asarray(x, dtype=float)
    lam = dist.eigenvalues
    if side == "geq":
        mask = lam[None, :] >= x.reshape(-1, 1) - dist.tol
    elif side == "leq":
        mask = lam[None, :] <= -x.reshape(-1, 1) + dist.tol
    else:
        raise ValueError(f"unknown side {side!r}")
    out = (mask * dist.weights).sum(axis=1)
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def moment_exact(dist: SpectralDistribution, m: int) -> float:
    return float(np.sum(dist.weights * dist.eigenvalues**m))


def excitation_norm(h: FewBodyOperator, a, omega: StateVector, x) -> np.ndarray | float:
    """``|| Pi^H_{>=x} A |Omega> ||`` from the eigensystem of ``H``."""
    hm = _as_dense(h)
    am = _as_dense(a)
    if hm.shape[0] != omega.dim or am.shape[0] != omega.dim:
        raise ValueError("dimension mismatch between H, A and the state")
    evals, evecs = eigensystem(hm)
    coeffs = np.abs(evecs.conj().T @ (am @ omega.amplitudes)) ** 2
    tol = MERGE_TOL * max(1.0, float(np.max(np.abs(evals))))
    xs = np.asarray(x, dtype=float)
    out = np.sqrt(((evals[None, :] >= xs.reshape(-1, 1) - tol) * coeffs).sum(axis=1))
    return float(out[0]) if xs.ndim == 0 else out.reshape(xs.shape)


def operator_norm(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def commutator_norm_exact(a, b) -> float:
    am, bm = _as_dense(a), _as_dense(b)
    return operator_norm(am @ bm - bm @ am)


def block_mgf(layer: FewBodyOperator, state: ProductState, tau):
    """Exact MGF of a layer with pairwise-disjoint supports, one block at a time."""
    tau = np.asarray(tau, dtype=float)
    total = np.zeros_like(tau)
    seen: set[int] = set()
    for t in layer.terms:
        if seen & set(t.support):
            raise ValueError("layer terms overlap")
        seen |= set(t.support)
        total = total + mgf_exact(spectral_distribution(t.matrix, state.reduced(t.support)), tau)
    return float(total) if tau.ndim == 0 else total


def write_curve_csv(path, xs, values, header=("x_or_tau", "exact_value")) -> None:
    """Write columns with 17 significant digits; ``values`` is one column or a 2-D stack of columns."""
    vals = np.asarray(values, dtype=float)
    cols = [np.asarray(xs, dtype=float)] + ([vals] if vals.ndim == 1 else list(vals))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([f"{v:.17g}" for v in row])
