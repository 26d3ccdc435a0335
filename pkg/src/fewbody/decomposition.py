"""Split a few-body operator into layers of non-overlapping terms.

``A = (1/n_bar) sum_j A_j`` where every ``A_j`` is a sum of terms with pairwise
disjoint supports. Layers come from greedy coloring of the support-conflict
graph, so the average reproduces ``A`` exactly rather than up to ``O(N/n_bar)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .operators import FewBodyOperator, LocalTerm, Profile, ProductState, analyze_profile, center
from .spectral import DimensionError, eigensystem, embed, operator_norm, spectral_distribution


@dataclass(frozen=True)
class ConflictGraph:
    n_vertices: int
    adjacency: tuple[frozenset[int], ...]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, adj in enumerate(self.adjacency) for j in sorted(adj) if i < j]


def build_conflict_graph(op: FewBodyOperator) -> ConflictGraph:
    sets = [set(t.support) for t in op.terms]
    adj = [set() for _ in sets]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] & sets[j]:
                adj[i].add(j)
                adj[j].add(i)
    return ConflictGraph(len(sets), tuple(frozenset(a) for a in adj))


def greedy_coloring(graph: ConflictGraph) -> list[int]:
    """Largest-degree-first greedy coloring, ties by vertex index, lowest free color."""
    order = sorted(range(graph.n_vertices), key=lambda v: (-len(graph.adjacency[v]), v))
    colors = [-1] * graph.n_vertices
    for v in order:
        taken = {colors[u] for u in graph.adjacency[v]}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return colors


def is_non_overlapping(layer: FewBodyOperator) -> bool:
    seen: set[int] = set()
    for t in layer.terms:
        if seen & set(t.support):
            return False
        seen |= set(t.support)
    return True


@dataclass(frozen=True)
class Layering:
    """``op == (1/n_bar) * sum(layers)`` with each layer non-overlapping."""

    op: FewBodyOperator
    layers: tuple[FewBodyOperator, ...]
    scales: tuple[float, ...]
    term_indices: tuple[tuple[int, ...], ...]
    chi: int
    reconstruction_error: float
    profiles: tuple[Profile, ...] = field(default=())

    @property
    def n_bar(self) -> int:
        return len(self.layers)

    @property
    def n_sites(self) -> int:
        return self.op.n_sites

    @property
    def k(self) -> int:
        return max((p.q for p in self.profiles), default=0)

    @property
    def g(self) -> float:
        return max((p.g for p in self.profiles), default=0.0)

    @property
    def lam(self) -> float:
        return 2.0 * self.g * self.k

    @property
    def block_counts(self) -> tuple[int, ...]:
        return tuple(len(layer.terms) for layer in self.layers)

    def centered(self, state: ProductState) -> "Layering":
        """Same layering with every term shifted to zero mean in ``state``."""
        layers = tuple(center(layer, state) for layer in self.layers)
        terms = tuple(t for layer in layers for t in layer.terms)
        op = FewBodyOperator(self.op.lattice, tuple(t.scaled(1.0 / self.n_bar) for t in terms))
        return Layering(op, layers, self.scales, self.term_indices, self.chi, 0.0,
                        tuple(analyze_profile(layer) for layer in layers))

    def lemma_caps(self) -> dict:
        """Block count and block norm caps of the layer construction, reported not enforced."""
        p = analyze_profile(self.op)
        k = max(p.q, 1)
        max_block = max((t.norm for layer in self.layers for t in layer.terms), default=0.0)
        return {
            "max_blocks": max(self.block_counts, default=0),
            "block_cap": self.n_sites / k,
            "blocks_within_cap": max(self.block_counts, default=0) <= self.n_sites / k + 1e-12,
            "max_block_norm": max_block,
            "norm_cap": p.g * p.q,
            "norms_within_cap": max_block <= p.g * p.q * (1 + 1e-12),
        }

    def report(self) -> dict:
        return {
            "n_bar": self.n_bar,
            "chi": self.chi,
            "layers": [{"scale": s, "term_indices": list(ix)} for s, ix in zip(self.scales, self.term_indices)],
            "reconstruction_error": self.reconstruction_error,
            "per_layer_g": [p.g for p in self.profiles],
            "per_layer_k": [p.q for p in self.profiles],
            **self.lemma_caps(),
        }


def _reconstruction_error(op: FewBodyOperator, layers: Sequence[FewBodyOperator], n_bar: int) -> float:
    avg_terms = tuple(t.scaled(1.0 / n_bar) for layer in layers for t in layer.terms)
    diff = FewBodyOperator(op.lattice, op.terms + tuple(t.scaled(-1.0) for t in avg_terms))
    try:
        return operator_norm(embed(diff))
    except DimensionError:
        # triangle bound, term by term on identical supports
        by_support: dict[tuple[int, ...], np.ndarray] = {}
        for t in diff.terms:
            by_support[t.support] = by_support.get(t.support, 0) + t.matrix
        return float(sum(np.linalg.norm(m, 2) for m in by_support.values()))


def decompose(op: FewBodyOperator, n_bar: int | None = None, exact_error: bool = True) -> Layering:
    """Greedy-coloring layering, optionally replicated round-robin to ``n_bar`` layers."""
    if not op.terms:
        raise ValueError("cannot decompose the zero operator")
    graph = build_conflict_graph(op)
    colors = greedy_coloring(graph)
    chi = max(colors) + 1
    if n_bar is None:
        n_bar = chi
    if n_bar < chi:
        raise ValueError(f"cannot honor layer budget; chromatic lower bound is {chi}")
    classes = [tuple(i for i, c in enumerate(colors) if c == k) for k in range(chi)]
    reps = [sum(1 for j in range(n_bar) if j % chi == k) for k in range(chi)]
    layers, scales, indices = [], [], []
    for j in range(n_bar):
        k = j % chi
        s = n_bar / reps[k]
        layers.append(FewBodyOperator(op.lattice, tuple(op.terms[i].scaled(s) for i in classes[k])))
        scales.append(s)
        indices.append(classes[k])
    err = _reconstruction_error(op, layers, n_bar) if exact_error else 0.0
    return Layering(op, tuple(layers), tuple(scales), tuple(indices), chi, err,
                    tuple(analyze_profile(layer) for layer in layers))


def layering_from_layers(layers: Sequence[FewBodyOperator]) -> Layering:
    """Wrap user-supplied non-overlapping layers; the operator is their average."""
    layers = tuple(layers)
    if not layers:
        raise ValueError("need at least one layer")
    for j, layer in enumerate(layers):
        if not is_non_overlapping(layer):
            raise ValueError(f"layer {j} has overlapping supports")
    n_bar = len(layers)
    terms, indices, pos = [], [], 0
    for layer in layers:
        terms.extend(t.scaled(1.0 / n_bar) for t in layer.terms)
        indices.append(tuple(range(pos, pos + len(layer.terms))))
        pos += len(layer.terms)
    op = FewBodyOperator(layers[0].lattice, tuple(terms))
    return Layering(op, layers, (1.0,) * n_bar, tuple(indices), n_bar, 0.0,
                    tuple(analyze_profile(layer) for layer in layers))


def block_supports(layer: FewBodyOperator, state: ProductState, cutoff: float = 1e-12):
    """Per-block eigenvalues carrying weight under ``state``."""
    if not is_non_overlapping(layer):
        raise ValueError("layer terms overlap")
    return [spectral_distribution(t.matrix, state.reduced(t.support)).support(cutoff) for t in layer.terms]


def localization_width(layer: FewBodyOperator, state: ProductState, cutoff: float = 1e-12) -> float:
    """Smallest ``sigma`` with no weight of the centered layer outside ``[-sigma, sigma]``.

    Blocks are independent under a product state, so the extreme occupied
    eigenvalues of the layer are sums of the per-block extremes.
    """
    supports = block_supports(center(layer, state), state, cutoff)
    if not supports:
        return 0.0
    hi = sum(float(s.max()) for s in supports)
    lo = sum(float(s.min()) for s in supports)
    return max(hi, -lo, 0.0)


@dataclass(frozen=True)
class BandBlockCheck:
    norm: float
    asserted_zero: bool
    threshold: float


def band_block_norm_check(layer: FewBodyOperator, o: FewBodyOperator, epsilon: float,
                          delta_epsilon: float, _eig=None) -> BandBlockCheck:
    """``|| Pi_{>= eps + d_eps} O Pi_{<= eps} ||`` over the layer's eigenbasis."""
    if not is_non_overlapping(layer):
        raise ValueError("layer terms overlap")
    evals, evecs = _eig if _eig is not None else eigensystem(embed(layer))
    om = embed(o)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(evals))))
    hi = evecs[:, evals >= epsilon + delta_epsilon - tol]
    lo = evecs[:, evals <= epsilon + tol]
    block = hi.conj().T @ om @ lo
    threshold = 2 * analyze_profile(layer).g * analyze_profile(o).q
    return BandBlockCheck(operator_norm(block), bool(delta_epsilon > threshold), threshold)
