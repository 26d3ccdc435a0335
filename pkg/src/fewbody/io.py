"""JSON operator and state files, and atomic output writing."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .operators import NAMED_STATES, FewBodyOperator, Lattice, LocalTerm, ProductState


class InputError(ValueError):
    """Malformed input file."""


def _complex_array(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.shape[-1] != 2:
        raise InputError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def _pairs(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def load_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def operator_from_dict(data: dict) -> FewBodyOperator:
    try:
        geometry = data.get("geometry")
        dims = tuple(geometry["dims"]) if geometry else None
        lattice = Lattice(int(data["n_sites"]), int(data.get("local_dim", 2)), dims)
        terms = []
        for i, t in enumerate(data["terms"]):
            support = tuple(t["support"])
            coeff = float(t.get("coeff", 1.0))
            has_pauli, has_matrix = t.get("pauli") is not None, t.get("matrix") is not None
            if has_pauli == has_matrix:
                raise InputError(f"term {i}: exactly one of 'pauli' and 'matrix' is required")
            if has_pauli:
                if lattice.local_dim != 2:
                    raise InputError(f"term {i}: 'pauli' needs local_dim 2")
                terms.append(LocalTerm.pauli(support, t["pauli"], coeff))
            else:
                m = coeff * _complex_array(t["matrix"])
                terms.append(LocalTerm(support, m, bool(np.allclose(m, m.conj().T, atol=1e-12))))
        return FewBodyOperator(lattice, tuple(terms))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed operator: {exc}") from exc


def operator_to_dict(op: FewBodyOperator) -> dict:
    return {
        "n_sites": op.n_sites,
        "local_dim": op.lattice.local_dim,
        "geometry": {"dims": list(op.lattice.dims)} if op.lattice.dims else None,
        "terms": [{"support": list(t.support), "pauli": None, "matrix": _pairs(t.matrix), "coeff": 1.0}
                  for t in op.terms],
    }


def state_from_dict(data: dict, lattice: Lattice) -> ProductState:
    if data.get("kind") != "product":
        raise InputError("only product states are supported in state files")
    factors = []
    try:
        for i, f in enumerate(data["factors"]):
            if "named" in f:
                factors.append(NAMED_STATES[f["named"]])
            elif "pure" in f:
                v = _complex_array(f["pure"])
                factors.append(np.outer(v, v.conj()) / np.vdot(v, v).real)
            elif "density" in f:
                factors.append(_complex_array(f["density"]))
            else:
                raise InputError(f"factor {i}: expected 'named', 'pure' or 'density'")
    except KeyError as exc:
        raise InputError(f"malformed state: {exc}") from exc
    return ProductState(lattice, tuple(factors))


def state_to_dict(state: ProductState) -> dict:
    return {"kind": "product", "factors": [{"density": _pairs(f)} for f in state.factors]}


def load_operator(path) -> FewBodyOperator:
    return operator_from_dict(load_json(path))


def load_state(path, lattice: Lattice) -> ProductState:
    return state_from_dict(load_json(path), lattice)


def _round17(obj):
    if isinstance(obj, float):
        return float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round17(obj.item())
    if isinstance(obj, np.ndarray):
        return _round17(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(_round17(obj), indent=2, allow_nan=True)


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
