import json

import numpy as np
import pytest

from fewbody.io import (
    InputError,
    atomic_write,
    dumps,
    load_json,
    operator_from_dict,
    operator_to_dict,
    state_from_dict,
    state_to_dict,
)
from fewbody.operators import Lattice, random_instance, random_product_state
from fewbody.spectral import embed


def test_operator_round_trip(rng):
    op = random_instance(rng, 4, 2, 1.3, 4, style="dense-hermitian")
    back = operator_from_dict(json.loads(dumps(operator_to_dict(op))))
    np.testing.assert_array_equal(embed(back), embed(op))


def test_state_round_trip(rng):
    lat = Lattice.chain(3)
    state = random_product_state(rng, lat, mixed=True)
    back = state_from_dict(json.loads(dumps(state_to_dict(state))), lat)
    for a, b in zip(state.factors, back.factors):
        np.testing.assert_array_equal(a, b)


def test_pauli_and_named():
    op = operator_from_dict({"n_sites": 2, "local_dim": 2, "geometry": {"dims": [2]},
                             "terms": [{"support": [0, 1], "pauli": "ZZ", "matrix": None, "coeff": 0.5}]})
    assert op.terms[0].norm == pytest.approx(0.5)
    st = state_from_dict({"kind": "product", "factors": [{"named": "plus"}, {"pure": [[0, 0], [1, 0]]}]},
                         op.lattice)
    np.testing.assert_allclose(st.factors[1], np.diag([0, 1]))


@pytest.mark.parametrize("term", [
    {"support": [0], "pauli": "X", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
    {"support": [0]},
])
def test_exactly_one_representation(term):
    with pytest.raises(InputError, match="exactly one"):
        operator_from_dict({"n_sites": 1, "terms": [term]})


def test_pauli_needs_qubits():
    with pytest.raises(InputError):
        operator_from_dict({"n_sites": 1, "local_dim": 3, "terms": [{"support": [0], "pauli": "X"}]})


def test_malformed_json_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "n_sites": 2,\n  oops\n}')
    with pytest.raises(InputError, match="line 3, column 3"):
        load_json(p)


def test_dumps_17_digits():
    assert json.loads(dumps({"v": 1 / 3}))["v"] == 1 / 3


def test_atomic_write(tmp_path):
    p = tmp_path / "out.json"
    atomic_write(p, "first")
    atomic_write(p, "second")
    assert p.read_text() == "second"
    assert [f.name for f in tmp_path.iterdir()] == ["out.json"]
