import numpy as np
import pytest

from fewbody import FewBodyOperator, Lattice


def pauli_op(n, items, dims=None):
    """Operator from ``(support, label, coeff)`` triples on an ``n``-site chain."""
    return FewBodyOperator.from_paulis(Lattice(n, 2, dims or (n,)), items)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
