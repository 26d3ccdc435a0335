import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from fewbody.operators import (
    FewBodyOperator,
    Lattice,
    ProductState,
    center,
    pauli_matrix,
    random_hermitian,
    random_instance,
    random_product_state,
)
from fewbody.spectral import (
    DimensionError,
    SpectralDistribution,
    StateVector,
    block_mgf,
    commutator_norm_exact,
    density_matrix,
    eigensystem,
    embed,
    excitation_norm,
    mgf_exact,
    moment_exact,
    operator_norm,
    spectral_distribution,
    tail_exact,
    write_curve_csv,
)

from conftest import pauli_op

X, Z, I2 = pauli_matrix("X"), pauli_matrix("Z"), np.eye(2)


def binomial_example():
    op = pauli_op(3, [((i,), "Z", 1.0) for i in range(3)])
    return op, ProductState.named(op.lattice, "plus")


class TestEmbed:
    def test_site_zero_most_significant(self):
        m = embed(pauli_op(2, [((0,), "Z", 1.0)]))
        np.testing.assert_allclose(m, np.diag([1, 1, -1, -1]))
        np.testing.assert_allclose(m, np.kron(Z, I2))

    def test_zero_operator(self):
        m = embed(FewBodyOperator(Lattice.chain(2), ()))
        assert m.shape == (4, 4) and not m.any()

    def test_sum_of_z(self):
        np.testing.assert_allclose(embed(pauli_op(2, [((0,), "Z", 1.0), ((1,), "Z", 1.0)])),
                                   np.diag([2, 0, 0, -2]))

    def test_nonadjacent_support_matches_kron(self, rng):
        h = random_hermitian(rng, 4)
        from fewbody.operators import LocalTerm
        op = FewBodyOperator(Lattice.chain(3), (LocalTerm((0, 2), h),))
        # explicit permutation: swap sites 1 and 2 around kron(h, I)
        swap = np.zeros((8, 8))
        for b in range(8):
            b0, b1, b2 = (b >> 2) & 1, (b >> 1) & 1, b & 1
            swap[(b0 << 2) | (b2 << 1) | b1, b] = 1
        expected = swap @ np.kron(h, I2) @ swap.T
        np.testing.assert_allclose(embed(op), expected, atol=1e-14)

    def test_cap(self):
        with pytest.raises(DimensionError, match="256"):
            embed(pauli_op(8, [((0,), "Z", 1.0)]), cap=16)


class TestEigensystem:
    def test_examples(self):
        np.testing.assert_allclose(eigensystem(np.diag([2.0, 0, 0, -2]))[0], [-2, 0, 0, 2])
        np.testing.assert_allclose(eigensystem(X)[0], [-1, 1])

    def test_residuals(self, rng):
        m = random_hermitian(rng, 8)
        w, v = eigensystem(m)
        scale = operator_norm(m)
        assert np.all(np.linalg.norm(m @ v - v * w, axis=0) <= 1e-9 * scale)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(8), atol=1e-9)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-8)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            eigensystem(np.array([[0, 1], [0, 0]]))


class TestDistribution:
    def test_point_mass(self):
        op = pauli_op(2, [((0,), "Z", 1.0)])
        d = spectral_distribution(op, ProductState.named(op.lattice, ["zero", "mixed"]))
        assert d.support().tolist() == [1.0]
        assert d.weights[d.eigenvalues == 1.0][0] == pytest.approx(1.0)

    def test_sx_symmetric(self):
        op = pauli_op(1, [((0,), "X", 1.0)])
        d = spectral_distribution(op, ProductState.named(op.lattice, "zero"))
        np.testing.assert_allclose(d.eigenvalues, [-1, 1])
        np.testing.assert_allclose(d.weights, [0.5, 0.5])

    def test_binomial(self):
        d = spectral_distribution(*binomial_example())
        np.testing.assert_allclose(d.eigenvalues, [-3, -1, 1, 3], atol=1e-12)
        np.testing.assert_allclose(d.weights, [1 / 8, 3 / 8, 3 / 8, 1 / 8], atol=1e-12)

    def test_state_vector_matches_density(self, rng):
        op = random_instance(rng, 3, 2, 1.0, 3, style="dense-hermitian")
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        sv = StateVector(psi / np.linalg.norm(psi))
        a = spectral_distribution(op, sv)
        b = spectral_distribution(op, density_matrix(sv))
        np.testing.assert_allclose(a.weights, b.weights, atol=1e-12)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            SpectralDistribution.from_spectrum([0.0, 1.0], [0.3, 0.3])


class TestMgf:
    def test_log_cosh(self):
        op = pauli_op(1, [((0,), "X", 1.0)])
        d = spectral_distribution(op, ProductState.named(op.lattice, "zero"))
        assert mgf_exact(d, 1.0) == pytest.approx(0.433780, abs=1e-6)
        assert mgf_exact(d, 1.0) == pytest.approx(math.log(math.cosh(1.0)), rel=1e-14)

    def test_tau_zero_and_point_mass(self, rng):
        op = random_instance(rng, 4, 2, 1.0, 3)
        d = spectral_distribution(op, random_product_state(rng, op.lattice, True))
        assert mgf_exact(d, 0.0) == pytest.approx(0.0, abs=1e-12)
        pm = SpectralDistribution.from_spectrum([0.0], [1.0])
        np.testing.assert_allclose(mgf_exact(pm, np.linspace(-5, 5, 7)), 0.0)

    def test_against_matrix_exponential(self, rng):
        op = random_instance(rng, 3, 2, 1.5, 3, style="dense-hermitian")
        state = random_product_state(rng, op.lattice, mixed=True)
        d = spectral_distribution(op, state)
        rho, a = density_matrix(state), embed(op)
        for tau in (-0.7, 0.2, 1.3):
            ref = math.log(np.trace(expm(tau * a) @ rho).real)
            assert mgf_exact(d, tau) == pytest.approx(ref, rel=1e-10, abs=1e-12)

    def test_overflow_safe(self):
        d = SpectralDistribution.from_spectrum([-1.0, 1.0], [0.5, 0.5])
        assert mgf_exact(d, 1e4) == pytest.approx(1e4 - math.log(2))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), t1=st.floats(-2, 2), t2=st.floats(-2, 2))
def test_mgf_convex(seed, t1, t2):
    rng = np.random.default_rng(seed)
    op = random_instance(rng, 3, 2, 1.0, 2, style="dense-hermitian")
    d = spectral_distribution(op, random_product_state(rng, op.lattice, True))
    mid = mgf_exact(d, (t1 + t2) / 2)
    assert mid <= (mgf_exact(d, t1) + mgf_exact(d, t2)) / 2 + 1e-9


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_normalization_and_monotone_tail(seed):
    rng = np.random.default_rng(seed)
    op = random_instance(rng, 4, 2, 1.0, 4, style="dense-hermitian")
    d = spectral_distribution(op, random_product_state(rng, op.lattice, rng.uniform() < 0.5))
    assert abs(d.weights.sum() - 1) <= 1e-9
    xs = np.linspace(-5, 5, 41)
    assert np.all(np.diff(tail_exact(d, xs)) <= 1e-15)


def test_factorization_cross_check(rng):
    lat = Lattice.chain(6)
    from fewbody.operators import LocalTerm
    layer = FewBodyOperator(lat, (LocalTerm((0, 1), random_hermitian(rng, 4)),
                                  LocalTerm((2,), random_hermitian(rng, 2)),
                                  LocalTerm((3, 4, 5), random_hermitian(rng, 8))))
    state = random_product_state(rng, lat, mixed=True)
    taus = np.linspace(-1, 1, 9)
    full = mgf_exact(spectral_distribution(layer, state), taus)
    np.testing.assert_allclose(block_mgf(layer, state, taus), full, atol=1e-8)


def test_moment_finite_difference(rng):
    op = random_instance(rng, 4, 2, 1.0, 4, style="dense-hermitian")
    d = spectral_distribution(op, random_product_state(rng, op.lattice, True))
    h = 1e-3
    f = lambda t: math.exp(mgf_exact(d, t))  # noqa: E731
    first = (f(h) - f(-h)) / (2 * h)
    second = (f(h) - 2 * f(0) + f(-h)) / h**2
    assert first == pytest.approx(moment_exact(d, 1), abs=1e-5)
    assert second == pytest.approx(moment_exact(d, 2), abs=1e-5)


class TestTailAndMoments:
    def test_all_up(self):
        op = pauli_op(3, [((i,), "Z", 1.0) for i in range(3)])
        d = spectral_distribution(op, ProductState.named(op.lattice, "zero"))
        assert tail_exact(d, 3.0) == 1.0
        assert tail_exact(d, 3.5) == 0.0

    def test_half(self):
        op = pauli_op(1, [((0,), "X", 1.0)])
        d = spectral_distribution(op, ProductState.named(op.lattice, "zero"))
        assert tail_exact(d, 0.5) == pytest.approx(0.5)
        assert tail_exact(d, 0.5, "leq") == pytest.approx(0.5)
        assert moment_exact(d, 0) == pytest.approx(1.0)
        assert moment_exact(d, 2) == pytest.approx(1.0)

    def test_binomial(self):
        d = spectral_distribution(*binomial_example())
        assert tail_exact(d, 1.0) == pytest.approx(0.5)
        assert moment_exact(d, 2) == pytest.approx(3.0)

    def test_closed_threshold(self):
        d = SpectralDistribution.from_spectrum([0.0, 1.0], [0.5, 0.5])
        assert tail_exact(d, 1.0 + 1e-12) == pytest.approx(0.5)


class TestExcitationAndCommutator:
    @pytest.fixture
    def setup(self):
        lat = Lattice.chain(3)
        h = FewBodyOperator(lat, tuple(
            __import__("fewbody").LocalTerm((i,), np.diag([0.0, 1.0])) for i in range(3)))
        omega = StateVector.product([np.array([1, 0])] * 3)
        return h, omega

    def test_excitation(self, setup):
        h, omega = setup
        a = pauli_op(3, [((0, 1), "XX", 1.0)])
        assert excitation_norm(h, a, omega, 2.0) == pytest.approx(1.0)
        assert excitation_norm(h, a, omega, 2.5) == pytest.approx(0.0)

    def test_identity_probe(self, setup):
        h, omega = setup
        ident = FewBodyOperator(h.lattice, (__import__("fewbody").LocalTerm((0,), np.eye(2)),))
        assert excitation_norm(h, ident, omega, 0.1) == 0.0

    def test_commutators(self, rng):
        assert commutator_norm_exact(pauli_op(1, [((0,), "Z", 1.0)]),
                                     pauli_op(1, [((0,), "X", 1.0)])) == pytest.approx(2.0)
        assert commutator_norm_exact(pauli_op(3, [((0,), "X", 1.0)]),
                                     pauli_op(3, [((1, 2), "ZZ", 1.0)])) == pytest.approx(0.0)
        a = random_instance(rng, 3, 2, 1.0, 3, style="dense-hermitian")
        b = random_instance(rng, 3, 2, 1.0, 3, style="dense-hermitian")
        am, bm = embed(a), embed(b)
        assert commutator_norm_exact(a, b) == pytest.approx(np.linalg.norm(am @ bm - bm @ am, 2))


def test_curve_csv(tmp_path):
    path = tmp_path / "c.csv"
    write_curve_csv(path, [0.1, 0.2], [1 / 3, 2 / 3])
    lines = path.read_text().splitlines()
    assert lines[0] == "x_or_tau,exact_value"
    assert float(lines[1].split(",")[1]) == 1 / 3
