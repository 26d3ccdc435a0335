import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fewbody.bounds import lemma5_constants
from fewbody.decomposition import decompose, layering_from_layers
from fewbody.moments import (
    appendix_table,
    infinite_dim_tail,
    moment_bound_subgaussian,
    moment_tail_bound,
    closed_form_moment,
    summand_count,
    tail_moment_integral,
    theta_coefficients,
    theta_recurrence,
    theta_recurrence_check,
    verify_moment_identity,
)
from fewbody.operators import FewBodyOperator, ProductState, heisenberg_chain, random_instance, random_product_state
from fewbody.spectral import embed, moment_exact, operator_norm, spectral_distribution, tail_exact


def inclusion_exclusion_theta(n_bar, m):
    """Solve for theta by requiring unit weight on every index sequence of A^m.

    A sequence using r distinct layers appears in binom(n_bar - r, m - j - r)
    subsets of size m - j, so sum_j theta_j binom(n_bar - r, m - j - r) = 1 for r = 1..m.
    """
    from fractions import Fraction
    rows = []
    for r in range(1, m + 1):
        rows.append([Fraction(math.comb(n_bar - r, m - j - r)) if m - j - r >= 0 else Fraction(0)
                     for j in range(m)] + [Fraction(1)])
    # Gaussian elimination
    n = m
    for c in range(n):
        piv = next(r for r in range(c, n) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c] / rows[c][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    return [rows[j][n] / rows[j][j] for j in range(n)]


class TestTheta:
    def test_examples(self):
        assert theta_coefficients(4, 2) == [1, -2]
        assert theta_coefficients(5, 3) == [1, -2, 3]
        assert theta_coefficients(6, 6) == [1, 0, 0, 0, 0, 0]

    def test_requires_enough_layers(self):
        with pytest.raises(ValueError, match="n_bar >= m"):
            theta_coefficients(2, 3)

    @pytest.mark.parametrize("nm", [(10, 5), (30, 15), (2, 2)])
    def test_recurrence(self, nm):
        assert theta_recurrence_check(*nm)

    @pytest.mark.parametrize("n_bar", range(1, 9))
    def test_against_linear_system(self, n_bar):
        for m in range(1, n_bar + 1):
            assert theta_coefficients(n_bar, m) == inclusion_exclusion_theta(n_bar, m)

    def test_table(self):
        rows = appendix_table(30)
        assert len(rows) == 30 * 31 // 2
        assert all(r["theta_ok"] and r["count_ok"] for r in rows)
        assert theta_recurrence(30, 30) == theta_coefficients(30, 30)


class TestSummandCount:
    def test_examples(self):
        assert summand_count(4, 2) == (14, 24)
        assert summand_count(7, 1) == (7, 14)
        exact, cap = summand_count(20, 6)
        assert exact <= cap

    def test_brute_force_small(self):
        # count (signed multiplicity ignored) of subset terms in the identity
        for n_bar, m in [(4, 2), (5, 3), (6, 4)]:
            theta = theta_coefficients(n_bar, m)
            brute = sum(abs(theta[j]) for j in range(m) for _ in itertools.combinations(range(n_bar), m - j))
            assert summand_count(n_bar, m)[0] == brute


class TestIdentity:
    def test_two_layers(self, rng):
        lay = decompose(heisenberg_chain(4))
        norm = operator_norm(embed(lay.op))
        assert verify_moment_identity(lay, 2) <= 1e-10 * norm**2

    def test_three_layers(self, rng):
        lay = decompose(random_instance(rng, 4, 2, 1.0, 4), 3)
        norm = operator_norm(embed(lay.op))
        assert verify_moment_identity(lay, 2) <= 1e-9 * norm**2

    def test_first_moment(self, rng):
        lay = decompose(random_instance(rng, 4, 2, 1.0, 4), 4)
        assert verify_moment_identity(lay, 1) <= 1e-12

    def test_budget(self, rng):
        lay = decompose(random_instance(rng, 4, 1, 1.0, 4), 5)
        with pytest.raises(ValueError, match="subsets"):
            verify_moment_identity(lay, 3, budget=5)


class TestQuadrature:
    @pytest.mark.parametrize("a", [0.7, 4.0, 52.0])
    def test_second_moment_gaussian(self, a):
        val = tail_moment_integral(2, lambda x: math.exp(-x * x / a))
        assert val == pytest.approx(a * (1 + math.log(2)), rel=1e-5)
        assert val >= a * (1 + math.log(2))

    def test_fourth_moment_gaussian(self):
        a = 3.0
        u0 = a * math.log(2)
        val = tail_moment_integral(4, lambda x: math.exp(-x * x / a), knots=(math.sqrt(u0),))
        assert val == pytest.approx(u0**2 + 2 * a * u0 + 2 * a**2, rel=1e-5)

    def test_truncation(self):
        full = tail_moment_integral(2, lambda x: math.exp(-x), None)
        cut = tail_moment_integral(2, lambda x: math.exp(-x), 1.0)
        ln2 = math.log(2)
        exact = ln2**2 + 2 * (1 + ln2) - 8 / math.e
        # the integrator inflates by its error estimate to stay an upper bound
        assert exact <= cut <= exact * (1 + 5e-6)
        assert cut < full

    def test_m_zero(self):
        assert moment_bound_subgaussian(2, 0, 8, 1.0, 2) == 1.0

    def test_closed_form_reading(self):
        assert closed_form_moment(2, 10, 1.0, 1.0) == pytest.approx(math.gamma(1.5) * 10 * math.log(2))


def test_subset_averages_within_bound(rng):
    lay = decompose(random_instance(rng, 6, 2, 1.0, 5), 4)
    state = random_product_state(rng, lay.op.lattice)
    centered = lay.centered(state)
    const = lemma5_constants(centered)
    x_max = max(sum(t.norm for t in layer.terms) for layer in centered.layers)
    mats = [embed(layer) for layer in centered.layers]
    for size in (1, 2, 3):
        for m in (2, 3, 4):
            b = moment_bound_subgaussian(size, m, lay.n_sites, const.g, const.k, x_max, k_eff=const.k_eff)
            for xi in itertools.combinations(range(4), size):
                avg = sum(mats[i] for i in xi) / size
                exact = abs(moment_exact(spectral_distribution(avg, state), m))
                assert exact <= b


@pytest.fixture(scope="module")
def setup():
    lay = decompose(heisenberg_chain(8), 4)
    state = ProductState.named(lay.op.lattice, ["zero", "one"] * 4)
    return lay, state, moment_tail_bound(lay, state)


class TestTail:
    def test_sound_on_grid(self, setup):
        lay, state, mt = setup
        dist = spectral_distribution(lay.centered(state).op, state)
        xs = np.linspace(0.05, 12, 120)
        exact = np.maximum(tail_exact(dist, xs), tail_exact(dist, xs, "leq"))
        assert np.all(mt.tail(xs) >= exact)
        for m in range(1, 5):
            assert mt.moment_bounds[m] >= abs(moment_exact(dist, m))

    def test_beyond_spectrum(self, setup):
        lay, state, mt = setup
        dist = spectral_distribution(lay.centered(state).op, state)
        x = float(np.max(np.abs(dist.eigenvalues))) + 1
        assert tail_exact(dist, x) == 0.0 and 0 < mt.tail(x) <= 1

    def test_shape(self, setup):
        mt = setup[2]
        xs = np.linspace(0.1, 200, 300)
        vals = mt.tail(xs)
        assert np.all(vals <= 1) and np.all(np.diff(vals) <= 1e-15)
        assert set(mt.markov_orders) == {2, 4}
        assert mt.best_order(150.0) in mt.markov_orders

    def test_rejects_nonpositive(self, setup):
        lay, state, mt = setup
        with pytest.raises(ValueError):
            mt.tail(0.0)
        with pytest.raises(ValueError):
            infinite_dim_tail(lay, state, -1.0)

    def test_needs_two_layers(self):
        op = FewBodyOperator.from_paulis(heisenberg_chain(3).lattice, [((0,), "X", 1.0)])
        with pytest.raises(ValueError):
            moment_tail_bound(decompose(op), ProductState.named(op.lattice, "zero"))


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_moment_identity_property(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 6))
    op = random_instance(rng, n, 2, 1.0, min(3, n))
    lay = decompose(op, int(rng.integers(3, 6)))
    m = int(rng.integers(1, 4))
    norm = operator_norm(embed(lay.op))
    assert verify_moment_identity(lay, m) <= 1e-9 * max(norm, 1.0) ** m
