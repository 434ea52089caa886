"""Special-function layer: truncated products, theta, normalization, and the
unitarity scalar.

Frozen reference values were generated by tests/make_oracles.py (mpmath,
per-factor truncation through mp.qp, an independent code path) before the
package implementation existed.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynell import Params, SingularPointError, qpochhammer, rho_norm, theta, unitarity_scalar

from helpers import make_params

Z0 = 0.6 + 0.2j

# mpmath oracle values at q_half = sqrt(0.47), p = 0.31 (see make_oracles.py)
RHO_Z0 = 1.3517393971096406 + 1.1874559064136709j
RHO_Z0_INV = -1.1515845624170522 - 1.0239607264887145j
N_Z0 = -0.3407340095177381 - 2.7515839454647358j


class TestQPochhammer:
    def test_zero_base_gives_single_factor(self):
        for order in (1, 5, 80):
            assert qpochhammer(0.5, [0], order) == pytest.approx(0.5)

    def test_vanishing_argument_one(self):
        assert qpochhammer(1.0, [0.31], 7) == 0

    def test_base_symmetry(self):
        a = qpochhammer(0.3, [0.2, 0.1], 50)
        b = qpochhammer(0.3, [0.1, 0.2], 50)
        assert a == pytest.approx(b, abs=1e-15)

    def test_order_zero_is_empty_product(self):
        assert qpochhammer(0.9, [0.5], 0) == 1

    def test_rejects_divergent_base(self):
        with pytest.raises(ValueError):
            qpochhammer(0.5, [1.0], 10)
        with pytest.raises(ValueError):
            qpochhammer(0.5, [0.2, 1.5], 10)

    def test_rejects_bad_arity_and_order(self):
        with pytest.raises(ValueError):
            qpochhammer(0.5, [], 10)
        with pytest.raises(ValueError):
            qpochhammer(0.5, [0.1, 0.2, 0.3], 10)
        with pytest.raises(ValueError):
            qpochhammer(0.5, [0.1], -1)


class TestTheta:
    def test_p_zero_collapses_to_linear_factor(self):
        params = Params.make(0.6, 0.0)
        assert theta(2.0, params) == pytest.approx(-1.0, abs=1e-14)
        assert theta(0.3 + 0.4j, params) == pytest.approx(1 - (0.3 + 0.4j), abs=1e-14)

    def test_zero_at_one(self):
        assert theta(1.0, make_params()) == 0

    def test_rejects_zero_argument(self):
        with pytest.raises(ValueError):
            theta(0.0, make_params())

    @settings(max_examples=25, deadline=None)
    @given(
        r=st.floats(min_value=0.55, max_value=1.9),
        phi=st.floats(min_value=0.0, max_value=2 * np.pi),
    )
    def test_quasi_periodicity_on_annulus(self, r, phi):
        params = make_params()
        z = r * complex(np.cos(phi), np.sin(phi))
        t = theta(z, params)
        assert abs(theta(params.p * z, params) + t / z) / abs(t) < params.tolerance

    @settings(max_examples=25, deadline=None)
    @given(
        r=st.floats(min_value=0.55, max_value=1.9),
        phi=st.floats(min_value=0.0, max_value=2 * np.pi),
    )
    def test_inversion_identity(self, r, phi):
        params = make_params()
        z = r * complex(np.cos(phi), np.sin(phi))
        t = theta(z, params)
        assert abs(theta(1 / z, params) + t / z) / abs(t) < params.tolerance

    def test_truncation_convergence(self):
        params = make_params()
        fine = make_params(truncation_order=2 * params.truncation_order)
        for z in (Z0, 1.7 - 0.4j, 0.55j):
            assert abs(theta(z, params) - theta(z, fine)) < params.tolerance


class TestRhoNorm:
    def test_reference_value(self):
        params = make_params(truncation_order=400)
        assert rho_norm(Z0, params) == pytest.approx(RHO_Z0, abs=1e-13)
        assert rho_norm(1 / Z0, params) == pytest.approx(RHO_Z0_INV, abs=1e-13)

    def test_singular_at_one(self):
        with pytest.raises(SingularPointError, match="singular point"):
            rho_norm(1.0, make_params())

    def test_singular_at_q_minus_4(self):
        params = make_params()
        with pytest.raises(SingularPointError):
            rho_norm(1.0 / params.q**4, params)

    def test_truncation_convergence(self):
        params = make_params()
        fine = make_params(truncation_order=2 * params.truncation_order)
        assert abs(rho_norm(Z0, params) - rho_norm(Z0, fine)) < params.tolerance


class TestUnitarityScalar:
    def test_reference_product(self):
        params = make_params(truncation_order=400)
        assert unitarity_scalar(Z0, params) == pytest.approx(N_Z0, abs=1e-13)

    def test_inversion_symmetry_exact(self):
        params = make_params()
        assert unitarity_scalar(Z0, params) == unitarity_scalar(1 / Z0, params)

    def test_q4_periodicity(self):
        params = make_params()
        q4 = params.q**4
        for z in (Z0, 1.3 - 0.8j):
            n0 = unitarity_scalar(z, params)
            assert abs(unitarity_scalar(q4 * z, params) - n0) / abs(n0) < params.tolerance

    def test_rho_times_rho_inverse_is_unitarity_scalar(self):
        params = make_params()
        lhs = rho_norm(Z0, params) * rho_norm(1 / Z0, params)
        assert lhs == unitarity_scalar(Z0, params)


class TestParams:
    def test_q_is_square_of_q_half(self):
        params = make_params()
        assert params.q == pytest.approx(0.47)

    def test_rejects_large_nome(self):
        with pytest.raises(ValueError, match=r"\|p\| must be < 1"):
            Params.make(0.5, 1.5)

    def test_rejects_large_q(self):
        with pytest.raises(ValueError, match=r"\|q\|\^4"):
            Params.make(1.2, 0.1)

    def test_rejects_insufficient_order(self):
        with pytest.raises(ValueError, match="truncation_order too small"):
            Params(q_half=0.6855654600401044, p=0.31, truncation_order=5)

    def test_rejects_nonpositive_tolerance_and_guard(self):
        with pytest.raises(ValueError):
            make_params(tolerance=0.0)
        with pytest.raises(ValueError):
            make_params(singular_guard=-1.0)

    def test_auto_order_meets_invariant(self):
        for p, qh in ((0.05, 0.4), (0.5, 0.8), (0.0, 0.6)):
            params = Params.make(qh, p)
            m = max(abs(params.p), abs(params.q) ** 4)
            assert m**params.truncation_order <= params.tolerance * 1e-3

    def test_p_zero_admitted(self):
        params = Params.make(0.6, 0.0)
        assert theta(2.0, params) == pytest.approx(-1.0)
