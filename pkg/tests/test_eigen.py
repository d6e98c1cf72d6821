"""Eigenvalue solver tests.

Closed forms used as anchors: for L = 0, eta = 0 the eigencondition reduces
to cot(lam) = -alpha, so lam_n = (4n-1) pi/4 when alpha = 1 and
lam_1 = pi - arctan(1/2) when alpha = 2.  The L = 1 value is frozen from an
independent high-precision bisection of the same closed-form reduction
(spherical Bessel cross-product).
"""

import math

import pytest

from cweig.eigen import (
    Eigenpair,
    cross_product,
    eigenfunction,
    eigenvalues,
    sweep_monotonicity,
    theta,
)
from cweig.errors import DomainError, HypothesisError
from cweig.specfun import Params
from cweig.zeros import coulomb_zeros

LAMBDA_1_L1_ALPHA1 = 3.7181334193538936961


class TestClosedForms:
    def test_alpha_one_quarter_pi_family(self):
        pairs = eigenvalues(Params(0.0, 0.0, 1.0), 5, force=True)
        for pair in pairs:
            assert pair.lam == pytest.approx(
                (4 * pair.n - 1) * math.pi / 4.0, abs=1e-10)

    def test_alpha_two_first_root(self):
        pair = eigenvalues(Params(0.0, 0.0, 2.0), 1, force=True)[0]
        assert pair.lam == pytest.approx(math.pi - math.atan(0.5), abs=1e-10)

    def test_L_one_frozen_root(self):
        pair = eigenvalues(Params(1.0, 0.0, 1.0), 1)[0]
        assert pair.lam == pytest.approx(LAMBDA_1_L1_ALPHA1, abs=1e-10)

    def test_residual_is_small(self):
        for pair in eigenvalues(Params(1.0, 0.5, 1.5), 3):
            assert pair.residual < 1e-9


class TestCrossProduct:
    def test_sign_change_at_closed_form_root(self):
        lam = 3.0 * math.pi / 4.0
        lo = cross_product(0.0, 0.0, 1.0, lam - 1e-6)
        hi = cross_product(0.0, 0.0, 1.0, lam + 1e-6)
        assert (lo < 0.0) != (hi < 0.0)

    def test_positive_near_origin(self):
        assert cross_product(1.0, 0.5, 1.0, 1e-3) > 0.0

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            cross_product(0.0, 0.0, 1.0, -1.0)
        with pytest.raises(DomainError):
            cross_product(0.0, 0.0, -1.0, 1.0)


class TestInterlacing:
    @pytest.mark.parametrize("L,eta,alpha", [
        (0.5, 0.5, 0.5), (1.0, 1.0, 1.0), (2.0, 0.5, 2.0),
    ])
    def test_brackets(self, L, eta, alpha):
        pairs = eigenvalues(Params(L, eta, alpha), 4)
        xs = coulomb_zeros(L, eta, 4).zeros
        assert pairs[0].lam < xs[0]
        for n in (2, 3, 4):
            assert xs[n - 2] < pairs[n - 1].lam < xs[n - 1]

    def test_unique_sign_change_per_bracket(self):
        L, eta, alpha = 1.0, 0.5, 1.0
        xs = coulomb_zeros(L, eta, 2).zeros
        lo, hi = xs[0] + 1e-6, xs[1] - 1e-6
        flips = 0
        prev = cross_product(L, eta, alpha, lo)
        for i in range(1, 1001):
            cur = cross_product(L, eta, alpha, lo + (hi - lo) * i / 1000.0)
            if (prev < 0.0) != (cur < 0.0):
                flips += 1
            prev = cur
        assert flips == 1


class TestHypothesisGate:
    def test_refuses_outside_domain(self):
        with pytest.raises(HypothesisError) as exc_info:
            eigenvalues(Params(0.0, 0.0, 1.0), 1)
        assert "L+eta" in str(exc_info.value)
        assert "force" in str(exc_info.value)

    def test_force_overrides(self):
        pairs = eigenvalues(Params(0.0, 0.0, 1.0), 1, force=True)
        assert pairs[0].lam == pytest.approx(3.0 * math.pi / 4.0, abs=1e-10)

    def test_count_and_tol_validation(self):
        with pytest.raises(DomainError):
            eigenvalues(Params(1.0, 0.5, 1.0), 0)
        with pytest.raises(DomainError):
            eigenvalues(Params(1.0, 0.5, 1.0), 51)
        with pytest.raises(DomainError):
            eigenvalues(Params(1.0, 0.5, 1.0), 1, tol=0.0)


class TestEigenfunction:
    def test_frozen_exterior_sample(self):
        # For L=0, eta=0, alpha=1, lam=3pi/4 the eigenfunction at r=2 is
        # sin(3pi/4) exp(-3pi/2) / 2.
        p = Params(0.0, 0.0, 1.0)
        lam = 3.0 * math.pi / 4.0
        samples = eigenfunction(p, lam, [2.0])
        assert samples[0].value == pytest.approx(0.0031760729992064217,
                                                 rel=1e-10)

    def test_value_continuous_at_interface(self):
        p = Params(1.0, 0.5, 2.0)
        lam = eigenvalues(p, 1)[0].lam
        inside, _ = theta(p, lam, 1.0)
        outside, _ = theta(p, lam, 1.0 + 1e-12)
        assert outside == pytest.approx(inside, rel=1e-9)

    def test_derivative_jump_vanishes_at_eigenvalue(self):
        p = Params(1.0, 0.5, 2.0)
        lam = eigenvalues(p, 1)[0].lam
        _, d_in = theta(p, lam, 1.0)
        _, d_out = theta(p, lam, 1.0 + 1e-12)
        scale = max(abs(d_in), abs(d_out))
        assert abs(d_out - d_in) <= 1e-8 * scale

    def test_interior_shape_matches_coulomb_factor(self):
        # Theta(r)/Theta(r') equals F(lam r)/F(lam r') for r, r' <= 1.
        p = Params(0.0, 0.0, 1.0)
        lam = 3.0 * math.pi / 4.0
        v1, _ = theta(p, lam, 0.4)
        v2, _ = theta(p, lam, 0.8)
        assert v1 / v2 == pytest.approx(
            math.sin(0.4 * lam) / math.sin(0.8 * lam), rel=1e-12)

    def test_rejects_nonpositive_r(self):
        with pytest.raises(DomainError):
            theta(Params(0.0, 0.0, 1.0), 1.0, 0.0)


class TestSweep:
    def test_strictly_increasing_in_L(self):
        res = sweep_monotonicity([0.0, 0.5, 1.0, 1.5], 1.0, 2.0, 1)
        lams = [lam for _, lam in res.rows]
        assert all(lam is not None for lam in lams)
        assert all(b > a for a, b in zip(lams, lams[1:]))
        assert res.violations == []
        assert res.errors == []

    def test_second_rank(self):
        res = sweep_monotonicity([0.0, 1.0], 0.0, 1.0, 2)
        lams = [lam for _, lam in res.rows]
        assert lams[1] > lams[0]

    def test_requires_monotone_grid(self):
        with pytest.raises(DomainError):
            sweep_monotonicity([1.0, 0.5], 0.0, 1.0, 1)

    def test_requires_eta_nonnegative(self):
        with pytest.raises(HypothesisError):
            sweep_monotonicity([0.0, 1.0], -0.5, 1.0, 1)
