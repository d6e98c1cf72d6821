"""Zero-finding and log-derivative tests.

Frozen zero locations were computed once with mpmath (bisection + findroot on
coulombf at 40 digits) and pinned as literals.
"""

import math

import pytest

from cweig.errors import DomainError, PoleError
from cweig.specfun import coulomb_F
from cweig.zeros import ZeroSeq, coulomb_zeros, logderiv_F

# First five positive zeros of F_{1/2}(1/2, .), frozen from mpmath.
ZEROS_HALF_HALF = (
    4.9389726539105835847,
    8.3845908061078760153,
    11.709786278473975546,
    14.983882007773536508,
    18.229405349758142001,
)

# First three positive zeros of F_1(-1/2, .), frozen from mpmath; the
# negative zeros of F_1(+1/2, .) are their reflections.
ZEROS_ONE_MINUS_HALF = (
    3.6461719153887407093,
    6.6166745256909863882,
    9.6216783905398876386,
)


class TestPositiveZeros:
    def test_neutral_s_wave_zeros_are_n_pi(self):
        seq = coulomb_zeros(0.0, 0.0, 5)
        for n, z in enumerate(seq.zeros, start=1):
            assert z == pytest.approx(n * math.pi, abs=1e-12)

    def test_frozen_zeros(self):
        seq = coulomb_zeros(0.5, 0.5, 5)
        for z, ref in zip(seq.zeros, ZEROS_HALF_HALF):
            assert z == pytest.approx(ref, abs=1e-11)

    def test_zeros_are_increasing_and_separated(self):
        seq = coulomb_zeros(1.0, 1.0, 30)
        gaps = [b - a for a, b in zip(seq.zeros, seq.zeros[1:])]
        assert all(g > 1.0 for g in gaps)
        # Gaps approach pi from above for eta > 0.
        assert gaps[-1] == pytest.approx(math.pi, abs=0.2)

    def test_sign_flip_within_certificate(self):
        seq = coulomb_zeros(0.5, 0.5, 40)
        assert isinstance(seq, ZeroSeq)
        for z in seq.zeros:
            lo = coulomb_F(0.5, 0.5, z - seq.tol).value
            hi = coulomb_F(0.5, 0.5, z + seq.tol).value
            assert (lo < 0.0) != (hi < 0.0)

    def test_deep_sequence_spacing_stays_sane(self):
        seq = coulomb_zeros(0.0, 0.0, 100)
        assert seq.zeros[99] == pytest.approx(100.0 * math.pi, abs=1e-5)

    @pytest.mark.parametrize("count", [0, 101])
    def test_count_bounds(self, count):
        with pytest.raises(DomainError):
            coulomb_zeros(0.0, 0.0, count)

    def test_rejects_L_at_or_below_minus_one(self):
        with pytest.raises(DomainError):
            coulomb_zeros(-1.0, 0.5, 3)


class TestNegativeZeros:
    def test_reflection_of_frozen_zeros(self):
        seq = coulomb_zeros(1.0, 0.5, 3, sign="negative")
        for z, ref in zip(seq.zeros, ZEROS_ONE_MINUS_HALF):
            assert z == pytest.approx(-ref, abs=1e-11)

    def test_eta_zero_reflection_is_exact(self):
        pos = coulomb_zeros(2.0, 0.0, 10).zeros
        neg = coulomb_zeros(2.0, 0.0, 10, sign="negative").zeros
        assert tuple(-z for z in pos) == neg

    def test_bad_sign_rejected(self):
        with pytest.raises(DomainError):
            coulomb_zeros(0.0, 0.0, 3, sign="both")


class TestLogderivDirect:
    def test_neutral_s_wave_is_cotangent(self):
        assert logderiv_F(0.0, 0.0, 1.0) == pytest.approx(
            1.0 / math.tan(1.0), rel=1e-12)

    def test_small_r_limit(self):
        # F'/F - (L+1)/r tends to eta/(L+1) as r -> 0+.
        for L, eta in [(0.5, 0.5), (1.0, 1.0), (2.0, -0.5)]:
            r = 1e-6
            shifted = logderiv_F(L, eta, r) - (L + 1.0) / r
            assert shifted == pytest.approx(eta / (L + 1.0), abs=1e-4)

    def test_decreasing_between_zeros(self):
        L, eta = 0.5, 0.5
        xs = coulomb_zeros(L, eta, 2).zeros
        grids = [
            [0.5 + i * (xs[0] - 1.0) / 20.0 for i in range(20)],
            [xs[0] + 0.1 + i * (xs[1] - xs[0] - 0.2) / 20.0 for i in range(20)],
        ]
        for grid in grids:
            vals = [logderiv_F(L, eta, r) for r in grid]
            assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_pole_guard(self):
        with pytest.raises(PoleError):
            logderiv_F(0.0, 0.0, math.pi)


class TestLogderivMittagLeffler:
    def test_neutral_s_wave_partial_fractions(self):
        # Classical cot expansion: x_n = n pi, y_n = -n pi.
        approx = logderiv_F(0.0, 0.0, 1.0, mode="mittag_leffler")
        assert approx == pytest.approx(1.0 / math.tan(1.0), abs=5e-4)

    def test_O_over_N_decay(self):
        direct = logderiv_F(0.5, 0.5, 0.5)
        diffs = [abs(logderiv_F(0.5, 0.5, 0.5, mode="mittag_leffler",
                                terms=n) - direct)
                 for n in (250, 500, 1000, 2000)]
        for a, b in zip(diffs, diffs[1:]):
            assert b < 0.7 * a

    def test_pole_guard_near_zero_of_F(self):
        x1 = coulomb_zeros(0.5, 0.5, 1).zeros[0]
        with pytest.raises(PoleError):
            logderiv_F(0.5, 0.5, x1 + 1e-12, mode="mittag_leffler", terms=100)

    def test_bad_mode_and_terms(self):
        with pytest.raises(DomainError):
            logderiv_F(0.0, 0.0, 1.0, mode="pade")
        with pytest.raises(DomainError):
            logderiv_F(0.0, 0.0, 1.0, mode="mittag_leffler", terms=0)
