"""Reduced-grid invariant suites behind the ``verify`` CLI subcommand.

Each suite re-checks the library's mathematical invariants on a small grid
(ODE residuals, interlacing, monotonicity, shooting agreement, ...); the full
grids live in the test suite.  A suite never stops at the first failure: every
check runs and reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eigen import cross_product, eigenvalues
from .oracle import (
    eigenvalues_shooting,
    hellman_feynman_report,
    integrate_through,
    shooting_determinant,
)
from .specfun import (
    Params,
    bessel_halfint,
    coulomb_F,
    coulomb_F_second,
    tricomi_Q,
    tricomi_Q_logderiv,
    tricomi_Q_second,
    tricomi_psi,
)
from .zeros import coulomb_zeros, logderiv_F


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(checks, name, passed, detail=""):
    checks.append(CheckResult(name, bool(passed), detail))


def suite_specfun() -> SuiteResult:
    checks = []

    worst = 0.0
    for L in (0.0, 1.0, 2.0):
        for eta in (0.0, 0.5):
            for rho in (0.5, 1.5, 3.0, 6.0):
                f = coulomb_F(L, eta, rho, method="series")
                f2 = coulomb_F_second(L, eta, rho)
                resid = abs(rho * rho * f2
                            + (rho * rho - 2.0 * eta * rho - L * (L + 1.0)) * f.value)
                worst = max(worst, resid / max(1.0, abs(rho * rho * f2)))
    _check(checks, "coulomb_ode_residual", worst <= 1e-8, f"worst={worst:.3e}")

    worst = 0.0
    for L in (0.0, 1.0, 2.0):
        for eta in (0.0, 0.5):
            for r in (0.5, 1.5, 3.0, 6.0):
                q = tricomi_Q(L, eta, r)
                q2 = tricomi_Q_second(L, eta, r)
                resid = abs(r * r * q2
                            - (r * r + 2.0 * eta * r + L * (L + 1.0)) * q.value)
                scale = max(abs(r * r * q2), abs(q.value), 1e-300)
                worst = max(worst, resid / scale)
    _check(checks, "composite_ode_residual", worst <= 1e-8, f"worst={worst:.3e}")

    ok = True
    for a in (0.5, 1.5, 3.5):
        for c in (2.0, 3.0):
            for x in (0.05, 0.7, 5.0, 40.0):
                p = tricomi_psi(a, c, x)
                if not (p.value > 0.0 and p.derivative < 0.0):
                    ok = False
    _check(checks, "psi_positive_decreasing", ok)

    violations = 0
    for a, c in ((1.5, 2.0), (2.0, 3.0), (3.5, 5.0)):
        prev = None
        for i in range(100):
            x = 0.01 * (50.0 / 0.01) ** (i / 99.0)
            p = tricomi_psi(a, c, x)
            ld = p.derivative / p.value
            if prev is not None and ld <= prev:
                violations += 1
            prev = ld
    _check(checks, "psi_logderiv_increasing", violations == 0,
           f"violations={violations}")

    worst = 0.0
    for L in (0, 1, 2):
        for i in range(1, 21):
            rho = i * 1.0
            f = coulomb_F(L, 0.0, rho)
            ref = math.sqrt(math.pi * rho / 2.0) * bessel_halfint(L + 0.5, rho)[0]
            worst = max(worst, abs(f.value - ref) / max(abs(ref), 1e-300))
    _check(checks, "bessel_reduction_F", worst <= 1e-10, f"worst={worst:.3e}")

    worst = 0.0
    for L in (0, 1, 2):
        for r in (0.5, 1.0, 2.0, 5.0):
            ld = tricomi_Q_logderiv(L, 0.0, r)
            nu = L + 0.5
            k = bessel_halfint(nu, r)[1]
            kp = bessel_halfint(nu + 1.0, r)[1]
            # d/dr log(sqrt(r) K_nu(r)) with K_nu' = nu/r K_nu - K_{nu+1}.
            ref = 0.5 / r + nu / r - kp / k
            worst = max(worst, abs(ld - ref))
    _check(checks, "bessel_reduction_Q_logderiv", worst <= 1e-9,
           f"worst={worst:.3e}")

    ok = True
    for a, c in ((1.5, 3.0), (2.0, 4.0)):
        big = tricomi_psi(a, c, 1e3).value * 1e3 ** a
        if abs(big - 1.0) > 10.0 * a * c / 1e3:
            ok = False
        small = (tricomi_psi(a, c, 1e-6).value * 1e-6 ** (c - 1.0)
                 * math.gamma(a) / math.gamma(c - 1.0))
        if abs(small - 1.0) > 1e-3:
            ok = False
    _check(checks, "psi_asymptotic_sandwich", ok)

    return SuiteResult("specfun", tuple(checks))


def suite_zeros() -> SuiteResult:
    checks = []

    ok = True
    for L, eta in ((0.0, 0.0), (0.5, 0.5), (1.0, 1.0)):
        seq = coulomb_zeros(L, eta, 5)
        for z in seq.zeros:
            lo = coulomb_F(L, eta, z - seq.tol).value
            hi = coulomb_F(L, eta, z + seq.tol).value
            if (lo < 0.0) == (hi < 0.0):
                ok = False
    _check(checks, "sign_flip_across_zero", ok)

    pos = coulomb_zeros(1.0, 0.0, 5).zeros
    neg = coulomb_zeros(1.0, 0.0, 5, sign="negative").zeros
    exact = all(-a == b for a, b in zip(pos, neg))
    _check(checks, "reflection_at_eta0", exact)

    ok = True
    for L, eta in ((0.0, 0.0), (0.5, 0.5)):
        xs = coulomb_zeros(L, eta, 3).zeros
        cuts = [1e-3] + list(xs)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            prev = None
            for i in range(1, 40):
                r = lo + (hi - lo) * i / 40.0
                ld = logderiv_F(L, eta, r)
                if prev is not None and ld >= prev:
                    ok = False
                prev = ld
    _check(checks, "logderiv_decreasing_between_zeros", ok)

    ok = True
    for L, eta in ((0.5, 0.5), (1.0, 1.0)):
        r = 1e-6
        limit = logderiv_F(L, eta, r) - (L + 1.0) / r
        if abs(limit - eta / (L + 1.0)) > 1e-4:
            ok = False
    _check(checks, "logderiv_small_r_limit", ok)

    direct = logderiv_F(0.5, 0.5, 0.5)
    diffs = [abs(logderiv_F(0.5, 0.5, 0.5, mode="mittag_leffler", terms=n) - direct)
             for n in (250, 500, 1000, 2000)]
    decays = all(b < 0.7 * a for a, b in zip(diffs, diffs[1:]))
    _check(checks, "mittag_leffler_O(1/N)_decay", decays,
           f"diffs={['%.2e' % d for d in diffs]}")

    return SuiteResult("zeros", tuple(checks))


def suite_eigen() -> SuiteResult:
    checks = []

    ok = True
    for L, eta, alpha in ((0.5, 0.5, 1.0), (1.0, 1.0, 2.0), (2.0, 0.5, 0.5)):
        p = Params(L, eta, alpha)
        pairs = eigenvalues(p, 3)
        xs = coulomb_zeros(L, eta, 3).zeros
        if not pairs[0].lam < xs[0]:
            ok = False
        for n in (2, 3):
            if not xs[n - 2] < pairs[n - 1].lam < xs[n - 1]:
                ok = False
    _check(checks, "interlacing", ok)

    L, eta, alpha = 1.0, 0.5, 1.0
    xs = coulomb_zeros(L, eta, 3).zeros
    flips = 0
    lo, hi = xs[0] + 1e-6, xs[1] - 1e-6
    prev = cross_product(L, eta, alpha, lo)
    for i in range(1, 1001):
        r = lo + (hi - lo) * i / 1000.0
        cur = cross_product(L, eta, alpha, r)
        if (prev < 0.0) != (cur < 0.0):
            flips += 1
        prev = cur
    _check(checks, "unique_sign_change_per_bracket", flips == 1, f"flips={flips}")

    lams = [eigenvalues(Params(L, 1.0, 2.0), 1)[0].lam
            for L in (0.5, 1.0, 1.5, 2.0)]
    _check(checks, "monotone_in_L",
           all(b > a for a, b in zip(lams, lams[1:])))

    ok = True
    for L, alpha in ((0.0, 1.0), (1.0, 2.0)):
        lam = eigenvalues(Params(L, 0.0, alpha), 1, force=True)[0].lam
        nu = L + 0.5

        def bessel_cross(r):
            j = bessel_halfint(nu, r)[0]
            j1 = bessel_halfint(nu + 1.0, r)[0]
            k = bessel_halfint(nu, alpha * r)[1]
            k1 = bessel_halfint(nu + 1.0, alpha * r)[1]
            return j1 * k - alpha * k1 * j

        # The eigenvalue must be a sign change of the Bessel cross-product.
        if (bessel_cross(lam - 1e-9) < 0.0) == (bessel_cross(lam + 1e-9) < 0.0):
            ok = False
    _check(checks, "eta0_bessel_cross_product", ok)

    return SuiteResult("eigen", tuple(checks))


def suite_oracle() -> SuiteResult:
    checks = []

    p = Params(0.0, 0.0, 1.0)
    lam = 0.75 * math.pi
    m = [shooting_determinant(p, lam, fixed_step=h).mismatch
         for h in (0.02, 0.01, 0.005)]
    ratios = [abs(a) / max(abs(b), 1e-300) for a, b in zip(m, m[1:])]
    _check(checks, "fourth_order_convergence", all(rt >= 8.0 for rt in ratios),
           f"ratios={['%.1f' % rt for rt in ratios]}")

    trace = integrate_through(Params(0.0, 0.0, 1.0), lam, 1.6)
    at_jump = [(r, y, yp) for r, y, yp in trace if r == 1.0]
    cont = len(at_jump) >= 1
    # Beyond the jump the regular solution at an eigenvalue decays like
    # e^{-alpha lam r}; check the decay ratio over [1.2, 1.5].
    ys = {round(r, 12): y for r, y, yp in trace}
    y12 = min(((abs(r - 1.2), y) for r, y, yp in trace), key=lambda t: t[0])[1]
    y15 = min(((abs(r - 1.5), y) for r, y, yp in trace), key=lambda t: t[0])[1]
    del ys
    decay_ok = y12 != 0 and abs(y15 / y12) < 1.0
    _check(checks, "media_jump_continuity_and_decay", cont and decay_ok)

    ok = True
    worst = 0.0
    for L, eta, alpha in ((0.0, 0.5, 1.0), (1.0, 1.0, 2.0)):
        p = Params(L, eta, alpha)
        a = eigenvalues(p, 2)
        b = eigenvalues_shooting(p, 2)
        for x, y in zip(a, b):
            worst = max(worst, abs(x.lam - y.lam))
    ok = worst <= 1e-6
    _check(checks, "solver_shooting_agreement", ok, f"worst={worst:.3e}")

    p = Params(1.0, 1.0, 2.0)
    pair = eigenvalues(p, 1)[0]
    rep = hellman_feynman_report(p, pair)
    ok = (abs(rep.identity_residual) <= 1e-5 * rep.scale
          and rep.slack >= 0.0 and rep.dlambda_dL > 0.0)
    _check(checks, "hellman_feynman_identity", ok,
           f"resid/scale={rep.identity_residual / rep.scale:.2e}")

    return SuiteResult("oracle", tuple(checks))


_SUITES = {
    "specfun": suite_specfun,
    "zeros": suite_zeros,
    "eigen": suite_eigen,
    "oracle": suite_oracle,
}


def run_suites(which: str = "all") -> list:
    """Run one named suite, or all of them in a fixed order."""
    if which == "all":
        return [fn() for fn in _SUITES.values()]
    if which not in _SUITES:
        raise KeyError(which)
    return [_SUITES[which]()]
