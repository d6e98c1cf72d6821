"""Acceptance gate: ten numbered criteria, each printing one pass/fail line.

Run with ``pytest -v`` (test names double as the criterion list); the printed
lines land in the captured output and in ``pytest -s`` runs.
"""

import itertools
import math
import subprocess
import sys

import scipy.optimize
import scipy.special

from cweig.eigen import eigenvalues, sweep_monotonicity
from cweig.oracle import eigenvalues_shooting, hellman_feynman_report
from cweig.specfun import (
    Params,
    coulomb_F,
    coulomb_F_second,
    tricomi_Q,
    tricomi_Q_second,
    tricomi_psi,
)
from cweig.zeros import coulomb_zeros, logderiv_F

TOL = 1e-12

# Criterion-2 parameter grid, reused by criteria 4, 7, and 9.
GRID = list(itertools.product((0.0, 0.5, 1.0, 2.0),
                              (0.0, 0.5, 1.0),
                              (0.5, 1.0, 2.0)))


def _report(number, title, passed, detail=""):
    line = f"criterion {number:2d} ({title}): {'PASS' if passed else 'FAIL'}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    assert passed, line


def _eigen(L, eta, alpha, count):
    return eigenvalues(Params(L, eta, alpha), count, tol=TOL, force=True)


def test_criterion_01_closed_form_eigenvalues():
    worst = 0.0
    for pair in _eigen(0.0, 0.0, 1.0, 5):
        worst = max(worst, abs(pair.lam - (4 * pair.n - 1) * math.pi / 4.0))
    first = _eigen(0.0, 0.0, 2.0, 1)[0].lam
    worst = max(worst, abs(first - (math.pi - math.atan(0.5))))
    _report(1, "closed-form eigenvalues", worst <= 1e-10,
            f"worst abs err {worst:.2e}")


def test_criterion_02_interlacing():
    worst_margin = math.inf
    for L, eta, alpha in GRID:
        pairs = _eigen(L, eta, alpha, 5)
        xs = coulomb_zeros(L, eta, 5).zeros
        worst_margin = min(worst_margin, xs[0] - pairs[0].lam)
        for n in range(2, 6):
            worst_margin = min(worst_margin,
                               pairs[n - 1].lam - xs[n - 2],
                               xs[n - 1] - pairs[n - 1].lam)
    _report(2, "interlacing", worst_margin >= 10.0 * TOL,
            f"36 cases, worst margin {worst_margin:.3e}")


def test_criterion_03_monotonicity_in_L():
    grid = [0.25 * i for i in range(13)]  # 0, 0.25, ..., 3
    ok = True
    min_gap = math.inf
    for eta in (0.0, 1.0):
        for alpha in (1.0, 2.0):
            for n in (1, 2):
                res = sweep_monotonicity(grid, eta, alpha, n)
                lams = [lam for _, lam in res.rows]
                ok = ok and all(lam is not None for lam in lams)
                gaps = [b - a for a, b in zip(lams, lams[1:])]
                ok = ok and all(g > 0.0 for g in gaps)
                min_gap = min(min_gap, min(gaps))
    _report(3, "monotonicity in L", ok, f"min adjacent gap {min_gap:.3e}")


def test_criterion_04_oracle_equivalence():
    worst = 0.0
    for L, eta, alpha in GRID:
        p = Params(L, eta, alpha)
        analytic = eigenvalues(p, 5, tol=TOL, force=True)
        shot = eigenvalues_shooting(p, 5)
        for a, b in zip(analytic, shot):
            worst = max(worst, abs(a.lam - b.lam))
    _report(4, "shooting-oracle equivalence", worst <= 1e-6,
            f"36 cases x 5 ranks, worst |diff| {worst:.2e}")


def test_criterion_05_bessel_reduction():
    worst_F = 0.0
    for L in (0, 1, 2):
        for i in range(1, 31):
            rho = 0.5 * i
            ref = math.sqrt(math.pi * rho / 2.0) * scipy.special.jv(L + 0.5, rho)
            val = coulomb_F(L, 0.0, rho).value
            worst_F = max(worst_F, abs(val - ref) / max(abs(ref), 1e-300))

    def cross(nu, alpha):
        def f(r):
            return (scipy.special.jv(nu + 1.0, r) * scipy.special.kv(nu, alpha * r)
                    - alpha * scipy.special.kv(nu + 1.0, alpha * r)
                    * scipy.special.jv(nu, r))
        return f

    worst_eig = 0.0
    for L, alpha in ((0.0, 1.0), (1.0, 2.0), (2.0, 0.5)):
        for pair in _eigen(L, 0.0, alpha, 3):
            f = cross(L + 0.5, alpha)
            ref = scipy.optimize.brentq(f, pair.lam - 0.2, pair.lam + 0.2,
                                        xtol=1e-13)
            worst_eig = max(worst_eig, abs(pair.lam - ref))
    ok = worst_F <= 1e-10 and worst_eig <= 1e-9
    _report(5, "Bessel reduction at eta=0", ok,
            f"worst F rel {worst_F:.2e}, worst eigen |diff| {worst_eig:.2e}")


def test_criterion_06_ode_residuals():
    worst = 0.0
    for L in (0.0, 0.5, 1.0, 2.0):
        for eta in (0.0, 0.5, -0.5, 1.0):
            x3 = coulomb_zeros(L, eta, 3).zeros[2]
            for frac in (0.1, 0.35, 0.6, 0.85):
                rho = frac * x3
                f = coulomb_F(L, eta, rho, method="series")
                f2 = coulomb_F_second(L, eta, rho)
                resid = abs(rho * rho * f2 + (rho * rho - 2.0 * eta * rho
                                              - L * (L + 1.0)) * f.value)
                worst = max(worst, resid / max(1.0, abs(rho * rho * f2)))
                q = tricomi_Q(L, eta, rho)
                q2 = tricomi_Q_second(L, eta, rho)
                residq = abs(rho * rho * q2 - (rho * rho + 2.0 * eta * rho
                                               + L * (L + 1.0)) * q.value)
                scaleq = max(abs(rho * rho * q2), abs(q.value), 1e-300)
                worst = max(worst, residq / scaleq)
    _report(6, "ODE residuals", worst <= 1e-8, f"worst rel resid {worst:.2e}")


def test_criterion_07_mittag_leffler_agreement():
    pairs = sorted({(L, eta) for L, eta, _ in GRID})
    worst = 0.0
    halving_ok = True
    for L, eta in pairs:
        x1 = coulomb_zeros(L, eta, 1).zeros[0]
        r = 0.7 * x1
        direct = logderiv_F(L, eta, r)
        err_full = abs(logderiv_F(L, eta, r, mode="mittag_leffler",
                                  terms=10_000) - direct)
        err_half = abs(logderiv_F(L, eta, r, mode="mittag_leffler",
                                  terms=5_000) - direct)
        worst = max(worst, err_full)
        halving_ok = halving_ok and 0.35 <= err_full / err_half <= 0.75
    ok = worst <= 5e-4 and halving_ok
    _report(7, "Mittag-Leffler agreement", ok,
            f"worst err at N=1e4 {worst:.2e}, halving {halving_ok}")


def test_criterion_08_psi_logderiv_monotone_negative():
    violations = 0
    sign_violations = 0
    for a in (1.5, 2.0, 3.5):
        for c in (2.0, 3.0, 5.0):
            prev = None
            for i in range(100):
                x = 0.01 * (50.0 / 0.01) ** (i / 99.0)
                p = tricomi_psi(a, c, x)
                ld = p.derivative / p.value
                if ld >= 0.0:
                    sign_violations += 1
                if prev is not None and ld <= prev:
                    violations += 1
                prev = ld
    ok = violations == 0 and sign_violations == 0
    _report(8, "psi log-derivative monotone and negative", ok,
            f"{violations} monotonicity, {sign_violations} sign violations")


def test_criterion_09_hellman_feynman():
    worst_resid = 0.0
    min_slack = math.inf
    min_dldL = math.inf
    for L, eta, alpha in GRID:
        p = Params(L, eta, alpha)
        pair = eigenvalues(p, 1, tol=TOL, force=True)[0]
        rep = hellman_feynman_report(p, pair)
        worst_resid = max(worst_resid, abs(rep.identity_residual) / rep.scale)
        min_slack = min(min_slack, rep.slack)
        min_dldL = min(min_dldL, rep.dlambda_dL)
    ok = worst_resid <= 1e-5 and min_slack >= 0.0 and min_dldL > 0.0
    _report(9, "Hellman-Feynman identity", ok,
            f"worst resid/scale {worst_resid:.2e}, min slack {min_slack:.2e}, "
            f"min dlam/dL {min_dldL:.3f}")


def test_criterion_10_cli_determinism():
    invocations = [
        ("verify", "--suite", "specfun"),
        ("verify", "--suite", "zeros"),
        ("verify", "--suite", "eigen"),
        ("verify", "--suite", "oracle"),
        ("eigen", "--L", "0.5", "--eta", "0.5", "--alpha", "1",
         "--count", "3", "--format", "json"),
        ("eigen", "--L", "2", "--eta", "1", "--alpha", "2",
         "--count", "5", "--format", "csv"),
    ]
    ok = True
    for args in invocations:
        cmd = [sys.executable, "-m", "cweig", *args]
        first = subprocess.run(cmd, capture_output=True, text=True)
        second = subprocess.run(cmd, capture_output=True, text=True)
        ok = ok and first.stdout == second.stdout and first.stdout != ""
        ok = ok and first.returncode == second.returncode == 0
    _report(10, "CLI determinism", ok,
            f"{len(invocations)} invocations, byte-identical")
