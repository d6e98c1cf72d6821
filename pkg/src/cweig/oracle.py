"""Independent verification oracle.

Eigenvalues are re-derived by shooting: the radial equation

    y'' = [L(L+1)/r^2 + 2 eta lam h(r)/r - lam^2 g(r)] y

is integrated outward from near the origin (regular launch y ~ r^{L+1}) and
inward from far outside (decaying launch y ~ e^{-alpha lam r}), and the
Wronskian-type matching determinant at the media jump r = 1 vanishes exactly
at eigenvalues.  Nothing here touches the special-function machinery, so
agreement with the bracketed solver is a genuine cross-check.

The quadrature side verifies the integral identity behind the L-monotonicity
statement (the Hellman-Feynman route) on computed eigenfunctions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .eigen import Eigenpair, eigenvalues, theta
from .errors import ConvergenceError, DomainError
from .quadrature import adaptive_gauss, composite_estimate
from .specfun import MediumProfile, Params

_R0 = 1e-4
_SCAN_STEP = 0.05 * math.pi
_BISECT_TOL = 1e-9
_RTOL = 1e-10
#: Looser stepper tolerance while locating sign changes; brackets are then
#: re-evaluated and bisected at full tolerance.
_SCAN_RTOL = 1e-6
_MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class ShootingResult:
    lam: float
    mismatch: float
    #: (r, y, y') samples, origin side and far side of the media jump.
    interior_profile: tuple
    exterior_profile: tuple


def _q(L, eta, lam, gv, hv, r):
    return (L * (L + 1.0) / (r * r)
            + 2.0 * eta * lam * hv / r
            - lam * lam * gv)


def _rk4_step(L, eta, lam, gh, r, y, yp, h):
    """One classical RK4 step of y'' = q(r) y."""
    gv, hv = gh
    k1y = yp
    k1p = _q(L, eta, lam, gv, hv, r) * y
    rm = r + 0.5 * h
    qm = _q(L, eta, lam, gv, hv, rm)
    k2y = yp + 0.5 * h * k1p
    k2p = qm * (y + 0.5 * h * k1y)
    k3y = yp + 0.5 * h * k2p
    k3p = qm * (y + 0.5 * h * k2y)
    re = r + h
    qe = _q(L, eta, lam, gv, hv, re)
    k4y = yp + h * k3p
    k4p = qe * (y + h * k3y)
    return (y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0,
            yp + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0)


def _integrate(L, eta, lam, gh, r, y, yp, r_end, rtol=_RTOL,
               fixed_step=None, record=None):
    """Integrate from r to r_end (either direction) by RK4 with step-doubling
    error control, or with a fixed step when ``fixed_step`` is given.

    ``gh`` is the constant (g, h) media pair of the region being crossed;
    each shot stays on one side of the media jump, so the coefficients never
    switch mid-integration."""
    direction = 1.0 if r_end >= r else -1.0
    if fixed_step is not None:
        h = direction * abs(fixed_step)
        steps = 0
        while (r_end - r) * direction > 1e-15 * max(1.0, abs(r_end)):
            step = h if (r_end - r - h) * direction >= 0.0 else r_end - r
            y, yp = _rk4_step(L, eta, lam, gh, r, y, yp, step)
            r += step
            steps += 1
            if record is not None:
                record.append((r, y, yp))
            if steps > _MAX_STEPS:
                raise ConvergenceError("shooting integrator exceeded its step budget")
        return y, yp

    h = direction * min(0.01, abs(r_end - r))
    steps = 0
    while (r_end - r) * direction > 1e-15 * max(1.0, abs(r_end)):
        if (r + h - r_end) * direction > 0.0:
            h = r_end - r
        # One full step vs two half steps; accept on agreement.
        y1, yp1 = _rk4_step(L, eta, lam, gh, r, y, yp, h)
        ya, ypa = _rk4_step(L, eta, lam, gh, r, y, yp, 0.5 * h)
        y2, yp2 = _rk4_step(L, eta, lam, gh, r + 0.5 * h, ya, ypa, 0.5 * h)
        scale = rtol * max(abs(y2), abs(yp2) * abs(h), 1e-290)
        err = max(abs(y2 - y1), abs(yp2 - yp1) * abs(h))
        steps += 1
        if steps > _MAX_STEPS:
            raise ConvergenceError("shooting integrator exceeded its step budget")
        if err <= scale:
            r += h
            # Fifth-order local extrapolation of the step-doubled result.
            y = y2 + (y2 - y1) / 15.0
            yp = yp2 + (yp2 - yp1) / 15.0
            if record is not None:
                record.append((r, y, yp))
            if err < 0.1 * scale:
                h *= 2.0
        else:
            h *= 0.5
            if abs(h) < 1e-14:
                raise ConvergenceError(
                    f"shooting step size underflow near r={r} (lam={lam})"
                )
    return y, yp


@njit(cache=True)
def _rk4_fast(L, eta, lam, gv, hv, r, y, yp, h):
    k1y = yp
    k1p = (L * (L + 1.0) / (r * r) + 2.0 * eta * lam * hv / r
           - lam * lam * gv) * y
    rm = r + 0.5 * h
    qm = (L * (L + 1.0) / (rm * rm) + 2.0 * eta * lam * hv / rm
          - lam * lam * gv)
    k2y = yp + 0.5 * h * k1p
    k2p = qm * (y + 0.5 * h * k1y)
    k3y = yp + 0.5 * h * k2p
    k3p = qm * (y + 0.5 * h * k2y)
    re = r + h
    qe = (L * (L + 1.0) / (re * re) + 2.0 * eta * lam * hv / re
          - lam * lam * gv)
    k4y = yp + h * k3p
    k4p = qe * (y + h * k3y)
    return (y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0,
            yp + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0)


@njit(cache=True)
def _integrate_fast(L, eta, lam, gv, hv, r, y, yp, r_end, rtol):
    """Recording-free twin of the adaptive loop in ``_integrate``; returns
    (y, yp, status) with status 0 on success, 1 on step-budget exhaustion,
    2 on step-size underflow."""
    direction = 1.0 if r_end >= r else -1.0
    h = direction * min(0.01, abs(r_end - r))
    steps = 0
    while (r_end - r) * direction > 1e-15 * max(1.0, abs(r_end)):
        if (r + h - r_end) * direction > 0.0:
            h = r_end - r
        y1, yp1 = _rk4_fast(L, eta, lam, gv, hv, r, y, yp, h)
        ya, ypa = _rk4_fast(L, eta, lam, gv, hv, r, y, yp, 0.5 * h)
        y2, yp2 = _rk4_fast(L, eta, lam, gv, hv, r + 0.5 * h, ya, ypa, 0.5 * h)
        scale = rtol * max(abs(y2), abs(yp2) * abs(h), 1e-290)
        err = max(abs(y2 - y1), abs(yp2 - yp1) * abs(h))
        steps += 1
        if steps > _MAX_STEPS:
            return y, yp, 1
        if err <= scale:
            r += h
            y = y2 + (y2 - y1) / 15.0
            yp = yp2 + (yp2 - yp1) / 15.0
            if err < 0.1 * scale:
                h *= 2.0
        else:
            h *= 0.5
            if abs(h) < 1e-14:
                return y, yp, 2
    return y, yp, 0


def _launches(params: Params, lam: float):
    """Truncated-series launch states at r0 and at the far cutoff R."""
    L, eta, alpha = params.L, params.eta, params.alpha
    c1 = eta * lam / (L + 1.0)
    y0 = _R0 ** (L + 1.0) * (1.0 + c1 * _R0)
    yp0 = (L + 1.0) * _R0 ** L + (L + 2.0) * c1 * _R0 ** (L + 1.0)
    R = 1.0 + 30.0 / (alpha * lam)
    yR = math.exp(-alpha * lam * R)
    return (y0, yp0), (R, yR, -alpha * lam * yR)


def shooting_determinant(params: Params, lam: float,
                         fixed_step=None) -> ShootingResult:
    """Matching determinant y_in'(1) y_out(1) - y_in(1) y_out'(1) at the
    media jump, from regular-at-origin and decaying-at-infinity shots."""
    if not lam > 0:
        raise DomainError(f"shooting requires lam > 0, got {lam}")
    L, eta, alpha = params.L, params.eta, params.alpha
    (y0, yp0), (R, yR, ypR) = _launches(params, lam)
    inner = [(_R0, y0, yp0)]
    y_in, yp_in = _integrate(L, eta, lam, (1.0, 1.0), _R0, y0, yp0, 1.0,
                             fixed_step=fixed_step, record=inner)
    outer = [(R, yR, ypR)]
    y_out, yp_out = _integrate(L, eta, lam, (-alpha * alpha, alpha), R, yR, ypR,
                               1.0, fixed_step=fixed_step, record=outer)
    mismatch = yp_in * y_out - y_in * yp_out
    return ShootingResult(lam, mismatch, tuple(inner), tuple(outer))


def _normalized_mismatch(params, lam, rtol=_RTOL):
    L, eta, alpha = params.L, params.eta, params.alpha
    (y0, yp0), (R, yR, ypR) = _launches(params, lam)
    y_in, yp_in, s1 = _integrate_fast(L, eta, lam, 1.0, 1.0,
                                      _R0, y0, yp0, 1.0, rtol)
    y_out, yp_out, s2 = _integrate_fast(L, eta, lam, -alpha * alpha, alpha,
                                        R, yR, ypR, 1.0, rtol)
    if s1 or s2:
        raise ConvergenceError(
            f"shooting integrator failed at lam={lam} (interior status {s1}, "
            f"exterior status {s2})"
        )
    mismatch = yp_in * y_out - y_in * yp_out
    scale = math.hypot(y_in, yp_in / lam) * math.hypot(y_out, yp_out / lam)
    return mismatch / scale


def eigenvalues_shooting(params: Params, count: int) -> list:
    """First ``count`` eigenvalues by sign-scanning the matching determinant
    in steps of 0.05 pi and bisecting to 1e-9."""
    if not 1 <= count <= 50:
        raise DomainError(f"count must be in 1..50, got {count}")
    pairs = []
    lam = 0.25 * _SCAN_STEP
    f_prev = _normalized_mismatch(params, lam, rtol=_SCAN_RTOL)
    scans = 0
    while len(pairs) < count:
        scans += 1
        if scans > 4000:
            raise ConvergenceError(
                f"shooting scan found only {len(pairs)} of {count} sign "
                f"changes below lam={lam:.3f}"
            )
        lam_next = lam + _SCAN_STEP
        f_next = _normalized_mismatch(params, lam_next, rtol=_SCAN_RTOL)
        if (f_prev < 0.0) != (f_next < 0.0):
            lo, hi = lam, lam_next
            f_lo = _normalized_mismatch(params, lo)
            f_hi = _normalized_mismatch(params, hi)
            if (f_lo < 0.0) == (f_hi < 0.0):
                raise ConvergenceError(
                    f"sign change near lam in ({lo}, {hi}) did not survive "
                    f"re-evaluation at full tolerance"
                )
            while hi - lo > _BISECT_TOL:
                mid = 0.5 * (lo + hi)
                f_mid = _normalized_mismatch(params, mid)
                if f_mid == 0.0:
                    lo = hi = mid
                    break
                if (f_lo < 0.0) == (f_mid < 0.0):
                    lo, f_lo = mid, f_mid
                else:
                    hi, f_hi = mid, f_mid
            root = 0.5 * (lo + hi)
            pairs.append(Eigenpair(len(pairs) + 1, root, (lam, lam_next),
                                   abs(_normalized_mismatch(params, root))))
        lam, f_prev = lam_next, f_next
    return pairs


@dataclass(frozen=True)
class HellmanFeynmanReport:
    """Quadrature check of the integral identity behind L-monotonicity.

    identity_residual: left minus right of
        int (lam^2 g - 2 eta lam h / r) Theta^2 = L(L+1) int Theta^2/r^2
                                                  + int (Theta')^2,
    scale: magnitude budget of the identity's terms,
    slack: lam^2 int g Theta^2 - lam int (2 eta h / r) Theta^2 (>= 0 claimed),
    dlambda_dL: centered finite difference of the eigenvalue in L.
    """

    lam: float
    identity_residual: float
    scale: float
    slack: float
    dlambda_dL: float
    quadrature_err: float


def _theta_integrals(params: Params, lam: float):
    """(int g T^2, int (2 eta h / r) T^2, int T^2/r^2, int (T')^2) for
    T = Theta(.; lam), split at the media jump, with exponential tail cutoff."""
    medium = MediumProfile(params.alpha)
    R = 1.0 + 40.0 / (params.alpha * lam)

    def integrand(rs):
        out = np.empty((4, len(rs)))
        for j, r in enumerate(rs):
            t, tp = theta(params, lam, float(r))
            t2 = t * t
            out[0, j] = medium.g(r) * t2
            out[1, j] = 2.0 * params.eta * medium.h(r) / r * t2
            out[2, j] = t2 / (r * r)
            out[3, j] = tp * tp
        return out

    # All four integrands extend continuously to r = 0 for L >= 0 (the
    # quadrature nodes are interior, so r = 0 itself is never evaluated);
    # integrating from 0 avoids a truncation bias of order r0 * scale.
    rough = np.abs(composite_estimate(integrand, 0.0, 1.0, panels=6))
    tol = 1e-13 * max(float(np.max(rough)), 1e-300)
    left, e1 = adaptive_gauss(integrand, 0.0, 1.0, tol)
    right, e2 = adaptive_gauss(integrand, 1.0, R, tol)
    return left + right, e1 + e2


def hellman_feynman_report(params: Params, pair: Eigenpair) -> HellmanFeynmanReport:
    """Verify the eigenvalue-identity and monotonicity consequences at one
    computed eigenpair."""
    lam = pair.lam
    (i_g, i_h, i_cent, i_grad), qerr = _theta_integrals(params, lam)
    L = params.L
    left = lam * lam * i_g - lam * i_h
    right = L * (L + 1.0) * i_cent + i_grad
    scale = abs(lam * lam * i_g) + abs(lam * i_h) + right
    slack = lam * lam * i_g - lam * i_h

    dL = 1e-3
    lam_hi = eigenvalues(Params(L + dL, params.eta, params.alpha),
                         pair.n, force=True)[pair.n - 1].lam
    lam_lo = eigenvalues(Params(max(L - dL, 0.0), params.eta, params.alpha),
                         pair.n, force=True)[pair.n - 1].lam
    width = dL + min(dL, L)
    dlam = (lam_hi - lam_lo) / width

    return HellmanFeynmanReport(lam, left - right, scale, slack, dlam, qerr)


def integrate_through(params: Params, lam: float, r_end: float):
    """Integrate the regular solution from r0 through the media jump at r=1
    (restarting there) out to r_end; returns the (r, y, y') trace."""
    if not r_end > 1.0:
        raise DomainError(f"integrate_through requires r_end > 1, got {r_end}")
    L, eta, alpha = params.L, params.eta, params.alpha
    (y0, yp0), _ = _launches(params, lam)
    trace = [(_R0, y0, yp0)]
    y, yp = _integrate(L, eta, lam, (1.0, 1.0), _R0, y0, yp0, 1.0, record=trace)
    # Restart exactly at the jump with the same state: y, y' are continuous.
    y, yp = _integrate(L, eta, lam, (-alpha * alpha, alpha), 1.0, y, yp, r_end,
                       record=trace)
    return trace
