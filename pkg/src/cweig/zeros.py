"""Zeros of the regular Coulomb wave function and its logarithmic derivative.

Positive zeros are bracketed by a fixed-step sign scan and refined by
bisection plus one secant polish.  Beyond the power-series trust radius the
function is continued by integrating the Coulomb wave equation from a
series-accurate state, and further zeros are read off the dense ODE solution;
double-precision cancellation makes the raw series useless out there.

Negative zeros exist only through the reflection y_{L,eta,n} = -x_{L,-eta,n}
(the series coefficients flip sign in eta for odd powers, so the entire
series factor at -rho equals the eta-reflected factor at +rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import DomainError, PoleError
from .specfun import coulomb_F

_SCAN_STEP = 0.05 * math.pi
_SCAN_START = 1e-6
_BISECT_WIDTH = 1e-13
#: Zeros below this radius come from the series; beyond, from ODE continuation.
_SERIES_SCAN_MAX = 18.0
#: Fixed RK4 step of the continuation sweep up to here ...
_ODE_PRECISE_MAX = 400.0
_H_PRECISE = 0.004
#: ... and beyond, where only the Mittag-Leffler tail consumes the zeros.
_H_TAIL = 0.04
_ML_TERM_CAP = 10_000
_COUNT_CAP = 100


@dataclass(frozen=True)
class ZeroSeq:
    """Ordered zeros of F_L(eta, .) of one sign, with a certification radius.

    ``tol`` is the largest radius over the sequence within which each zero is
    certified (bisection width, value-over-slope bound, or ODE phase budget,
    whichever dominates).
    """

    L: float
    eta: float
    sign: str
    zeros: tuple
    tol: float


@dataclass
class _Cache:
    zeros: list = field(default_factory=list)
    certs: list = field(default_factory=list)
    state: tuple | None = None  # (rho, F, F') continuation state


_zero_cache: dict = {}


def _bisect_refine(f, lo, hi, f_lo, f_hi, width):
    """Sign-change bisection to ``width``, then one secant polish."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, lo, hi
        if (f_lo < 0.0) == (f_mid < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    if f_hi != f_lo:
        z = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        if lo <= z <= hi:
            return z, lo, hi
    return 0.5 * (lo + hi), lo, hi


def _series_scan(L, eta, cache):
    """Populate cache with all zeros reachable by the series scan."""
    def f(rho):
        return coulomb_F(L, eta, rho, method="series").value

    rho = _SCAN_START
    f_prev = f(rho)
    while rho < _SERIES_SCAN_MAX:
        nxt = min(rho + _SCAN_STEP, _SERIES_SCAN_MAX)
        f_next = f(nxt)
        if (f_prev < 0.0) != (f_next < 0.0):
            z, lo, hi = _bisect_refine(f, rho, nxt, f_prev, f_next, _BISECT_WIDTH)
            fz = coulomb_F(L, eta, z, method="series")
            slope = max(abs(fz.derivative), 1e-300)
            cert = max(hi - lo, abs(fz.value) / slope, fz.abs_err / slope)
            cache.zeros.append(z)
            cache.certs.append(cert)
        rho, f_prev = nxt, f_next


@njit(cache=True)
def _rk4_step(L, eta, t, y, yp, h):
    """One classical RK4 step for u'' = (L(L+1)/t^2 + 2 eta/t - 1) u."""
    q1 = (L * (L + 1.0) / (t * t) + 2.0 * eta / t - 1.0) * y
    tm = t + 0.5 * h
    y2 = y + 0.5 * h * yp
    p2 = yp + 0.5 * h * q1
    q2 = (L * (L + 1.0) / (tm * tm) + 2.0 * eta / tm - 1.0) * y2
    y3 = y + 0.5 * h * p2
    p3 = yp + 0.5 * h * q2
    q3 = (L * (L + 1.0) / (tm * tm) + 2.0 * eta / tm - 1.0) * y3
    te = t + h
    y4 = y + h * p3
    p4 = yp + h * q3
    q4 = (L * (L + 1.0) / (te * te) + 2.0 * eta / te - 1.0) * y4
    y_new = y + h * (yp + 2.0 * p2 + 2.0 * p3 + p4) / 6.0
    yp_new = yp + h * (q1 + 2.0 * q2 + 2.0 * q3 + q4) / 6.0
    return y_new, yp_new


@njit(cache=True)
def _rk4_sweep(L, eta, t, y, yp, t_end, h, zeros_out, n_found):
    """Fixed-step RK4 sweep recording zeros by in-step Newton refinement.

    Appends into zeros_out starting at index n_found; returns the new count
    and the continuation state (t, y, yp)."""
    n = n_found
    cap = zeros_out.shape[0]
    while t < t_end and n < cap:
        step = h if t + h <= t_end else t_end - t
        y_new, yp_new = _rk4_step(L, eta, t, y, yp, step)
        if (y < 0.0) != (y_new < 0.0):
            # Newton in the independent variable, re-integrating each move.
            zt, zy, zyp = t, y, yp
            for _ in range(6):
                d = -zy / zyp
                zy, zyp = _rk4_step(L, eta, zt, zy, zyp, d)
                zt += d
                if abs(d) < 1e-14 * zt:
                    break
            if n == 0 or zt > zeros_out[n - 1] + 0.5:
                zeros_out[n] = zt
                n += 1
        t += step
        y, yp = y_new, yp_new
    return n, t, y, yp


def _extend_with_ode(L, eta, cache, n_target):
    """Append zeros beyond the series range by continuing the Coulomb wave
    equation from a series-accurate state with a fixed-step RK4 sweep."""
    if cache.state is None:
        base = coulomb_F(L, eta, _SERIES_SCAN_MAX, method="series")
        cache.state = (_SERIES_SCAN_MAX, base.value, base.derivative)
    while len(cache.zeros) < n_target:
        t, y, yp = cache.state
        need = n_target - len(cache.zeros)
        t_end = t + need * math.pi * 1.05 + 20.0 + 15.0 * abs(eta)
        buf = np.empty(need, dtype=np.float64)
        n = 0
        if t < _ODE_PRECISE_MAX:
            n, t, y, yp = _rk4_sweep(
                L, eta, t, y, yp, min(t_end, _ODE_PRECISE_MAX), _H_PRECISE, buf, n
            )
        if t_end > _ODE_PRECISE_MAX and n < need:
            n, t, y, yp = _rk4_sweep(L, eta, t, y, yp, t_end, _H_TAIL, buf, n)
        last = cache.zeros[-1] if cache.zeros else 0.0
        for z in buf[:n]:
            if z <= last + 0.5:
                continue
            # Accumulated phase-error budget of the fixed-step sweep.
            h = _H_PRECISE if z <= _ODE_PRECISE_MAX else _H_TAIL
            cache.zeros.append(float(z))
            cache.certs.append(max(1e-10, (z - _SERIES_SCAN_MAX) * h**4 / 60.0))
            last = z
        cache.state = (t, y, yp)


def _positive_zeros(L, eta, count):
    """First ``count`` positive zeros with per-zero certification radii."""
    key = (float(L), float(eta))
    cache = _zero_cache.get(key)
    if cache is None:
        cache = _Cache()
        _series_scan(L, eta, cache)
        _zero_cache[key] = cache
    if len(cache.zeros) < count:
        _extend_with_ode(L, eta, cache, count)
    return cache.zeros[:count], cache.certs[:count]


def coulomb_zeros(L: float, eta: float, count: int, sign: str = "positive") -> ZeroSeq:
    """First ``count`` certified-simple zeros of F_L(eta, .) of one sign."""
    if not 1 <= count <= _COUNT_CAP:
        raise DomainError(f"count must be in 1..{_COUNT_CAP}, got {count}")
    if L <= -1.0:
        raise DomainError(f"coulomb_zeros requires L > -1, got L={L}")
    if sign not in ("positive", "negative"):
        raise DomainError(f"sign must be 'positive' or 'negative', got {sign!r}")
    if sign == "negative":
        zs, certs = _positive_zeros(L, -eta, count)
        return ZeroSeq(L, eta, sign, tuple(-z for z in zs), max(certs))
    zs, certs = _positive_zeros(L, eta, count)
    return ZeroSeq(L, eta, sign, tuple(zs), max(certs))


def logderiv_F(L: float, eta: float, r: float, mode: str = "direct",
               terms: int | None = None) -> float:
    """F_L'/F_L (eta, r), either directly or through the truncated
    Mittag-Leffler partial-fraction expansion over both zero branches."""
    if r <= 0:
        raise DomainError(f"logderiv_F requires r > 0, got {r}")
    if mode == "direct":
        f = coulomb_F(L, eta, r)
        # |F/F'| approximates the distance to the nearest zero.
        if abs(f.value) <= abs(f.derivative) * 1e-12:
            raise PoleError(f"r={r} is within tolerance of a zero of F_{L}({eta}, .)")
        return f.derivative / f.value
    if mode != "mittag_leffler":
        raise DomainError(f"unknown logderiv_F mode {mode!r}")
    n = _ML_TERM_CAP if terms is None else int(terms)
    if not 1 <= n <= _ML_TERM_CAP:
        raise DomainError(f"term count must be in 1..{_ML_TERM_CAP}, got {terms}")
    xs, _ = _positive_zeros(L, eta, n)
    ys_pos, _ = _positive_zeros(L, -eta, n)
    for x in xs:
        if x - 1e-9 > r:
            break
        if abs(r - x) < 1e-9:
            raise PoleError(f"r={r} is within tolerance of the zero {x}")
    total = (L + 1.0) / r + eta / (L + 1.0)
    total -= math.fsum(r / (x * (x - r)) for x in xs)
    total -= math.fsum(r / (y * (y + r)) for y in ys_pos)  # y_n = -ys_pos[n]
    return total
