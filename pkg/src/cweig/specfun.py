"""Special-function kernels.

Evaluates the regular Coulomb wave function F_L(eta, rho) and its radial
derivative from the regular power series, the Tricomi confluent
hypergeometric function psi(a, c, x) from its real integral representation
(large-x asymptotic series beyond a threshold), the composite
Q_L(eta, r) = r^(L+1) e^(-r) psi(L+eta+1, 2L+2, 2r), and half-integer-order
Bessel J/K reference values from elementary closed forms plus the three-term
order recurrence.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AccuracyLossError, ConvergenceError, DomainError
from .quadrature import adaptive_gauss, composite_estimate

# Extended-precision summation floor (80-bit on x86; falls back gracefully).
_EPS_LD = float(np.finfo(np.longdouble).eps)
_EPS = 2.0 ** -52

#: Largest rho at which the extended-precision regular series still meets its
#: cancellation budget; larger arguments continue the solution by integrating
#: the Coulomb wave equation from this trust radius.
SERIES_RHO_MAX = 24.0

#: psi switches from the integral representation to the 1/x asymptotic series
#: above this argument.
PSI_ASYMPTOTIC_X = 30.0

_SERIES_TERM_CAP = 10_000


@dataclass(frozen=True)
class FnValue:
    """A function evaluation: value, derivative in the radial argument, and
    an estimated absolute error of the value."""

    value: float
    derivative: float
    abs_err: float


@dataclass(frozen=True)
class Params:
    """Problem parameters: order L, Sommerfeld-type parameter eta, and the
    exterior rate alpha > 0 of the step medium."""

    L: float
    eta: float
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")

    @property
    def theorem_b_domain(self) -> bool:
        """Hypotheses under which the bracketed eigenvalue solver is certified:
        L + eta > 0, L > -3/2, and L != -1 unless eta == 0."""
        return (
            self.L + self.eta > 0
            and self.L > -1.5
            and (self.eta == 0 or self.L != -1)
        )

    @property
    def theorem_c_domain(self) -> bool:
        """Hypotheses under which the L-monotonicity sweep is certified:
        eta >= 0 and L >= 0."""
        return self.eta >= 0 and self.L >= 0


@dataclass(frozen=True)
class MediumProfile:
    """Step media: g = 1 inside the unit ball and -alpha^2 outside;
    h = 1 inside and alpha outside."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha}")

    def g(self, r: float) -> float:
        return 1.0 if r <= 1.0 else -self.alpha**2

    def h(self, r: float) -> float:
        return 1.0 if r <= 1.0 else self.alpha


# ---------------------------------------------------------------------------
# log |Gamma| on the right half-plane
# ---------------------------------------------------------------------------

# B_{2n} / (2n (2n-1)) for the Stirling series.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def log_abs_gamma(z: complex) -> float:
    """ln |Gamma(z)| for Re z > 0 via Stirling with argument-shift recursion."""
    z = complex(z)
    if z.real <= 0:
        raise DomainError(f"log_abs_gamma requires Re z > 0, got {z}")
    shift = 0.0
    while z.real < 10.0:
        shift -= math.log(abs(z))
        z += 1.0
    zi = 1.0 / z
    zi2 = zi * zi
    s = complex(_STIRLING[-1])
    for coef in reversed(_STIRLING[:-1]):
        s = s * zi2 + coef
    ln = (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi) + s * zi
    return ln.real + shift


def coulomb_norm(L: float, eta: float) -> float:
    """Normalization C_L(eta) = 2^L e^(-pi eta / 2) |Gamma(L+1+i eta)| / Gamma(2L+2)."""
    if L <= -1.0:
        raise DomainError(f"coulomb_norm requires L > -1, got L={L}")
    return math.exp(
        L * math.log(2.0)
        - 0.5 * math.pi * eta
        + log_abs_gamma(complex(L + 1.0, eta))
        - math.lgamma(2.0 * L + 2.0)
    )


# ---------------------------------------------------------------------------
# Regular Coulomb wave function
# ---------------------------------------------------------------------------

def _series_sums(L, eta, rho):
    """Extended-precision sums of the regular series and its first two
    term-wise derivatives.

    Returns (s0, s1, s2, est) where
      F   = C rho^(L+1) * s0
      F'  = C rho^L     * s1
      F'' = C rho^(L-1) * s2
    and est is an absolute error estimate for s0 (rounding + truncation).
    """
    ld = np.longdouble
    r = ld(rho)
    te = ld(2.0 * eta) * r
    r2 = r * r
    t_prev = ld(1.0)                     # A_0 rho^0
    t_cur = ld(eta / (L + 1.0)) * r      # A_1 rho^1
    s0 = t_prev + t_cur
    s1 = ld(L + 1.0) * t_prev + ld(L + 2.0) * t_cur
    s2 = ld((L + 1.0) * L) * t_prev + ld((L + 2.0) * (L + 1.0)) * t_cur
    max_t = max(abs(t_prev), abs(t_cur))
    small_run = 0
    tail = t_cur
    for k in range(2, _SERIES_TERM_CAP):
        t_next = (te * t_cur - r2 * t_prev) / ld(k * (k + 2.0 * L + 1.0))
        s0 += t_next
        s1 += ld(L + 1.0 + k) * t_next
        s2 += ld((L + 1.0 + k) * (L + k)) * t_next
        at = abs(t_next)
        if at > max_t:
            max_t = at
        t_prev, t_cur = t_cur, t_next
        if at < abs(s0) * ld(2.0**-53):
            small_run += 1
            if small_run >= 3:
                tail = t_next
                break
        else:
            small_run = 0
    else:
        raise ConvergenceError(
            f"Coulomb series did not converge within {_SERIES_TERM_CAP} terms "
            f"(L={L}, eta={eta}, rho={rho})"
        )
    est = _EPS_LD * float(max_t) * 8.0 + 4.0 * abs(float(tail))
    return float(s0), float(s1), float(s2), est


def _coulomb_F_series(L, eta, rho):
    C = coulomb_norm(L, eta)
    s0, s1, _, est = _series_sums(L, eta, rho)
    pref = C * rho ** (L + 1.0)
    value = pref * s0
    derivative = C * rho**L * s1
    abs_err = pref * est + _EPS * abs(value)
    return FnValue(value, derivative, abs_err)


def coulomb_F(L: float, eta: float, rho: float, method: str = "auto") -> FnValue:
    """Regular Coulomb wave function F_L(eta, rho) and its rho-derivative.

    ``method="series"`` forces the raw power series and raises
    AccuracyLossError when the cancellation estimate exceeds 1e-6 of the
    local amplitude; ``"auto"`` continues the series solution through the
    Coulomb wave equation beyond the series trust radius instead.
    """
    if rho <= 0:
        raise DomainError(f"coulomb_F requires rho > 0, got {rho}")
    if L <= -1.0:
        raise DomainError(f"coulomb_F requires L > -1, got L={L}")
    if method not in ("auto", "series"):
        raise DomainError(f"unknown coulomb_F method {method!r}")
    if method == "series" or rho <= SERIES_RHO_MAX:
        out = _coulomb_F_series(L, eta, rho)
        if method == "series" and out.abs_err > 1e-6 * math.hypot(out.value, out.derivative):
            raise AccuracyLossError(
                f"Coulomb series cancellation estimate {out.abs_err:.3e} exceeds "
                f"1e-6 of the local amplitude at rho={rho} (L={L}, eta={eta})",
                result=out,
            )
        return out
    return _coulomb_F_continued(L, eta, rho)


def _coulomb_F_continued(L, eta, rho):
    """Continue F beyond the series trust radius by integrating
    u'' = (L(L+1)/rho^2 + 2 eta / rho - 1) u from a series-accurate state."""
    rho0 = min(20.0, SERIES_RHO_MAX)
    base = _coulomb_F_series(L, eta, rho0)

    def rhs(t, y):
        return (y[1], (L * (L + 1.0) / (t * t) + 2.0 * eta / t - 1.0) * y[0])

    sol = solve_ivp(
        rhs,
        (rho0, rho),
        (base.value, base.derivative),
        method="DOP853",
        rtol=1e-12,
        atol=1e-14,
    )
    if not sol.success:
        raise ConvergenceError(
            f"Coulomb ODE continuation failed at rho={rho}: {sol.message}"
        )
    value = float(sol.y[0, -1])
    derivative = float(sol.y[1, -1])
    amp = math.hypot(value, derivative)
    abs_err = base.abs_err + 1e-11 * (rho - rho0) * max(amp, 1.0)
    return FnValue(value, derivative, abs_err)


def coulomb_F_second(L: float, eta: float, rho: float) -> float:
    """Term-wise second derivative of the regular series (series range only).

    Independent of the ODE form of F''; used to check the Coulomb wave
    equation residual.
    """
    if rho <= 0 or rho > SERIES_RHO_MAX:
        raise DomainError(
            f"coulomb_F_second is defined on the series range (0, {SERIES_RHO_MAX}]"
        )
    C = coulomb_norm(L, eta)
    _, _, s2, _ = _series_sums(L, eta, rho)
    return C * rho ** (L - 1.0) * s2


# ---------------------------------------------------------------------------
# Tricomi function of the second kind
# ---------------------------------------------------------------------------

def _psi_asymptotic(a, c, x):
    """psi ~ x^(-a) * sum_k (a)_k (a-c+1)_k / (k! (-x)^k), at most 10 terms."""
    s = 1.0
    t = 1.0
    trunc = 0.0
    for k in range(10):
        t_next = t * (a + k) * (a - c + 1.0 + k) / (-(x) * (k + 1.0))
        if t_next == 0.0:
            trunc = 0.0
            break
        if abs(t_next) >= abs(t):
            trunc = abs(t)  # divergent tail reached; last term bounds the error
            break
        s += t_next
        t = t_next
        trunc = abs(t_next)
    pref = x ** (-a)
    value = pref * s
    return value, pref * trunc + _EPS * abs(value)


def _psi_quadrature_multi(a, c, x, offsets):
    """Integral representation mapped to (0, 1) via t = s / (1 - s), for
    every parameter pair (a + d, c + d) with d in ``offsets`` at once.

    The recurrence-shifted integrands differ only by powers of s/(1-s), so
    they share one adaptive mesh; evaluating them as a vector integrand
    halves the quadrature cost of a value+derivative call.

    The map is split at s = 1/2; the right half is integrated in w = 1 - s so
    the (1-s) powers stay well conditioned near the endpoint.  For a < 1 an
    extra power substitution s = u^m removes the integrable endpoint
    singularity from the adaptive rule's reach.
    """
    m = 1 if a >= 1.0 else int(math.ceil(2.0 / a))
    offs = np.asarray(offsets, dtype=float)[:, None]

    def left(u):
        # s in (0, 1/2] parameterized as s = u^m, u in (0, (1/2)^(1/m)].
        with np.errstate(under="ignore", over="ignore", divide="ignore"):
            if m == 1:
                s = u
                base = (a - 1.0) * np.log(s) if a != 1.0 else 0.0
            else:
                s = u**m
                base = math.log(m) + (m * a - 1.0) * np.log(u)
            shift = np.log(s) - np.log1p(-s)
            lng = base - x * s / (1.0 - s) - c * np.log1p(-s) + offs * shift
            return np.where(lng < -745.0, 0.0, np.exp(lng))

    def right(w):
        # s = 1 - w, w in (0, 1/2]; t = (1-w)/w.
        with np.errstate(under="ignore", over="ignore", divide="ignore"):
            base = (a - 1.0) * np.log1p(-w) if a != 1.0 else 0.0
            shift = np.log1p(-w) - np.log(w)
            lng = base - x * (1.0 - w) / w - c * np.log(w) + offs * shift
            return np.where(lng < -745.0, 0.0, np.exp(lng))

    c_max = c + float(np.max(offs))
    u_split = 0.5 ** (1.0 / m)
    rough = float(np.max(np.abs(composite_estimate(left, 0.0, u_split,
                                                   panels=4))))
    rough += float(np.max(np.abs(composite_estimate(right, 0.0, 0.5,
                                                    panels=4))))
    # For small x the right half peaks in a layer at w ~ x/c of height
    # ~ x^(1-c).  Equispaced sampling misses it (wrong tolerance) and the
    # adaptive rule can accept the leftmost panels before any node lands in
    # the layer, so both the rough estimate and the integration are split
    # there to make the layer an O(1) fraction of its own interval.
    w_cut = None
    if c_max > 0.0 and 0.0 < x / c_max < 0.0625:
        w_cut = 8.0 * (x / c_max)
        rough += float(np.max(np.abs(composite_estimate(right, 0.0, w_cut,
                                                        panels=8))))
    tol = 0.5e-14 * max(math.exp(-x), rough)
    i_left, e_left = adaptive_gauss(left, 0.0, u_split, abs_tol=tol)
    if w_cut is None:
        i_right, e_right = adaptive_gauss(right, 0.0, 0.5, abs_tol=tol)
    else:
        i_right, e_right = adaptive_gauss(right, 0.0, w_cut, abs_tol=tol)
        # Past the layer the integrand decays like w^(-c) over several
        # decades; integrate decade by decade so no single panel has to
        # straddle orders of magnitude.
        lo = w_cut
        while lo < 0.5:
            hi = min(10.0 * lo, 0.5)
            i_dec, e_dec = adaptive_gauss(right, lo, hi, abs_tol=tol)
            i_right += i_dec
            e_right += e_dec
            lo = hi
    out = []
    for d, total in zip(np.ravel(offs), np.atleast_1d(i_left + i_right)):
        ga = math.gamma(a + d)
        value = float(total) / ga
        out.append((value, (e_left + e_right) / ga + _EPS * abs(value)))
    return out


def _psi_quadrature(a, c, x):
    return _psi_quadrature_multi(a, c, x, (0.0,))[0]


def _psi_value(a, c, x):
    if x > PSI_ASYMPTOTIC_X:
        return _psi_asymptotic(a, c, x)
    return _psi_quadrature(a, c, x)


def tricomi_psi(a: float, c: float, x: float) -> FnValue:
    """Tricomi psi(a, c, x) > 0 with derivative psi'(a,c,x) = -a psi(a+1,c+1,x)."""
    if a <= 0:
        raise DomainError(f"tricomi_psi requires a > 0, got a={a}")
    if x <= 0:
        raise DomainError(f"tricomi_psi requires x > 0, got x={x}")
    if x > PSI_ASYMPTOTIC_X:
        value, err = _psi_asymptotic(a, c, x)
        dvalue, _ = _psi_asymptotic(a + 1.0, c + 1.0, x)
    else:
        (value, err), (dvalue, _) = _psi_quadrature_multi(a, c, x, (0.0, 1.0))
    return FnValue(value, -a * dvalue, err)


def tricomi_psi_second(a: float, c: float, x: float) -> float:
    """psi''(a,c,x) = a (a+1) psi(a+2, c+2, x), by applying the derivative
    recurrence twice."""
    value, _ = _psi_value(a + 2.0, c + 2.0, x)
    return a * (a + 1.0) * value


def tricomi_Q_logderiv(L: float, eta: float, r: float) -> float:
    """Q_L'/Q_L (eta, r) = (L+1)/r - 1 + 2 psi'(a,c,2r) / psi(a,c,2r),
    a = L+eta+1, c = 2L+2.  Stable near r = 0 where the product form is not."""
    a = L + eta + 1.0
    c = 2.0 * L + 2.0
    if r <= 0:
        raise DomainError(f"tricomi_Q_logderiv requires r > 0, got {r}")
    if a <= 0:
        raise DomainError(f"tricomi_Q requires L + eta + 1 > 0, got {a}")
    x = 2.0 * r
    if x > PSI_ASYMPTOTIC_X:
        psi_v, _ = _psi_asymptotic(a, c, x)
        psi_d, _ = _psi_asymptotic(a + 1.0, c + 1.0, x)
    else:
        (psi_v, _), (psi_d, _) = _psi_quadrature_multi(a, c, x, (0.0, 1.0))
    return (L + 1.0) / r - 1.0 - 2.0 * a * psi_d / psi_v


def tricomi_Q(L: float, eta: float, r: float) -> FnValue:
    """Composite Q_L(eta, r) = r^(L+1) e^(-r) psi(L+eta+1, 2L+2, 2r)."""
    a = L + eta + 1.0
    c = 2.0 * L + 2.0
    if r <= 0:
        raise DomainError(f"tricomi_Q requires r > 0, got {r}")
    if a <= 0:
        raise DomainError(f"tricomi_Q requires L + eta + 1 > 0, got {a}")
    psi = tricomi_psi(a, c, 2.0 * r)
    value = r ** (L + 1.0) * math.exp(-r) * psi.value
    logderiv = (L + 1.0) / r - 1.0 + 2.0 * psi.derivative / psi.value
    rel = psi.abs_err / abs(psi.value) if psi.value != 0.0 else 0.0
    return FnValue(value, value * logderiv, abs(value) * (2.0 * rel + _EPS))


def tricomi_Q_second(L: float, eta: float, r: float) -> float:
    """Q_L'' via the log-derivative and its r-derivative (psi recurrences)."""
    a = L + eta + 1.0
    c = 2.0 * L + 2.0
    q = tricomi_Q(L, eta, r)
    psi_v, _ = _psi_value(a, c, 2.0 * r)
    psi_d = -a * _psi_value(a + 1.0, c + 1.0, 2.0 * r)[0]
    psi_dd = tricomi_psi_second(a, c, 2.0 * r)
    w = (L + 1.0) / r - 1.0 + 2.0 * psi_d / psi_v
    w_prime = -(L + 1.0) / r**2 + 4.0 * (psi_dd * psi_v - psi_d**2) / psi_v**2
    return q.value * (w * w + w_prime)


# ---------------------------------------------------------------------------
# Half-integer Bessel reference values
# ---------------------------------------------------------------------------

def bessel_halfint(nu: float, x: float):
    """(J_nu(x), K_nu(x)) for nu in {1/2, 3/2, 5/2, ...} from closed forms
    and the three-term order recurrences."""
    if x <= 0:
        raise DomainError(f"bessel_halfint requires x > 0, got {x}")
    two_nu = round(2.0 * nu)
    if abs(2.0 * nu - two_nu) > 1e-12 or two_nu < 1 or two_nu % 2 == 0:
        raise DomainError(f"bessel_halfint requires half-integer nu >= 1/2, got {nu}")
    steps = (two_nu - 1) // 2
    pref = math.sqrt(2.0 / (math.pi * x))
    j_prev = pref * math.cos(x)   # J_{-1/2}
    j_cur = pref * math.sin(x)    # J_{+1/2}
    k_half = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
    k_prev = k_half               # K_{-1/2} = K_{1/2}
    k_cur = k_half
    order = 0.5
    for _ in range(steps):
        j_prev, j_cur = j_cur, (2.0 * order / x) * j_cur - j_prev
        k_prev, k_cur = k_cur, k_prev + (2.0 * order / x) * k_cur
        order += 1.0
    return j_cur, k_cur
