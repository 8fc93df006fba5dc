"""Double-precision special function kernel.

Provides principal-branch log Gamma, log Barnes G, the Riemann zeta
function and its s-derivative, the Gauss hypergeometric function 2F1,
and the boundary heat-coefficient constant eta.

All routines work in ordinary complex doubles with compensated
summation and return an :class:`EvalResult` carrying the value together
with a defensible absolute error estimate.  Branch convention:
principal logarithms throughout; on the negative real axis values are
the limits from the upper half plane.  Certified domains are listed per
function; outside them the routines raise rather than silently degrade.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BarnesZeroError, ConvergenceError, DomainError, PoleError

_EPS = 2.220446049250313e-16
_LN_2PI = math.log(2.0 * math.pi)

# Bernoulli numbers B_2, B_4, ..., B_32 as exact rationals rounded once.
_B2K = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
)


def _bernoulli(two_k: int) -> float:
    return _B2K[two_k // 2 - 1]


@dataclass(frozen=True)
class EvalResult:
    """Value of a special function plus an absolute error estimate."""

    value: complex
    abs_error_estimate: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.abs_error_estimate) and self.abs_error_estimate >= 0.0):
            raise ValueError("abs_error_estimate must be finite and nonnegative")


def _kadd(total: complex, comp: complex, term: complex) -> tuple[complex, complex]:
    # Kahan compensated add; keeps accumulated rounding near 2 eps overall.
    y = term - comp
    t = total + y
    comp = (t - total) - y
    return t, comp


def _check_finite(z: complex, name: str) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name}: nonfinite argument {z}")


def _near_nonpositive_int(z: complex, tol: float = 1e-12) -> int | None:
    k = round(z.real)
    if k <= 0 and abs(z - k) < tol:
        return k
    return None


_STIRLING_CUT = 10.0


def log_gamma(z: complex) -> EvalResult:
    """Principal-branch log Gamma.

    Uses the ascending recurrence until Re z >= 10, then the Stirling
    series with Bernoulli corrections.  Certified for |z| <= 60 away
    from the poles at 0, -1, -2, ...; real z < 0 gets the limit from
    the upper half plane.

    Raises PoleError within 1e-12 of a nonpositive integer.
    """
    z = complex(z)
    _check_finite(z, "log_gamma")
    if _near_nonpositive_int(z) is not None:
        raise PoleError(f"log_gamma: pole at z={z}")

    shift = 0j
    shift_c = 0j
    shift_abs = 0.0
    w = z
    while w.real < _STIRLING_CUT:
        lw = cmath.log(w)
        shift, shift_c = _kadd(shift, shift_c, lw)
        shift_abs += abs(lw)
        w += 1.0

    lw = cmath.log(w)
    main = (w - 0.5) * lw - w + 0.5 * _LN_2PI
    inv2 = 1.0 / (w * w)
    upow = 1.0 / w
    series = 0j
    trunc = 0.0
    for two_k in range(2, 24, 2):
        term = _bernoulli(two_k) / ((two_k - 1) * two_k) * upow
        series += term
        trunc = abs(term)
        if trunc < 1e-18:
            break
        upow *= inv2

    value = main + series - shift
    scale = abs(main) + abs(w) + shift_abs + 1.0
    return EvalResult(value, trunc + 2.0 * _EPS * scale)


_BARNES_CUT = 11.0


def log_barnes_g(z: complex) -> EvalResult:
    """Principal-branch log of the Barnes G function.

    Satisfies log G(z+1) = log Gamma(z) + log G(z) with log G(1) = 0.
    Computed by the descending recurrence until Re z >= 11, then the
    large-z asymptotic series whose constant term is zeta'(-1)
    (computed internally, not hardcoded).  Certified for |z| <= 40 away
    from the zeros of G at 0, -1, -2, ...; real z < 0 gets the limit
    from the upper half plane.

    Raises BarnesZeroError within 1e-12 of a nonpositive integer,
    where G vanishes and its log is undefined.
    """
    z = complex(z)
    _check_finite(z, "log_barnes_g")
    if _near_nonpositive_int(z) is not None:
        raise BarnesZeroError(f"log_barnes_g: G vanishes at z={z}")

    acc = 0j
    acc_c = 0j
    acc_err = 0.0
    acc_abs = 0.0
    w = z
    while w.real < _BARNES_CUT:
        lg = log_gamma(w)
        acc, acc_c = _kadd(acc, acc_c, lg.value)
        acc_err += lg.abs_error_estimate
        acc_abs += abs(lg.value)
        w += 1.0

    u = w - 1.0
    lu = cmath.log(u)
    main = (0.5 * u * u - 1.0 / 12.0) * lu - 0.75 * u * u + 0.5 * u * _LN_2PI
    main += _zeta_prime_at_minus1()
    inv2 = 1.0 / (u * u)
    upow = inv2
    series = 0j
    trunc = 0.0
    for two_k2 in range(4, 34, 2):
        k2 = two_k2 - 2  # 2k; term is B_{2k+2} / (2k (2k+2)) u^{-2k}
        term = _bernoulli(two_k2) / (k2 * (k2 + 2)) * upow
        series += term
        trunc = abs(term)
        if trunc < 1e-18:
            break
        upow *= inv2

    value = main + series - acc
    scale = abs(main) + acc_abs + 1.0
    return EvalResult(value, trunc + acc_err + 2.0 * _EPS * scale)


def _em_core(s: complex, n_direct: int, k_corr: int):
    """Euler-Maclaurin zeta and its s-derivative in one pass.

    Returns (zeta, dzeta, trunc_zeta, trunc_dzeta, vol_zeta, vol_dzeta)
    where the vol_* are sums of magnitudes used for rounding estimates.
    """
    big_n = n_direct
    ln_n_big = math.log(big_n)

    f = 0j
    fc = 0j
    g = 0j
    gc = 0j
    vf = 1.0  # n = 1 contributes 1 to zeta, 0 to the derivative
    vg = 0.0
    f, fc = _kadd(f, fc, 1.0 + 0j)
    for n in range(2, big_n):
        ln_n = math.log(n)
        p = cmath.exp(-s * ln_n)
        f, fc = _kadd(f, fc, p)
        g, gc = _kadd(g, gc, -ln_n * p)
        ap = abs(p)
        vf += ap
        vg += ln_n * ap

    sm1 = s - 1.0
    n_to_ms = cmath.exp(-s * ln_n_big)
    tail = big_n * n_to_ms / sm1
    f, fc = _kadd(f, fc, tail)
    f, fc = _kadd(f, fc, 0.5 * n_to_ms)
    vf += abs(tail) + 0.5 * abs(n_to_ms)
    d_tail = -ln_n_big * tail - tail / sm1
    g, gc = _kadd(g, gc, d_tail)
    g, gc = _kadd(g, gc, -0.5 * ln_n_big * n_to_ms)
    vg += abs(d_tail) + 0.5 * ln_n_big * abs(n_to_ms)

    # Bernoulli corrections with the rising product P(s) = s (s+1) ... and
    # its derivative accumulated by the product rule.
    inv_n2 = 1.0 / (big_n * big_n)
    npow = big_n * n_to_ms * inv_n2  # N^{1 - s - 2k} at k = 1
    p = s
    dp = 1.0 + 0j
    fact = 2.0  # (2k)! at k = 1
    for k in range(1, k_corr + 1):
        coef = _bernoulli(2 * k) / fact
        t_f = coef * p * npow
        t_g = coef * (dp - ln_n_big * p) * npow
        f, fc = _kadd(f, fc, t_f)
        g, gc = _kadd(g, gc, t_g)
        vf += abs(t_f)
        vg += abs(t_g)
        for j in (2 * k - 1, 2 * k):
            sj = s + j
            dp = dp * sj + p
            p = p * sj
        fact *= (2 * k + 1) * (2 * k + 2)
        npow *= inv_n2

    # First omitted term; the remainder vanishes with it at s in {0,-1,-2,...}.
    coef = _bernoulli(2 * (k_corr + 1)) / fact
    trunc_f = 2.0 * abs(coef * p * npow)
    trunc_g = 2.0 * abs(coef * (dp - ln_n_big * p) * npow)
    return f, g, trunc_f, trunc_g, vf, vg


def _em_params(n_terms: int | None) -> tuple[int, int]:
    if n_terms is None:
        return 20, 14
    big_n = max(8, int(n_terms))
    return big_n, (15 if big_n >= 48 else 14)


def riemann_zeta(s: complex, n_terms: int | None = None) -> EvalResult:
    """Riemann zeta by Euler-Maclaurin continuation.

    The error-estimate contract is certified for -1.1 <= Re s <= 20,
    |Im s| <= 6, |s - 1| >= 1e-12 at the default n_terms; the value
    stays accurate well outside that box.  The n_terms knob sets the
    direct-sum length (default 20) so callers can cross-check two
    internal precisions.
    """
    s = complex(s)
    _check_finite(s, "riemann_zeta")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("riemann_zeta: pole at s=1")
    big_n, k_corr = _em_params(n_terms)
    f, _, trunc_f, _, vf, _ = _em_core(s, big_n, k_corr)
    return EvalResult(f, trunc_f + 2.0 * _EPS * (vf + 1.0))


def zeta_derivative(s: complex, n_terms: int | None = None) -> EvalResult:
    """d/ds of the Riemann zeta function, same domain as riemann_zeta."""
    s = complex(s)
    _check_finite(s, "zeta_derivative")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta_derivative: pole at s=1")
    big_n, k_corr = _em_params(n_terms)
    _, g, _, trunc_g, _, vg = _em_core(s, big_n, k_corr)
    return EvalResult(g, trunc_g + 2.0 * _EPS * (vg + 1.0))


@lru_cache(maxsize=1)
def _zeta_prime_at_minus1() -> float:
    return zeta_derivative(-1.0).value.real


def eta_constant(n_terms: int | None = None) -> float:
    """The constant eta = 2 zeta'(-1) - 1/4 + (1/2) log(2 pi)."""
    zp = zeta_derivative(-1.0, n_terms=n_terms).value.real
    return 2.0 * zp - 0.25 + 0.5 * _LN_2PI


_MAX_2F1_TERMS = 200_000


def _is_exact_nonpositive_int(z: complex) -> bool:
    return z.imag == 0.0 and z.real == round(z.real) and z.real <= 0.0


def _gauss_series(a: complex, b: complex, c: complex, z: complex, n_stop: int | None = None):
    """Sum the Gauss series; returns (value, trunc_estimate, abs_volume)."""
    term = 1.0 + 0j
    total = 1.0 + 0j
    comp = 0j
    volume = 1.0
    ratio_abs = 0.0
    small_run = 0
    limit = _MAX_2F1_TERMS if n_stop is None else n_stop
    for n in range(limit):
        if a + n == 0 or b + n == 0:
            return total, 0.0, volume
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z
        term = term * ratio
        total, comp = _kadd(total, comp, term)
        volume += abs(term)
        ratio_abs = abs(ratio)
        if abs(term) <= 1e-17 * (1.0 + abs(total)):
            small_run += 1
            if small_run >= 2 and ratio_abs < 1.0:
                rho = min(0.97, ratio_abs)
                return total, abs(term) * rho / (1.0 - rho), volume
        else:
            small_run = 0
    if n_stop is not None:
        return total, 0.0, volume
    raise ConvergenceError("hyp2f1: series did not converge within the term budget")


def hyp2f1(a: complex, b: complex, c: complex, z: complex) -> EvalResult:
    """Gauss hypergeometric function 2F1(a, b; c; z).

    Covered domain: terminating cases (a or b an exact nonpositive
    integer) for any z; |z| <= 0.9 by the direct series; Re z <= 0 with
    |z| <= 1000 through the z/(z-1) transformation.  Raises PoleError
    near nonpositive integer c and DomainError outside the covered set.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    z = complex(z)
    for w, name in ((a, "a"), (b, "b"), (c, "c"), (z, "z")):
        _check_finite(w, f"hyp2f1 {name}")
    if _near_nonpositive_int(c) is not None:
        raise PoleError(f"hyp2f1: c={c} is at a nonpositive integer")

    if _is_exact_nonpositive_int(a) or _is_exact_nonpositive_int(b):
        m = int(-a.real) if _is_exact_nonpositive_int(a) else int(-b.real)
        if _is_exact_nonpositive_int(a) and _is_exact_nonpositive_int(b):
            m = min(int(-a.real), int(-b.real))
        value, _, volume = _gauss_series(a, b, c, z, n_stop=m)
        return EvalResult(value, 2.0 * _EPS * (volume + 1.0))

    if abs(z) <= 0.9:
        value, trunc, volume = _gauss_series(a, b, c, z)
        return EvalResult(value, trunc + 2.0 * _EPS * (volume + 1.0))

    if z.real <= 0.0 and abs(z) <= 1000.0:
        # 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)); |w| < 1 on Re z <= 0.
        if abs(b) < abs(a):
            a, b = b, a
        w = z / (z - 1.0)
        lg1z = cmath.log(1.0 - z)
        pref = cmath.exp(-a * lg1z)
        inner, trunc, volume = _gauss_series(a, c - b, c, w)
        value = pref * inner
        err = abs(pref) * (trunc + 2.0 * _EPS * (volume + 1.0))
        err += abs(value) * 2.0 * _EPS * (1.0 + abs(a * lg1z))
        return EvalResult(value, err)

    raise DomainError(f"hyp2f1: z={z} outside the covered domain")
