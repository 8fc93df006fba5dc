"""Closed-form Dirichlet-to-Neumann data for three model geometries.

Flat annulus A_rho = {1 < |z| < rho}, flat disc of radius R, and the
hyperbolic cylinder of core-geodesic length ell, which is conformally
the annulus with modulus rho = e^{2 pi^2 / ell}.

Annulus conventions.  Fourier mode n couples the two boundary traces;
in the ordered basis (outer trace on |z| = rho, inner trace on |z| = 1)
the DN block is

    N_n = (n / sinh(n a)) [[e^{-a} cosh(n a),  -e^{-a}],
                           [-1,                 cosh(n a)]],   a = ln rho,

acting as the outward normal derivative (+d/dr on |z| = rho, -d/dr on
|z| = 1; the interior normal is the opposite pair).  The matrix is
written in the unweighted trace basis and is not symmetric; conjugating
by diag(sqrt(rho), 1), which reweights by boundary arc length, makes it
symmetric, and the eigenvalues (all that the zeta function consumes)
are unchanged by that similarity.

Eigenvalue rearrangement used for the zeta pipeline: with t = |n| a,

    lam_{n,+} = |n| (1 + eps_+),      eps_+ = e^{-a/2} (cosh(a/2) d1 + d2),
    lam_{n,-} = |n| e^{-a} (1 + eps_-), eps_- = e^{a/2} (cosh(a/2) d1 - d2),

    d1 = coth t - 1 = 2q/(1-q),  q = e^{-2t},
    d2 = S - sinh(a/2) = cosh^2(a/2) csch^2 t / (S + sinh(a/2)),
    S  = sqrt(sinh^2(a/2) coth^2 t + csch^2 t),

which is exact and keeps only relative rounding error, so the
corrections eps decay like e^{-2 a n} with a provable constant and the
product lam_+ lam_- = n^2 e^{-a} holds to machine precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleError
from .reports import DetReport
from .specfun import hyp2f1, log_gamma
from .zeta_reg import EigenSequence, log_det, required_tail_length

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AnnulusGeometry:
    """Flat annulus 1 < |z| < rho with its derived constants."""

    rho: float
    alpha: float = field(init=False)
    boundary_length: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.rho > 1.0 and math.isfinite(self.rho)):
            raise DomainError(f"annulus needs rho > 1, got {self.rho}")
        object.__setattr__(self, "alpha", math.log(self.rho))
        object.__setattr__(self, "boundary_length", _TWO_PI * (1.0 + self.rho))


@dataclass(frozen=True)
class CylinderGeometry:
    """Hyperbolic cylinder with closed geodesic of length ell."""

    ell: float
    bridge_rho: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.ell > 0.0 and math.isfinite(self.ell)):
            raise DomainError(f"cylinder needs ell > 0, got {self.ell}")
        exponent = 2.0 * math.pi**2 / self.ell
        if exponent > 700.0:
            raise DomainError(
                f"ell = {self.ell} too small: bridge modulus e^(2 pi^2 / ell) overflows"
            )
        object.__setattr__(self, "bridge_rho", math.exp(exponent))


@dataclass(frozen=True)
class DnBlock:
    """One Fourier-mode block of a DN map (2x2 coupled, or 1x1)."""

    mode: int
    entries: np.ndarray
    geometry: str


def annulus_block(geom: AnnulusGeometry, n: int) -> DnBlock:
    """DN block of mode n in the (outer, inner) trace basis."""
    a = geom.alpha
    if n == 0:
        # Kernel direction (1, 1); nonzero eigenvalue (1+rho)/(rho ln rho).
        entries = np.array([[1.0 / geom.rho, -1.0 / geom.rho], [-1.0, 1.0]]) / a
        return DnBlock(mode=0, entries=entries, geometry="annulus")
    t = abs(n) * a
    cosh_t = math.cosh(t) if t < 350.0 else math.inf
    if math.isinf(cosh_t):
        # coth(t) = 1 to machine precision; entries via exact limits.
        diag_outer = abs(n) * math.exp(-a)
        diag_inner = float(abs(n))
        off = 0.0
        entries = np.array([[diag_outer, -off * math.exp(-a)], [-off, diag_inner]])
        return DnBlock(mode=n, entries=entries, geometry="annulus")
    pref = abs(n) / math.sinh(t)
    entries = pref * np.array(
        [[math.exp(-a) * cosh_t, -math.exp(-a)], [-1.0, cosh_t]]
    )
    return DnBlock(mode=n, entries=entries, geometry="annulus")


def _eps_pair(a: float, n: int) -> tuple[float, float]:
    """Relative corrections (eps_+, eps_-) of mode |n| as derived above."""
    t = abs(n) * a
    q = math.exp(-2.0 * t)
    one_m_q = -math.expm1(-2.0 * t)
    d1 = 2.0 * q / one_m_q
    csch2 = 4.0 * q / (one_m_q * one_m_q)
    sh = math.sinh(0.5 * a)
    ch = math.cosh(0.5 * a)
    coth = 1.0 + d1
    s_val = math.sqrt(sh * sh * coth * coth + csch2)
    d2 = ch * ch * csch2 / (s_val + sh)
    eps_plus = math.exp(-0.5 * a) * (ch * d1 + d2)
    eps_minus = math.exp(0.5 * a) * (ch * d1 - d2)
    return eps_plus, eps_minus


def annulus_eigenvalues(geom: AnnulusGeometry, n: int) -> tuple[float, float]:
    """Eigenvalue pair (lam_+, lam_-) of the mode-n block, n != 0."""
    if n == 0:
        raise DomainError("mode 0 has eigenvalues 0 and (1+rho)/(rho ln rho); use annulus_block")
    eps_plus, eps_minus = _eps_pair(geom.alpha, n)
    m = float(abs(n))
    return m * (1.0 + eps_plus), m * math.exp(-geom.alpha) * (1.0 + eps_minus)


def _annulus_sequences(geom: AnnulusGeometry) -> tuple[EigenSequence, EigenSequence]:
    """EigenSequence pair (lam_+ family, lam_- family) with certificates."""
    a = geom.alpha
    rate = 2.0 * a
    q1 = math.exp(-rate)
    sh = math.sinh(0.5 * a)
    ch = math.cosh(0.5 * a)
    # |eps_{+-}(n)| e^{2 a n} <= e^{a/2} [2 ch/(1-q1) + 2 ch^2/(sh (1-q1)^2)]
    # termwise from d1 e^{2an} <= 2/(1-q1) and d2 e^{2an} <= 2 ch^2/(sh (1-q1)^2).
    bound = math.exp(0.5 * a) * (
        2.0 * ch / (1.0 - q1) + 2.0 * ch * ch / (sh * (1.0 - q1) ** 2)
    )
    n_tail = required_tail_length(bound, rate)
    eps_p = []
    eps_m = []
    for n in range(1, n_tail + 1):
        ep, em = _eps_pair(a, n)
        eps_p.append(ep)
        eps_m.append(em)
    head = (((1.0 + geom.rho) / (geom.rho * a), 1),)
    seq_plus = EigenSequence(
        power=1.0,
        prefactor=1.0,
        corrections=tuple(eps_p),
        decay_rate=rate,
        decay_bound=bound,
        head=head,
        tail_multiplicity=2,
    )
    seq_minus = EigenSequence(
        power=1.0,
        prefactor=math.exp(-a),
        corrections=tuple(eps_m),
        decay_rate=rate,
        decay_bound=bound,
        tail_multiplicity=2,
    )
    return seq_plus, seq_minus


def annulus_det_prime(geom: AnnulusGeometry) -> DetReport:
    """det' of the annulus DN map through the zeta-regularized pipeline.

    Closed form: det' N = (2 pi)^2 (1 + rho) / ln rho, so the ratio to
    the boundary length 2 pi (1 + rho) is 2 pi / ln rho.
    """
    seq_plus, seq_minus = _annulus_sequences(geom)
    res_p = log_det(seq_plus)
    res_m = log_det(seq_minus)
    log_value = res_p.log_value + res_m.log_value
    value = math.exp(log_value)
    trunc = res_p.truncation_error + res_m.truncation_error
    return DetReport(
        value=value,
        ratio=value / geom.boundary_length,
        method="zeta_pipeline",
        inputs={"rho": geom.rho},
        error_estimate=value * (trunc + 1e-13),
    )


def disc_det_prime(radius: float) -> DetReport:
    """det' of the disc DN map; spectrum {n / R, multiplicity 2}."""
    if not (radius > 0.0 and math.isfinite(radius)):
        raise DomainError(f"disc needs radius > 0, got {radius}")
    seq = EigenSequence(power=1.0, prefactor=1.0 / radius, tail_multiplicity=2)
    res = log_det(seq)
    value = math.exp(res.log_value)
    boundary = _TWO_PI * radius
    return DetReport(
        value=value,
        ratio=value / boundary,
        method="zeta_pipeline",
        inputs={"radius": radius},
        error_estimate=value * 1e-13,
    )


def cylinder_det_prime(geom: CylinderGeometry) -> DetReport:
    """det' of the hyperbolic-cylinder DN map (closed form).

    The boundary carries total conformal length 2 ell, and
    det' N / (2 ell) = ell / pi; the conformal bridge to the annulus of
    modulus e^{2 pi^2 / ell} reproduces the same ratio as 2 pi / ln rho.
    """
    ratio = geom.ell / math.pi
    boundary = 2.0 * geom.ell
    return DetReport(
        value=ratio * boundary,
        ratio=ratio,
        method="closed_form",
        inputs={"ell": geom.ell},
        error_estimate=ratio * boundary * 1e-15,
    )


def uniformizing_map(z: complex, ell: float) -> complex:
    """Conformal map from the upper half-plane model onto the bridge annulus.

    U(z) = exp(2 i pi log(z) / ell + 2 pi^2 / ell) satisfies
    U(e^ell z) = U(z) and maps {Im z > 0} onto 1 < |U| < e^{2 pi^2/ell}.
    """
    z = complex(z)
    if not (z.imag > 0.0):
        raise DomainError(f"uniformizing_map needs Im z > 0, got {z}")
    if not (ell > 0.0 and math.isfinite(ell)):
        raise DomainError(f"uniformizing_map needs ell > 0, got {ell}")
    if 2.0 * math.pi**2 / ell > 700.0:
        raise DomainError(f"ell = {ell} too small: annulus modulus overflows")
    return cmath.exp(2j * math.pi * cmath.log(z) / ell + 2.0 * math.pi**2 / ell)


def cylinder_scattering_mode0(lam: complex) -> complex:
    """Scattering value on constants: 2^{2 lam - 1} (Gamma(lam/2) / Gamma((1-lam)/2))^2.

    Returns 0 where Gamma((1-lam)/2) has a pole (lam = 1, 3, 5, ...),
    matching the kernel of the DN map on constants at lam = 1.  Raises
    PoleError where Gamma(lam/2) itself has a pole (lam = 0, -2, ...).
    """
    lam = complex(lam)
    try:
        lg_den = log_gamma((1.0 - lam) / 2.0)
    except PoleError:
        return 0.0
    lg_num = log_gamma(lam / 2.0)
    return cmath.exp(math.log(2.0) * (2.0 * lam - 1.0) + 2.0 * (lg_num.value - lg_den.value))


def _poisson_coefficient(lam: float) -> float:
    """Coefficient of the second radial solution branch.

    (Gamma(lam/2) / Gamma((1-lam)/2))^2 * Gamma(1/2-lam) / Gamma(lam-1/2);
    vanishes at lam = 1 through the Gamma((1-lam)/2) pole.
    """
    try:
        lg_den = log_gamma((1.0 - lam) / 2.0)
    except PoleError:
        return 0.0
    ratio_sq = 2.0 * (log_gamma(lam / 2.0).value - lg_den.value)
    swap = log_gamma(0.5 - lam).value - log_gamma(lam - 0.5).value
    return cmath.exp(ratio_sq + swap).real


def _poisson_mode0(lam: float, coef: float, r: float) -> float:
    sh = abs(math.sinh(r))
    z = -1.0 / (sh * sh)
    first = sh ** (lam - 1.0) * hyp2f1((1.0 - lam) / 2.0, 1.0 - lam / 2.0, 1.5 - lam, z).value
    if coef == 0.0:
        return first.real
    second = coef * sh ** (-lam) * hyp2f1(lam / 2.0, (lam + 1.0) / 2.0, lam + 0.5, z).value
    return (first + second).real


def cylinder_poisson_check(lam: float, r_grid) -> float:
    """Max ODE residual of the explicit mode-0 Poisson solution.

    Evaluates the two-branch hypergeometric expression u(r) on the grid
    and returns max |-u'' - tanh(r) u' - lam (1 - lam) u| with 5-point
    finite-difference derivatives at step 1e-3.  Certified contract:
    residual <= 1e-6 for lam in (0.5, 1.5) and grids with r >= 0.1.
    """
    lam = float(lam)
    if not (0.5 < lam < 1.5):
        raise DomainError(f"cylinder_poisson_check needs lam in (0.5, 1.5), got {lam}")
    r_grid = [float(r) for r in r_grid]
    if not r_grid:
        raise DomainError("empty r_grid")
    h = 1e-3
    if min(r_grid) - 2.0 * h <= 0.0:
        raise DomainError(f"grid touches r = 0: min r = {min(r_grid)}")
    coef = _poisson_coefficient(lam)
    worst = 0.0
    mu = lam * (1.0 - lam)
    for r in r_grid:
        u = [_poisson_mode0(lam, coef, r + k * h) for k in (-2, -1, 0, 1, 2)]
        d1 = (u[0] - 8.0 * u[1] + 8.0 * u[3] - u[4]) / (12.0 * h)
        d2 = (-u[0] + 16.0 * u[1] - 30.0 * u[2] + 16.0 * u[3] - u[4]) / (12.0 * h * h)
        resid = abs(-d2 - math.tanh(r) * d1 - mu * u[2])
        worst = max(worst, resid)
    return worst
