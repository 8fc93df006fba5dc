"""Ruelle and Selberg zeta functions as truncated Euler products.

For a length spectrum {(l_c, m_c)} of primitive oriented classes,

    R(lambda)  = prod_c (1 - e^{-lambda l_c})^{m_c},
    Z(lambda)  = prod_{k>=0} R(lambda + k),

and the boundary variant pairs a reflection-weighted interior product
with squared boundary factors on a step-2 ladder:

    R_b(lambda)  = prod_j (1 - e^{-lambda l_j})^2,
    R_g0(lambda) = prod_c (1 - (-1)^{n_c} e^{-lambda l_c})
                          (1 - e^{-(lambda+1) l_c}),
    Z_g0(lambda) = prod_{k>=0} R_b(lambda + 2k) R_g0(lambda + 2k).

Normalization note: Z_g0 is exactly the displayed product; some
references define the corresponding function as its square.

Everything is evaluated in log space with a stable complex log1p, only
spectrum entries inside the completeness window are used, and every
value carries a tail bound built from the counting model
N(l) <= C e^{delta l} beyond that window.  Evaluation outside the
half-plane Re(lambda) > delta_hint is refused rather than extrapolated:
continuation below the convergence abscissa is out of scope.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError
from .hyperbolic import LengthSpectrum

_FACTOR_FLOOR = 1e-16
_MAX_FACTORS = 200_000
_WINDOW_SLACK = 1e-9


@dataclass(frozen=True)
class ZetaValue:
    """Log of a zeta product plus an upper bound on what truncation cut."""

    log_value: complex
    tail_bound: float
    convergence_abscissa_used: float

    def __post_init__(self) -> None:
        lv = complex(self.log_value)
        object.__setattr__(self, "log_value", lv)
        if not (math.isfinite(lv.real) and math.isfinite(lv.imag)):
            raise DomainError(f"log_value must be finite, got {lv}")
        if not (self.tail_bound >= 0.0 and math.isfinite(self.tail_bound)):
            raise DomainError(f"tail_bound must be finite and >= 0, got {self.tail_bound}")
        if not math.isfinite(self.convergence_abscissa_used):
            raise DomainError("convergence_abscissa_used must be finite")


def _log1p_complex(u: complex) -> complex:
    """log(1 + u), accurate for small |u|; exactly real on the real line."""
    a, b = u.real, u.imag
    if b == 0.0:
        return complex(math.log1p(a), 0.0)
    return complex(0.5 * math.log1p(2.0 * a + a * a + b * b), math.atan2(b, 1.0 + a))


def _check_region(lam: complex, delta_hint: float) -> None:
    if not (
        isinstance(delta_hint, (int, float))
        and math.isfinite(delta_hint)
        and delta_hint >= 0.0
    ):
        raise DomainError(f"delta_hint must be a finite real >= 0, got {delta_hint}")
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise DomainError(f"lambda must be finite, got {lam}")
    if not lam.real > delta_hint:
        raise DomainError(
            f"Re lambda = {lam.real} is outside the convergence region "
            f"Re lambda > {delta_hint}"
        )


def _used_entries(spectrum: LengthSpectrum):
    window = spectrum.complete_up_to
    return [e for e in spectrum.entries if e.length <= window + _WINDOW_SLACK]


def _counting_tail(
    n_classes: float, window: float, s: float, delta: float, weight: float
) -> float:
    """Bound on the classes beyond `window` under N(l) <= C e^{delta l}.

    C is calibrated so the model majorizes the observed count at the
    window; each missing class contributes at most
    weight * e^{-s l} / (1 - e^{-s window}), and a factor 2 of slack
    absorbs the heuristic nature of the fit.
    """
    gap = s - delta
    x0 = math.exp(-s * window)
    c = max(1.0, float(n_classes)) * math.exp(-delta * window)
    return 2.0 * weight * c * (s / gap + 1.0) * math.exp(-gap * window) / (1.0 - x0)


def ruelle(spectrum: LengthSpectrum, lam: complex, delta_hint: float) -> ZetaValue:
    """log R(lambda) over the spectrum's completeness window."""
    lam = complex(lam)
    _check_region(lam, delta_hint)
    total = complex(0.0, 0.0)
    n_used = 0
    for entry in _used_entries(spectrum):
        w = cmath.exp(-lam * entry.length)
        total += entry.multiplicity * _log1p_complex(-w)
        n_used += entry.multiplicity
    tail = _counting_tail(
        n_used, spectrum.complete_up_to, lam.real, float(delta_hint), 1.0
    )
    return ZetaValue(
        log_value=total, tail_bound=tail, convergence_abscissa_used=float(delta_hint)
    )


def selberg(
    spectrum: LengthSpectrum,
    lam: complex,
    delta_hint: float,
    k_terms: int | None = None,
) -> ZetaValue:
    """log Z(lambda) = sum_k log R(lambda + k), truncated adaptively.

    The k ladder stops when m_total e^{-(Re lambda + k) l_min} drops
    below 1e-16 (or after k_terms factors when given); both the skipped
    factors and each factor's own counting tail feed the tail bound.
    """
    lam = complex(lam)
    _check_region(lam, delta_hint)
    if k_terms is not None and not (isinstance(k_terms, int) and k_terms >= 1):
        raise DomainError(f"k_terms must be a positive integer or None, got {k_terms}")
    used = _used_entries(spectrum)
    m_total = sum(e.multiplicity for e in used)
    l_min = min((e.length for e in used), default=math.inf)
    s = lam.real
    logs = complex(0.0, 0.0)
    tails = 0.0
    k = 0
    while True:
        if k_terms is not None:
            if k >= k_terms:
                break
        elif m_total == 0 or m_total * math.exp(-(s + k) * l_min) < _FACTOR_FLOOR:
            break
        if k >= _MAX_FACTORS:
            raise ConvergenceError(f"Selberg ladder did not truncate after {k} factors")
        factor = ruelle(spectrum, lam + k, delta_hint)
        logs += factor.log_value
        tails += factor.tail_bound
        k += 1
    if m_total:
        x = math.exp(-(s + k) * l_min)
        tails += 2.0 * m_total * x / -math.expm1(-l_min)
    window = spectrum.complete_up_to
    tails += _counting_tail(m_total, window, s + k, float(delta_hint), 1.0) / -math.expm1(
        -window
    )
    return ZetaValue(
        log_value=logs, tail_bound=tails, convergence_abscissa_used=float(delta_hint)
    )


def check_rz_identity(spectrum: LengthSpectrum, lam: complex, delta_hint: float) -> float:
    """Residual |log R(lambda) - (log Z(lambda) - log Z(lambda + 1))|.

    The ladder telescopes, so the residual stays below the summed tail
    bounds plus 1e-13 on any spectrum.
    """
    lam = complex(lam)
    r = ruelle(spectrum, lam, delta_hint)
    z_here = selberg(spectrum, lam, delta_hint)
    z_next = selberg(spectrum, lam + 1.0, delta_hint)
    return abs(r.log_value - (z_here.log_value - z_next.log_value))


def selberg_boundary(
    boundary_lengths,
    spectrum: LengthSpectrum,
    lam: complex,
    delta_hint: float,
) -> ZetaValue:
    """log Z_g0(lambda): squared boundary factors times the
    reflection-signed interior product, on the step-2 ladder.

    Every spectrum entry must carry a reflections count n_c; the sign
    of its first factor is -(-1)^{n_c}.
    """
    lam = complex(lam)
    _check_region(lam, delta_hint)
    lengths = [float(l) for l in boundary_lengths]
    if not all(l > 0.0 and math.isfinite(l) for l in lengths):
        raise DomainError(f"boundary lengths must be positive and finite, got {lengths}")
    for entry in spectrum.entries:
        if entry.reflections is None:
            raise DomainError(
                f"entry at length {entry.length} lacks a reflections count; "
                "the boundary zeta needs one on every entry"
            )
    used = _used_entries(spectrum)
    m_interior = sum(e.multiplicity for e in used)
    m_crit = 2 * len(lengths) + 2 * m_interior
    l_min = min(
        (l for l in lengths + [e.length for e in used]), default=math.inf
    )
    s = lam.real
    logs = complex(0.0, 0.0)
    tails = 0.0
    k = 0
    while True:
        if m_crit == 0 or m_crit * math.exp(-(s + 2 * k) * l_min) < _FACTOR_FLOOR:
            break
        if k >= _MAX_FACTORS:
            raise ConvergenceError(f"boundary ladder did not truncate after {k} factors")
        shift = lam + 2.0 * k
        for l in lengths:
            logs += 2.0 * _log1p_complex(-cmath.exp(-shift * l))
        for e in used:
            sign = -1.0 if e.reflections % 2 == 0 else 1.0
            first = _log1p_complex(sign * cmath.exp(-shift * e.length))
            second = _log1p_complex(-cmath.exp(-(shift + 1.0) * e.length))
            logs += e.multiplicity * (first + second)
        tails += _counting_tail(
            m_interior, spectrum.complete_up_to, s + 2 * k, float(delta_hint), 2.0
        )
        k += 1
    if m_crit:
        x = math.exp(-(s + 2 * k) * l_min)
        tails += 2.0 * m_crit * x / -math.expm1(-2.0 * l_min)
    tails += _counting_tail(
        m_interior, spectrum.complete_up_to, s + 2 * k, float(delta_hint), 2.0
    ) / -math.expm1(-2.0 * spectrum.complete_up_to)
    return ZetaValue(
        log_value=logs, tail_bound=tails, convergence_abscissa_used=float(delta_hint)
    )


def ruelle_limit_order(spectrum: LengthSpectrum, ell: float) -> float:
    """lim_{mu -> 0} R(mu) / mu^2 for a cyclic (single-geodesic) spectrum.

    Richardson (Neville) extrapolation of (expm1(-mu ell) / mu)^2 at the
    nodes mu = 1e-2 .. 1e-5; the raw column converges at order mu and
    the extrapolant reaches the limit ell^2 to 1e-10 relative.
    Non-cyclic spectra are refused: their limit point sits below the
    convergence abscissa and would need analytic continuation.
    """
    if not (isinstance(ell, (int, float)) and ell > 0.0 and math.isfinite(ell)):
        raise DomainError(f"need a positive finite length, got {ell}")
    ell = float(ell)
    total_mult = sum(e.multiplicity for e in spectrum.entries)
    if total_mult != 2 or any(
        abs(e.length - ell) > 1e-9 * (1.0 + ell) for e in spectrum.entries
    ):
        raise DomainError(
            "limit order is defined only for the cyclic spectrum "
            "{(ell, 1) x 2}; non-elementary spectra are refused"
        )

    nodes = (1e-2, 1e-3, 1e-4, 1e-5)
    table = [(math.expm1(-mu * ell) / mu) ** 2 for mu in nodes]
    for level in range(1, len(nodes)):
        for i in range(len(nodes) - level):
            num = nodes[i] * table[i + 1] - nodes[i + level] * table[i]
            table[i] = num / (nodes[i] - nodes[i + level])
    return table[0]
