"""Zeta-regularized determinants of eigenvalue sequences.

Implements the regularization lemma for spectra of the form

    u_n = c * n^k * (1 + eps_n),   |eps_n| <= C e^{-a n},

with finitely many exceptional head eigenvalues carried separately.
The spectral zeta function zeta_u(s) = sum_n m u_n^{-s} continues
holomorphically past s = 0 and

    zeta_u(0)    = m * zeta(0) + (number of head eigenvalues),
    zeta_u'(0)   = m * [ k zeta'(0) - ln(c) zeta(0) - sum_n ln(1+eps_n) ]
                   - sum_head mult * ln(lambda),

so log det = -zeta_u'(0).  Prefactor derivation: with u_n = c v_n and
v_n = n^k (1+eps_n), zeta_u(s) = c^{-s} zeta_v(s), hence
zeta_u'(0) = -ln(c) zeta_v(0) + zeta_v'(0); the c = 1 case is the
classical statement.

Zero modes never enter a sequence: all head eigenvalues are strictly
positive, matching the det' convention where the kernel is removed
before regularization.  Bounded sequences (k = 0) are unsupported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidSequenceError
from .specfun import riemann_zeta, zeta_derivative

# Slack for eigenvalues computed in floating point: a certificate
# |eps_n| <= C e^{-a n} proven in exact arithmetic may be violated by a
# few ulps once eps_n is formed in doubles.
_NOISE_ALLOWANCE = 8.0 * 2.0**-52


def required_tail_length(bound_c: float, decay_a: float, tol: float = 1e-14) -> int:
    """Smallest N with C e^{-a N} / (1 - e^{-a}) < tol (at least 1)."""
    if not (decay_a > 0.0 and math.isfinite(decay_a)):
        raise InvalidSequenceError(f"decay rate must be positive, got {decay_a}")
    if bound_c < 0.0 or not math.isfinite(bound_c):
        raise InvalidSequenceError(f"decay bound must be finite and >= 0, got {bound_c}")
    if bound_c == 0.0:
        return 1
    n = (math.log(bound_c) - math.log(tol * -math.expm1(-decay_a))) / decay_a
    return max(1, math.ceil(n + 1e-12))


@dataclass(frozen=True)
class EigenSequence:
    """Eigenvalue family u_n = prefactor * n^power * (1 + corrections[n-1]).

    corrections lists eps_n for n = 1..N_tail and must satisfy the
    declared bound |eps_n| <= decay_bound * exp(-decay_rate * n); the
    whole family carries a uniform tail_multiplicity.  head holds
    finitely many exceptional (eigenvalue, multiplicity) pairs that are
    regularized separately.
    """

    power: float
    prefactor: float
    corrections: tuple[float, ...] = ()
    decay_rate: float = 1.0
    decay_bound: float = 0.0
    head: tuple[tuple[float, int], ...] = ()
    tail_multiplicity: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "corrections", tuple(float(e) for e in self.corrections))
        object.__setattr__(
            self, "head", tuple((float(lam), int(m)) for lam, m in self.head)
        )
        if self.power == 0.0:
            raise DomainError("power k = 0 (bounded sequences) is unsupported")
        if not (self.power > 0.0 and math.isfinite(self.power)):
            raise InvalidSequenceError(f"power must be positive, got {self.power}")
        if not (self.prefactor > 0.0 and math.isfinite(self.prefactor)):
            raise InvalidSequenceError(f"prefactor must be positive, got {self.prefactor}")
        if not (self.decay_rate > 0.0 and math.isfinite(self.decay_rate)):
            raise InvalidSequenceError(f"decay rate must be positive, got {self.decay_rate}")
        if self.decay_bound < 0.0 or not math.isfinite(self.decay_bound):
            raise InvalidSequenceError(
                f"decay bound must be finite and >= 0, got {self.decay_bound}"
            )
        if not (isinstance(self.tail_multiplicity, int) and self.tail_multiplicity >= 1):
            raise InvalidSequenceError(
                f"tail multiplicity must be a positive integer, got {self.tail_multiplicity}"
            )
        for lam, m in self.head:
            if not (lam > 0.0 and math.isfinite(lam)):
                raise InvalidSequenceError(
                    f"head eigenvalues must be positive (zero modes excluded), got {lam}"
                )
            if m < 1:
                raise InvalidSequenceError(f"head multiplicity must be positive, got {m}")
        for i, eps in enumerate(self.corrections):
            n = i + 1
            if not math.isfinite(eps) or 1.0 + eps <= 0.0:
                raise InvalidSequenceError(f"1 + eps_{n} must be positive, got eps={eps}")
            cap = self.decay_bound * math.exp(-self.decay_rate * n)
            cap += _NOISE_ALLOWANCE * (1.0 + self.decay_bound)
            if abs(eps) > cap:
                raise InvalidSequenceError(
                    f"eps_{n} = {eps} violates declared bound {cap}"
                )


@dataclass(frozen=True)
class RegularizedDet:
    """log det' of an EigenSequence with its zeta(0) and truncation bound."""

    log_value: float
    zeta_at_zero: float
    truncation_error: float

    def __post_init__(self) -> None:
        if self.truncation_error < 0.0:
            raise ValueError("truncation_error must be nonnegative")


def _geometric_tail(seq: EigenSequence) -> float:
    n_tail = len(seq.corrections)
    first = seq.decay_bound * math.exp(-seq.decay_rate * (n_tail + 1))
    return first / -math.expm1(-seq.decay_rate)


def zeta_at_zero(seq: EigenSequence) -> float:
    """zeta_u(0): tail_multiplicity * zeta(0) plus the head count."""
    z0 = riemann_zeta(0.0).value.real
    return seq.tail_multiplicity * z0 + sum(m for _, m in seq.head)


def log_det(seq: EigenSequence) -> RegularizedDet:
    """Regularized log determinant -zeta_u'(0) of the sequence."""
    z0 = riemann_zeta(0.0).value.real
    zp0 = zeta_derivative(0.0).value.real
    log1p_sum = 0.0
    comp = 0.0
    for eps in seq.corrections:
        term = math.log1p(eps)
        y = term - comp
        t = log1p_sum + y
        comp = (t - log1p_sum) - y
        log1p_sum = t
    tail_part = -seq.power * zp0 + math.log(seq.prefactor) * z0 + log1p_sum
    head_part = sum(m * math.log(lam) for lam, m in seq.head)
    value = seq.tail_multiplicity * tail_part + head_part

    first_missing = seq.decay_bound * math.exp(-seq.decay_rate * (len(seq.corrections) + 1))
    if first_missing > 0.5:
        raise DomainError(
            "correction list too short for a certified truncation bound: "
            f"C e^(-a (N+1)) = {first_missing} >= 1/2"
        )
    trunc = seq.tail_multiplicity * _geometric_tail(seq) / (1.0 - first_missing)
    return RegularizedDet(value, zeta_at_zero(seq), trunc)


def combine(u: EigenSequence, v: EigenSequence) -> EigenSequence:
    """Termwise product sequence w_n = u_n v_n; heads concatenate.

    The product is again of the regularizable type with k_w = k_u + k_v,
    c_w = c_u c_v and (1 + eps_w) = (1 + eps_u)(1 + eps_v), so log_det
    is additive up to the truncation bounds.
    """
    if u.tail_multiplicity != v.tail_multiplicity:
        raise InvalidSequenceError(
            "combine requires equal tail multiplicities, got "
            f"{u.tail_multiplicity} and {v.tail_multiplicity}"
        )
    # log_det treats corrections beyond each list as zero, so the product
    # list extends to the longer length with the shorter side zero-padded;
    # that keeps log_det(combine(u, v)) = log_det(u) + log_det(v) exact.
    n_keep = max(len(u.corrections), len(v.corrections))
    ecu = u.corrections + (0.0,) * (n_keep - len(u.corrections))
    ecv = v.corrections + (0.0,) * (n_keep - len(v.corrections))
    eps_w = tuple(eu + ev + eu * ev for eu, ev in zip(ecu, ecv))
    return EigenSequence(
        power=u.power + v.power,
        prefactor=u.prefactor * v.prefactor,
        corrections=eps_w,
        decay_rate=min(u.decay_rate, v.decay_rate),
        decay_bound=u.decay_bound + v.decay_bound + u.decay_bound * v.decay_bound,
        head=u.head + v.head,
        tail_multiplicity=u.tail_multiplicity,
    )


def scale(seq: EigenSequence, t: float) -> EigenSequence:
    """Multiply every eigenvalue by t > 0 (prefactor and head scale)."""
    if not (t > 0.0 and math.isfinite(t)):
        raise InvalidSequenceError(f"scale factor must be positive, got {t}")
    return EigenSequence(
        power=seq.power,
        prefactor=t * seq.prefactor,
        corrections=seq.corrections,
        decay_rate=seq.decay_rate,
        decay_bound=seq.decay_bound,
        head=tuple((t * lam, m) for lam, m in seq.head),
        tail_multiplicity=seq.tail_multiplicity,
    )
