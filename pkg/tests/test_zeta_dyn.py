"""Tests for the Ruelle and Selberg zeta products."""

import cmath
import math

import numpy as np
import pytest

from dnzeta.errors import DomainError
from dnzeta.hyperbolic import (
    GroupPresentation,
    LengthSpectrum,
    MobiusTransform,
    SpectrumEntry,
    enumerate_primitive_classes,
)
from dnzeta.zeta_dyn import (
    ZetaValue,
    check_rz_identity,
    ruelle,
    ruelle_limit_order,
    selberg,
    selberg_boundary,
)


def _dilation(t):
    return MobiusTransform(math.exp(t / 2), 0.0, 0.0, math.exp(-t / 2))


def _schottky_pair(t1=2.0, t2=2.4, p=-3.0, q=3.0):
    g1 = _dilation(t1)
    conj = np.array([[q, p], [1.0, 1.0]]) / math.sqrt(q - p)
    m = conj @ np.diag([math.exp(t2 / 2), math.exp(-t2 / 2)]) @ np.linalg.inv(conj)
    g2 = MobiusTransform(m[0, 0], m[0, 1], m[1, 0], m[1, 1])
    return GroupPresentation(generators=(g1, g2))


def _cyclic_spectrum(ell, window=None):
    window = 10.0 * ell if window is None else window
    return LengthSpectrum(
        entries=(SpectrumEntry(length=ell, multiplicity=2),),
        cutoff=window,
        complete_up_to=window,
    )


def _empty_spectrum(window=6.0):
    return LengthSpectrum(entries=(), cutoff=window, complete_up_to=window)


DELTA_PAIR = 0.55


def test_zetavalue_rejects_negative_tail():
    with pytest.raises(DomainError):
        ZetaValue(log_value=0.0, tail_bound=-1e-3, convergence_abscissa_used=0.5)


def test_zetavalue_rejects_nonfinite_log():
    with pytest.raises(DomainError):
        ZetaValue(log_value=complex(math.inf, 0.0), tail_bound=0.0, convergence_abscissa_used=0.0)


def test_ruelle_empty_spectrum_is_one():
    val = ruelle(_empty_spectrum(), 2.0, 0.0)
    assert val.log_value == 0.0
    assert val.log_value.imag == 0.0
    assert val.tail_bound >= 0.0
    assert math.isfinite(val.tail_bound)


def test_ruelle_refuses_outside_convergence_region():
    spec = _cyclic_spectrum(2.0)
    with pytest.raises(DomainError):
        ruelle(spec, 0.4, 0.5)
    with pytest.raises(DomainError):
        ruelle(spec, 0.5, 0.5)
    with pytest.raises(DomainError):
        ruelle(spec, complex(0.3, 5.0), 0.5)


def test_ruelle_rejects_bad_hint_and_lambda():
    spec = _cyclic_spectrum(2.0)
    with pytest.raises(DomainError):
        ruelle(spec, 2.0, -0.2)
    with pytest.raises(DomainError):
        ruelle(spec, 2.0, math.nan)
    with pytest.raises(DomainError):
        ruelle(spec, complex(math.inf, 0.0), 0.0)


@pytest.mark.parametrize("lam", [1.0, 2.5, 0.31])
def test_ruelle_cyclic_closed_form_real(lam):
    # Independent expression: R(lam) = (1 - e^{-lam ell})^2.
    ell = 2.0
    val = ruelle(_cyclic_spectrum(ell), lam, 0.0)
    expected = 2.0 * math.log(1.0 - math.exp(-lam * ell))
    assert val.log_value.real == pytest.approx(expected, abs=1e-14)
    assert val.log_value.imag == 0.0


def test_ruelle_cyclic_closed_form_complex():
    ell = 1.3
    lam = complex(0.8, 2.1)
    val = ruelle(_cyclic_spectrum(ell), lam, 0.0)
    expected = 2.0 * cmath.log(1.0 - cmath.exp(-lam * ell))
    assert abs(val.log_value - expected) <= 1e-14 * (1.0 + abs(expected))


def test_ruelle_value_matches_product_form():
    ell = 2.0
    lam = 1.7
    val = ruelle(_cyclic_spectrum(ell), lam, 0.0)
    assert math.exp(val.log_value.real) == pytest.approx(
        (1.0 - math.exp(-lam * ell)) ** 2, rel=1e-14
    )


def test_ruelle_small_factor_no_cancellation():
    # At lam*ell = 30 the factor is 1 - w with w ~ 9e-14; the log must
    # track the series -w - w^2/2 to full relative precision.
    ell = 2.0
    lam = 15.0
    w = math.exp(-lam * ell)
    val = ruelle(_cyclic_spectrum(ell), lam, 0.0)
    series = 2.0 * (-w - 0.5 * w * w)
    assert val.log_value.real == pytest.approx(series, rel=1e-13)


def test_ruelle_ignores_entries_beyond_window():
    inside = SpectrumEntry(length=2.0, multiplicity=2)
    beyond = SpectrumEntry(length=9.0, multiplicity=4)
    spec = LengthSpectrum(entries=(inside, beyond), cutoff=12.0, complete_up_to=5.0)
    val = ruelle(spec, 2.0, 0.0)
    only = ruelle(_cyclic_spectrum(2.0, window=5.0), 2.0, 0.0)
    assert val.log_value == only.log_value


def test_ruelle_positivity_real_lambda():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 8.0)
    for lam in (1.0, 1.5, 2.0, 3.0):
        val = ruelle(spec, lam, DELTA_PAIR)
        assert val.log_value.imag == 0.0
        r = math.exp(val.log_value.real)
        assert 0.0 < r < 1.0


def test_ruelle_truncation_monotone_within_tail():
    # Deepening the spectrum moves log R by less than the advertised tail.
    grp = _schottky_pair()
    spec8 = enumerate_primitive_classes(grp, 8.0)
    spec10 = enumerate_primitive_classes(grp, 10.0)
    spec12 = enumerate_primitive_classes(grp, 12.0)
    for lam in (1.5, 2.0, 3.0):
        v8 = ruelle(spec8, lam, DELTA_PAIR)
        v10 = ruelle(spec10, lam, DELTA_PAIR)
        v12 = ruelle(spec12, lam, DELTA_PAIR)
        assert abs(v10.log_value - v8.log_value) <= v8.tail_bound
        assert abs(v12.log_value - v10.log_value) <= v10.tail_bound
        assert v10.tail_bound < v8.tail_bound


def test_ruelle_two_cutoff_stability_budget():
    import time

    grp = _schottky_pair()
    start = time.monotonic()
    spec = enumerate_primitive_classes(grp, 12.0)
    for lam in (1.5, 2.0, 3.0):
        val = ruelle(spec, lam, DELTA_PAIR)
        assert math.isfinite(val.log_value.real)
    assert time.monotonic() - start < 30.0


def test_selberg_cyclic_matches_direct_ladder():
    ell = 2.0
    for lam in (1.5, 1.0, 2.2):
        val = selberg(_cyclic_spectrum(ell), lam, 0.0)
        direct = 0.0
        k = 0
        while True:
            term = 2.0 * math.log1p(-math.exp(-(lam + k) * ell))
            if abs(term) < 1e-18:
                break
            direct += term
            k += 1
        assert val.log_value.real == pytest.approx(direct, abs=1e-13)
        assert val.log_value.imag == 0.0


def test_selberg_cyclic_complex_ladder():
    ell = 1.7
    lam = complex(1.2, 0.4)
    val = selberg(_cyclic_spectrum(ell), lam, 0.0)
    direct = complex(0.0, 0.0)
    for k in range(80):
        direct += 2.0 * cmath.log(1.0 - cmath.exp(-(lam + k) * ell))
    assert abs(val.log_value - direct) <= 1e-13


def test_selberg_k_terms_one_is_ruelle():
    spec = _cyclic_spectrum(2.0)
    z = selberg(spec, 1.5, 0.0, k_terms=1)
    r = ruelle(spec, 1.5, 0.0)
    assert z.log_value == r.log_value
    assert z.tail_bound >= r.tail_bound


@pytest.mark.parametrize("bad", [0, -2, 1.5])
def test_selberg_rejects_bad_k_terms(bad):
    with pytest.raises(DomainError):
        selberg(_cyclic_spectrum(2.0), 1.5, 0.0, k_terms=bad)


def test_selberg_positivity_real_lambda():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 10.0)
    for lam in (1.0, 2.0, 3.5):
        val = selberg(spec, lam, DELTA_PAIR)
        assert val.log_value.imag == 0.0
        assert math.exp(val.log_value.real) > 0.0


def test_selberg_far_right_is_one():
    val = selberg(_cyclic_spectrum(2.0), 50.0, 0.0)
    assert val.log_value == 0.0
    assert val.tail_bound < 1e-30


def test_selberg_telescoping_example():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 10.0)
    r = ruelle(spec, 3.0, DELTA_PAIR)
    z3 = selberg(spec, 3.0, DELTA_PAIR)
    z4 = selberg(spec, 4.0, DELTA_PAIR)
    gap = abs(z3.log_value - r.log_value - z4.log_value)
    assert gap <= r.tail_bound + z3.tail_bound + z4.tail_bound


def test_rz_identity_cyclic_tight():
    spec = _cyclic_spectrum(2.0)
    assert check_rz_identity(spec, 1.0, 0.0) <= 1e-14


def test_rz_identity_empty_is_zero():
    assert check_rz_identity(_empty_spectrum(), 2.0, 0.0) == 0.0


def test_rz_identity_schottky_within_bounds():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 10.0)
    for lam in (1.5, 2.0, 3.0):
        resid = check_rz_identity(spec, lam, DELTA_PAIR)
        r = ruelle(spec, lam, DELTA_PAIR)
        z1 = selberg(spec, lam, DELTA_PAIR)
        z2 = selberg(spec, lam + 1.0, DELTA_PAIR)
        assert resid <= r.tail_bound + z1.tail_bound + z2.tail_bound + 1e-13


def test_rz_identity_random_lambdas():
    spec = _cyclic_spectrum(1.4)
    rng = np.random.default_rng(20260818)
    for _ in range(25):
        lam = complex(0.6 + 3.0 * rng.random(), 2.0 * rng.random() - 1.0)
        resid = check_rz_identity(spec, lam, 0.0)
        r = ruelle(spec, lam, 0.0)
        z1 = selberg(spec, lam, 0.0)
        z2 = selberg(spec, lam + 1.0, 0.0)
        assert resid <= r.tail_bound + z1.tail_bound + z2.tail_bound + 1e-13


def test_boundary_zeta_boundary_only_closed_form():
    # One boundary geodesic, no interior classes:
    # Z_g0(lam) = prod_k (1 - e^{-(lam+2k) l})^2.
    lb = 1.5
    lam = 1.25
    val = selberg_boundary([lb], _empty_spectrum(), lam, 0.0)
    direct = 0.0
    for k in range(400):
        direct += 2.0 * math.log1p(-math.exp(-(lam + 2.0 * k) * lb))
    assert val.log_value.real == pytest.approx(direct, abs=1e-13)
    assert val.log_value.imag == 0.0


def test_boundary_zeta_odd_reflection_sign():
    # Odd reflection count flips the first interior factor to 1 + e^{-lam l}.
    ell = 2.0
    lam = 1.4
    spec = LengthSpectrum(
        entries=(SpectrumEntry(length=ell, multiplicity=1, reflections=1),),
        cutoff=6.0,
        complete_up_to=6.0,
    )
    val = selberg_boundary([], spec, lam, 0.0)
    direct = 0.0
    for k in range(300):
        shift = lam + 2.0 * k
        direct += math.log1p(math.exp(-shift * ell))
        direct += math.log1p(-math.exp(-(shift + 1.0) * ell))
    assert val.log_value.real == pytest.approx(direct, abs=1e-13)


def test_boundary_zeta_even_reflection_sign():
    ell = 1.8
    lam = 1.1
    spec = LengthSpectrum(
        entries=(SpectrumEntry(length=ell, multiplicity=1, reflections=2),),
        cutoff=6.0,
        complete_up_to=6.0,
    )
    val = selberg_boundary([], spec, lam, 0.0)
    direct = 0.0
    for k in range(300):
        shift = lam + 2.0 * k
        direct += math.log1p(-math.exp(-shift * ell))
        direct += math.log1p(-math.exp(-(shift + 1.0) * ell))
    assert val.log_value.real == pytest.approx(direct, abs=1e-13)


def test_boundary_zeta_synthetic_oracle():
    # Mixed synthetic spectrum against a direct product evaluation.
    boundary = [1.0, 1.7]
    spec = LengthSpectrum(
        entries=(
            SpectrumEntry(length=1.2, multiplicity=1, reflections=2),
            SpectrumEntry(length=2.3, multiplicity=2, reflections=1),
            SpectrumEntry(length=3.1, multiplicity=1, reflections=0),
        ),
        cutoff=5.0,
        complete_up_to=5.0,
    )
    for lam in (1.3, 2.0, complex(1.6, 0.8)):
        val = selberg_boundary(boundary, spec, lam, 0.0)
        direct = complex(0.0, 0.0)
        for k in range(400):
            shift = lam + 2.0 * k
            for lb in boundary:
                direct += 2.0 * cmath.log(1.0 - cmath.exp(-shift * lb))
            for e in spec.entries:
                sign = -1.0 if e.reflections % 2 == 0 else 1.0
                direct += e.multiplicity * cmath.log(
                    1.0 + sign * cmath.exp(-shift * e.length)
                )
                direct += e.multiplicity * cmath.log(
                    1.0 - cmath.exp(-(shift + 1.0) * e.length)
                )
        assert abs(val.log_value - direct) <= 1e-13


def test_boundary_zeta_requires_reflections():
    spec = LengthSpectrum(
        entries=(SpectrumEntry(length=2.0, multiplicity=2),),
        cutoff=6.0,
        complete_up_to=6.0,
    )
    with pytest.raises(DomainError):
        selberg_boundary([1.0], spec, 1.5, 0.0)


def test_boundary_zeta_rejects_bad_boundary_lengths():
    spec = _empty_spectrum()
    with pytest.raises(DomainError):
        selberg_boundary([-1.0], spec, 1.5, 0.0)
    with pytest.raises(DomainError):
        selberg_boundary([math.inf], spec, 1.5, 0.0)


def test_boundary_zeta_region_check():
    with pytest.raises(DomainError):
        selberg_boundary([1.0], _empty_spectrum(), 0.3, 0.5)


def test_limit_order_unit_length():
    spec = _cyclic_spectrum(1.0)
    assert ruelle_limit_order(spec, 1.0) == pytest.approx(1.0, rel=1e-10)


def test_limit_order_longer_geodesic():
    spec = _cyclic_spectrum(2.5)
    assert ruelle_limit_order(spec, 2.5) == pytest.approx(6.25, rel=1e-10)


def test_limit_order_accepts_split_multiplicity():
    ell = 1.6
    spec = LengthSpectrum(
        entries=(
            SpectrumEntry(length=ell, multiplicity=1),
            SpectrumEntry(length=ell, multiplicity=1),
        ),
        cutoff=8.0,
        complete_up_to=8.0,
    )
    assert ruelle_limit_order(spec, ell) == pytest.approx(ell**2, rel=1e-10)


def test_limit_order_extrapolation_is_order_mu():
    # The raw column converges at first order in mu.
    ell = 2.5
    errors = []
    for mu in (1e-2, 1e-3, 1e-4):
        f = (math.expm1(-mu * ell) / mu) ** 2
        errors.append(abs(f - ell**2) / ell**2)
    assert errors[1] <= errors[0] / 5.0
    assert errors[2] <= errors[1] / 5.0
    # Leading error term is mu * ell exactly.
    assert errors[0] == pytest.approx(1e-2 * ell, rel=0.15)


def test_limit_order_refuses_non_cyclic():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 8.0)
    with pytest.raises(DomainError):
        ruelle_limit_order(spec, 2.0)


def test_limit_order_refuses_mismatched_length():
    spec = _cyclic_spectrum(2.0)
    with pytest.raises(DomainError):
        ruelle_limit_order(spec, 2.5)
    with pytest.raises(DomainError):
        ruelle_limit_order(spec, -1.0)


def test_zeta_values_deterministic():
    grp = _schottky_pair()
    spec = enumerate_primitive_classes(grp, 10.0)
    a = ruelle(spec, 2.0, DELTA_PAIR)
    b = ruelle(spec, 2.0, DELTA_PAIR)
    assert a == b
    za = selberg(spec, 2.0, DELTA_PAIR)
    zb = selberg(spec, 2.0, DELTA_PAIR)
    assert za == zb
