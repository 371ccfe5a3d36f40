"""Zeta/gamma kernel: frozen independent oracles, symmetry and consistency
properties, pole and range guards.

Oracle values were computed with mpmath at 50 significant digits and frozen
here as shortest-round-trip doubles; comparisons allow a few ulps of
Euler-Maclaurin accumulation error.
"""

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrl.errors import (
    DomainError,
    OutOfRange,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    PrecisionLoss,
)
from mrl.kernel import (
    DOUBLE,
    EXTENDED,
    IM_MAX,
    bernoulli,
    gamma_ratio,
    log_gamma,
    trivial_zero_data,
    zeta,
    zeta_and_deriv,
    zeta_deriv,
)

# mpmath (dps=50) reference values.
ZETA_REAL = {
    2.0: 1.6449340668482264,
    3.0: 1.2020569031595942,
    0.5: -1.4603545088095868,
    -0.5: -0.20788622497735457,
    -1.0: -0.08333333333333333,
    0.0: -0.5,
    1.5: 2.612375348685488,
    10.0: 1.000994575127818,
    -2.5: 0.008516928777850331,
    -7.5: 0.00326903957260022,
}

ZETA_DERIV_REAL = {
    2.0: -0.9375482543158438,
    0.0: -0.9189385332046728,
    0.5: -3.9226461392091516,
    -0.5: -0.3608543395999476,
    3.0: -0.19812624288563685,
}

ZETA_COMPLEX = {
    complex(0.5, 14.0): complex(0.02224114260999359, -0.10325812326645006),
    complex(2.0, 30.0): complex(0.8258798243158264, -0.2690338274973063),
    complex(-1.5, 8.0): complex(1.3604491673188428, 1.1944267168565554),
    complex(0.75, 100.0): complex(2.0029919952553956, -0.05439207119009259),
    complex(0.5, 1000.0): complex(0.35633436719439604, 0.9319978312329936),
}

ZETA_DERIV_COMPLEX = {
    complex(0.5, 14.0): complex(0.7482336961200863, 0.20443653378499743),
    complex(2.0, 30.0): complex(0.19151235113741866, 0.17478906329931015),
    complex(-1.5, 8.0): complex(0.059289999869325094, -0.6712571921646385),
}

LOG_GAMMA = {
    complex(0.5, 14.0): complex(-21.07221004192388, 22.949779692295984),
    complex(3.5, 0.0): complex(1.2009736023470743, 0.0),
    complex(-2.5, 1.0): complex(-2.3441906524655924, -8.304127986657926),
}

# (zeta'(-2n), zeta''(-2n)/zeta'(-2n)) at the trivial zeros.
TRIVIAL_DATA = {
    1: (-0.03044845705839327, 2.159830826938311),
    2: (0.007983811450268625, 0.718631180338151),
    3: (-0.005899759143515937, -0.05784742023696652),
    5: (-0.018929926338140373, -1.0270613417136745),
}


def test_zeta_real_oracles():
    for s, want in ZETA_REAL.items():
        got = zeta(s)
        assert got.imag == pytest.approx(0.0, abs=1e-15)
        assert got.real == pytest.approx(want, rel=5e-14, abs=1e-16)


def test_zeta_deriv_real_oracles():
    for s, want in ZETA_DERIV_REAL.items():
        got = zeta_deriv(s)
        assert got.real == pytest.approx(want, rel=5e-14)


def test_zeta_complex_oracles():
    for s, want in ZETA_COMPLEX.items():
        got = zeta(s)
        assert abs(got - want) <= 5e-13 * abs(want)


def test_zeta_deriv_complex_oracles():
    for s, want in ZETA_DERIV_COMPLEX.items():
        got = zeta_deriv(s)
        assert abs(got - want) <= 5e-13 * abs(want)


def test_zeta_and_deriv_matches_separate_calls():
    # The joint pass shares one Euler-Maclaurin sweep, so agreement is to a
    # few ulps rather than bitwise.
    for s in (2.0, complex(0.5, 14.0), complex(-1.5, 8.0)):
        v, d = zeta_and_deriv(s)
        assert abs(v - zeta(s)) <= 1e-14 * abs(v)
        assert abs(d - zeta_deriv(s)) <= 1e-13 * max(abs(d), 1e-3)


def test_log_gamma_oracles():
    for s, want in LOG_GAMMA.items():
        got = log_gamma(s)
        assert abs(got - want) <= 1e-13 * max(abs(want), 1.0)


def test_trivial_zero_data_oracles():
    for n, (zp, ratio) in TRIVIAL_DATA.items():
        data = trivial_zero_data(n)
        assert data.zeta_prime == pytest.approx(zp, rel=1e-13)
        assert data.log_ratio == pytest.approx(ratio, rel=1e-12)
        # zeta really does vanish there
        assert abs(zeta(-2.0 * n)) < 1e-15


def test_trivial_zero_data_guards():
    with pytest.raises(OutOfRange):
        trivial_zero_data(0)
    with pytest.raises(OutOfRange):
        trivial_zero_data(-1)


def test_extended_precision_beats_double():
    import mpmath as mp

    s = complex(0.5, 14.0)
    want = ZETA_COMPLEX[s]
    v = zeta(s, EXTENDED)
    assert isinstance(v, mp.mpc)
    # agrees with the double-path value well inside double accuracy
    assert abs(complex(v) - want) <= 1e-14 * abs(want)


def test_pole_and_range_guards():
    with pytest.raises(PoleAtOne):
        zeta(1.0)
    with pytest.raises(PoleAtOne):
        zeta(complex(1.0, 0.0))
    with pytest.raises(OutOfRange):
        zeta(complex(0.5, IM_MAX * 2.0))
    with pytest.raises(PrecisionLoss):
        zeta_deriv(complex(-1.0, 2.0e4))
    with pytest.raises(PoleAtNonpositiveInteger):
        log_gamma(0.0)
    with pytest.raises(PoleAtNonpositiveInteger):
        log_gamma(-3.0)
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma_ratio(-2.0, 1.0)
    with pytest.raises(PoleAtNonpositiveInteger):
        gamma_ratio(-4.5, 1.5)  # 1 + tau + s = -2
    with pytest.raises(DomainError):
        gamma_ratio(2.0, -0.5)


def test_bernoulli_values():
    # Only even positive indices are exposed (odd ones vanish past B1).
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)
    for bad in (0, 1, 3, -2):
        with pytest.raises(OutOfRange):
            bernoulli(bad)


def test_gamma_ratio_integer_cases():
    # Gamma(3)/Gamma(6) = 2/120
    assert gamma_ratio(3.0, 2.0) == pytest.approx(complex(1.0 / 60.0), rel=1e-14)
    # tau = 1: Gamma(s)/Gamma(s+2) = 1/(s(s+1))
    for s in (complex(0.5, 14.0), complex(0.5, 100.0), 2.5):
        sc = complex(s)
        want = 1.0 / (sc * (sc + 1.0))
        assert abs(gamma_ratio(s, 1.0) - want) <= 1e-13 * abs(want)


@given(
    st.floats(min_value=1.6, max_value=25.0),
)
@settings(max_examples=60, deadline=None)
def test_zeta_real_axis_shape(s):
    # On (1, inf) zeta decreases to 1 and stays above 1.
    v = zeta(s).real
    assert 1.0 < v <= zeta(1.6).real + 1e-15
    # Dirichlet tail bracket: the sum over n >= 3 is below the integral bound
    # 3^-s (1 + 3/(s-1)), so 2^-s < zeta(s) - 1 < 2^-s + 3^-s (1 + 3/(s-1)).
    tail = v - 1.0
    assert 2.0 ** (-s) < tail < 2.0 ** (-s) + 3.0 ** (-s) * (1.0 + 3.0 / (s - 1.0))


@given(
    st.floats(min_value=0.1, max_value=3.0),
    st.floats(min_value=2.0, max_value=200.0),
)
@settings(max_examples=40, deadline=None)
def test_zeta_conjugate_symmetry(sigma, t):
    s = complex(sigma, t)
    a = zeta(s)
    b = zeta(s.conjugate())
    assert abs(b - a.conjugate()) <= 1e-13 * max(abs(a), 1e-3)


@given(
    st.floats(min_value=-0.4, max_value=2.5),
    st.floats(min_value=5.0, max_value=300.0),
)
@settings(max_examples=30, deadline=None)
def test_zeta_deriv_matches_finite_difference(sigma, t):
    s = complex(sigma, t)
    h = 1e-5
    d = zeta_deriv(s)
    fd = (zeta(s + h) - zeta(s - h)) / (2.0 * h)
    # central difference is O(h^2); scale by local magnitude
    scale = max(abs(d), 1.0)
    assert abs(d - fd) <= 5e-8 * scale


@given(
    st.floats(min_value=-30.0, max_value=-1.0),
    st.floats(min_value=0.0, max_value=50.0),
)
@settings(max_examples=40, deadline=None)
def test_functional_equation_invariant(sigma, t):
    # zeta(s) = chi(s) zeta(1-s) with
    # chi(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s).
    s = complex(sigma, t)
    if abs(s.real - round(s.real)) < 1e-3 and abs(t) < 1e-3:
        return  # too close to a trivial zero / real pole of the factors
    lhs = zeta(s)
    w = 1.0 - s
    chi = (
        2.0**s
        * cmath.pi ** (s - 1.0)
        * cmath.sin(cmath.pi * s / 2.0)
        * cmath.exp(log_gamma(w))
    )
    rhs = chi * zeta(w)
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1e-280)
