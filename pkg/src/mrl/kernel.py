"""Complex special functions at configurable working precision.

Provides the analytic building blocks used everywhere else in the package:
the Riemann zeta function and its derivative (Euler-Maclaurin summation on
the right half-plane, functional equation on the far left), the
principal-branch log-gamma function (argument shifting plus the Stirling
series), the kernel ratio Gamma(s)/Gamma(1+tau+s) evaluated safely in log
space, exact rational Bernoulli numbers, and closed-form data at the trivial
zeros s = -2n.

Two numeric backends share the same algorithm code: hardware doubles
(complex/cmath, with a numpy fast path for long sums) and an arbitrary
precision software backend selected through :class:`Precision`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import SimpleNamespace

import mpmath as mp
import numpy as np

from .errors import (
    DomainError,
    OutOfRange,
    PoleAtNonpositiveInteger,
    PoleAtOne,
    PrecisionLoss,
)

__all__ = [
    "Precision",
    "DOUBLE",
    "EXTENDED",
    "TrivialZeroData",
    "bernoulli",
    "zeta",
    "zeta_deriv",
    "zeta_and_deriv",
    "log_gamma",
    "gamma_ratio",
    "trivial_zero_data",
    "BERNOULLI_MAX_INDEX",
    "IM_MAX",
]

# Largest Bernoulli index served by bernoulli(); also caps the number of
# asymptotic correction terms available to the internal series.
BERNOULLI_MAX_INDEX = 130

# Supported |Im s| for zeta/zeta_deriv.  The Euler-Maclaurin cutoff grows
# linearly with |Im s|, so this is a cost guard, not an accuracy cliff;
# double-precision accuracy is maintained well past the zeros near t = 1100
# that the rest of the package consumes.
IM_MAX = 5.0e4

# |Im s| guard for the derivative on the far left half-plane, where the
# functional-equation derivative mixes sin/cos factors that overflow doubles
# near |Im s| ~ 450.  The left-half-plane derivative is only ever needed at
# small |Im s| (trivial-zero neighborhoods).
_FE_DERIV_IM_MAX = 400.0

# Largest index accepted by trivial_zero_data; keeps zeta'(-2n) inside the
# double exponent range.
TRIVIAL_ZERO_MAX_N = 120

_GUARD_BITS = 10
_EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class Precision:
    """Working-precision selector.

    significand_bits = 53 runs on hardware doubles; any larger value switches
    to the software wide-float backend with that significand width.  Values
    up to 256 bits are supported by the series cutoffs.
    """

    significand_bits: int = 53

    def __post_init__(self) -> None:
        if int(self.significand_bits) < 53:
            raise OutOfRange(
                f"significand_bits must be >= 53, got {self.significand_bits}"
            )

    @property
    def is_double(self) -> bool:
        return self.significand_bits == 53


DOUBLE = Precision(53)
EXTENDED = Precision(128)


@dataclass(frozen=True)
class TrivialZeroData:
    """Closed-form data attached to the trivial zero at s = -2n.

    zeta_prime is zeta'(-2n); log_ratio is zeta''(-2n)/zeta'(-2n), the
    quantity the logarithmic residue corrections need.
    """

    n: int
    zeta_prime: float
    log_ratio: float


# ---------------------------------------------------------------------------
# Bernoulli numbers and derived coefficient tables
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def _bernoulli_table() -> tuple[Fraction, ...]:
    """Exact B_0..B_max via the defining recurrence sum_j C(m+1,j) B_j = 0."""
    table = [Fraction(1)]
    for m in range(1, BERNOULLI_MAX_INDEX + 1):
        acc = Fraction(0)
        binom = 1  # C(m+1, j), updated incrementally over j
        for j in range(m):
            acc += binom * table[j]
            binom = binom * (m + 1 - j) // (j + 1)
        table.append(-acc / (m + 1))
    return tuple(table)


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k for even positive k up to BERNOULLI_MAX_INDEX."""
    if not isinstance(k, int) or isinstance(k, bool) or k < 2 or k % 2 != 0:
        raise OutOfRange(f"index must be an even positive integer, got {k!r}")
    if k > BERNOULLI_MAX_INDEX:
        raise OutOfRange(f"index {k} exceeds supported maximum {BERNOULLI_MAX_INDEX}")
    return _bernoulli_table()[k]


@lru_cache(maxsize=1)
def _stirling_coeffs() -> tuple[Fraction, ...]:
    """B_{2k} / ((2k)(2k-1)), the Stirling-series coefficients."""
    table = _bernoulli_table()
    return tuple(
        table[2 * k] / (2 * k * (2 * k - 1)) for k in range(1, len(table) // 2 + 1)
    )


@lru_cache(maxsize=1)
def _em_coeffs() -> tuple[Fraction, ...]:
    """B_{2k} / (2k)!, the Euler-Maclaurin tail coefficients."""
    table = _bernoulli_table()
    return tuple(
        table[2 * k] / math.factorial(2 * k) for k in range(1, len(table) // 2 + 1)
    )


@lru_cache(maxsize=1)
def _digamma_coeffs() -> tuple[Fraction, ...]:
    """B_{2k} / (2k), the digamma asymptotic coefficients."""
    table = _bernoulli_table()
    return tuple(table[2 * k] / (2 * k) for k in range(1, len(table) // 2 + 1))


# ---------------------------------------------------------------------------
# Backend dispatch
# ---------------------------------------------------------------------------


def _double_ops() -> SimpleNamespace:
    return SimpleNamespace(
        bits=53,
        is_double=True,
        exp=cmath.exp,
        log=cmath.log,
        sin=cmath.sin,
        cos=cmath.cos,
        pi=math.pi,
        ln2=math.log(2.0),
        ln2pi=math.log(2.0 * math.pi),
        euler=_EULER_GAMMA,
        from_fraction=lambda fr: fr.numerator / fr.denominator,
    )


def _mp_ops(bits: int) -> SimpleNamespace:
    # Must be constructed inside an mp.workprec block so the constants are
    # realized at the requested precision.
    return SimpleNamespace(
        bits=bits,
        is_double=False,
        exp=mp.exp,
        log=mp.log,
        sin=mp.sin,
        cos=mp.cos,
        pi=+mp.pi,
        ln2=mp.log(2),
        ln2pi=mp.log(2 * mp.pi),
        euler=+mp.euler,
        from_fraction=lambda fr: mp.mpf(fr.numerator) / fr.denominator,
    )


def _dispatch(fn, s, precision: Precision, *args):
    """Run an ops-parameterized algorithm on the backend chosen by precision."""
    if precision.is_double:
        return fn(complex(s), _double_ops(), *args)
    bits = int(precision.significand_bits)
    with mp.workprec(bits + _GUARD_BITS):
        return fn(mp.mpc(s), _mp_ops(bits), *args)


def _value_is_finite(v) -> bool:
    if isinstance(v, complex):
        return cmath.isfinite(v)
    if isinstance(v, (float, int)):
        return math.isfinite(v)
    return bool(mp.isfinite(v))


def _require_finite(value, what: str):
    if isinstance(value, tuple):
        for v in value:
            _require_finite(v, what)
        return value
    if not _value_is_finite(value):
        raise PrecisionLoss(f"{what} overflowed or lost all significance")
    return value


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# log-gamma, digamma, log-sin
# ---------------------------------------------------------------------------


def _shift_radius(bits: int) -> float:
    return max(10.0, 0.12 * bits + 2.0)


def _log_gamma_ops(z, ops):
    """Principal-branch log Gamma(z), valid off the nonpositive integers.

    Strategy: conjugate into the closed upper half-plane; on the real axis use
    lgamma or the reflection formula; otherwise shift z rightward until it is
    safely inside the Stirling region (|z| large and Re z >= 0, so the series
    argument stays within |arg z| <= pi/2) and subtract the accumulated
    principal logarithms.  On the open upper half-plane the recurrence
    log Gamma(z) = log Gamma(z+1) - Log z holds branch-exactly for the
    principal Log, which keeps the result on the principal branch.
    """
    if z.imag < 0:
        return _log_gamma_ops(z.conjugate(), ops).conjugate()
    if z.imag == 0:
        x = z.real
        if _is_nonpositive_integer(complex(float(x), 0.0)):
            raise PoleAtNonpositiveInteger(f"log_gamma pole at {x}")
        if x > 0:
            if ops.is_double:
                return complex(math.lgamma(x))
            # fall through: the shift+Stirling path below stays real-valued
        else:
            # Gamma(x) = pi / (sin(pi x) Gamma(1-x)); the value is negative
            # exactly when sin(pi x) < 0, contributing i*pi to the principal log.
            s = ops.sin(ops.pi * x)
            rest = _log_gamma_ops(1 - z, ops)
            re_part = ops.log(ops.pi) - ops.log(abs(s)) - rest.real
            im_part = ops.pi if s.real < 0 else 0 * ops.pi
            return re_part + 1j * im_part
    zs = z
    acc = 0
    radius = _shift_radius(ops.bits)
    while abs(zs) < radius or zs.real < 0:
        acc = acc + ops.log(zs)
        zs = zs + 1
    result = (zs - 0.5) * ops.log(zs) - zs + ops.ln2pi / 2
    inv2 = 1 / (zs * zs)
    v = 1 / zs
    tol = 2.0 ** (-(ops.bits + 6))
    prev = math.inf
    converged = False
    for coeff in _stirling_coeffs():
        term = ops.from_fraction(coeff) * v
        result = result + term
        mag = abs(term)
        if mag < tol * (1 + abs(result)):
            converged = True
            break
        if mag > prev:
            raise PrecisionLoss("Stirling series diverged before reaching tolerance")
        prev = mag
        v = v * inv2
    if not converged:
        raise PrecisionLoss("Stirling series exhausted its coefficient budget")
    return result - acc


def _digamma_ops(z, ops):
    """psi(z) by rightward shifting plus the asymptotic series."""
    if z.imag < 0:
        return _digamma_ops(z.conjugate(), ops).conjugate()
    if z.imag == 0:
        x = z.real
        if _is_nonpositive_integer(complex(float(x), 0.0)):
            raise PoleAtNonpositiveInteger(f"digamma pole at {x}")
        if x < 0:
            # psi(x) = psi(1-x) - pi*cot(pi*x)
            cot = ops.cos(ops.pi * x) / ops.sin(ops.pi * x)
            return _digamma_ops(1 - z, ops) - ops.pi * cot
    zs = z
    acc = 0
    radius = _shift_radius(ops.bits)
    while abs(zs) < radius or zs.real < 0:
        acc = acc + 1 / zs
        zs = zs + 1
    inv = 1 / zs
    inv2 = inv * inv
    result = ops.log(zs) - inv / 2
    v = inv2
    tol = 2.0 ** (-(ops.bits + 6))
    prev = math.inf
    converged = False
    for coeff in _digamma_coeffs():
        term = ops.from_fraction(coeff) * v
        result = result - term
        mag = abs(term)
        if mag < tol * (1 + abs(result)):
            converged = True
            break
        if mag > prev:
            raise PrecisionLoss("digamma series diverged before reaching tolerance")
        prev = mag
        v = v * inv2
    if not converged:
        raise PrecisionLoss("digamma series exhausted its coefficient budget")
    return result - acc


def _digamma_double(x) -> float:
    """Internal real-argument digamma on hardware doubles."""
    return _digamma_ops(complex(x), _double_ops()).real


def _log_sin(z, ops):
    """A logarithm of sin(z), stable for large |Im z|.

    The branch is only guaranteed up to 2*pi*i*k; callers exponentiate the
    result, so any branch is acceptable.
    """
    if z.imag > 1:
        # sin z = (i/2) e^{-iz} (1 - e^{2iz}) and |e^{2iz}| = e^{-2 Im z} < 1
        w = ops.exp(2j * z)
        return -1j * z - ops.ln2 + 1j * (ops.pi / 2) + ops.log(1 - w)
    if z.imag < -1:
        return _log_sin(z.conjugate(), ops).conjugate()
    return ops.log(ops.sin(z))


# ---------------------------------------------------------------------------
# Riemann zeta via Euler-Maclaurin, functional equation on the far left
# ---------------------------------------------------------------------------


def _zeta_em(s, ops, want_deriv: bool):
    """zeta(s) (and optionally zeta'(s)) by Euler-Maclaurin summation.

    Valid for Re s >= -1/2: the truncated formula analytically continues
    there.  Cutoff N ~ max(10, |Im s|) with a floor that grows with the
    requested precision; Bernoulli corrections are added until they fall
    below the round-off floor of the working precision.
    """
    t = abs(s.imag)
    # The Bernoulli corrections bottom out near exp(-(2 pi N - |s|)), so N
    # must clear ((bits + 6) ln 2 + |t|) / (2 pi); the ceil(t) + 1 floor keeps
    # the main sum dominant at large heights where it is the cheaper regime.
    n_cut = max(
        10,
        int(math.ceil(t)) + 1,
        int(math.ceil((0.6931472 * (ops.bits + 6) + t) / (2.0 * math.pi))) + 4,
    )
    dmain = 0
    if ops.is_double and n_cut > 32:
        ns = np.arange(1, n_cut, dtype=np.float64)
        logs = np.log(ns)
        powers = np.exp(logs * (-s))
        main = complex(math.fsum(powers.real.tolist()), math.fsum(powers.imag.tolist()))
        if want_deriv:
            dpowers = powers * (-logs)
            dmain = complex(
                math.fsum(dpowers.real.tolist()), math.fsum(dpowers.imag.tolist())
            )
    else:
        main = 0
        for n in range(1, n_cut):
            ln_n = ops.log(n)
            p = ops.exp(ln_n * (-s))
            main = main + p
            if want_deriv:
                dmain = dmain - p * ln_n
    ln_cut = ops.log(n_cut)
    pow_1ms = ops.exp(ln_cut * (1 - s))  # N^(1-s)
    pow_ms = pow_1ms / n_cut  # N^(-s)
    tail0 = pow_1ms / (s - 1)
    tail1 = pow_ms / 2
    total = main + tail0 + tail1
    dtotal = 0
    if want_deriv:
        dtotal = dmain - tail0 * ln_cut - tail0 / (s - 1) - tail1 * ln_cut

    scale = 1 + abs(main) + abs(tail0)
    tol = 2.0 ** (-(ops.bits + 6)) * scale
    n_sq = n_cut * n_cut
    nfac = pow_1ms / n_sq  # N^(1 - s - 2k), starting at k = 1
    poch = s  # s(s+1)...(s+2k-2), starting at k = 1
    dpoch = 1  # its derivative in s
    prev = math.inf
    converged = False
    k = 0
    for coeff in _em_coeffs():
        k += 1
        c = ops.from_fraction(coeff)
        term = c * poch * nfac
        total = total + term
        if want_deriv:
            dtotal = dtotal + c * (dpoch - poch * ln_cut) * nfac
        # The stop rule must weigh the derivative terms too: at special points
        # (e.g. s = 0) the value terms vanish identically while the derivative
        # series is still converging.
        mag = abs(term)
        if want_deriv:
            mag = mag + abs(c * (dpoch - poch * ln_cut) * nfac)
        if mag < tol:
            converged = True
            break
        if mag > prev:
            raise PrecisionLoss(
                "Euler-Maclaurin corrections diverged before reaching tolerance"
            )
        prev = mag
        a1 = s + (2 * k - 1)
        a2 = s + 2 * k
        dpoch = dpoch * a1 * a2 + poch * (a1 + a2)
        poch = poch * a1 * a2
        nfac = nfac / n_sq
    if not converged:
        raise PrecisionLoss(
            "Euler-Maclaurin corrections exhausted their coefficient budget"
        )
    return (total, dtotal) if want_deriv else total


def _zeta_fe(s, ops, want_deriv: bool):
    """zeta on Re s < -1/2 through the functional equation.

    The prefactor chi(s) = 2 (2 pi)^(s-1) Gamma(1-s) sin(pi s / 2) is
    assembled in log space so the value path cannot overflow; the derivative
    path additionally needs sin/cos directly and is therefore restricted to
    moderate |Im s| by the caller.
    """
    w = 1 - s
    if want_deriv:
        zw, dzw = _zeta_em(w, ops, True)
    else:
        zw = _zeta_em(w, ops, False)
        dzw = 0
    neg_even = _is_nonpositive_integer(complex(s)) and int(round(s.real)) % 2 == 0
    log_pref = ops.ln2 + (s - 1) * ops.ln2pi + _log_gamma_ops(w, ops)
    if not want_deriv:
        if neg_even:
            return 0 * zw  # exact zero in the active backend type
        return ops.exp(log_pref + _log_sin(ops.pi * s / 2, ops)) * zw
    pref = ops.exp(log_pref)
    if neg_even:
        # sin(pi s / 2) vanishes identically; keep the exact zero instead of
        # the rounded sin() value so the trivial zeros come out exact.
        n_half = int(round(s.real)) // (-2)
        sin_v = 0 * pref
        cos_v = (-1) ** (n_half % 2) + 0 * pref
    else:
        sin_v = ops.sin(ops.pi * s / 2)
        cos_v = ops.cos(ops.pi * s / 2)
    psi_w = _digamma_ops(w, ops)
    value = pref * sin_v * zw
    deriv = pref * (
        (ops.ln2pi - psi_w) * sin_v * zw + (ops.pi / 2) * cos_v * zw - sin_v * dzw
    )
    return value, deriv


def _zeta_entry(s, ops, want_deriv: bool):
    if s.real >= -0.5:
        return _zeta_em(s, ops, want_deriv)
    return _zeta_fe(s, ops, want_deriv)


def _validate_zeta_arg(sc: complex, want_deriv: bool) -> None:
    if sc == 1:
        raise PoleAtOne("zeta has its pole at s = 1")
    if abs(sc.imag) > IM_MAX:
        raise OutOfRange(f"|Im s| = {abs(sc.imag)} exceeds supported maximum {IM_MAX}")
    if want_deriv and sc.real < -0.5 and abs(sc.imag) > _FE_DERIV_IM_MAX:
        raise PrecisionLoss(
            "zeta derivative on Re s < -1/2 is limited to |Im s| <= "
            f"{_FE_DERIV_IM_MAX}"
        )


def zeta(s, precision: Precision = DOUBLE):
    """Riemann zeta(s).  Raises PoleAtOne at s = 1."""
    sc = complex(s)
    _validate_zeta_arg(sc, want_deriv=False)
    return _require_finite(_dispatch(_zeta_entry, s, precision, False), "zeta")


def zeta_deriv(s, precision: Precision = DOUBLE):
    """First derivative zeta'(s)."""
    sc = complex(s)
    _validate_zeta_arg(sc, want_deriv=True)
    return _require_finite(_dispatch(_zeta_entry, s, precision, True), "zeta_deriv")[1]


def zeta_and_deriv(s, precision: Precision = DOUBLE):
    """(zeta(s), zeta'(s)) sharing one Euler-Maclaurin pass."""
    sc = complex(s)
    _validate_zeta_arg(sc, want_deriv=True)
    return _require_finite(
        _dispatch(_zeta_entry, s, precision, True), "zeta_and_deriv"
    )


# ---------------------------------------------------------------------------
# Public gamma-family operations
# ---------------------------------------------------------------------------


def log_gamma(s, precision: Precision = DOUBLE):
    """Principal-branch log Gamma(s); raises PoleAtNonpositiveInteger."""
    sc = complex(s)
    if _is_nonpositive_integer(sc):
        raise PoleAtNonpositiveInteger(f"log_gamma pole at {sc.real}")
    return _require_finite(_dispatch(_log_gamma_ops, s, precision), "log_gamma")


def gamma_ratio(s, tau: float, precision: Precision = DOUBLE):
    """Gamma(s) / Gamma(1 + tau + s), tau >= 0, computed as exp of a log
    difference so large |s| cannot overflow intermediate Gamma values."""
    tau = float(tau)
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    sc = complex(s)
    if _is_nonpositive_integer(sc):
        raise PoleAtNonpositiveInteger(f"Gamma pole at s = {sc.real}")
    wc = complex(1 + tau) + sc
    if _is_nonpositive_integer(wc):
        raise PoleAtNonpositiveInteger(f"Gamma pole at 1 + tau + s = {wc.real}")

    def _ratio(z, ops):
        return ops.exp(_log_gamma_ops(z, ops) - _log_gamma_ops(z + (1 + tau), ops))

    return _require_finite(_dispatch(_ratio, s, precision), "gamma_ratio")


def trivial_zero_data(n: int) -> TrivialZeroData:
    """Closed-form zeta'(-2n) and zeta''(-2n)/zeta'(-2n) at the trivial zero
    s = -2n.

    Both follow from the functional equation zeta(s) = chi(s) zeta(1-s): the
    factor sin(pi s/2) has a simple zero at -2n, so with
    F(s) = 2 (2 pi)^(s-1) Gamma(1-s) zeta(1-s),

        zeta'(-2n)  = (-1)^n (pi/2) F(-2n)
                    = (-1)^n (2 pi)^(-2n) (2n)! zeta(2n+1) / 2
        zeta''/zeta' = 2 F'(-2n)/F(-2n)
                    = 2 (log 2 pi - psi(2n+1) - zeta'(2n+1)/zeta(2n+1))

    with the digamma value psi(2n+1) realized as H_{2n} - euler_gamma.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise OutOfRange(f"n must be a positive integer, got {n!r}")
    if n > TRIVIAL_ZERO_MAX_N:
        raise OutOfRange(f"n = {n} exceeds supported maximum {TRIVIAL_ZERO_MAX_N}")
    two_n = 2 * n
    z_val, z_der = zeta_and_deriv(complex(two_n + 1, 0.0))
    zp = math.exp(math.lgamma(two_n + 1) - two_n * math.log(2 * math.pi)) * (
        z_val.real / 2
    )
    if n % 2 == 1:
        zp = -zp
    harmonic = math.fsum(1.0 / j for j in range(1, two_n + 1))
    log_ratio = 2.0 * (
        math.log(2 * math.pi) - (harmonic - _EULER_GAMMA) - z_der.real / z_val.real
    )
    return TrivialZeroData(n=n, zeta_prime=zp, log_ratio=log_ratio)
