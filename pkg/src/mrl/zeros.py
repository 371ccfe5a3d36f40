"""Tables of nontrivial zeta zeros: finding, refining, verifying, persisting.

A zero record holds the ordinate gamma of a zero rho = 1/2 + i*gamma on the
critical line, the derivative zeta'(rho) needed by explicit-formula sums, the
significand width at which the ordinate was last Newton-polished, and a
suspect flag set when |zeta'(rho)| is so small that a multiple zero (or an
unconverged record) must be assumed.

Zeros are located by sign changes of the real function

    Z(t) = exp(i theta(t)) zeta(1/2 + i t),
    theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log pi

on a uniform grid, bracketed by bisection, then polished by the complex
Newton step t <- t - Re[zeta / (i zeta')] at s = 1/2 + i t.  The Newton basin
is about +/- one grid step around each ordinate; seeds farther out may
converge to a neighbor (refuse via NoConvergence when the polished value
leaves the bracket).

Binary persistence: magic ZTBL0001, then a u64 record count, then
little-endian (gamma: f64, Re zeta': f64, Im zeta': f64, refined_bits: i64)
records in strictly ascending gamma.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, replace

import numpy as np
from mpmath import mp

from .errors import (
    MissingZeros,
    NoConvergence,
    NotAscending,
    OutOfRange,
    ParseError,
)
from .kernel import DOUBLE, IM_MAX, Precision, log_gamma, zeta, zeta_and_deriv

__all__ = [
    "GRID_STEP",
    "NEWTON_TOL",
    "SUSPECT_DERIV_FLOOR",
    "ZeroRecord",
    "ZeroTable",
    "VerifyReport",
    "riemann_siegel_theta",
    "hardy_z",
    "import_zeros",
    "builtin_zeros_path",
    "load_builtin",
    "refine_zero",
    "refine_table",
    "zeta_prime_at_zeros",
    "find_zeros",
    "verify_count",
    "count_main_term",
]

# Default grid spacing for sign-change scans; also the documented Newton basin.
GRID_STEP = 0.05

# Newton stops once |zeta(1/2 + i t)| falls below this (double precision).
NEWTON_TOL = 1e-12

_NEWTON_MAX_ITER = 50

# |zeta'(rho)| below this marks the record suspect (possible multiple zero or
# unrefined placeholder); explicit-formula consumers refuse such records.
SUSPECT_DERIV_FLOOR = 1e-8

_TABLE_MAGIC = b"ZTBL0001"
_TABLE_COUNT = struct.Struct("<Q")
_TABLE_RECORD = struct.Struct("<dddq")

_BUILTIN_NAME = "zeros_t1100.txt"


@dataclass(frozen=True)
class ZeroRecord:
    """One zero rho = 1/2 + i*gamma with zeta'(rho) and refinement metadata."""

    gamma: float
    zeta_prime: complex = 0j
    refined_bits: int = 0
    suspect: bool = False


@dataclass(frozen=True)
class VerifyReport:
    """Zero-count check against the smooth main term of the counting function."""

    T: float
    observed: int
    main_term: float
    difference: float
    bound: float
    ok: bool


class ZeroTable:
    """Immutable list of ZeroRecord in strictly ascending positive gamma."""

    def __init__(self, records) -> None:
        recs = list(records)
        prev = 0.0
        for r in recs:
            if not (r.gamma > prev):
                raise NotAscending(
                    f"zero ordinates must be strictly ascending and positive; "
                    f"got {r.gamma} after {prev}"
                )
            prev = r.gamma
        self._records: tuple[ZeroRecord, ...] = tuple(recs)
        self._gammas = np.array([r.gamma for r in recs], dtype=np.float64)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records)

    def __getitem__(self, i: int) -> ZeroRecord:
        return self._records[i]

    @property
    def gammas(self) -> np.ndarray:
        return self._gammas

    @property
    def max_gamma(self) -> float:
        return float(self._gammas[-1]) if len(self._records) else 0.0

    def count_up_to(self, T: float) -> int:
        """Number of records with gamma <= T."""
        return int(np.searchsorted(self._gammas, T, side="right"))

    def up_to(self, T: float) -> "ZeroTable":
        """Sub-table of the records with gamma <= T."""
        return ZeroTable(self._records[: self.count_up_to(T)])

    def require_height(self, T: float) -> None:
        """Raise MissingZeros unless the table covers ordinates up to T."""
        if not self._records or self.max_gamma < T:
            raise MissingZeros(
                f"zero table reaches gamma = {self.max_gamma:.3f}, "
                f"but height T = {T} was requested"
            )

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(_TABLE_MAGIC)
            fh.write(_TABLE_COUNT.pack(len(self._records)))
            for r in self._records:
                fh.write(
                    _TABLE_RECORD.pack(
                        r.gamma, r.zeta_prime.real, r.zeta_prime.imag, r.refined_bits
                    )
                )

    @classmethod
    def load(cls, path) -> "ZeroTable":
        with open(path, "rb") as fh:
            blob = fh.read()
        if blob[: len(_TABLE_MAGIC)] != _TABLE_MAGIC:
            raise ParseError(f"{path}: bad magic header")
        off = len(_TABLE_MAGIC)
        if len(blob) < off + _TABLE_COUNT.size:
            raise ParseError(f"{path}: missing record count")
        (count,) = _TABLE_COUNT.unpack_from(blob, off)
        off += _TABLE_COUNT.size
        if len(blob) != off + count * _TABLE_RECORD.size:
            raise ParseError(
                f"{path}: expected {count} records, file length mismatch"
            )
        records = []
        for i in range(count):
            gamma, re, im, bits = _TABLE_RECORD.unpack_from(
                blob, off + i * _TABLE_RECORD.size
            )
            zp = complex(re, im)
            records.append(
                ZeroRecord(
                    gamma=gamma,
                    zeta_prime=zp,
                    refined_bits=int(bits),
                    suspect=abs(zp) < SUSPECT_DERIV_FLOOR,
                )
            )
        return cls(records)


# ---------------------------------------------------------------------------
# The real zero-locating function
# ---------------------------------------------------------------------------


def riemann_siegel_theta(t: float, precision: Precision = DOUBLE) -> float:
    """theta(t) = Im log Gamma(1/4 + i t/2) - (t/2) log pi."""
    if precision.is_double:
        lg = log_gamma(complex(0.25, 0.5 * t), precision)
        return float(lg.imag - 0.5 * t * math.log(math.pi))
    bits = int(precision.significand_bits)
    with mp.workprec(bits + 10):
        lg = log_gamma(mp.mpc(mp.mpf(1) / 4, mp.mpf(t) / 2), precision)
        return lg.imag - mp.mpf(t) / 2 * mp.log(mp.pi)


def hardy_z(t: float, precision: Precision = DOUBLE) -> float:
    """Z(t) = exp(i theta(t)) zeta(1/2 + i t); real, and zero exactly at the
    critical-line zeros."""
    if precision.is_double:
        z, _ = _zeta_on_line(float(t), precision, want_deriv=False)
        theta = riemann_siegel_theta(t)
        return float((complex(math.cos(theta), math.sin(theta)) * z).real)
    bits = int(precision.significand_bits)
    with mp.workprec(bits + 10):
        z, _ = _zeta_on_line(t, precision, want_deriv=False)
        theta = riemann_siegel_theta(t, precision)
        return (mp.exp(mp.mpc(0, theta)) * z).real


def _zeta_on_line(t, precision: Precision, want_deriv: bool):
    """(zeta, zeta') at s = 1/2 + i t in the backend type of precision."""
    if precision.is_double:
        s = complex(0.5, t)
    else:
        s = mp.mpc(mp.mpf(1) / 2, t)
    if want_deriv:
        return zeta_and_deriv(s, precision)
    return zeta(s, precision), None


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def import_zeros(path) -> ZeroTable:
    """Read a text file of ascending zero ordinates (one per line, '#'
    comments allowed) into an unrefined table (zeta' = 0, refined_bits = 0)."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                gamma = float(body)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: not a number: {body!r}") from exc
            records.append(ZeroRecord(gamma=gamma))
    return ZeroTable(records)


def builtin_zeros_path():
    """Filesystem path of the packaged ordinate list (zeros below 1100)."""
    from importlib.resources import files

    return files("mrl").joinpath("data").joinpath(_BUILTIN_NAME)


def load_builtin() -> ZeroTable:
    """The packaged table of zero ordinates below 1100, unrefined."""
    path = builtin_zeros_path()
    records = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        records.append(ZeroRecord(gamma=float(body)))
    return ZeroTable(records)


def _newton_tol(precision: Precision) -> float:
    if precision.is_double:
        return NEWTON_TOL
    return 2.0 ** (13 - int(precision.significand_bits))


def _newton_polish(t0, precision: Precision):
    """Newton-polish an ordinate seed; returns (t, zeta_prime_at_zero).

    Stops when |zeta| clears the precision's tolerance, or -- since the
    evaluated |zeta| has a noise floor of roughly |t| log|t| ulps from the
    phases in the main sum -- when the Newton step falls below a few ulps of
    t, at which point the ordinate itself is converged to working precision.
    """
    tol = _newton_tol(precision)
    step_floor = 2.0 ** (2 - int(precision.significand_bits)) * max(
        1.0, abs(float(t0))
    )
    t = t0
    for _ in range(_NEWTON_MAX_ITER):
        z, dz = _zeta_on_line(t, precision, want_deriv=True)
        if abs(z) < tol:
            return t, dz
        step = (z / (1j * dz)).real
        t = t - step
        if abs(step) < step_floor:
            return t, dz
    raise NoConvergence(
        f"Newton refinement from seed {float(t0):.6f} did not reach "
        f"|zeta| < {tol:g} in {_NEWTON_MAX_ITER} iterations"
    )


def refine_zero(gamma_seed: float, precision: Precision = DOUBLE) -> ZeroRecord:
    """Polish one ordinate seed to a ZeroRecord with zeta'(rho).

    The seed must lie within about GRID_STEP of the true ordinate (the Newton
    basin); seeds farther away may converge to a neighboring zero.
    """
    if precision.is_double:
        t, dz = _newton_polish(float(gamma_seed), precision)
        gamma = float(t)
        zp = complex(dz)
    else:
        bits = int(precision.significand_bits)
        with mp.workprec(bits + 10):
            t, dz = _newton_polish(mp.mpf(gamma_seed), precision)
            gamma = float(t)
            zp = complex(dz)
    return ZeroRecord(
        gamma=gamma,
        zeta_prime=zp,
        refined_bits=int(precision.significand_bits),
        suspect=abs(zp) < SUSPECT_DERIV_FLOOR,
    )


def refine_table(table: ZeroTable, precision: Precision = DOUBLE) -> ZeroTable:
    """Refine every record; NotAscending from the constructor catches any
    seed that escaped to a neighboring zero's basin."""
    return ZeroTable(refine_zero(r.gamma, precision) for r in table)


def zeta_prime_at_zeros(table: ZeroTable, precision: Precision = DOUBLE) -> ZeroTable:
    """Fill zeta'(1/2 + i gamma) at the stored ordinates without moving them.

    Useful for externally sourced high-accuracy ordinates; refined_bits is
    left as stored since the ordinates themselves are untouched.
    """
    out = []
    for r in table:
        _, dz = _zeta_on_line(float(r.gamma), precision, want_deriv=True)
        zp = complex(dz)
        out.append(
            replace(r, zeta_prime=zp, suspect=abs(zp) < SUSPECT_DERIV_FLOOR)
        )
    return ZeroTable(out)


def find_zeros(
    t_min: float,
    t_max: float,
    precision: Precision = DOUBLE,
    grid_step: float = GRID_STEP,
) -> ZeroTable:
    """All critical-line zeros with t_min < gamma <= t_max, by sign changes
    of Z(t) on a grid of the given step followed by bisection and Newton.

    The step must be below the local zero spacing (0.05 is safe far beyond
    t = 1100); a missed pair would surface in verify_count.
    """
    t_min, t_max = float(t_min), float(t_max)
    if not (0.0 <= t_min < t_max):
        raise OutOfRange(f"need 0 <= t_min < t_max, got [{t_min}, {t_max}]")
    if t_max > IM_MAX:
        raise OutOfRange(f"t_max = {t_max} exceeds supported maximum {IM_MAX}")
    if not (0 < grid_step <= 0.5):
        raise OutOfRange(f"grid_step must be in (0, 0.5], got {grid_step}")
    n_pts = int(math.ceil((t_max - t_min) / grid_step)) + 1
    ts = [min(t_min + i * grid_step, t_max) for i in range(n_pts)]
    zs = [hardy_z(t, precision) for t in ts]
    records = []
    for (a, za), (b, zb) in zip(zip(ts, zs), zip(ts[1:], zs[1:])):
        if za == 0.0 and a > 0:
            seed = a
        elif za * zb < 0.0:
            lo, zlo, hi = a, za, b
            for _ in range(20):  # bisect to ~1e-7: deep inside the basin
                mid = 0.5 * (lo + hi)
                zmid = hardy_z(mid, precision)
                if zmid == 0.0:
                    lo = hi = mid
                    break
                if (zmid > 0) == (zlo > 0):
                    lo, zlo = mid, zmid
                else:
                    hi = mid
            seed = 0.5 * (lo + hi)
        else:
            continue
        rec = refine_zero(seed, precision)
        if not (a - grid_step <= rec.gamma <= b + grid_step):
            raise NoConvergence(
                f"refined ordinate {rec.gamma:.6f} escaped bracket [{a:.6f}, {b:.6f}]"
            )
        if t_min < rec.gamma <= t_max:
            records.append(rec)
    return ZeroTable(records)


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def count_main_term(T: float) -> float:
    """Smooth main term of the zero-counting function:
    (T/2pi) log(T/2pi) - T/2pi."""
    u = T / (2.0 * math.pi)
    return u * (math.log(u) - 1.0)


def verify_count(table: ZeroTable, T: float, c_bound: float = 2.0) -> VerifyReport:
    """Compare the table's zero count up to T with the smooth main term.

    Returns a report (never raises on mismatch); the ok flag is
    |observed - main| <= c_bound * log T.  Raises MissingZeros only when the
    table does not extend to T, since the count would be meaningless.
    """
    T = float(T)
    if T <= 2.0 * math.pi:
        raise OutOfRange(f"T must exceed 2*pi for the main term, got {T}")
    table.require_height(T)
    observed = table.count_up_to(T)
    main = count_main_term(T)
    diff = abs(observed - main)
    bound = c_bound * math.log(T)
    return VerifyReport(
        T=T,
        observed=observed,
        main_term=main,
        difference=diff,
        bound=bound,
        ok=diff <= bound,
    )
