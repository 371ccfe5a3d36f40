"""Zero tables: ordinate quality, derivative values, counting, file formats.

Ordinate/derivative oracles are mpmath zetazero values at 30 digits, frozen
as doubles.
"""

import math

import numpy as np
import pytest

from mrl.errors import MissingZeros, NotAscending, ParseError
from mrl.kernel import zeta
from mrl.zeros import (
    SUSPECT_DERIV_FLOOR,
    ZeroRecord,
    ZeroTable,
    count_main_term,
    hardy_z,
    import_zeros,
    load_builtin,
    refine_table,
    refine_zero,
    riemann_siegel_theta,
    verify_count,
)

# mpmath.zetazero at 30 digits.
KNOWN_GAMMAS = {
    1: 14.134725141734695,
    2: 21.022039638771556,
    10: 49.7738324776723,
    29: 98.83119421819369,
    100: 236.5242296658162,
}

KNOWN_ZETA_PRIMES = {
    1: complex(0.783296511867031, 0.12469982974817109),
    2: complex(1.1092955634626716, -0.24872978851649746),
    100: complex(2.2455848965354943, -3.304174629263106),
}


def test_builtin_table_shape(raw_table):
    assert len(raw_table) == 730
    assert raw_table.max_gamma == pytest.approx(1099.360667, abs=1e-5)
    gs = raw_table.gammas
    assert np.all(np.diff(gs) > 0)


def test_builtin_ordinates_match_known(raw_table):
    for k, want in KNOWN_GAMMAS.items():
        assert raw_table.gammas[k - 1] == pytest.approx(want, abs=5e-9), f"#{k}"


def test_refined_table_derivatives(table):
    for k, want in KNOWN_ZETA_PRIMES.items():
        got = table[k - 1].zeta_prime
        assert abs(got - want) <= 1e-9 * abs(want), f"#{k}"
    assert all(rec.refined_bits >= 53 for rec in table)
    assert not any(rec.suspect for rec in table)
    assert all(abs(rec.zeta_prime) > SUSPECT_DERIV_FLOOR for rec in table)


def test_refined_ordinates_are_actual_zeros(table):
    # |zeta(1/2 + i gamma)| should be at rounding scale for every 10th zero.
    for rec in table[::10]:
        val = zeta(complex(0.5, rec.gamma))
        assert abs(val) < 1e-9, f"gamma={rec.gamma}"


def test_refine_is_idempotent(table):
    again = refine_table(table)
    assert np.allclose(again.gammas, table.gammas, rtol=0, atol=1e-12)


def test_refine_zero_single():
    rec = refine_zero(14.1347)
    assert rec.gamma == pytest.approx(KNOWN_GAMMAS[1], abs=1e-12)
    assert abs(rec.zeta_prime - KNOWN_ZETA_PRIMES[1]) < 1e-10


def test_counts(table):
    # N(100) = 29, N(1000) = 649 (classical counts).
    gs = table.gammas
    assert int((gs <= 100.0).sum()) == 29
    assert int((gs <= 1000.0).sum()) == 649


def test_count_main_term_and_verify(table):
    for T in (50.0, 100.0, 500.0, 1000.0):
        rep = verify_count(table, T)
        assert rep.ok, f"T={T}: |{rep.difference}| > {rep.bound}"
        assert rep.bound == pytest.approx(2.0 * math.log(T))
        assert rep.main_term == pytest.approx(count_main_term(T))
    with pytest.raises(MissingZeros):
        verify_count(table, 5000.0)


def test_hardy_z_matches_zeta_modulus():
    # |Z(t)| = |zeta(1/2 + it)| and Z is real-valued.
    z = hardy_z(20.0)
    assert isinstance(z, float)
    assert z == pytest.approx(1.1478424121851973, rel=1e-10)
    assert abs(z) == pytest.approx(abs(zeta(complex(0.5, 20.0))), rel=1e-10)


def test_riemann_siegel_theta_oracle():
    assert riemann_siegel_theta(100.0) == pytest.approx(
        87.97216523178722, rel=1e-12
    )


def test_hardy_z_sign_changes_at_zeros(table):
    # Z flips sign across each ordinate.
    for rec in table[:5]:
        assert hardy_z(rec.gamma - 1e-3) * hardy_z(rec.gamma + 1e-3) < 0


def test_import_zeros_parsing(tmp_path):
    p = tmp_path / "z.txt"
    p.write_text("# comment\n14.134725\n21.022040 # trailing\n\n25.010858\n")
    t = import_zeros(p)
    assert len(t) == 3
    assert t[0].zeta_prime == 0j
    assert t[0].refined_bits == 0

    bad_order = tmp_path / "bad.txt"
    bad_order.write_text("21.0\n14.1\n")
    with pytest.raises(NotAscending):
        import_zeros(bad_order)

    garbage = tmp_path / "garbage.txt"
    garbage.write_text("14.13\nnot-a-number\n")
    with pytest.raises(ParseError):
        import_zeros(garbage)


def test_table_binary_roundtrip(tmp_path, table):
    p = tmp_path / "t.ztbl"
    table.save(p)
    loaded = ZeroTable.load(p)
    assert len(loaded) == len(table)
    for a, b in zip(loaded, table):
        assert a.gamma == b.gamma
        assert a.zeta_prime == b.zeta_prime
        assert a.refined_bits == b.refined_bits
        assert a.suspect == b.suspect


def test_table_binary_rejects_corruption(tmp_path, table):
    p = tmp_path / "t.ztbl"
    table.save(p)
    blob = bytearray(p.read_bytes())
    blob[:4] = b"XXXX"
    bad = tmp_path / "bad.ztbl"
    bad.write_bytes(bytes(blob))
    with pytest.raises(ParseError):
        ZeroTable.load(bad)
    truncated = tmp_path / "trunc.ztbl"
    truncated.write_bytes(p.read_bytes()[:-7])
    with pytest.raises(ParseError):
        ZeroTable.load(truncated)


def test_table_constructor_requires_ascending():
    with pytest.raises(NotAscending):
        ZeroTable([ZeroRecord(gamma=21.0), ZeroRecord(gamma=14.0)])


def test_load_builtin_is_cached_and_consistent(raw_table):
    again = load_builtin()
    assert np.array_equal(again.gammas, raw_table.gammas)
