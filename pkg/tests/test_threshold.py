from fractions import Fraction as F

import pytest

from authdesign.instances import FANO_TABLE
from authdesign.threshold import (
    SchemeError,
    ShareSecrecyError,
    ThresholdScheme,
    deception,
    rec,
    robustness,
    share_secrecy,
)
from authdesign.transform import authcode_to_threshold


@pytest.fixture
def fano_scheme():
    # the three 7-row rule tables, written out directly
    rules = [(k, row[s], s, F(1, 7)) for k, row in enumerate(FANO_TABLE) for s in range(3)]
    return ThresholdScheme.build(3, 7, 7, rules)


def test_rule_table(fano_scheme):
    assert len(fano_scheme.rules) == 21
    assert rec(fano_scheme, 0, 1) == 1
    assert rec(fano_scheme, 0, 2) is None
    for r in fano_scheme.rules:
        assert rec(fano_scheme, r.v1, r.v2) == r.s


def test_rec_range(fano_scheme):
    with pytest.raises(IndexError):
        rec(fano_scheme, 7, 0)


def test_fano_secrecy_and_epsilon(fano_scheme):
    share_secrecy(fano_scheme)
    rob = robustness(fano_scheme)
    assert rob.epsilon == F(1, 3)
    assert rob.player1.value == rob.player2.value == F(1, 3)


def test_increment_deception(fano_scheme):
    """v1 -> v1 + 1 wins exactly when the secret is the second one."""
    won = F(0)
    for r in fano_scheme.rules:
        got = rec(fano_scheme, (r.v1 + 1) % 7, r.v2)
        if got is not None and got != r.s:
            assert r.s == 1
            won += F(1, 3) * r.w
    assert won == F(1, 3)


def test_matches_conversion(fano, fano_scheme):
    assert authcode_to_threshold(fano) == fano_scheme


def test_bibd13_players(bibd13):
    rob = robustness(authcode_to_threshold(bibd13))
    assert rob.epsilon == F(1, 3)
    assert (rob.player1.value, rob.player2.value) == (F(1, 3), F(1, 6))


def test_leaky_scheme():
    scheme = ThresholdScheme.build(2, 2, 1, [(0, 0, 0, F(1)), (1, 0, 1, F(1))])
    with pytest.raises(ShareSecrecyError) as err:
        share_secrecy(scheme)
    e = err.value
    assert (e.player, e.share, e.secret) == (1, 0, 0)
    # Bayes by hand: Prob[v1 = 0] = 1/2, Prob[v1 = 0, s = 0] = 1/2
    assert (e.lhs, e.rhs) == (F(1), F(1, 2))


def test_one_secret():
    scheme = ThresholdScheme.build(1, 2, 2, [(0, 0, 0, F(1, 2)), (1, 1, 0, F(1, 2))])
    share_secrecy(scheme)
    assert robustness(scheme).epsilon == 0


def test_invariants():
    with pytest.raises(SchemeError, match="total"):
        ThresholdScheme.build(1, 2, 2, [(0, 0, 0, F(1, 2))])
    with pytest.raises(SchemeError, match="more than one"):
        ThresholdScheme.build(2, 1, 1, [(0, 0, 0, F(1)), (0, 0, 1, F(1))])
    with pytest.raises(SchemeError, match="not positive"):
        ThresholdScheme.build(1, 2, 2, [(0, 0, 0, F(1)), (1, 1, 0, F(0))])


def test_player_argument(fano_scheme):
    with pytest.raises(ValueError):
        deception(fano_scheme, 3)
