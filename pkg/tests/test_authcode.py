import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from authdesign import authcode as ac
from authdesign.authcode import AuthCode, RegularityError, SecrecyError
from authdesign.designs import develop, develop_bases, equitable_order
from authdesign.instances import random_code

seeds = st.integers(0, 2**32)


def sbibd_code(base, v):
    return AuthCode.from_rows(v, develop([[p] for p in base], v).rows)


def bibd_code(bases, v, k):
    return AuthCode(equitable_order(develop_bases([[b] for b in bases], v).blocks(), v, k), ac.dist_uniform(k))


def joint_bayes(code):
    """Prob[m|s] and Prob[m] by enumerating (key, source, message) triples."""
    pm_s = {}
    pm = {}
    for k, row in enumerate(code.matrix.rows):
        for s, cell in enumerate(row):
            for m in cell:
                w = F(1, code.b) / len(cell)
                pm_s[(m, s)] = pm_s.get((m, s), 0) + w
                pm[m] = pm.get(m, 0) + w * code.source_dist[s]
    return pm_s, pm


class TestMaps:
    def test_decode(self, fano):
        assert ac.decode(fano, 0, 3) == 2
        assert ac.decode(fano, 0, 2) is None
        with pytest.raises(IndexError):
            ac.decode(fano, 7, 0)

    def test_mu(self, fano, edf19):
        assert ac.mu(fano, 0) == {0, 1, 3}
        assert ac.mu(edf19, 0) == {1, 7, 11, 4, 6, 9, 5, 16, 17}
        one = AuthCode.from_rows(3, [[[0, 2]]])
        assert ac.mu(one, 0) == {0, 2}

    def test_kappa(self, fano):
        assert ac.kappa(fano, 0) == {0, 4, 6}
        assert ac.kappa_s(fano, 0, 0) == {0}

    @given(seeds)
    def test_kappa_partition(self, seed):
        code = random_code(random.Random(seed))
        for m in range(code.v):
            parts = [ac.kappa_s(code, m, s) for s in range(code.u)]
            assert sum(len(p) for p in parts) == len(ac.kappa(code, m))
            assert frozenset().union(*parts) == ac.kappa(code, m)

    @given(seeds)
    def test_decode_unique(self, seed):
        code = random_code(random.Random(seed))
        for k, row in enumerate(code.matrix.rows):
            for s, cell in enumerate(row):
                for m in cell:
                    assert ac.decode(code, k, m) == s


class TestValues:
    def test_fano(self, fano):
        assert ac.p_d0(fano) == F(3, 7)
        assert ac.p_d1(fano) == F(1, 3)
        assert ac.p_ks(fano) == F(1, 3)

    def test_fano_key_swap_example(self, fano):
        # first row (0,1,3) replaced by second row (1,2,4): only m = 1 changes source
        winning = [
            m
            for s, cell in enumerate(fano.matrix.rows[0])
            for m in cell
            if ac.decode(fano, 1, m) not in (None, s)
        ]
        assert winning == [1]
        assert ac.key_substitution(fano).conditional_max == F(1, 3)

    def test_bibd13(self, bibd13):
        assert ac.p_d0(bibd13) == F(3, 13)
        assert ac.p_d1(bibd13) == F(1, 6)
        assert ac.p_ks(bibd13) == F(1, 3)

    def test_edf19(self, edf19):
        assert ac.p_d0(edf19) == F(9, 19)
        assert ac.p_d1(edf19) == ac.p_ks(edf19) == F(1, 3)

    def test_split25(self, split25):
        assert ac.p_d0(split25) == F(6, 25)
        assert ac.p_d1(split25) == F(1, 6)
        assert ac.p_ks(split25) == F(1, 6)

    def test_one_source(self):
        code = AuthCode.from_rows(4, [[[0]], [[1]], [[2, 3]]])
        assert ac.p_d1(code) == 0
        assert ac.p_ks(code) == 0
        rep = ac.analyze(code)
        assert rep.p_d1 == rep.p_ks == 0

    def test_single_key(self):
        code = AuthCode.from_rows(3, [[[0], [1]]])
        with pytest.raises(ValueError):
            ac.p_ks(code)
        assert ac.analyze(code).p_ks is None


class TestClosedFormValues:
    @pytest.mark.parametrize(
        "base, v, k",
        [((0, 1, 3), 7, 3), ((0, 1, 3, 9), 13, 4), ((1, 3, 4, 5, 9), 11, 5)],
    )
    def test_sbibd(self, base, v, k):
        code = sbibd_code(base, v)
        assert ac.p_d1(code) == ac.p_ks(code) == F(k - 1, v - 1)
        assert ac.has_perfect_secrecy(code)

    @pytest.mark.parametrize(
        "bases, v",
        [([(0, 1, 4), (0, 2, 8)], 13), ([(0, 1, 4), (0, 2, 9), (0, 5, 11)], 19)],
    )
    def test_bibd_lambda1(self, bases, v):
        code = bibd_code(bases, v, 3)
        assert ac.p_d0(code) == F(3, v)
        assert ac.p_d1(code) == F(2, v - 1)
        assert ac.p_ks(code) == F(1, 3)

    def test_edf(self, edf19):
        n, k, c = 19, 3, 3
        assert ac.p_d1(edf19) == F(c * (k - 1), n - 1)
        small = AuthCode.from_rows(9, develop([[0, 1], [2, 4]], 9).rows)
        assert ac.p_d1(small) == ac.p_ks(small) == F(2 * 1, 8)

    def test_splitting(self, split25):
        small = AuthCode.from_rows(9, develop([[0, 1], [2, 4]], 9).rows)
        assert ac.p_ks(small) == F(1, 4)
        assert ac.p_ks(split25) == F(1, 6)


class TestSecrecy:
    def test_fano(self, fano, edf19):
        ac.perfect_secrecy(fano)
        ac.perfect_secrecy(edf19)

    def test_counterexample(self):
        code = AuthCode.from_rows(3, [[[0], [1]], [[0], [2]]])
        pm_s, pm = joint_bayes(code)
        violations = [(m, s) for m in range(3) for s in range(2) if pm_s.get((m, s), 0) != pm.get(m, 0)]
        assert (1, 1) in violations
        with pytest.raises(SecrecyError) as err:
            ac.perfect_secrecy(code)
        e = err.value
        assert (e.m, e.s) == violations[0]
        assert (e.lhs, e.rhs) == (pm_s[(e.m, e.s)], pm[e.m])

    @given(seeds)
    def test_matches_bayes(self, seed):
        code = random_code(random.Random(seed))
        pm_s, pm = joint_bayes(code)
        expected = all(pm_s.get((m, s), 0) == pm.get(m, 0) for m in range(code.v) for s in range(code.u))
        assert ac.has_perfect_secrecy(code) == expected


class TestRegularity:
    def test_values(self, fano, bibd13, edf19):
        assert ac.column_regular(fano) == 1
        assert ac.column_regular(bibd13) == 2
        assert ac.column_regular(edf19) == 3

    def test_counterexample(self):
        code = AuthCode.from_rows(3, [[[0], [1]], [[0], [2]]])
        with pytest.raises(RegularityError) as err:
            ac.column_regular(code)
        assert (err.value.column, err.value.message, err.value.count) == (0, 0, 2)

    def test_splitting_number(self, fano, edf19):
        assert ac.splitting_number(fano) == 1
        assert ac.splitting_number(edf19) == 3
        assert ac.splitting_number(AuthCode.from_rows(4, [[[0], [1, 2]]])) is None


class TestBounds:
    def test_values(self):
        assert ac.bounds(3, 7, 1) == (F(3, 7), F(1, 3))
        assert ac.bounds(3, 19, 3) == (F(9, 19), F(1, 3))
        assert ac.bounds(1, 5, 2) == (F(2, 5), 0)
        with pytest.raises(ValueError):
            ac.bounds(1, 1, 1)


class TestProperties:
    @settings(max_examples=300)
    @given(seeds)
    def test_counting_identity(self, seed):
        code = random_code(random.Random(seed))
        assert sum(len(ac.kappa(code, m)) for m in range(code.v)) == sum(len(ac.mu(code, k)) for k in range(code.b))

    @settings(max_examples=300)
    @given(seeds)
    def test_impersonation_lower_bound(self, seed):
        code = random_code(random.Random(seed))
        c = ac.splitting_number(code)
        assert ac.p_d0(code) >= F(c * code.u, code.v)

    @settings(max_examples=300)
    @given(seeds)
    def test_bound_met_iff_kappa_constant(self, seed):
        code = random_code(random.Random(seed))
        c = ac.splitting_number(code)
        target = F(code.b * c * code.u, code.v)
        assert (ac.p_d0(code) == F(c * code.u, code.v)) == all(len(ac.kappa(code, m)) == target for m in range(code.v))

    @settings(max_examples=300)
    @given(seeds)
    def test_secrecy_biconditional(self, seed):
        code = random_code(random.Random(seed))
        c = ac.splitting_number(code)
        lhs = ac.p_d0(code) == F(c * code.u, code.v) and ac.has_perfect_secrecy(code)
        assert lhs == ac.is_column_regular(code)

    @given(seeds)
    def test_probabilities_in_range(self, seed):
        rep = ac.analyze(random_code(random.Random(seed)))
        for x in (rep.p_d0, rep.p_d1, rep.p_ks, rep.p_d1_conditional_max, rep.p_ks_conditional_max):
            assert x is None or 0 <= x <= 1
        assert rep.p_d1 <= rep.p_d1_conditional_max or rep.p_d1 == 0


class TestReport:
    def test_fano_text(self, fano):
        text = ac.analyze(fano).to_text()
        keys = [line.split(" = ")[0] for line in text.splitlines()]
        assert keys == [
            "p_d0", "p_d1", "p_ks", "p_d1_conditional_max", "p_ks_conditional_max",
            "secrecy", "column_regular", "splitting", "bound_p_d0", "bound_p_d1",
        ]
        assert "p_d0 = 3/7" in text and "secrecy = ok" in text and "column_regular = 1" in text
        assert "bound_p_d1 = 1/3 (met)" in text

    def test_bibd13(self, bibd13):
        rep = ac.analyze(bibd13)
        assert (rep.p_d0, rep.p_d1, rep.p_ks) == (F(3, 13), F(1, 6), F(1, 3))

    def test_nonuniform_sources(self, fano):
        code = fano.with_sources([F(1, 2), F(1, 4), F(1, 4)])
        rep = ac.analyze(code)
        assert rep.secrecy_ok  # column-regular codes keep secrecy for any source distribution
        assert rep.p_d0 == F(3, 7)
