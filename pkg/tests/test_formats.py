import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from authdesign.authcode import splitting_number
from authdesign.designs import develop
from authdesign.formats import (
    BaseBlocks,
    ParseError,
    detect,
    emit_authcode,
    emit_baseblocks,
    emit_design,
    emit_threshold,
    parse_authcode,
    parse_baseblocks,
    parse_design,
    parse_dist,
    parse_threshold,
)
from authdesign.instances import random_code
from authdesign.transform import authcode_to_threshold

FANO_TEXT = """\
%AUTHCODE v=7 b=7 u=3
key 0: 0 | 1 | 3
key 1: 1 | 2 | 4
key 2: 2 | 3 | 5
key 3: 3 | 4 | 6
key 4: 4 | 5 | 0
key 5: 5 | 6 | 1
key 6: 6 | 0 | 2
"""


def test_fano_parse(fano):
    assert parse_authcode(FANO_TEXT) == fano
    assert emit_authcode(fano) == FANO_TEXT


def test_comments_names_and_spacing(fano):
    messy = "# the Fano code\n%AUTHCODE  u=3 b=7 v=7\nsources a b c\n" + "\n".join(
        f"key  {k}:{row.replace(' | ', '|')}   # row {k}"
        for k, row in reversed(list(enumerate(l.split(":")[1] for l in FANO_TEXT.splitlines()[1:])))
    )
    assert parse_authcode(messy) == fano
    assert emit_authcode(parse_authcode(messy)) == FANO_TEXT


def test_detect():
    assert detect(FANO_TEXT) == "AUTHCODE"
    assert detect("# c\n\n%THRESHOLD22 s=1 a1=1 a2=1\nrule 0 0 0 1") == "THRESHOLD22"


class TestRoundTrips:
    def test_design(self, split25):
        text = emit_design(split25.matrix, 2)
        df = parse_design(text)
        assert df.design == split25.matrix and df.c == 2
        assert emit_design(df.design, df.c) == text

    def test_baseblocks(self):
        bb = BaseBlocks(25, 3, 2, ((frozenset({0, 1}), frozenset({2, 4}), frozenset({12, 20})),))
        text = emit_baseblocks(bb)
        assert text == "%BASEBLOCKS n=25 u=3 c=2\nbase 0 1 | 2 4 | 12 20\n"
        assert parse_baseblocks(text) == bb

    def test_threshold(self, fano):
        scheme = authcode_to_threshold(fano)
        text = emit_threshold(scheme)
        assert sum(l.startswith("rule ") for l in text.splitlines()) == 21
        assert parse_threshold(text) == scheme
        assert emit_threshold(parse_threshold(text)) == text

    @settings(max_examples=200)
    @given(st.integers(0, 2**32))
    def test_random(self, seed):
        code = random_code(random.Random(seed))
        text = emit_authcode(code)
        assert parse_authcode(text) == code
        assert emit_authcode(parse_authcode(text)) == text
        scheme = authcode_to_threshold(code)
        ttext = emit_threshold(scheme)
        assert parse_threshold(ttext) == scheme
        assert emit_threshold(parse_threshold(ttext)) == ttext
        if splitting_number(code) is not None:
            dtext = emit_design(code.matrix)
            assert parse_design(dtext).design == code.matrix
            assert emit_design(parse_design(dtext).design) == dtext


def test_noncanonical_rationals_canonicalized():
    text = "%THRESHOLD22 s=2 a1=1 a2=2\nsecretdist 2/4 3/6\nrule 0 0 0 2/2\nrule 0 1 1 4/4\n"
    scheme = parse_threshold(text)
    assert scheme.secret_dist.is_uniform
    assert emit_threshold(scheme) == "%THRESHOLD22 s=2 a1=1 a2=2\nrule 0 0 0 1/1\nrule 0 1 1 1/1\n"
    code_text = "%AUTHCODE v=2 b=1 u=2\nsourcedist 6/8 1/4\nkey 0: 0 | 1\n"
    assert "sourcedist 3/4 1/4" in emit_authcode(parse_authcode(code_text))


def test_parse_dist():
    assert parse_dist("1/2, 1/4 1/4") == (F(1, 2), F(1, 4), F(1, 4))


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("%AUTHCODE v=7 b=1 u=3\nkey 0: 0 1 3\n", 2, "separated by '|'"),
        ("%AUTHCODE v=7 b=1 b=1 u=3\n", 1, "duplicate header key"),
        ("%AUTHCODE v=7 b=1\n", 1, "missing u"),
        ("%AUTHCODE v=7 b=1 u=1 z=3\n", 1, "unknown header key"),
        ("%FOO v=1\n", 1, "unknown header"),
        ("key 0: 1\n", 1, "%HEADER"),
        ("%AUTHCODE v=7 b=1 u=1\nkey 1: 0\n", 2, "outside 0..0"),
        ("%AUTHCODE v=7 b=2 u=1\nkey 0: 0\nkey 0: 1\n", 3, "duplicate key 0"),
        ("%AUTHCODE v=3 b=1 u=1\nkey 0: 7\n", 2, "key 0"),
        ("%AUTHCODE v=3 b=1 u=2\n\n# x\nkey 0: 0 1 | 1\n", 4, "key 0"),
        ("%AUTHCODE v=3 b=1 u=2\nkey 0: 0 | \n", 2, "empty cell"),
        ("%AUTHCODE v=3 b=1 u=2\nkey 0: x | 1\n", 2, "integer"),
        ("%AUTHCODE v=3 b=1 u=2\nsourcedist 1/2 1/3\nkey 0: 0 | 1\n", 2, "5/6"),
        ("%THRESHOLD22 s=1 a1=1 a2=2\nrule 0 0 0 1/2\nrule 0 0 0 1/2\n", 3, "already"),
        ("%THRESHOLD22 s=1 a1=1 a2=1\nrule 0 0 1 1\n", 2, "out of range"),
        ("%THRESHOLD22 s=1 a1=1 a2=1\nrule 0 0 0 1/0\n", 2, ""),
        ("%BASEBLOCKS n=7 u=1 c=3\nbase 0 1 9\n", 2, "outside Z_7"),
        ("%DESIGN v=7 u=2 c=1\nrow 0 | 1\nrow 2 | 2\n", 3, "row 1"),
    ],
)
def test_errors(text, line, fragment):
    parser = {"AUTHCODE": parse_authcode, "THRESHOLD22": parse_threshold, "BASEBLOCKS": parse_baseblocks,
              "DESIGN": parse_design}
    kind = next((k for k in parser if f"%{k} " in text), "AUTHCODE")
    with pytest.raises(ParseError) as info:
        parser[kind](text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")
    assert fragment in str(info.value)


def test_missing_keys_reported():
    with pytest.raises(ParseError, match="missing key lines"):
        parse_authcode("%AUTHCODE v=3 b=2 u=1\nkey 0: 0\n")


def test_scheme_totals_checked():
    with pytest.raises(ParseError, match="total"):
        parse_threshold("%THRESHOLD22 s=1 a1=1 a2=2\nrule 0 0 0 1/2\n")


def test_design_emits_developed():
    text = emit_design(develop([[0, 1, 3]], 7), 3)
    assert text.splitlines()[1] == "row 0 1 3"
