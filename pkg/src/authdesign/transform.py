"""Conversions between codes and (2,2)-threshold schemes, and dual codes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import authcode as ac
from .authcode import AuthCode, RegularityError
from .designs import OrderedDesign
from .foundations import format_rat
from .threshold import ThresholdScheme, Rule, robustness


class ConversionError(ValueError):
    pass


def authcode_to_threshold(code: AuthCode) -> ThresholdScheme:
    """Share 1 is the key, share 2 the message, the secret the source."""
    pk = Fraction(1, code.b)
    rules = [
        Rule(k, m, s, pk / len(cell))
        for k, row in enumerate(code.matrix.rows)
        for s, cell in enumerate(row)
        for m in cell
    ]
    return ThresholdScheme(code.source_dist, code.b, code.v, tuple(rules))


def threshold_to_authcode(scheme: ThresholdScheme) -> AuthCode:
    """Read ``e_{v1}(s) = {v2 : Rec(v1, v2) = s}`` off the rule table.

    The code model has uniform keys independent of the source and uniform
    encoding inside a cell, so the scheme must have exactly that shape.
    """
    n, a1 = scheme.n_secrets, scheme.a1
    cells: list[list[dict[int, Fraction]]] = [[{} for _ in range(n)] for _ in range(a1)]
    for r in scheme.rules:
        cells[r.v1][r.s][r.v2] = r.w
    for v1 in range(a1):
        for s in range(n):
            if not cells[v1][s]:
                raise ConversionError(f"empty cell: share v1={v1} has no v2 reconstructing secret {s}")
    target = Fraction(1, a1)
    for v1 in range(a1):
        for s in range(n):
            ws = cells[v1][s]
            mass = sum(ws.values(), Fraction(0))
            if mass != target:
                raise ConversionError(
                    f"share v1={v1} has probability {format_rat(mass)} given secret {s}, not uniform {format_rat(target)}"
                )
            if len(set(ws.values())) != 1:
                raise ConversionError(f"v2 is not uniform given v1={v1} and secret {s}")
    rows = tuple(tuple(frozenset(cells[v1][s]) for s in range(n)) for v1 in range(a1))
    return AuthCode(OrderedDesign(v=scheme.a2, u=n, rows=rows), scheme.secret_dist)


def dual(code: AuthCode) -> AuthCode:
    """Swap keys and messages: dual key ``m`` has cell ``kappa(m, s)`` for source ``s``.

    Only defined for column-regular codes with a uniform splitting number;
    otherwise the dual's keys or encodings would not be uniform.
    """
    if ac.splitting_number(code) is None:
        raise ConversionError("dual needs a uniform splitting number")
    try:
        ac.column_regular(code)
    except RegularityError as exc:
        raise ConversionError(f"dual needs a column-regular code: {exc}") from exc
    rows = []
    for m in range(code.v):
        row = tuple(frozenset(ac.kappa_s(code, m, s)) for s in range(code.u))
        for s, cell in enumerate(row):
            if not cell:
                raise ConversionError(f"message {m} never encodes source {s}")
        rows.append(row)
    return AuthCode(OrderedDesign(v=code.b, u=code.u, rows=tuple(rows)), code.source_dist)


@dataclass(frozen=True)
class Check:
    name: str
    lhs: object
    rhs: object

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def line(self) -> str:
        def fmt(x: object) -> str:
            return format_rat(x) if isinstance(x, Fraction) else str(x)

        return f"{self.name} = {'pass' if self.passed else 'fail'} ({fmt(self.lhs)}, {fmt(self.rhs)})"


def verify_equivalence(code: AuthCode) -> list[Check]:
    """Deception values of the converted scheme against the code's attack values."""
    if not code.source_dist.is_uniform:
        raise ValueError("equivalence is stated for uniform sources")
    ms, ks = ac.p_d1(code), ac.p_ks(code)
    rob = robustness(authcode_to_threshold(code))
    return [
        Check("epsilon_equals_max_attack", rob.epsilon, max(ms, ks)),
        Check("player1_equals_p_ks", rob.player1.value, ks),
        Check("player2_equals_p_d1", rob.player2.value, ms),
    ]


def verify_duality(code: AuthCode) -> list[Check]:
    d = dual(code)
    c = ac.splitting_number(code)
    secrecy = "ok" if ac.has_perfect_secrecy(d) else "fail"
    return [
        Check("p_d1_equals_dual_p_ks", ac.p_d1(code), ac.p_ks(d)),
        Check("p_ks_equals_dual_p_d1", ac.p_ks(code), ac.p_d1(d)),
        Check("dual_splitting", Fraction(ac.splitting_number(d) or 0), Fraction(code.b * c, code.v)),
        Check("dual_secrecy", secrecy, "ok"),
        Check("dual_p_d0", ac.p_d0(d), ac.p_d0(code)),
        Check("dual_dual_identity", dual(d) == code, True),
    ]
