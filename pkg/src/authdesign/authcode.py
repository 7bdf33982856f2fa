"""Authentication codes and the exact values of the attacks on them.

A code is an encoding matrix: row ``K`` is a key, column ``s`` a source and
cell ``(K, s)`` the set of messages ``e_K(s)``. Keys are uniform, encoding
inside a cell is uniform, sources follow ``source_dist``.

Adversary values average over what the attacker observes, with the best
substitution chosen separately for every observation. The worst
observation is kept alongside as ``conditional_max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .designs import OrderedDesign
from .foundations import Distribution, as_distribution, dist_uniform, format_rat


class SecrecyError(ValueError):
    def __init__(self, m: int, s: int, lhs: Fraction, rhs: Fraction) -> None:
        super().__init__(
            f"Prob[m={m} | s={s}] = {format_rat(lhs)} but Prob[m={m}] = {format_rat(rhs)}"
        )
        self.m, self.s, self.lhs, self.rhs = m, s, lhs, rhs


class RegularityError(ValueError):
    def __init__(self, column: int, message: int, count: int, expected: Fraction) -> None:
        super().__init__(
            f"column {column}: message {message} occurs {count} times, expected {format_rat(expected)}"
        )
        self.column, self.message, self.count, self.expected = column, message, count, expected


@dataclass(frozen=True)
class GameValue:
    """Optimal adversary value and the strategy achieving it.

    ``strategy`` maps each observation to its best substitute (smallest id
    on ties); observations with no winning substitute are omitted.
    """

    value: Fraction
    conditional_max: Fraction
    strategy: dict[int, int] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class AuthCode:
    matrix: OrderedDesign
    source_dist: Distribution

    def __post_init__(self) -> None:
        if self.matrix.b < 1:
            raise ValueError("a code needs at least one key")
        if len(self.source_dist) != self.matrix.u:
            raise ValueError(
                f"source distribution has {len(self.source_dist)} entries for {self.matrix.u} sources"
            )

    @classmethod
    def from_rows(
        cls,
        v: int,
        rows: Sequence[Sequence[Iterable[int]]],
        source_dist: Sequence[Fraction] | Distribution | None = None,
    ) -> AuthCode:
        matrix = OrderedDesign.from_rows(v, rows)
        dist = dist_uniform(matrix.u) if source_dist is None else as_distribution(source_dist)
        return cls(matrix, dist)

    @property
    def v(self) -> int:
        return self.matrix.v

    @property
    def b(self) -> int:
        return self.matrix.b

    @property
    def u(self) -> int:
        return self.matrix.u

    def cell(self, key: int, source: int) -> frozenset[int]:
        return self.matrix.rows[key][source]

    def with_sources(self, source_dist: Sequence[Fraction] | Distribution) -> AuthCode:
        return AuthCode(self.matrix, as_distribution(source_dist))

    @cached_property
    def _decode_table(self) -> list[dict[int, int]]:
        return [{m: s for s, cell in enumerate(row) for m in cell} for row in self.matrix.rows]

    @cached_property
    def _kappa_table(self) -> list[list[tuple[int, int]]]:
        table: list[list[tuple[int, int]]] = [[] for _ in range(self.v)]
        for k, row in enumerate(self.matrix.rows):
            for s, cell in enumerate(row):
                for m in cell:
                    table[m].append((k, s))
        return table


def _check_key(code: AuthCode, key: int) -> None:
    if not 0 <= key < code.b:
        raise IndexError(f"key {key} outside 0..{code.b - 1}")


def _check_message(code: AuthCode, m: int) -> None:
    if not 0 <= m < code.v:
        raise IndexError(f"message {m} outside 0..{code.v - 1}")


def decode(code: AuthCode, key: int, m: int) -> int | None:
    """The source ``s`` with ``m`` in ``e_K(s)``, or ``None``."""
    _check_key(code, key)
    _check_message(code, m)
    return code._decode_table[key].get(m)


def mu(code: AuthCode, key: int) -> frozenset[int]:
    _check_key(code, key)
    return frozenset().union(*code.matrix.rows[key])


def kappa(code: AuthCode, m: int) -> frozenset[int]:
    _check_message(code, m)
    return frozenset(k for k, _ in code._kappa_table[m])


def kappa_s(code: AuthCode, m: int, s: int) -> frozenset[int]:
    _check_message(code, m)
    return frozenset(k for k, t in code._kappa_table[m] if t == s)


def p_d0(code: AuthCode) -> Fraction:
    """Impersonation: the best single message, accepted with prob |kappa(m)|/b."""
    return Fraction(max(len(code._kappa_table[m]) for m in range(code.v)), code.b)


def _best(wins: dict[int, Fraction]) -> tuple[Fraction, int | None]:
    best, arg = Fraction(0), None
    for x in sorted(wins):
        if wins[x] > best:
            best, arg = wins[x], x
    return best, arg


def _weights(code: AuthCode) -> list[list[Fraction]]:
    # joint Prob[K, s, m] for any m in the cell, per (K, s)
    pk = Fraction(1, code.b)
    return [[pk * code.source_dist[s] / len(cell) for s, cell in enumerate(row)] for row in code.matrix.rows]


def message_substitution(code: AuthCode) -> GameValue:
    weights = _weights(code)
    win: list[dict[int, Fraction]] = [{} for _ in range(code.v)]
    prob_m = [Fraction(0)] * code.v
    for k, row in enumerate(code.matrix.rows):
        for s, cell in enumerate(row):
            w = weights[k][s]
            if not w:
                continue
            others = [m2 for t, c2 in enumerate(row) if t != s for m2 in c2]
            for m in cell:
                prob_m[m] += w
                table = win[m]
                for m2 in others:
                    table[m2] = table.get(m2, Fraction(0)) + w
    total, worst, strategy = Fraction(0), Fraction(0), {}
    for m in range(code.v):
        best, arg = _best(win[m])
        total += best
        if arg is not None:
            strategy[m] = arg
            worst = max(worst, best / prob_m[m])
    return GameValue(total, worst, strategy)


def key_substitution(code: AuthCode) -> GameValue:
    if code.b < 2:
        raise ValueError("key substitution needs at least two keys")
    kappa_table = code._kappa_table
    pk = Fraction(1, code.b)
    total, worst, strategy = Fraction(0), Fraction(0), {}
    for k, row in enumerate(code.matrix.rows):
        wins: dict[int, Fraction] = {}
        for s, cell in enumerate(row):
            pm = code.source_dist[s] / len(cell)
            if not pm:
                continue
            for m in cell:
                for k2, s2 in kappa_table[m]:
                    if s2 != s:
                        wins[k2] = wins.get(k2, Fraction(0)) + pm
        best, arg = _best(wins)
        total += pk * best
        if arg is not None:
            strategy[k] = arg
            worst = max(worst, best)
    return GameValue(total, worst, strategy)


def p_d1(code: AuthCode) -> Fraction:
    return message_substitution(code).value


def p_ks(code: AuthCode) -> Fraction:
    return key_substitution(code).value


def _prob_m_given_s(code: AuthCode) -> list[list[Fraction]]:
    pk = Fraction(1, code.b)
    table = [[Fraction(0)] * code.u for _ in range(code.v)]
    for row in code.matrix.rows:
        for s, cell in enumerate(row):
            for m in cell:
                table[m][s] += pk / len(cell)
    return table


def perfect_secrecy(code: AuthCode) -> None:
    """Raise :class:`SecrecyError` at the first ``(m, s)`` with Prob[m|s] != Prob[m]."""
    cond = _prob_m_given_s(code)
    for m in range(code.v):
        pm = sum((cond[m][s] * code.source_dist[s] for s in range(code.u)), Fraction(0))
        for s in range(code.u):
            if cond[m][s] != pm:
                raise SecrecyError(m, s, cond[m][s], pm)


def has_perfect_secrecy(code: AuthCode) -> bool:
    try:
        perfect_secrecy(code)
    except SecrecyError:
        return False
    return True


def column_regular(code: AuthCode) -> int:
    """Common number of occurrences of each message in each column."""
    v = code.v
    expected = Fraction(sum(len(row[0]) for row in code.matrix.rows), v)
    for s in range(code.u):
        counts = [0] * v
        for row in code.matrix.rows:
            for m in row[s]:
                counts[m] += 1
        for m in range(v):
            if counts[m] != expected:
                raise RegularityError(s, m, counts[m], expected)
    return int(expected)


def is_column_regular(code: AuthCode) -> bool:
    try:
        column_regular(code)
    except RegularityError:
        return False
    return True


def splitting_number(code: AuthCode) -> int | None:
    """Common cell size ``c``, or ``None`` if cells differ in size."""
    sizes = {len(cell) for row in code.matrix.rows for cell in row}
    return sizes.pop() if len(sizes) == 1 else None


def bounds(u: int, v: int, c: int) -> tuple[Fraction, Fraction]:
    """Lower bounds ``(cu/v, c(u-1)/(v-1))`` on impersonation and substitution."""
    if v < 2:
        raise ValueError("bounds need at least two messages")
    return Fraction(c * u, v), Fraction(c * (u - 1), v - 1)


@dataclass(frozen=True)
class AnalysisReport:
    p_d0: Fraction
    p_d1: Fraction
    p_ks: Fraction | None
    p_d1_conditional_max: Fraction
    p_ks_conditional_max: Fraction | None
    secrecy: SecrecyError | None
    column_regular: int | RegularityError
    splitting: int | None
    bound_p_d0: Fraction | None
    bound_p_d1: Fraction | None

    @property
    def secrecy_ok(self) -> bool:
        return self.secrecy is None

    def lines(self) -> list[str]:
        def opt(x: Fraction | None) -> str:
            return "n/a" if x is None else format_rat(x)

        def bound(b: Fraction | None, actual: Fraction) -> str:
            if b is None:
                return "n/a"
            return f"{format_rat(b)} ({'met' if actual == b else 'not met'})"

        if self.secrecy is None:
            secrecy = "ok"
        else:
            e = self.secrecy
            secrecy = f"fail m={e.m} s={e.s} {format_rat(e.lhs)} != {format_rat(e.rhs)}"
        if isinstance(self.column_regular, RegularityError):
            e = self.column_regular
            regular = f"fail column={e.column} message={e.message} count={e.count}"
        else:
            regular = str(self.column_regular)
        return [
            f"p_d0 = {format_rat(self.p_d0)}",
            f"p_d1 = {format_rat(self.p_d1)}",
            f"p_ks = {opt(self.p_ks)}",
            f"p_d1_conditional_max = {format_rat(self.p_d1_conditional_max)}",
            f"p_ks_conditional_max = {opt(self.p_ks_conditional_max)}",
            f"secrecy = {secrecy}",
            f"column_regular = {regular}",
            f"splitting = {'nonuniform' if self.splitting is None else self.splitting}",
            f"bound_p_d0 = {bound(self.bound_p_d0, self.p_d0)}",
            f"bound_p_d1 = {bound(self.bound_p_d1, self.p_d1)}",
        ]

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"


def analyze(code: AuthCode) -> AnalysisReport:
    ms = message_substitution(code)
    ks = key_substitution(code) if code.b >= 2 else None
    try:
        perfect_secrecy(code)
        secrecy = None
    except SecrecyError as exc:
        secrecy = exc
    try:
        regular: int | RegularityError = column_regular(code)
    except RegularityError as exc:
        regular = exc
    c = splitting_number(code)
    b0 = b1 = None
    if c is not None and code.v >= 2:
        b0, b1 = bounds(code.u, code.v, c)
    return AnalysisReport(
        p_d0=p_d0(code),
        p_d1=ms.value,
        p_ks=None if ks is None else ks.value,
        p_d1_conditional_max=ms.conditional_max,
        p_ks_conditional_max=None if ks is None else ks.conditional_max,
        secrecy=secrecy,
        column_regular=regular,
        splitting=c,
        bound_p_d0=b0,
        bound_p_d1=b1,
    )
