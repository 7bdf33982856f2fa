"""Robust (2,2)-threshold schemes given by weighted distribution rules.

A rule ``(v1, v2, s, w)`` says the dealer hands out shares ``v1`` and ``v2``
for secret ``s`` with probability ``w = Prob[(v1, v2) | s]``. Keeping the
weights conditional lets the secret distribution be swapped freely.

In the deception game one player replaces their share by another value of
their own alphabet, knowing only that share. Only deterministic
substitutions are considered: the win probability is linear in a mixed
strategy, so some pure substitution is always at least as good.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .authcode import GameValue
from .foundations import Distribution, as_distribution, dist_uniform, format_rat


class SchemeError(ValueError):
    pass


class ShareSecrecyError(ValueError):
    def __init__(self, player: int, share: int, secret: int, lhs: Fraction, rhs: Fraction) -> None:
        super().__init__(
            f"Prob[s={secret} | v{player}={share}] = {format_rat(lhs)} but Prob[s={secret}] = {format_rat(rhs)}"
        )
        self.player, self.share, self.secret, self.lhs, self.rhs = player, share, secret, lhs, rhs


@dataclass(frozen=True, order=True)
class Rule:
    v1: int
    v2: int
    s: int
    w: Fraction


@dataclass(frozen=True)
class ThresholdScheme:
    secret_dist: Distribution
    a1: int
    a2: int
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        rules = tuple(sorted(Rule(r.v1, r.v2, r.s, Fraction(r.w)) for r in self.rules))
        n = len(self.secret_dist)
        totals = [Fraction(0)] * n
        seen: dict[tuple[int, int], int] = {}
        for r in rules:
            if not (0 <= r.v1 < self.a1 and 0 <= r.v2 < self.a2):
                raise SchemeError(f"rule {r.v1} {r.v2}: share outside alphabets {self.a1}x{self.a2}")
            if not 0 <= r.s < n:
                raise SchemeError(f"rule {r.v1} {r.v2}: secret {r.s} outside 0..{n - 1}")
            if r.w <= 0:
                raise SchemeError(f"rule {r.v1} {r.v2} {r.s}: weight {format_rat(r.w)} is not positive")
            if (r.v1, r.v2) in seen:
                raise SchemeError(
                    f"shares ({r.v1}, {r.v2}) appear in more than one rule (secrets {seen[(r.v1, r.v2)]} and {r.s})"
                )
            seen[(r.v1, r.v2)] = r.s
            totals[r.s] += r.w
        for s, t in enumerate(totals):
            if t != 1:
                raise SchemeError(f"rule weights for secret {s} total {format_rat(t)}, not 1/1")
        object.__setattr__(self, "rules", rules)

    @classmethod
    def build(
        cls,
        n_secrets: int,
        a1: int,
        a2: int,
        rules: Iterable[tuple[int, int, int, Fraction]],
        secret_dist: Sequence[Fraction] | Distribution | None = None,
    ) -> ThresholdScheme:
        dist = dist_uniform(n_secrets) if secret_dist is None else as_distribution(secret_dist)
        return cls(dist, a1, a2, tuple(Rule(*r) for r in rules))

    @property
    def n_secrets(self) -> int:
        return len(self.secret_dist)

    def with_secrets(self, secret_dist: Sequence[Fraction] | Distribution) -> ThresholdScheme:
        return ThresholdScheme(as_distribution(secret_dist), self.a1, self.a2, self.rules)

    @cached_property
    def _rec_table(self) -> dict[tuple[int, int], int]:
        return {(r.v1, r.v2): r.s for r in self.rules}


def rec(scheme: ThresholdScheme, v1: int, v2: int) -> int | None:
    """Reconstructed secret, or ``None`` for the failure symbol."""
    if not (0 <= v1 < scheme.a1 and 0 <= v2 < scheme.a2):
        raise IndexError(f"shares ({v1}, {v2}) outside alphabets {scheme.a1}x{scheme.a2}")
    return scheme._rec_table.get((v1, v2))


def share_secrecy(scheme: ThresholdScheme) -> None:
    """Raise :class:`ShareSecrecyError` if a single share leaks the secret.

    Checked as ``Prob[v, s] = Prob[v] Prob[s]``, which also covers shares of
    probability zero. Player 1 is scanned before player 2.
    """
    for player in (1, 2):
        size = scheme.a1 if player == 1 else scheme.a2
        joint = [[Fraction(0)] * scheme.n_secrets for _ in range(size)]
        for r in scheme.rules:
            share = r.v1 if player == 1 else r.v2
            joint[share][r.s] += scheme.secret_dist[r.s] * r.w
        for share in range(size):
            pv = sum(joint[share], Fraction(0))
            for s in range(scheme.n_secrets):
                ps = scheme.secret_dist[s]
                if joint[share][s] != pv * ps:
                    raise ShareSecrecyError(player, share, s, joint[share][s] / pv, ps)


def has_share_secrecy(scheme: ThresholdScheme) -> bool:
    try:
        share_secrecy(scheme)
    except ShareSecrecyError:
        return False
    return True


def deception(scheme: ThresholdScheme, player: int) -> GameValue:
    """Best deception value when ``player`` (1 or 2) alters their share."""
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, not {player}")
    # rules grouped by the share the deceiver does not see
    by_other: dict[int, list[Rule]] = {}
    for r in scheme.rules:
        by_other.setdefault(r.v2 if player == 1 else r.v1, []).append(r)
    size = scheme.a1 if player == 1 else scheme.a2
    wins: list[dict[int, Fraction]] = [{} for _ in range(size)]
    prob = [Fraction(0)] * size
    for group in by_other.values():
        for r in group:
            own = r.v1 if player == 1 else r.v2
            p = scheme.secret_dist[r.s] * r.w
            prob[own] += p
            if not p:
                continue
            for r2 in group:
                if r2.s != r.s:
                    alt = r2.v1 if player == 1 else r2.v2
                    wins[own][alt] = wins[own].get(alt, Fraction(0)) + p
    total, worst, strategy = Fraction(0), Fraction(0), {}
    for own in range(size):
        best, arg = Fraction(0), None
        for alt in sorted(wins[own]):
            if wins[own][alt] > best:
                best, arg = wins[own][alt], alt
        total += best
        if arg is not None:
            strategy[own] = arg
            worst = max(worst, best / prob[own])
    return GameValue(total, worst, strategy)


@dataclass(frozen=True)
class Robustness:
    epsilon: Fraction
    player1: GameValue
    player2: GameValue

    @property
    def conditional_max(self) -> Fraction:
        return max(self.player1.conditional_max, self.player2.conditional_max)


def robustness(scheme: ThresholdScheme) -> Robustness:
    p1, p2 = deception(scheme, 1), deception(scheme, 2)
    return Robustness(max(p1.value, p2.value), p1, p2)
