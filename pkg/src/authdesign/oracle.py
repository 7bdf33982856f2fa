"""Brute-force game evaluation and seeded Monte Carlo simulation.

Nothing here calls the analytic routines in :mod:`authdesign.authcode` or
:mod:`authdesign.threshold`; values are recomputed from the raw encoding
matrix or rule table by listing every outcome.

Monte Carlo uses NumPy's PCG64 bit generator (128-bit state). Trials are cut
into shards of ``SHARD_SIZE``; shard ``i`` is seeded with ``seed + i`` so the
result does not depend on how shards are scheduled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

import numpy as np

from .authcode import AuthCode
from .threshold import ThresholdScheme

DEFAULT_BUDGET = 10**7
SHARD_SIZE = 1 << 16
MASK64 = (1 << 64) - 1


class Attack(str, Enum):
    IMPERSONATION = "impersonation"
    MESSAGE_SUBSTITUTION = "message_substitution"
    KEY_SUBSTITUTION = "key_substitution"
    DECEPTION_P1 = "deception_p1"
    DECEPTION_P2 = "deception_p2"


CODE_ATTACKS = (Attack.IMPERSONATION, Attack.MESSAGE_SUBSTITUTION, Attack.KEY_SUBSTITUTION)
SCHEME_ATTACKS = (Attack.DECEPTION_P1, Attack.DECEPTION_P2)


class BudgetExceeded(RuntimeError):
    pass


class StrategyError(ValueError):
    pass


@dataclass(frozen=True)
class GameSpec:
    target: AuthCode | ThresholdScheme
    attack: Attack

    def __post_init__(self) -> None:
        attack = Attack(self.attack)
        object.__setattr__(self, "attack", attack)
        if isinstance(self.target, AuthCode) and attack not in CODE_ATTACKS:
            raise ValueError(f"{attack.value} is not an attack on an authentication code")
        if isinstance(self.target, ThresholdScheme) and attack not in SCHEME_ATTACKS:
            raise ValueError(f"{attack.value} is not an attack on a threshold scheme")


@dataclass(frozen=True)
class SimResult:
    trials: int
    wins: int
    estimate: Fraction
    stderr_bound: Fraction
    seed: int

    def line(self) -> str:
        return (
            f"trials={self.trials} wins={self.wins} "
            f"estimate={self.estimate.numerator}/{self.estimate.denominator} "
            f"stderr<={self.stderr_bound.numerator}/{self.stderr_bound.denominator} seed={self.seed}"
        )


# An outcome is (observation, hidden data, probability). ``wins(obs, alt, hidden)``
# decides one outcome for one substitution.

def _lookup(cells, m):
    for s, cell in enumerate(cells):
        if m in cell:
            return s
    return None


def _code_game(code: AuthCode, attack: Attack):
    rows = code.matrix.rows
    outcomes = []
    for k, row in enumerate(rows):
        for s, cell in enumerate(row):
            for m in cell:
                p = Fraction(1, code.b) * code.source_dist[s] * Fraction(1, len(cell))
                outcomes.append((k, s, m, p))
    if attack is Attack.IMPERSONATION:
        observations = [0]
        choices = list(range(code.v))
        table = [(0, (k, s, m), p) for k, s, m, p in outcomes]

        def wins(obs, alt, hidden):
            return _lookup(rows[hidden[0]], alt) is not None

    elif attack is Attack.MESSAGE_SUBSTITUTION:
        observations = list(range(code.v))
        choices = list(range(code.v))
        table = [(m, (k, s), p) for k, s, m, p in outcomes]

        def wins(obs, alt, hidden):
            got = _lookup(rows[hidden[0]], alt)
            return got is not None and got != hidden[1]

    else:
        observations = list(range(code.b))
        choices = list(range(code.b))
        table = [(k, (s, m), p) for k, s, m, p in outcomes]

        def wins(obs, alt, hidden):
            got = _lookup(rows[alt], hidden[1])
            return got is not None and got != hidden[0]

    return observations, choices, table, wins


def _scheme_game(scheme: ThresholdScheme, attack: Attack):
    rec = {}
    for r in scheme.rules:
        rec[(r.v1, r.v2)] = r.s
    table = []
    for r in scheme.rules:
        p = scheme.secret_dist[r.s] * r.w
        if attack is Attack.DECEPTION_P1:
            table.append((r.v1, (r.v2, r.s), p))
        else:
            table.append((r.v2, (r.v1, r.s), p))
    if attack is Attack.DECEPTION_P1:
        size = scheme.a1

        def wins(obs, alt, hidden):
            got = rec.get((alt, hidden[0]))
            return got is not None and got != hidden[1]

    else:
        size = scheme.a2

        def wins(obs, alt, hidden):
            got = rec.get((hidden[0], alt))
            return got is not None and got != hidden[1]

    return list(range(size)), list(range(size)), table, wins


def _game(spec: GameSpec):
    if isinstance(spec.target, AuthCode):
        return _code_game(spec.target, spec.attack)
    return _scheme_game(spec.target, spec.attack)


def _substitutes(spec: GameSpec, obs: int, choices: list[int]) -> list[int]:
    if spec.attack is Attack.IMPERSONATION:
        return choices
    return [x for x in choices if x != obs]


def exhaustive_value(
    spec: GameSpec, budget: int = DEFAULT_BUDGET, full_strategy_space: bool = False
) -> Fraction:
    """Exact optimal adversary value by enumeration.

    By default every substitute is tried against every outcome of every
    observation and the best is kept per observation. With
    ``full_strategy_space`` every map from observations to substitutes is
    enumerated instead; this is only feasible for tiny instances and exists
    to confirm that the per-observation maximum is the global one.
    """
    observations, choices, table, wins = _game(spec)
    by_obs: dict[int, list] = {o: [] for o in observations}
    for obs, hidden, p in table:
        by_obs[obs].append((hidden, p))

    if full_strategy_space:
        option_lists = [_substitutes(spec, o, choices) or [None] for o in observations]
        n_strategies = math.prod(len(opts) for opts in option_lists)
        cost = n_strategies * len(table)
        if cost > budget:
            raise BudgetExceeded(f"{cost} outcome evaluations exceed budget {budget}")
        best = Fraction(0)
        for strategy in itertools.product(*option_lists):
            total = Fraction(0)
            for o, alt in zip(observations, strategy):
                if alt is None:
                    continue
                for hidden, p in by_obs[o]:
                    if wins(o, alt, hidden):
                        total += p
            best = max(best, total)
        return best

    cost = sum(len(_substitutes(spec, o, choices)) * len(by_obs[o]) for o in observations)
    if cost > budget:
        raise BudgetExceeded(f"{cost} outcome evaluations exceed budget {budget}")
    value = Fraction(0)
    for o in observations:
        best = Fraction(0)
        for alt in _substitutes(spec, o, choices):
            total = Fraction(0)
            for hidden, p in by_obs[o]:
                if wins(o, alt, hidden):
                    total += p
            best = max(best, total)
        value += best
    return value


def best_strategy(spec: GameSpec, budget: int = DEFAULT_BUDGET) -> dict[int, int]:
    """Per-observation optimal substitution, smallest id on ties."""
    observations, choices, table, wins = _game(spec)
    cost = len(observations) * len(choices) * len(table)
    if cost > budget:
        raise BudgetExceeded(f"{cost} outcome evaluations exceed budget {budget}")
    strategy = {}
    for o in observations:
        rows = [(hidden, p) for obs, hidden, p in table if obs == o]
        best, arg = Fraction(-1), None
        for alt in _substitutes(spec, o, choices):
            total = sum((p for hidden, p in rows if wins(o, alt, hidden)), Fraction(0))
            if total > best:
                best, arg = total, alt
        if arg is not None:
            strategy[o] = arg
    return strategy


def exhaustive_epsilon(scheme: ThresholdScheme, budget: int = DEFAULT_BUDGET) -> Fraction:
    return max(
        exhaustive_value(GameSpec(scheme, Attack.DECEPTION_P1), budget),
        exhaustive_value(GameSpec(scheme, Attack.DECEPTION_P2), budget),
    )


def stderr_bound(trials: int) -> Fraction:
    """Rational ceiling of ``1/(2 sqrt(trials))``, which bounds the standard
    error of a Bernoulli mean whatever the success probability."""
    if trials < 1:
        raise ValueError("trials must be positive")
    return Fraction(1, 2 * math.isqrt(trials))


def _sampler(weights: list[Fraction]):
    # exact discrete sampling: integer draw against integer cumulative weights
    den = math.lcm(*(w.denominator for w in weights))
    cum = np.cumsum([int(w * den) for w in weights]).astype(object)
    return den, cum


def _draw(rng: np.random.Generator, den: int, cum, size: int) -> np.ndarray:
    if den < (1 << 62):
        draws = rng.integers(0, den, size=size, dtype=np.int64)
        return np.searchsorted(np.asarray(cum, dtype=np.int64), draws, side="right")
    # very large denominators: draw exactly from Python integers
    bits = den.bit_length() + 64
    raw = rng.integers(0, 1 << 62, size=(size, bits // 62 + 1), dtype=np.int64)
    out = np.empty(size, dtype=np.int64)
    for i in range(size):
        x = 0
        for word in raw[i]:
            x = (x << 62) | int(word)
        x %= den
        out[i] = int(np.searchsorted(cum, x, side="right"))
    return out


def _normalize_strategy(spec: GameSpec, strategy: Mapping[int, int] | int) -> dict[int, int]:
    observations, choices, _, _ = _game(spec)
    if spec.attack is Attack.IMPERSONATION:
        if isinstance(strategy, Mapping):
            if set(strategy) != {0}:
                raise StrategyError("impersonation strategy is a single message (or {0: m})")
            strategy = strategy[0]
        if strategy not in choices:
            raise StrategyError(f"message {strategy} outside 0..{len(choices) - 1}")
        return {0: int(strategy)}
    if not isinstance(strategy, Mapping):
        raise StrategyError("substitution strategy must map observations to substitutes")
    out = {}
    for o in observations:
        alt = strategy.get(o)
        if alt is None:
            # no useful move for this observation: any other value loses or ties
            alt = next((x for x in choices if x != o), None)
            if alt is None:
                raise StrategyError(f"no substitute exists for observation {o}")
        if alt == o:
            raise StrategyError(f"strategy maps observation {o} to itself")
        if alt not in choices:
            raise StrategyError(f"substitute {alt} for observation {o} out of range")
        out[o] = int(alt)
    return out


def _code_shard(code: AuthCode, attack: Attack, strat: dict[int, int], rng, n: int, src) -> int:
    b, u, v = code.b, code.u, code.v
    maxc = max(len(cell) for row in code.matrix.rows for cell in row)
    cells = np.zeros((b, u, maxc), dtype=np.int64)
    sizes = np.zeros((b, u), dtype=np.int64)
    dec = np.full((b, v), -1, dtype=np.int64)
    for k, row in enumerate(code.matrix.rows):
        for s, cell in enumerate(row):
            ms = sorted(cell)
            cells[k, s, : len(ms)] = ms
            sizes[k, s] = len(ms)
            dec[k, ms] = s
    keys = rng.integers(0, b, size=n)
    srcs = _draw(rng, src[0], src[1], n)
    idx = rng.integers(0, sizes[keys, srcs])
    msgs = cells[keys, srcs, idx]
    if attack is Attack.IMPERSONATION:
        got = dec[keys, strat[0]]
        return int(np.count_nonzero(got >= 0))
    if attack is Attack.MESSAGE_SUBSTITUTION:
        table = np.array([strat[m] for m in range(v)], dtype=np.int64)
        got = dec[keys, table[msgs]]
    else:
        table = np.array([strat[k] for k in range(b)], dtype=np.int64)
        got = dec[table[keys], msgs]
    return int(np.count_nonzero((got >= 0) & (got != srcs)))


def _scheme_shard(scheme: ThresholdScheme, attack: Attack, strat: dict[int, int], rng, n: int, joint) -> int:
    rules = scheme.rules
    rec = np.full((scheme.a1, scheme.a2), -1, dtype=np.int64)
    for r in rules:
        rec[r.v1, r.v2] = r.s
    v1 = np.array([r.v1 for r in rules], dtype=np.int64)
    v2 = np.array([r.v2 for r in rules], dtype=np.int64)
    sec = np.array([r.s for r in rules], dtype=np.int64)
    picks = _draw(rng, joint[0], joint[1], n)
    if attack is Attack.DECEPTION_P1:
        table = np.array([strat[x] for x in range(scheme.a1)], dtype=np.int64)
        got = rec[table[v1[picks]], v2[picks]]
    else:
        table = np.array([strat[x] for x in range(scheme.a2)], dtype=np.int64)
        got = rec[v1[picks], table[v2[picks]]]
    return int(np.count_nonzero((got >= 0) & (got != sec[picks])))


def monte_carlo(spec: GameSpec, strategy: Mapping[int, int] | int, trials: int, seed: int) -> SimResult:
    """Play the game ``trials`` times against a fixed substitution strategy."""
    if trials < 1:
        raise ValueError("trials must be positive")
    seed &= MASK64
    strat = _normalize_strategy(spec, strategy)
    target = spec.target
    if isinstance(target, AuthCode):
        dist = _sampler(list(target.source_dist))
    else:
        dist = _sampler([target.secret_dist[r.s] * r.w for r in target.rules])
    wins = 0
    for shard, start in enumerate(range(0, trials, SHARD_SIZE)):
        n = min(SHARD_SIZE, trials - start)
        rng = np.random.Generator(np.random.PCG64((seed + shard) & MASK64))
        if isinstance(target, AuthCode):
            wins += _code_shard(target, spec.attack, strat, rng, n, dist)
        else:
            wins += _scheme_shard(target, spec.attack, strat, rng, n, dist)
    return SimResult(trials, wins, Fraction(wins, trials), stderr_bound(trials), seed)
