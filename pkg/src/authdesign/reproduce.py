"""Machine checks of every worked instance and property claim.

Each ``criterion_*`` function returns a :class:`Outcome`; ``run_all`` runs
them in order. The ``verify-paper`` command prints the table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import authcode as ac
from . import formats
from .designs import check_equitable, validate_bibd, validate_edf, validate_splitting_bibd
from .foundations import format_rat
from .instances import (
    EDF19,
    bibd13_code,
    edf19_code,
    fano_code,
    paper_codes,
    random_code,
    split25_code,
    split25_design,
)
from .oracle import Attack, GameSpec, best_strategy, exhaustive_epsilon, exhaustive_value, monte_carlo
from .threshold import has_share_secrecy, robustness
from .transform import authcode_to_threshold, dual, threshold_to_authcode, verify_duality

F = Fraction
MC_SEEDS = tuple(range(1, 21))
MC_TRIALS = 10**5


@dataclass
class Outcome:
    number: int
    title: str
    checks: list[tuple[str, bool]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def check(self, label: str, ok: bool) -> None:
        self.checks.append((label, bool(ok)))

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def failures(self) -> list[str]:
        return [label for label, ok in self.checks if not ok]


def criterion_fano() -> Outcome:
    out = Outcome(1, "Fano plane code")
    code = fano_code()
    out.check("p_d0 = 3/7", ac.p_d0(code) == F(3, 7))
    out.check("p_d1 = 1/3", ac.p_d1(code) == F(1, 3))
    out.check("p_ks = 1/3", ac.p_ks(code) == F(1, 3))
    out.check("perfect secrecy", ac.has_perfect_secrecy(code))
    out.check("column-regular 1", ac.is_column_regular(code) and ac.column_regular(code) == 1)
    return out


def criterion_fano_threshold() -> Outcome:
    out = Outcome(2, "Fano threshold scheme")
    scheme = authcode_to_threshold(fano_code())
    rob = robustness(scheme)
    out.check("21 rules", len(scheme.rules) == 21)
    out.check("epsilon = 1/3", rob.epsilon == F(1, 3))
    out.check("player values 1/3", rob.player1.value == rob.player2.value == F(1, 3))
    out.check("one-share secrecy", has_share_secrecy(scheme))
    return out


def criterion_bibd13() -> Outcome:
    out = Outcome(3, "(13,3,1)-BIBD code and its dual")
    code = bibd13_code()
    out.check("equitable ordering", check_equitable(code.matrix) == 2)
    out.check("p_d0 = 3/13", ac.p_d0(code) == F(3, 13))
    out.check("p_d1 = 1/6", ac.p_d1(code) == F(1, 6))
    out.check("p_ks = 1/3", ac.p_ks(code) == F(1, 3))
    d = dual(code)
    out.check("dual 2-splitting", ac.splitting_number(d) == 2)
    out.check("dual secrecy", ac.has_perfect_secrecy(d))
    out.check("dual p_d0 = 3/13", ac.p_d0(d) == F(3, 13))
    out.check("p_d1(dual) = p_ks(code)", ac.p_d1(d) == ac.p_ks(code))
    out.check("p_ks(dual) = p_d1(code)", ac.p_ks(d) == ac.p_d1(code))
    return out


def criterion_edf19() -> Outcome:
    out = Outcome(4, "(19,3,3,3)-EDF code")
    out.check("validate_edf gives lambda = 3", validate_edf(EDF19) == 3)
    code = edf19_code()
    out.check("p_d0 = 9/19", ac.p_d0(code) == F(9, 19))
    out.check("perfect secrecy", ac.has_perfect_secrecy(code))
    ms, ks = ac.p_d1(code), ac.p_ks(code)
    oracle_ms = exhaustive_value(GameSpec(code, Attack.MESSAGE_SUBSTITUTION))
    oracle_ks = exhaustive_value(GameSpec(code, Attack.KEY_SUBSTITUTION))
    out.check("p_d1 = p_ks", ms == ks)
    out.check("p_d1 = oracle", ms == oracle_ms)
    out.check("p_ks = oracle", ks == oracle_ks)
    if oracle_ks == F(1, 3):
        out.notes.append("attack value is 1/3 = c(k-1)/(n-1), not 1/6")
    elif oracle_ks == F(1, 6):
        out.notes.append("attack value is 1/6, not c(k-1)/(n-1) = 1/3")
    else:
        out.notes.append(f"attack value is {format_rat(oracle_ks)}, neither 1/3 nor 1/6")
    return out


def criterion_split25() -> Outcome:
    out = Outcome(5, "(25,3x2,1)-splitting BIBD code")
    design = split25_design()
    params = validate_splitting_bibd(design, 3, 2)
    out.check("splitting BIBD (25,25,6)", (params.v, params.b, params.r) == (25, 25, 6))
    out.check("equitable multiplicity 2", check_equitable(design) == 2)
    code = split25_code()
    out.check("p_d0 = 6/25", ac.p_d0(code) == F(6, 25))
    out.check("p_d1 = 1/6", ac.p_d1(code) == F(1, 6))
    out.check("p_ks = 1/6", ac.p_ks(code) == F(1, 6))
    out.check("epsilon = 1/6", robustness(authcode_to_threshold(code)).epsilon == F(1, 6))
    return out


def random_codes(count: int, seed: int, **kw) -> list[ac.AuthCode]:
    rng = random.Random(seed)
    return [random_code(rng, **kw) for _ in range(count)]


def criterion_secrecy_properties(count: int = 500, seed: int = 20240601) -> Outcome:
    out = Outcome(6, "counting identity, impersonation bound, secrecy biconditional")
    regular = irregular = 0
    ok_identity = ok_bound = ok_iff = True
    for code in random_codes(count, seed):
        kap = sum(len(ac.kappa(code, m)) for m in range(code.v))
        mus = sum(len(ac.mu(code, k)) for k in range(code.b))
        ok_identity &= kap == mus
        c = ac.splitting_number(code)
        bound = F(c * code.u, code.v)
        ok_bound &= ac.p_d0(code) >= bound
        lhs = ac.p_d0(code) == bound and ac.has_perfect_secrecy(code)
        rhs = ac.is_column_regular(code)
        ok_iff &= lhs == rhs
        regular += rhs
        irregular += not rhs
    out.check(f"{count} codes: sum |kappa(m)| = sum |mu(K)|", ok_identity)
    out.check("p_d0 >= cu/v", ok_bound)
    out.check("(p_d0 = cu/v and secrecy) iff column-regular", ok_iff)
    out.check("both sides of the biconditional exercised", regular > 0 and irregular > 0)
    out.notes.append(f"{regular} column-regular, {irregular} not")
    return out


def criterion_oracle(count: int = 100, seed: int = 7) -> Outcome:
    out = Outcome(7, "analytic values equal exhaustive enumeration")
    codes = list(paper_codes().values())
    rng = random.Random(seed)
    while len(codes) < 4 + count:
        code = random_code(rng)
        if code.b * code.v <= 200 and code.b >= 2:
            codes.append(code)
    for code in codes:
        ok = (
            ac.p_d0(code) == exhaustive_value(GameSpec(code, Attack.IMPERSONATION))
            and ac.p_d1(code) == exhaustive_value(GameSpec(code, Attack.MESSAGE_SUBSTITUTION))
            and ac.p_ks(code) == exhaustive_value(GameSpec(code, Attack.KEY_SUBSTITUTION))
        )
        scheme = authcode_to_threshold(code)
        ok = ok and robustness(scheme).epsilon == exhaustive_epsilon(scheme)
        out.check(f"code b={code.b} v={code.v} u={code.u}", ok)
    return out


def criterion_round_trips() -> Outcome:
    out = Outcome(8, "round trips")
    codes = paper_codes()
    for name, code in codes.items():
        out.check(f"{name}: code -> scheme -> code", threshold_to_authcode(authcode_to_threshold(code)) == code)
        out.check(f"{name}: dual of dual", dual(dual(code)) == code)
        text = formats.emit_authcode(code)
        out.check(f"{name}: authcode text", formats.emit_authcode(formats.parse_authcode(text)) == text)
        ttext = formats.emit_threshold(authcode_to_threshold(code))
        out.check(f"{name}: threshold text", formats.emit_threshold(formats.parse_threshold(ttext)) == ttext)
        dtext = formats.emit_design(code.matrix)
        out.check(f"{name}: design text", formats.emit_design(formats.parse_design(dtext).design) == dtext)
    bb = formats.BaseBlocks(25, 3, 2, (tuple(frozenset(c) for c in ((0, 1), (2, 4), (12, 20))),))
    btext = formats.emit_baseblocks(bb)
    out.check("baseblocks text", formats.emit_baseblocks(formats.parse_baseblocks(btext)) == btext)
    for code in random_codes(60, 11):
        ok = threshold_to_authcode(authcode_to_threshold(code)) == code
        if ac.is_column_regular(code):
            ok = ok and dual(dual(code)) == code
        out.check(f"random code b={code.b} v={code.v}: round trips", ok)
    for name, code in codes.items():
        out.check(f"{name}: duality checks", all(c.passed for c in verify_duality(code)))
    return out


def criterion_monte_carlo(seeds=MC_SEEDS, trials: int = MC_TRIALS) -> Outcome:
    out = Outcome(9, "Monte Carlo key substitution on the Fano code")
    spec = GameSpec(fano_code(), Attack.KEY_SUBSTITUTION)
    strategy = best_strategy(spec)
    inside = 0
    for seed in seeds:
        res = monte_carlo(spec, strategy, trials, seed)
        inside += abs(res.estimate - F(1, 3)) <= 3 * res.stderr_bound
    out.check(f"{inside}/{len(seeds)} runs within 3 stderr of 1/3", inside >= len(seeds) - len(seeds) // 20)
    return out


CRITERIA: tuple[Callable[[], Outcome], ...] = (
    criterion_fano,
    criterion_fano_threshold,
    criterion_bibd13,
    criterion_edf19,
    criterion_split25,
    criterion_secrecy_properties,
    criterion_oracle,
    criterion_round_trips,
    criterion_monte_carlo,
)


def run_all() -> list[Outcome]:
    results = []
    for crit in CRITERIA:
        try:
            results.append(crit())
        except Exception as exc:  # a crash is a failed criterion, not an aborted run
            o = Outcome(len(results) + 1, crit.__name__)
            o.check(f"raised {type(exc).__name__}: {exc}", False)
            results.append(o)
    return results
