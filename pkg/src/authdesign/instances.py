"""The worked instances, plus generators of small random codes."""

from __future__ import annotations

import random
from fractions import Fraction

from .authcode import AuthCode
from .designs import EDFSpec, OrderedDesign, develop, develop_bases, equitable_order
from .foundations import Distribution, dist_uniform

FANO_BASE = ((0,), (1,), (3,))
BIBD13_BASES = (((0, 1, 4),), ((0, 2, 8),))
EDF19 = EDFSpec(19, ({1, 7, 11}, {4, 6, 9}, {5, 16, 17}))
SPLIT25_BASE = ((0, 1), (2, 4), (12, 20))
# the Youden square printed for the Fano plane, rows K_0..K_6
FANO_TABLE = ((0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2))


def fano_code() -> AuthCode:
    return AuthCode(develop(FANO_BASE, 7), dist_uniform(3))


def bibd13_blocks() -> list[frozenset[int]]:
    return develop_bases(BIBD13_BASES, 13).blocks()


def bibd13_code() -> AuthCode:
    return AuthCode(equitable_order(bibd13_blocks(), 13, 3), dist_uniform(3))


def edf19_code() -> AuthCode:
    return AuthCode(develop(tuple(sorted(s) for s in EDF19.sets), 19), dist_uniform(3))


def split25_design() -> OrderedDesign:
    return develop(SPLIT25_BASE, 25)


def split25_code() -> AuthCode:
    return AuthCode(split25_design(), dist_uniform(3))


def paper_codes() -> dict[str, AuthCode]:
    return {
        "fano": fano_code(),
        "bibd13": bibd13_code(),
        "edf19": edf19_code(),
        "split25": split25_code(),
    }


def random_distribution(rng: random.Random, n: int) -> Distribution:
    """Uniform half the time, otherwise random positive rationals."""
    if rng.random() < 0.5:
        return dist_uniform(n)
    raw = [rng.randint(1, 6) for _ in range(n)]
    total = sum(raw)
    return Distribution(tuple(Fraction(x, total) for x in raw))


def random_code(
    rng: random.Random, max_b: int = 12, max_v: int = 12, max_u: int = 4, max_c: int = 3
) -> AuthCode:
    """A random c-splitting code.

    Three shapes are mixed so that column-regular codes are common: fully
    random rows, a random base row developed over Z_v, and a developed code
    with rows shuffled and messages relabelled.
    """
    u = rng.randint(1, max_u)
    c = rng.randint(1, max(1, min(max_c, max_v // u)))
    v = rng.randint(max(u * c, 2), max_v)
    shape = rng.choice(("random", "developed", "relabelled"))
    if shape == "random":
        b = rng.randint(1, max_b)
        rows = []
        for _ in range(b):
            pts = rng.sample(range(v), u * c)
            rows.append([pts[i * c:(i + 1) * c] for i in range(u)])
    else:
        v = min(v, max_b)
        if v < u * c:
            v = u * c
        pts = rng.sample(range(v), u * c)
        rows = [list(r) for r in develop([pts[i * c:(i + 1) * c] for i in range(u)], v).rows]
        if shape == "relabelled":
            perm = list(range(v))
            rng.shuffle(perm)
            rng.shuffle(rows)
            rows = [[[perm[p] for p in cell] for cell in row] for row in rows]
    return AuthCode.from_rows(v, rows, random_distribution(rng, u))
