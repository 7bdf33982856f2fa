"""Exact rationals and finite probability distributions.

Every probability in the package is a :class:`fractions.Fraction`; there is
no floating point anywhere on the analytic paths.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Rational = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*([+-]?\d+))?\s*$")


class DistributionError(ValueError):
    """A weight vector that is not a probability distribution."""


def rat(n: int, d: int = 1) -> Fraction:
    """Canonical fraction ``n/d``; the sign is carried by the numerator.

    >>> rat(3, -6)
    Fraction(-1, 2)
    """
    if d == 0:
        raise ZeroDivisionError(f"zero denominator in {n}/{d}")
    return Fraction(n, d)


def format_rat(x: Fraction) -> str:
    """Serialize as ``num/den``, always with an explicit denominator."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    """Parse ``a/b`` or a bare integer. Non-canonical input is accepted."""
    m = _RAT_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    return rat(num, den)


def dist_validate(weights: Iterable[Fraction]) -> None:
    """Raise :class:`DistributionError` unless ``weights`` is a distribution."""
    ws = [Fraction(w) for w in weights]
    if not ws:
        raise DistributionError("empty distribution")
    for i, w in enumerate(ws):
        if w < 0:
            raise DistributionError(f"negative weight {format_rat(w)} at outcome {i}")
    total = sum(ws, Fraction(0))
    if total != 1:
        raise DistributionError(f"weights total {format_rat(total)}, not 1/1")


@dataclass(frozen=True)
class Distribution:
    """Weights over outcomes ``0..n-1``, nonnegative and summing to one."""

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        dist_validate(ws)
        object.__setattr__(self, "weights", ws)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> Fraction:
        return self.weights[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.weights)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.weights)) == 1


def dist_uniform(n: int) -> Distribution:
    if n < 1:
        raise DistributionError("uniform distribution needs at least one outcome")
    return Distribution((Fraction(1, n),) * n)


def as_distribution(weights: Sequence[Fraction] | Distribution) -> Distribution:
    if isinstance(weights, Distribution):
        return weights
    return Distribution(tuple(weights))
