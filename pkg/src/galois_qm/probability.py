"""Exact outcome distributions shared by the models and the hidden-variable oracle."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable


def outcome_value(label) -> int:
    """Numeric value of an outcome label: +1/-1, or the product for joint labels."""
    if isinstance(label, tuple):
        out = 1
        for x in label:
            out *= x
        return out
    return label


@dataclass(frozen=True)
class OutcomeDistribution:
    outcomes: tuple[tuple[Hashable, Fraction], ...]

    def __post_init__(self):
        total = Fraction(0)
        for _, prob in self.outcomes:
            if not isinstance(prob, Fraction):
                raise TypeError("probabilities must be Fractions")
            if prob < 0:
                raise ValueError(f"negative probability {prob}")
            total += prob
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def __getitem__(self, label) -> Fraction:
        for lab, prob in self.outcomes:
            if lab == label:
                return prob
        raise KeyError(label)

    @property
    def labels(self) -> tuple:
        return tuple(lab for lab, _ in self.outcomes)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(prob for _, prob in self.outcomes)

    def expectation(self) -> Fraction:
        return sum((outcome_value(lab) * prob for lab, prob in self.outcomes), Fraction(0))


def frac_str(x: Fraction) -> str:
    """Render as ``num/den`` (integers without a denominator)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))
