"""Group presentations with rational density."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import words as W


def subdivision_factor(ell0: int) -> int:
    """Least k in {1, 2, 4} with 4 | k * ell0."""
    for k in (1, 2, 4):
        if (k * ell0) % 4 == 0:
            return k
    raise AssertionError


def relator_count(n: int, d: Fraction, ell0: int) -> int:
    """floor((2n-1)^(d*ell0)), computed exactly."""
    e = d * ell0
    base = 2 * n - 1
    power = base ** e.numerator
    return integer_nth_root(power, e.denominator)


def integer_nth_root(x: int, n: int) -> int:
    if x < 0 or n < 1:
        raise ValueError
    if x in (0, 1) or n == 1:
        return x
    lo, hi = 0, 1
    while hi ** n <= x:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** n <= x:
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class Presentation:
    n: int
    d: Fraction
    ell0: int
    subdivision: int
    relators: tuple[tuple[int, ...], ...]

    @property
    def ell(self) -> int:
        return self.subdivision * self.ell0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one generator")
        if not (0 < self.d < 1):
            raise ValueError("density must lie in (0, 1)")
        if self.ell % 4 != 0:
            raise ValueError("subdivided length must be a multiple of 4")
        for w in self.relators:
            if len(w) != self.ell0:
                raise ValueError("relator of wrong length")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": f"{self.d.numerator}/{self.d.denominator}",
            "ell0": self.ell0,
            "subdivision": self.subdivision,
            "relators": [W.word_to_string(w) for w in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        return cls(
            n=data["n"],
            d=Fraction(data["d"]),
            ell0=data["ell0"],
            subdivision=data["subdivision"],
            relators=tuple(W.string_to_word(s) for s in data["relators"]),
        )

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Presentation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))
