"""Left/center/right addresses of points of [0, 1] and their representation types.

Digit 0, 1, 2 of the base-3 expansion is written l, c, r.  Only rational
points are handled, so every address is eventually periodic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet

DIGIT_TO_CHAR = "lcr"
CHAR_TO_DIGIT = {"l": 0, "c": 1, "r": 2}

_ADDRESS_RE = re.compile(r"^([lcr]*)\(([lcr]+)\)$")


def _primitive_root(word: str) -> str:
    n = len(word)
    for k in range(1, n + 1):
        if n % k == 0 and word[:k] * (n // k) == word:
            return word[:k]
    return word


def _normalize(pre: str, per: str) -> tuple[str, str]:
    per = _primitive_root(per)
    # fold trailing preperiod characters into the period
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1] + per[:-1]
    return pre, per


@dataclass(frozen=True)
class Address:
    """Eventually periodic address ``preperiod`` followed by ``period`` repeated."""

    preperiod: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")
        if set(self.preperiod + self.period) - set("lcr"):
            raise ValueError("addresses use only l, c, r")
        pre, per = _normalize(self.preperiod, self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> "Address":
        m = _ADDRESS_RE.match(text.strip())
        if not m:
            raise ValueError(f"bad address syntax {text!r}; expected e.g. c(rl)")
        return cls(m.group(1), m.group(2))

    def __str__(self):
        return f"{self.preperiod}({self.period})"

    def char(self, i: int) -> str:
        """The i-th character, counting from 0."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> str:
        return "".join(self.char(i) for i in range(n))

    def shift(self) -> "Address":
        """Drop the first character."""
        if self.preperiod:
            return Address(self.preperiod[1:], self.period)
        return Address("", self.period[1:] + self.period[0])


@dataclass(frozen=True)
class RepType:
    """Which characters occur infinitely often and which only finitely often."""

    infinitely_often: FrozenSet[str]
    finitely_often: FrozenSet[str]

    @classmethod
    def parse(cls, text: str) -> "RepType":
        m = re.match(r"^\[\s*([lcr]+)\s*,\s*([lcr]*|∅)\s*\]$", text.strip())
        if not m:
            raise ValueError(f"bad type syntax {text!r}; expected e.g. [lr,c]")
        fin = "" if m.group(2) == "∅" else m.group(2)
        return cls(frozenset(m.group(1)), frozenset(fin))

    def __str__(self):
        inf = "".join(ch for ch in "lcr" if ch in self.infinitely_often)
        fin = "".join(ch for ch in "lcr" if ch in self.finitely_often) or "∅"
        return f"[{inf},{fin}]"


def _expansion(x: Fraction) -> tuple[str, str, bool]:
    """Base-3 digits of x in [0,1): (preperiod, period, terminated)."""
    num, den = x.numerator, x.denominator
    digits = []
    seen = {}
    r = num
    while r and r not in seen:
        seen[r] = len(digits)
        r *= 3
        digits.append(DIGIT_TO_CHAR[r // den])
        r %= den
    if r == 0:
        return "".join(digits), "", True
    k = seen[r]
    return "".join(digits[:k]), "".join(digits[k:]), False


def is_ternary_number(x: Fraction) -> bool:
    """True for p / 3^y."""
    d = Fraction(x).denominator
    while d % 3 == 0:
        d //= 3
    return d == 1


def address_of(x) -> Address:
    """Canonical address of a rational x in [0, 1].

    Ternary numbers never get a finite address: a Cantor-set point keeps its
    c-free form (2/3 -> r(l), 1/3 -> l(r)); otherwise the expansion ending
    in repeated r is used.
    """
    x = Fraction(x)
    if x < 0 or x > 1:
        raise ValueError(f"{x} is outside [0, 1]")
    if x == 1:
        return Address("", "r")
    pre, per, done = _expansion(x)
    if not done:
        return Address(pre, per)
    if not pre:
        return Address("", "l")
    # terminating: compare the two infinite forms
    pad_zeros = (pre, "l")
    last = CHAR_TO_DIGIT[pre[-1]]
    pad_twos = (pre[:-1] + DIGIT_TO_CHAR[last - 1], "r")
    if "c" not in pad_zeros[0]:
        return Address(*pad_zeros)
    return Address(*pad_twos)


def value_of(a: Address) -> Fraction:
    def word_value(w: str) -> int:
        v = 0
        for ch in w:
            v = 3 * v + CHAR_TO_DIGIT[ch]
        return v

    k, p = len(a.preperiod), len(a.period)
    return Fraction(word_value(a.preperiod), 3 ** k) + Fraction(
        word_value(a.period), (3 ** p - 1) * 3 ** k)


def rep_type(a: Address) -> RepType:
    inf = frozenset(a.period)
    fin = frozenset(a.preperiod) - inf
    return RepType(inf, fin)


def in_cantor(a: Address) -> bool:
    """Membership in the middle-thirds Cantor set.

    Canonical addresses of Cantor points are already c-free, so this is a
    plain character test.
    """
    return "c" not in a.preperiod and "c" not in a.period


def type_of(x) -> RepType:
    return rep_type(address_of(x))


def first_center_index(a: Address) -> int | None:
    """Index of the first c, or None for a c-free address."""
    if "c" in a.preperiod:
        return a.preperiod.index("c")
    if "c" in a.period:
        return len(a.preperiod) + a.period.index("c")
    return None
