"""Exact arithmetic in Q(sqrt 3) plus the planar predicates built on it.

Every coordinate and direction used by the billiard engine is a ``QSqrt3``.
Rational-only tables (squares, T-fractal, carpets) simply never produce a
nonzero sqrt(3) part.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt, sqrt
from numbers import Rational
from typing import Optional, Union

_SQRT3 = sqrt(3.0)

Scalarish = Union["QSqrt3", int, Fraction]


class QSqrt3:
    """The number (a + b*sqrt(3)) / d with d > 0 and gcd(a, b, d) == 1."""

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, a=0, b=0, d=1):
        if isinstance(a, QSqrt3):
            self._a, self._b, self._d = a._a, a._b, a._d
            self._hash = None
            return
        if not isinstance(a, int) or not isinstance(b, int) or not isinstance(d, int):
            fa, fb, fd = Fraction(a), Fraction(b), Fraction(d)
            if fd == 0:
                raise ZeroDivisionError("zero denominator")
            fa, fb = fa / fd, fb / fd
            den = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
            a = fa.numerator * (den // fa.denominator)
            b = fb.numerator * (den // fb.denominator)
            d = den
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "QSqrt3":
        # caller guarantees d > 0; only the gcd reduction happens here
        obj = object.__new__(cls)
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        obj._a, obj._b, obj._d = a, b, d
        obj._hash = None
        return obj

    @classmethod
    def of(cls, a: Scalarish = 0, b: Scalarish = 0) -> "QSqrt3":
        """Build a + b*sqrt(3) from rational parts."""
        fa, fb = Fraction(a), Fraction(b)
        den = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
        return cls._raw(fa.numerator * (den // fa.denominator),
                        fb.numerator * (den // fb.denominator), den)

    # -- parts -----------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def sqrt3_part(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def is_rational(self) -> bool:
        return self._b == 0

    def to_fraction(self) -> Fraction:
        if self._b:
            raise ValueError(f"{self} is not rational")
        return Fraction(self._a, self._d)

    def __float__(self) -> float:
        if self._b == 0:
            return self._a / self._d
        return self._a / self._d + (self._b / self._d) * _SQRT3

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QSqrt3._raw(self._a + o._a, self._b + o._b, self._d)
        return QSqrt3._raw(self._a * o._d + o._a * self._d,
                           self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return QSqrt3._raw(self._a - o._a, self._b - o._b, self._d)
        return QSqrt3._raw(self._a * o._d - o._a * self._d,
                           self._b * o._d - o._b * self._d, self._d * o._d)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QSqrt3._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, o._a, o._b
        return QSqrt3._raw(a1 * a2 + 3 * b1 * b2, a1 * b2 + a2 * b1, self._d * o._d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - 3 b^2 (over d^2)."""
        return Fraction(self._a * self._a - 3 * self._b * self._b, self._d * self._d)

    def conjugate(self) -> "QSqrt3":
        return QSqrt3._raw(self._a, -self._b, self._d)

    def invert(self) -> "QSqrt3":
        n = self._a * self._a - 3 * self._b * self._b
        if n == 0:
            # a^2 = 3 b^2 has no nonzero integer solution, so this is zero
            raise ZeroDivisionError("inverse of zero in Q(sqrt 3)")
        # d / (a + b r) = d (a - b r) / n
        if n < 0:
            return QSqrt3._raw(-self._d * self._a, self._d * self._b, -n)
        return QSqrt3._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o._b == 0:
            if o._a == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt 3)")
            if o._a < 0:
                return QSqrt3._raw(-self._a * o._d, -self._b * o._d, -self._d * o._a)
            return QSqrt3._raw(self._a * o._d, self._b * o._d, self._d * o._a)
        return self * o.invert()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- ordering --------------------------------------------------------
    def sign(self) -> int:
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with 3 b^2
        lhs, rhs = a * a, 3 * b * b
        if a > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self._a, self._b, self._d)) if self._b else hash(Fraction(self._a, self._d))
            self._hash = h
        return h

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"QSqrt3({self})"

    def __str__(self):
        ra, rb = self.rational_part, self.sqrt3_part
        if rb == 0:
            return str(ra)
        tail = "√3" if abs(rb) == 1 else f"{abs(rb)}√3"
        if ra == 0:
            return ("-" if rb < 0 else "") + tail
        return f"{ra}{'-' if rb < 0 else '+'}{tail}"

    def sqrt_if_rational_square(self) -> Optional["QSqrt3"]:
        """Square root when the value is the square of a nonnegative rational."""
        if self._b or self._a < 0:
            return None
        ra, rd = isqrt(self._a), isqrt(self._d)
        if ra * ra == self._a and rd * rd == self._d:
            return QSqrt3._raw(ra, 0, rd)
        return None


def _coerce(x) -> Optional[QSqrt3]:
    if isinstance(x, QSqrt3):
        return x
    if isinstance(x, int):
        return QSqrt3._raw(x, 0, 1)
    if isinstance(x, Rational):
        return QSqrt3._raw(int(x.numerator), 0, int(x.denominator))
    return None


def Q(value: Scalarish = 0, sqrt3_coeff: Scalarish = 0) -> QSqrt3:
    """Shorthand constructor: Q(1, 2) is 1 + 2 sqrt(3)."""
    if isinstance(value, QSqrt3) and sqrt3_coeff == 0:
        return value
    return QSqrt3.of(value, sqrt3_coeff)


def as_q(x) -> QSqrt3:
    q = _coerce(x)
    if q is None:
        if isinstance(x, str):
            return QSqrt3.of(Fraction(x))
        raise TypeError(f"cannot interpret {x!r} as an exact scalar")
    return q


ZERO = QSqrt3._raw(0, 0, 1)
ONE = QSqrt3._raw(1, 0, 1)
SQRT3 = QSqrt3._raw(0, 1, 1)


def sign(v) -> int:
    return as_q(v).sign()


@dataclass(frozen=True, slots=True)
class Vec:
    """A point or vector of the plane with exact coordinates."""

    x: QSqrt3
    y: QSqrt3

    @classmethod
    def of(cls, x, y) -> "Vec":
        return cls(as_q(x), as_q(y))

    def __add__(self, o: "Vec") -> "Vec":
        return Vec(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Vec") -> "Vec":
        return Vec(self.x - o.x, self.y - o.y)

    def __neg__(self) -> "Vec":
        return Vec(-self.x, -self.y)

    def scale(self, k) -> "Vec":
        k = as_q(k)
        return Vec(self.x * k, self.y * k)

    def dot(self, o: "Vec") -> QSqrt3:
        return self.x * o.x + self.y * o.y

    def cross(self, o: "Vec") -> QSqrt3:
        return self.x * o.y - self.y * o.x

    def norm2(self) -> QSqrt3:
        return self.x * self.x + self.y * self.y

    def is_zero(self) -> bool:
        return not self.x and not self.y

    def to_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)

    def __repr__(self):
        return f"({self.x}, {self.y})"


Point2 = Vec
Vec2 = Vec


def midpoint(p: Vec, q: Vec) -> Vec:
    half = QSqrt3._raw(1, 0, 2)
    return Vec((p.x + q.x) * half, (p.y + q.y) * half)


def mirror(direction: Vec, line_dir: Vec) -> Vec:
    """Reflect ``direction`` in the line spanned by ``line_dir``."""
    k = direction.dot(line_dir) / line_dir.norm2()
    two_k = k + k
    return Vec(line_dir.x * two_k - direction.x, line_dir.y * two_k - direction.y)


def parallel_same_way(u: Vec, v: Vec) -> bool:
    return not u.cross(v) and u.dot(v).sign() > 0


def rotate(v: Vec, cos: QSqrt3, sin: QSqrt3) -> Vec:
    return Vec(v.x * cos - v.y * sin, v.x * sin + v.y * cos)


class HitKind(Enum):
    INTERIOR = "interior"
    ENDPOINT = "endpoint"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SegmentHit:
    t: QSqrt3
    kind: HitKind
    point: Vec
    endpoint: Optional[int] = None  # 0 or 1 for endpoint hits


def segment_intersect(p: Vec, d: Vec, a: Vec, b: Vec,
                      t_max: Optional[QSqrt3] = None) -> Optional[SegmentHit]:
    """First hit of the ray p + t d (t > 0) on the closed segment [a, b].

    Collinear overlap is reported as ``DEGENERATE`` at the nearest endpoint
    reached with t > 0; the caller decides what that means.  When ``t_max``
    is given only hits with t < t_max are reported.
    """
    if d.is_zero():
        raise ValueError("ray direction must be nonzero")
    e = b - a
    ap = a - p
    denom = d.cross(e)
    if not denom:
        if ap.cross(d):
            return None
        ta = ap.dot(d) / d.norm2()
        tb = (b - p).dot(d) / d.norm2()
        cands = [(t, i) for i, t in ((0, ta), (1, tb)) if t.sign() > 0]
        if not cands:
            return None
        t, i = min(cands, key=lambda c: c[0])
        if t_max is not None and t >= t_max:
            return None
        return SegmentHit(t, HitKind.DEGENERATE, a if i == 0 else b, i)
    tn = ap.cross(e)
    sn = ap.cross(d)
    ds = denom.sign()
    if tn.sign() * ds <= 0:
        return None
    # s = sn / denom must lie in [0, 1]
    s_sign = sn.sign() * ds
    if s_sign < 0:
        return None
    s_minus = (sn - denom).sign() * ds
    if s_minus > 0:
        return None
    t = tn / denom
    if t_max is not None and t >= t_max:
        return None
    if s_sign == 0:
        return SegmentHit(t, HitKind.ENDPOINT, a, 0)
    if s_minus == 0:
        return SegmentHit(t, HitKind.ENDPOINT, b, 1)
    return SegmentHit(t, HitKind.INTERIOR, Vec(p.x + d.x * t, p.y + d.y * t))


def point_on_segment(x: Vec, a: Vec, b: Vec) -> bool:
    e = b - a
    w = x - a
    if w.cross(e):
        return False
    s = w.dot(e)
    return s.sign() >= 0 and (s - e.norm2()).sign() <= 0


def segment_param(x: Vec, a: Vec, b: Vec) -> QSqrt3:
    """Arc-length fraction of x along [a, b] (x assumed on the segment)."""
    e = b - a
    return (x - a).dot(e) / e.norm2()
