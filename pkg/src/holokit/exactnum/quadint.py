"""Exact arithmetic in the ring Z[sqrt2]."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


@dataclass(frozen=True, order=False)
class QuadInt:
    """The number ``a + b*sqrt(2)`` with integer ``a`` and ``b``."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        if not isinstance(self.a, int) or not isinstance(self.b, int):
            raise TypeError("QuadInt coefficients must be integers")

    @classmethod
    def coerce(cls, x) -> QuadInt:
        if isinstance(x, QuadInt):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return cls(x, 0)
        raise TypeError(f"cannot coerce {x!r} to QuadInt")

    def __add__(self, other):
        try:
            o = QuadInt.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = QuadInt.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = QuadInt.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadInt(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = QuadInt.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt2``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: the term with the larger square wins
        diff = self.a * self.a - 2 * self.b * self.b
        if diff == 0:  # impossible for integers unless both are zero
            return 0
        return sa if diff > 0 else sb

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conjugate(self) -> QuadInt:
        return QuadInt(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a - 2 * self.b * self.b

    def __float__(self):
        return self.a + self.b * 2.0**0.5

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}√2"
        return f"{self.a}{self.b:+d}√2"

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, obj) -> QuadInt:
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls(obj, 0)
        return cls(int(obj["a"]), int(obj.get("b", 0)))


SQRT2 = QuadInt(0, 1)


def dot(u, v) -> QuadInt:
    """Exact inner product of two 3-vectors over Z[sqrt2]."""
    if len(u) != 3 or len(v) != 3:
        raise ValueError("dot expects 3-component vectors")
    total = QuadInt(0, 0)
    for x, y in zip(u, v):
        total = total + QuadInt.coerce(x) * QuadInt.coerce(y)
    return total


def is_zero_vector(u) -> bool:
    return all(not QuadInt.coerce(x) for x in u)


def content(u) -> int:
    """Integer gcd of every coefficient of every component."""
    g = 0
    for x in u:
        x = QuadInt.coerce(x)
        g = gcd(g, gcd(x.a, x.b))
    return g
