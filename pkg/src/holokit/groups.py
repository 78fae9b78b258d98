"""Comparison and holonomy groups.

Four concrete groups share one small interface (``compose``, ``inverse``,
``identity``, ``dist_identity``):

* ``posreal`` -- positive reals under multiplication,
* ``addreal`` -- reals under addition,
* ``isom2``  -- orientation-preserving isometries of the plane,
* ``isom3``  -- orientation-preserving isometries of space.

``posreal``/``addreal`` values built from ints or Fractions stay exact;
isometries are always floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from holokit.exactnum.rational import format_rational, parse_rational

GROUP_TAGS = ("posreal", "addreal", "isom2", "isom3")

ISOMETRY_TOL = 1e-9


class GroupMismatchError(TypeError):
    pass


def _exact_or_float(value):
    if isinstance(value, bool):
        raise TypeError("booleans are not group values")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, Real):
        return float(value)
    raise TypeError(f"not a real number: {value!r}")


class GroupElement:
    tag: str = ""

    def compose(self, other):
        raise NotImplementedError

    def inverse(self):
        raise NotImplementedError

    def dist_identity(self, weight: float = 1.0) -> float:
        raise NotImplementedError

    def is_identity(self, tol: float = 0.0) -> bool:
        return self.dist_identity() <= tol

    @property
    def exact(self) -> bool:
        return False

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.tag != self.tag:
            other_tag = getattr(other, "tag", type(other).__name__)
            raise GroupMismatchError(f"cannot combine {self.tag} with {other_tag}")

    def __mul__(self, other):
        return self.compose(other)


@dataclass(frozen=True)
class PosReal(GroupElement):
    value: Fraction | float
    tag = "posreal"

    def __post_init__(self):
        v = _exact_or_float(self.value)
        if not v > 0:
            raise ValueError(f"posreal value must be > 0, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def identity(cls):
        return cls(Fraction(1))

    def compose(self, other):
        self._check(other)
        return PosReal(self.value * other.value)

    def inverse(self):
        return PosReal(1 / self.value)

    def dist_identity(self, weight: float = 1.0) -> float:
        if self.value == 1:
            return 0.0
        return abs(math.log(self.value))

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def to_json(self):
        return {"group": self.tag, "value": _encode_real(self.value)}


@dataclass(frozen=True)
class AddReal(GroupElement):
    value: Fraction | float
    tag = "addreal"

    def __post_init__(self):
        object.__setattr__(self, "value", _exact_or_float(self.value))

    @classmethod
    def identity(cls):
        return cls(Fraction(0))

    def compose(self, other):
        self._check(other)
        return AddReal(self.value + other.value)

    def inverse(self):
        return AddReal(-self.value)

    def dist_identity(self, weight: float = 1.0) -> float:
        return float(abs(self.value))

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def to_json(self):
        return {"group": self.tag, "value": _encode_real(self.value)}


def _normalize_angle(theta: float) -> float:
    """Reduce to (-pi, pi]."""
    theta = math.remainder(theta, 2 * math.pi)
    if theta <= -math.pi:
        theta += 2 * math.pi
    return theta


@dataclass(frozen=True)
class Isom2(GroupElement):
    """Rotation by ``angle`` (radians) followed by translation ``t``."""

    angle: float
    t: tuple = (0.0, 0.0)
    tag = "isom2"

    def __post_init__(self):
        object.__setattr__(self, "angle", _normalize_angle(float(self.angle)))
        tx, ty = self.t
        object.__setattr__(self, "t", (float(tx), float(ty)))

    @classmethod
    def identity(cls):
        return cls(0.0, (0.0, 0.0))

    @classmethod
    def rotation_deg(cls, deg, t=(0.0, 0.0)):
        return cls(math.radians(deg), t)

    def apply(self, p):
        c, s = math.cos(self.angle), math.sin(self.angle)
        x, y = p
        return (c * x - s * y + self.t[0], s * x + c * y + self.t[1])

    def compose(self, other):
        # (self o other)(p) = self(other(p))
        self._check(other)
        c, s = math.cos(self.angle), math.sin(self.angle)
        ox, oy = other.t
        t = (c * ox - s * oy + self.t[0], s * ox + c * oy + self.t[1])
        return Isom2(self.angle + other.angle, t)

    def inverse(self):
        c, s = math.cos(self.angle), math.sin(self.angle)
        tx, ty = self.t
        return Isom2(-self.angle, (-(c * tx + s * ty), -(-s * tx + c * ty)))

    def dist_identity(self, weight: float = 1.0) -> float:
        return abs(self.angle) + weight * math.hypot(*self.t)

    def matrix(self):
        c, s = math.cos(self.angle), math.sin(self.angle)
        return [[c, -s, self.t[0]], [s, c, self.t[1]], [0.0, 0.0, 1.0]]

    def to_json(self):
        return {"group": self.tag, "angle_deg": math.degrees(self.angle), "t": list(self.t)}


def _qmul(p, q):
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return (
        pw * qw - px * qx - py * qy - pz * qz,
        pw * qx + px * qw + py * qz - pz * qy,
        pw * qy - px * qz + py * qw + pz * qx,
        pw * qz + px * qy - py * qx + pz * qw,
    )


def _qrotate(q, v):
    w, x, y, z = _qmul(_qmul(q, (0.0, *v)), (q[0], -q[1], -q[2], -q[3]))
    return (x, y, z)


@dataclass(frozen=True)
class Isom3(GroupElement):
    """Rotation given by a unit quaternion ``q = (w, x, y, z)`` then translation ``t``.

    The quaternion is stored with ``w >= 0`` (and, when ``w == 0``, the
    first nonzero vector component positive) so that each rotation has
    exactly one representation.
    """

    q: tuple = (1.0, 0.0, 0.0, 0.0)
    t: tuple = (0.0, 0.0, 0.0)
    tag = "isom3"

    def __post_init__(self):
        q = tuple(float(c) for c in self.q)
        norm = math.sqrt(sum(c * c for c in q))
        if len(q) != 4 or norm == 0:
            raise ValueError("isom3 needs a nonzero 4-component quaternion")
        q = tuple(c / norm for c in q)
        lead = next((c for c in q if c != 0.0), 1.0)
        if q[0] < 0 or (q[0] == 0 and lead < 0):
            q = tuple(-c for c in q)
        t = tuple(float(c) for c in self.t)
        if len(t) != 3:
            raise ValueError("isom3 translation must have 3 components")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t", t)

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_axis_angle(cls, axis, angle, t=(0.0, 0.0, 0.0)):
        ax = [float(c) for c in axis]
        n = math.sqrt(sum(c * c for c in ax))
        if n == 0:
            raise ValueError("rotation axis must be nonzero")
        s = math.sin(angle / 2) / n
        return cls((math.cos(angle / 2), ax[0] * s, ax[1] * s, ax[2] * s), t)

    @property
    def angle(self) -> float:
        # atan2 keeps precision near the identity, where acos does not
        return 2 * math.atan2(math.sqrt(sum(c * c for c in self.q[1:])), self.q[0])

    def apply(self, p):
        r = _qrotate(self.q, p)
        return tuple(a + b for a, b in zip(r, self.t))

    def compose(self, other):
        self._check(other)
        t = tuple(a + b for a, b in zip(_qrotate(self.q, other.t), self.t))
        return Isom3(_qmul(self.q, other.q), t)

    def inverse(self):
        qi = (self.q[0], -self.q[1], -self.q[2], -self.q[3])
        return Isom3(qi, tuple(-c for c in _qrotate(qi, self.t)))

    def dist_identity(self, weight: float = 1.0) -> float:
        return self.angle + weight * math.sqrt(sum(c * c for c in self.t))

    def to_json(self):
        return {"group": self.tag, "q": list(self.q), "t": list(self.t)}


_CLASSES = {"posreal": PosReal, "addreal": AddReal, "isom2": Isom2, "isom3": Isom3}


def identity(tag: str) -> GroupElement:
    try:
        return _CLASSES[tag].identity()
    except KeyError:
        raise ValueError(f"unknown group {tag!r}; expected one of {GROUP_TAGS}") from None


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    return g.compose(h)


def inverse(g: GroupElement) -> GroupElement:
    return g.inverse()


def dist_identity(g: GroupElement, weight: float = 1.0) -> float:
    return g.dist_identity(weight)


def product(elements, tag: str | None = None) -> GroupElement:
    elements = list(elements)
    if not elements:
        if tag is None:
            raise ValueError("empty product needs a group tag")
        return identity(tag)
    acc = elements[0]
    for g in elements[1:]:
        acc = acc.compose(g)
    return acc


def conjugate(g: GroupElement, by: GroupElement) -> GroupElement:
    """``by * g * by^-1``."""
    return by.compose(g).compose(by.inverse())


def default_tol(tag: str) -> float:
    return 0.0 if tag in ("posreal", "addreal") else ISOMETRY_TOL


def _encode_real(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def element_to_json(g: GroupElement) -> dict:
    return g.to_json()


def element_from_json(obj, group: str | None = None) -> GroupElement:
    """Decode an element.

    ``obj`` may be a full object such as ``{"group": "posreal", "value": "3/2"}``
    or, when ``group`` is known from the container, a bare value (``"3/2"``)
    or an object without the ``group`` key.
    """
    if not isinstance(obj, dict):
        if group not in ("posreal", "addreal"):
            raise ValueError(f"bare values are only allowed for posreal/addreal, not {group!r}")
        obj = {"value": obj}
    tag = obj.get("group", group)
    if group is not None and tag != group:
        raise GroupMismatchError(f"element group {tag!r} differs from container group {group!r}")
    if tag in ("posreal", "addreal"):
        return _CLASSES[tag](obj["value"])
    if tag == "isom2":
        if "angle_deg" in obj:
            angle = math.radians(float(obj["angle_deg"]))
        else:
            angle = float(obj.get("angle", 0.0))
        return Isom2(angle, tuple(obj.get("t", (0.0, 0.0))))
    if tag == "isom3":
        t = tuple(obj.get("t", (0.0, 0.0, 0.0)))
        if "q" in obj:
            return Isom3(tuple(obj["q"]), t)
        angle = math.radians(float(obj.get("angle_deg", 0.0)))
        return Isom3.from_axis_angle(obj.get("axis", (0.0, 0.0, 1.0)), angle, t)
    raise ValueError(f"unknown group {tag!r}")
