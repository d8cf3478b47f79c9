"""Floating-point kernel for PSL(2,R), the upper half-plane and sl(2,R).

Elements of PSL(2,R) are stored as a single SL(2,R) representative, rescaled
to determinant one and sign-canonicalized (positive trace; for trace zero the
first nonzero entry in row-major order is positive).  All equality tests
between group elements are up to the sign ambiguity.

Angle conventions: ``rot(theta)`` is the matrix

    [[ cos(theta/2), sin(theta/2)],
     [-sin(theta/2), cos(theta/2)]]

which acts on the upper half-plane as a counterclockwise rotation of angle
``theta`` about ``i``.  An elliptic element has rotation angle ``theta`` in
``(0, 2*pi)`` when it is conjugate to ``rot(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import NotElliptic

TWO_PI = 2.0 * math.pi

#: width of the parabolic band around |trace| = 2 and of the identity test
TOL_CLASS = 1e-9
#: entry-wise tolerance used by :func:`close`
TOL_EQ = 1e-9

_DET_DRIFT = 1e-13
_ZERO_TRACE = 1e-12


class GroupElement:
    """An element of PSL(2,R) stored as a canonical unimodular matrix."""

    __slots__ = ("m11", "m12", "m21", "m22")

    def __init__(self, m11: float, m12: float, m21: float, m22: float):
        m11, m12, m21, m22 = float(m11), float(m12), float(m21), float(m22)
        det = m11 * m22 - m12 * m21
        if not det > 0.0 or not math.isfinite(det):
            raise ValueError(f"matrix is not in GL+(2,R): det = {det!r}")
        if abs(det - 1.0) > _DET_DRIFT:
            s = math.sqrt(det)
            m11, m12, m21, m22 = m11 / s, m12 / s, m21 / s, m22 / s
        tr = m11 + m22
        if abs(tr) <= _ZERO_TRACE:
            flip = False
            for e in (m11, m12, m21, m22):
                if e != 0.0:
                    flip = e < 0.0
                    break
        else:
            flip = tr < 0.0
        if flip:
            m11, m12, m21, m22 = -m11, -m12, -m21, -m22
        object.__setattr__(self, "m11", m11)
        object.__setattr__(self, "m12", m12)
        object.__setattr__(self, "m21", m21)
        object.__setattr__(self, "m22", m22)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_rows(cls, rows) -> "GroupElement":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def from_flat(cls, flat) -> "GroupElement":
        a, b, c, d = flat
        return cls(a, b, c, d)

    def entries(self) -> tuple[float, float, float, float]:
        return (self.m11, self.m12, self.m21, self.m22)

    def rows(self) -> list[list[float]]:
        return [[self.m11, self.m12], [self.m21, self.m22]]

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        x, y, z, w = other.m11, other.m12, other.m21, other.m22
        return GroupElement(a * x + b * z, a * y + b * w, c * x + d * z, c * y + d * w)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.m22, -self.m12, -self.m21, self.m11)

    def __pow__(self, m: int) -> "GroupElement":
        base = self if m >= 0 else self.inverse()
        out = GroupElement.identity()
        for _ in range(abs(m)):
            out = out @ base
        return out

    def conj(self, g: "GroupElement") -> "GroupElement":
        """Return ``h g h^{-1}`` with ``h = self``."""
        return self @ g @ self.inverse()

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return "GroupElement([[{!r}, {!r}], [{!r}, {!r}]])".format(*self.entries())

    def __reduce__(self):
        return (GroupElement, self.entries())


def distance(g: GroupElement, h: GroupElement) -> float:
    """Max-entry distance between ``g`` and ``h`` in PSL(2,R) (sign-insensitive)."""
    plus = max(abs(p - q) for p, q in zip(g.entries(), h.entries()))
    minus = max(abs(p + q) for p, q in zip(g.entries(), h.entries()))
    return min(plus, minus)


def close(g: GroupElement, h: GroupElement, tol: float = TOL_EQ) -> bool:
    return distance(g, h) <= tol


def is_identity(g: GroupElement, tol: float = TOL_CLASS) -> bool:
    return distance(g, GroupElement.identity()) < tol


# ---------------------------------------------------------------------------
# upper half-plane


@dataclass(frozen=True)
class HPoint:
    re: float
    im: float

    def __post_init__(self):
        if not self.im > 0.0:
            raise ValueError(f"point {self.re} + {self.im}i is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)


I_POINT = HPoint(0.0, 1.0)


def mobius(g: GroupElement, z: Union[complex, HPoint]) -> complex:
    z = complex(z)
    return (g.m11 * z + g.m12) / (g.m21 * z + g.m22)


def hyperbolic_distance(p: HPoint, q: HPoint) -> float:
    dx, dy = p.re - q.re, p.im - q.im
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.im * q.im))


def transvection(p: HPoint) -> GroupElement:
    """The affine map ``z -> im(p) z + re(p)`` sending ``i`` to ``p``."""
    s = math.sqrt(p.im)
    return GroupElement(s, p.re / s, 0.0, 1.0 / s)


# ---------------------------------------------------------------------------
# sl(2,R)


class LieVector:
    """Traceless 2x2 real matrix ``[[m11, m12], [m21, -m11]]``."""

    __slots__ = ("m11", "m12", "m21")

    def __init__(self, m11: float, m12: float, m21: float):
        self.m11 = float(m11)
        self.m12 = float(m12)
        self.m21 = float(m21)

    @classmethod
    def zero(cls) -> "LieVector":
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_matrix(cls, a, b, c, d) -> "LieVector":
        """Traceless part of an arbitrary 2x2 matrix."""
        h = 0.5 * (a - d)
        return cls(h, b, c)

    @property
    def m22(self) -> float:
        return -self.m11

    def entries(self) -> tuple[float, float, float]:
        return (self.m11, self.m12, self.m21)

    def rows(self) -> list[list[float]]:
        return [[self.m11, self.m12], [self.m21, -self.m11]]

    def __add__(self, other: "LieVector") -> "LieVector":
        return LieVector(self.m11 + other.m11, self.m12 + other.m12, self.m21 + other.m21)

    def __sub__(self, other: "LieVector") -> "LieVector":
        return LieVector(self.m11 - other.m11, self.m12 - other.m12, self.m21 - other.m21)

    def __neg__(self) -> "LieVector":
        return LieVector(-self.m11, -self.m12, -self.m21)

    def __mul__(self, s: float) -> "LieVector":
        return LieVector(s * self.m11, s * self.m12, s * self.m21)

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(2.0 * self.m11 ** 2 + self.m12 ** 2 + self.m21 ** 2)

    def __eq__(self, other):
        if not isinstance(other, LieVector):
            return NotImplemented
        return self.entries() == other.entries()

    def __repr__(self):
        return "LieVector({!r}, {!r}, {!r})".format(*self.entries())


XI = LieVector(0.0, 1.0, -1.0)


def ad(g: GroupElement, xi: LieVector) -> LieVector:
    """Adjoint action ``g xi g^{-1}``; insensitive to the sign of ``g``."""
    a, b, c, d = g.entries()
    h, p, q = xi.m11, xi.m12, xi.m21
    # g xi = [[a h + b q, a p - b h], [c h + d q, c p - d h]]
    # g^{-1} = [[d, -b], [-c, a]]
    r11 = a * h + b * q
    r12 = a * p - b * h
    r21 = c * h + d * q
    r22 = c * p - d * h
    return LieVector(
        r11 * d - r12 * c,
        -r11 * b + r12 * a,
        r21 * d - r22 * c,
    )


def trace_form(xi: LieVector, eta: LieVector) -> float:
    """``trace(xi eta)``."""
    return 2.0 * xi.m11 * eta.m11 + xi.m12 * eta.m21 + xi.m21 * eta.m12


def trace_with(g: GroupElement, xi: LieVector) -> float:
    """``trace(g xi)`` for the stored (positive-trace) lift of ``g``."""
    return (g.m11 - g.m22) * xi.m11 + g.m12 * xi.m21 + g.m21 * xi.m12


def expm(xi: LieVector) -> GroupElement:
    """Matrix exponential of a traceless matrix."""
    delta = xi.m11 ** 2 + xi.m12 * xi.m21  # xi^2 = delta * I
    if delta > 0.0:
        r = math.sqrt(delta)
        c, s = math.cosh(r), math.sinh(r) / r
    elif delta < 0.0:
        r = math.sqrt(-delta)
        c, s = math.cos(r), math.sin(r) / r
    else:
        c, s = 1.0, 1.0
    return GroupElement(c + s * xi.m11, s * xi.m12, s * xi.m21, c - s * xi.m11)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Elliptic:
    angle: float
    fixed_point: HPoint


@dataclass(frozen=True)
class Parabolic:
    pass


@dataclass(frozen=True)
class Hyperbolic:
    pass


@dataclass(frozen=True)
class Identity:
    pass


IsometryClass = Union[Elliptic, Parabolic, Hyperbolic, Identity]


def is_elliptic(g: GroupElement, tol: float = TOL_CLASS) -> bool:
    return abs(g.trace) < 2.0 - tol


def classify(g: GroupElement) -> IsometryClass:
    if is_identity(g):
        return Identity()
    tr = abs(g.trace)
    if tr < 2.0 - TOL_CLASS:
        return Elliptic(rotation_angle(g), fixed_point(g))
    if tr > 2.0 + TOL_CLASS:
        return Hyperbolic()
    return Parabolic()


def _require_elliptic(g: GroupElement) -> None:
    if not is_elliptic(g):
        raise NotElliptic(f"|trace| = {abs(g.trace)!r} is not below 2 - {TOL_CLASS}")


def fixed_point(g: GroupElement) -> HPoint:
    """Unique fixed point in the upper half-plane of an elliptic element."""
    _require_elliptic(g)
    a, b, c, d = g.entries()
    tr = a + d
    # root of c z^2 + (d - a) z - b with positive imaginary part
    disc = (2.0 - tr) * (2.0 + tr)
    return HPoint((a - d) / (2.0 * c), math.sqrt(disc) / (2.0 * abs(c)))


def rotation_angle(g: GroupElement) -> float:
    """Rotation angle in ``(0, 2*pi)`` of an elliptic element."""
    p = fixed_point(g)
    t = transvection(p)
    h = t.inverse() @ g @ t
    # h = +-rot(theta); average the redundant entries
    half = math.atan2(0.5 * (h.m12 - h.m21), 0.5 * (h.m11 + h.m22))
    if half <= 0.0:
        half += math.pi
    return 2.0 * half


def bar_angle(g: GroupElement) -> float:
    """Upper semi-continuous extension: 0 off the elliptic locus, 2*pi at the identity."""
    if is_identity(g):
        return TWO_PI
    if is_elliptic(g):
        return rotation_angle(g)
    return 0.0


def rot(theta: float) -> GroupElement:
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return GroupElement(c, s, -s, c)


def rotation_about(p: HPoint, theta: float) -> GroupElement:
    """Elliptic element fixing ``p`` with rotation angle ``theta mod 2 pi``."""
    u, v = p.re, p.im
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    # T rot T^{-1} with T = [[sqrt v, u/sqrt v], [0, 1/sqrt v]]
    return GroupElement(
        c - s * u / v,
        s * (v + u * u / v),
        -s / v,
        c + s * u / v,
    )
