"""Punctured-sphere group: generators, chain curves, words and representations.

The group is generated by ``c_1, ..., c_n`` with the single relation
``c_1 c_2 ... c_n = 1``.  The chain curves are

    b_i = c_{i+1}^{-1} c_i^{-1} ... c_1^{-1}     (1 <= i <= n-3)
    d_i = c_{i+2}^{-1} c_{i+1}^{-1}              (1 <= i <= n-3)

together with the peripheral loops ``c_i`` and the curves obtained from
``d_i`` by powers of the Dehn twist along ``b_i``.  Indices are 1-based
throughout, matching the usual notation; Python containers are 0-based.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

from . import hyp2
from .errors import DimensionMismatch, IntegrityError, UnsupportedCurve, ValidationError
from .hyp2 import GroupElement

TOL_PRODUCT = 1e-9
TOL_ANGLE = 1e-9
TOL_DRIFT = 1e-7


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class Peripheral:
    i: int

    def __str__(self):
        return f"c{self.i}"


@dataclass(frozen=True)
class B:
    i: int

    def __str__(self):
        return f"b{self.i}"


@dataclass(frozen=True)
class D:
    i: int

    def __str__(self):
        return f"d{self.i}"


@dataclass(frozen=True)
class TwistedD:
    """The curve ``(tau_{b_i})^m d_i``."""

    i: int
    m: int

    def __str__(self):
        return f"d{self.i}~m{self.m}"


ChainCurve = Union[Peripheral, B, D, TwistedD]

_CURVE_RE = re.compile(r"^\s*([cbd])(\d+)(?:~m(-?\d+))?\s*$")


def parse_curve(text: str) -> ChainCurve:
    """Parse ``"c3"``, ``"b1"``, ``"d2"`` or ``"d2~m-3"``."""
    match = _CURVE_RE.match(text)
    if not match:
        raise ValidationError(f"cannot parse curve {text!r}")
    kind, idx, m = match.group(1), int(match.group(2)), match.group(3)
    if m is not None:
        if kind != "d":
            raise ValidationError(f"only d-curves can be twisted: {text!r}")
        m = int(m)
        return D(idx) if m == 0 else TwistedD(idx, m)
    return {"c": Peripheral, "b": B, "d": D}[kind](idx)


def check_curve(c: ChainCurve, n: int) -> None:
    if isinstance(c, Peripheral):
        ok = 1 <= c.i <= n
    elif isinstance(c, (B, D, TwistedD)):
        ok = 1 <= c.i <= n - 3
    else:
        raise UnsupportedCurve(f"unknown curve {c!r}")
    if not ok:
        raise ValidationError(f"curve {c} out of range for n = {n}")


def chain_curves(n: int) -> list[ChainCurve]:
    """All peripheral, b- and d-curves for the n-punctured sphere."""
    out: list[ChainCurve] = [Peripheral(i) for i in range(1, n + 1)]
    out += [B(i) for i in range(1, n - 2)]
    out += [D(i) for i in range(1, n - 2)]
    return out


# ---------------------------------------------------------------------------
# words

Word = tuple  # tuple of (generator index, exponent +-1)


def curve_word(c: ChainCurve) -> Word:
    if isinstance(c, Peripheral):
        return ((c.i, 1),)
    if isinstance(c, B):
        return tuple((j, -1) for j in range(c.i + 1, 0, -1))
    if isinstance(c, D):
        return ((c.i + 2, -1), (c.i + 1, -1))
    if isinstance(c, TwistedD) and c.m == 0:
        return curve_word(D(c.i))
    raise UnsupportedCurve(f"{c} has no fixed word over the generators")


def word_inverse(w: Word) -> Word:
    return tuple((j, -e) for j, e in reversed(w))


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class ChainRep:
    """Images ``phi(c_1), ..., phi(c_n)`` together with the target angles."""

    n: int
    alpha: tuple
    gens: tuple

    def __post_init__(self):
        if self.n < 3:
            raise ValidationError("need at least three punctures")
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "gens", tuple(self.gens))
        if len(self.alpha) != self.n or len(self.gens) != self.n:
            raise DimensionMismatch(
                f"n = {self.n} but {len(self.alpha)} angles and {len(self.gens)} generators"
            )
        for a in self.alpha:
            if not 0.0 < a < hyp2.TWO_PI:
                raise ValidationError(f"angle {a!r} not in (0, 2 pi)")

    def gen(self, j: int) -> GroupElement:
        """``phi(c_j)``, 1-based."""
        return self.gens[j - 1]

    def with_gens(self, gens: Sequence[GroupElement]) -> "ChainRep":
        return ChainRep(self.n, self.alpha, tuple(gens))

    def product(self) -> GroupElement:
        out = self.gens[0]
        for g in self.gens[1:]:
            out = out @ g
        return out

    def product_defect(self) -> float:
        return hyp2.distance(self.product(), GroupElement.identity())

    def angle_defect(self) -> float:
        worst = 0.0
        for a, g in zip(self.alpha, self.gens):
            if not hyp2.is_elliptic(g):
                return math.inf
            worst = max(worst, abs(hyp2.rotation_angle(g) - a))
        return worst

    def check(self, tol_product: float = TOL_PRODUCT, tol_angle: float = TOL_ANGLE) -> "ChainRep":
        """Raise :class:`IntegrityError` unless the relation and the angles hold."""
        dp = self.product_defect()
        if dp > tol_product:
            raise IntegrityError(f"product relation violated by {dp:.3e}")
        da = self.angle_defect()
        if da > tol_angle:
            raise IntegrityError(f"peripheral angles drifted by {da:.3e}")
        return self

    def verify(self) -> "ChainRep":
        """Lazy drift check used on long orbits."""
        return self.check(TOL_DRIFT, TOL_DRIFT)

    def renormalized(self) -> "ChainRep":
        """Re-project every generator to determinant one exactly as possible."""
        gens = []
        for g in self.gens:
            s = math.sqrt(g.det)
            gens.append(GroupElement(g.m11 / s, g.m12 / s, g.m21 / s, g.m22 / s))
        return self.with_gens(gens)

    @property
    def lam(self) -> float:
        return sum(self.alpha) - 2.0 * math.pi * (self.n - 1)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": list(self.alpha),
            "generators": [g.rows() for g in self.gens],
        }

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "ChainRep":
        gens = tuple(GroupElement.from_rows(rows) for rows in data["generators"])
        rep = cls(int(data["n"]), tuple(data["alpha"]), gens)
        if check:
            rep.check()
        return rep

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, check: bool = True) -> "ChainRep":
        return cls.from_dict(json.loads(text), check=check)


def evaluate_word(rep: ChainRep, w: Word) -> GroupElement:
    out = GroupElement.identity()
    for j, e in w:
        if not 1 <= j <= rep.n:
            raise ValidationError(f"generator index {j} out of range")
        g = rep.gen(j)
        out = out @ (g if e > 0 else g.inverse())
    return out


def holonomy(rep: ChainRep, c: ChainCurve) -> GroupElement:
    """``phi(c)``; twisted d-curves are pushed forward along the b-twist."""
    check_curve(c, rep.n)
    if isinstance(c, TwistedD):
        if c.m == 0:
            return holonomy(rep, D(c.i))
        from .dynamics import dehn_twist_power

        return holonomy(dehn_twist_power(rep, B(c.i), c.m), D(c.i))
    if isinstance(c, Peripheral):
        return rep.gen(c.i)
    return evaluate_word(rep, curve_word(c))


def conjugate_rep(rep: ChainRep, h: GroupElement) -> ChainRep:
    hinv = h.inverse()
    return rep.with_gens([h @ g @ hinv for g in rep.gens])


def normalize_at(rep: ChainRep, c: ChainCurve) -> ChainRep:
    """Conjugate so that the fixed point of ``phi(c)`` is ``i``."""
    p = hyp2.fixed_point(holonomy(rep, c))
    return conjugate_rep(rep, hyp2.transvection(p).inverse())
