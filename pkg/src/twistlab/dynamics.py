"""Twist flows, Dehn twists and twist words on chain representations.

The flow of ``theta_{b_i}`` fixes ``c_1 .. c_{i+1}`` and conjugates
``c_{i+2} .. c_n`` (whose product is ``phi(b_i)``) by the rotation of angle
``2t`` about the fixed point of ``phi(b_i)``.  The flow of ``theta_{d_i}``
moves the block ``c_{i+1}, c_{i+2}``; since the product of that block is
``phi(d_i)^{-1}`` rather than ``phi(d_i)``, the block is rotated by ``-2t``
so that both families obey the same rule (the moving side, read as a product,
is the curve itself up to conjugation).  With this sign the two flows are the
Hamiltonian flows of their angle functions for one and the same symplectic
form, so brackets computed through either flow are antisymmetric.

Flows have period ``pi`` and the Dehn twist is the flow at half the angle.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence, Union

from . import hyp2
from .errors import NotElliptic, ValidationError
from .hyp2 import GroupElement
from .surface import B, D, ChainRep, check_curve, holonomy

FlowCurve = Union[B, D]

#: renormalize and re-verify after this many word letters
RECANON_EVERY = 64


def _moving_block(n: int, c: FlowCurve) -> range:
    """0-based indices of the generators conjugated by the flow of ``c``."""
    if isinstance(c, B):
        return range(c.i + 1, n)
    if isinstance(c, D):
        return range(c.i, c.i + 2)
    raise ValidationError(f"no twist flow along {c!r}")


def _direction(c: FlowCurve) -> int:
    return 1 if isinstance(c, B) else -1


def _conjugate_block(rep: ChainRep, c: FlowCurve, h: GroupElement) -> ChainRep:
    hinv = h.inverse()
    gens = list(rep.gens)
    for j in _moving_block(rep.n, c):
        gens[j] = h @ gens[j] @ hinv
    return rep.with_gens(gens)


def _holonomy_checked(rep: ChainRep, c: FlowCurve) -> GroupElement:
    if not isinstance(c, (B, D)):
        raise ValidationError(f"no twist flow along {c!r}")
    check_curve(c, rep.n)
    g = holonomy(rep, c)
    if not hyp2.is_elliptic(g):
        raise NotElliptic(f"holonomy of {c} is not elliptic (trace {g.trace!r})")
    return g


def flow_conjugator(rep: ChainRep, c: FlowCurve, t: float) -> GroupElement:
    g = _holonomy_checked(rep, c)
    return hyp2.rotation_about(hyp2.fixed_point(g), _direction(c) * 2.0 * t)


def twist_flow(rep: ChainRep, c: FlowCurve, t: float) -> ChainRep:
    """Time-``t`` twist flow of the angle function of ``c``."""
    return _conjugate_block(rep, c, flow_conjugator(rep, c, t))


def dehn_twist(rep: ChainRep, c: FlowCurve) -> ChainRep:
    """Dehn twist along ``c``, computed as the flow at half the rotation angle."""
    g = _holonomy_checked(rep, c)
    return twist_flow(rep, c, 0.5 * hyp2.rotation_angle(g))


def dehn_twist_direct(rep: ChainRep, c: FlowCurve, m: int = 1) -> ChainRep:
    """Dehn twist by direct conjugation of the moving block.

    The block is conjugated by its own product: ``phi(b_i)`` for b-curves and
    ``phi(d_i)^{-1} = phi(c_{i+1} c_{i+2})`` for d-curves.
    """
    g = _holonomy_checked(rep, c)
    h = g if isinstance(c, B) else g.inverse()
    return _conjugate_block(rep, c, h ** m)


def dehn_twist_power(rep: ChainRep, c: FlowCurve, m: int) -> ChainRep:
    """``m``-th power of the Dehn twist in a single flow step."""
    if m == 0:
        check_curve(c, rep.n)
        return rep
    g = _holonomy_checked(rep, c)
    return twist_flow(rep, c, 0.5 * m * hyp2.rotation_angle(g))


# ---------------------------------------------------------------------------
# twist words

TwistWord = tuple  # tuple of (B(i) | D(i), nonzero int)

_LETTER_RE = re.compile(r"^([bd])(\d+)(?:\^(-?\d+))?$")


def parse_twist_word(text: str) -> TwistWord:
    """Parse ``"b1^3 d2^-1 b1^-3"``; ``^1`` may be omitted."""
    letters = []
    for token in text.split():
        match = _LETTER_RE.match(token)
        if not match:
            raise ValidationError(f"bad twist-word letter {token!r}")
        kind, idx = match.group(1), int(match.group(2))
        power = int(match.group(3)) if match.group(3) is not None else 1
        if power == 0:
            raise ValidationError(f"zero power in letter {token!r}")
        letters.append((B(idx) if kind == "b" else D(idx), power))
    return tuple(letters)


def format_twist_word(word: TwistWord) -> str:
    return " ".join(f"{c}^{m}" for c, m in word)


def apply_twist_word(rep: ChainRep, word: Iterable, recanon_every: int = RECANON_EVERY) -> ChainRep:
    """Apply the letters of ``word`` left to right.

    Every ``recanon_every`` letters the generators are re-projected to
    determinant one and the representation invariants are re-verified.
    """
    for count, (c, m) in enumerate(word, start=1):
        rep = dehn_twist_power(rep, c, m)
        if recanon_every and count % recanon_every == 0:
            rep = rep.renormalized().verify()
    return rep


def generators(n: int, families: Sequence[str] = ("b", "d")) -> list[FlowCurve]:
    out: list[FlowCurve] = []
    if "b" in families:
        out += [B(i) for i in range(1, n - 2)]
    if "d" in families:
        out += [D(i) for i in range(1, n - 2)]
    return out
