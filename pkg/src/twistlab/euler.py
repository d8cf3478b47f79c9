"""Relative Euler class and volume by pants-decomposition bookkeeping.

For a pair of pants with elliptic boundary holonomies ``A1 A2 A3 = 1`` the
relative Euler class is 1 when the rotation angles sum to at most ``2 pi`` and
2 when they sum to at least ``4 pi``; nothing in between occurs.  Volumes are
additive under gluing along the chain curves ``b_i``, and the two pants
meeting at ``b_i`` see the complementary angles ``x_i`` and ``2 pi - x_i``,
which gives ``k = sum(k_j) - (n - 3)``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import hyp2
from .errors import DichotomyViolated, NotElliptic, NotTotallyElliptic, ValidationError
from .hyp2 import TWO_PI, GroupElement
from .surface import B, ChainRep, holonomy

TOL_DICHOTOMY = 1e-6
TOL_PRODUCT = 1e-8


@dataclass
class VolumeReport:
    k: int
    vol: float
    per_pants_k: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def pants_euler_class(a1: GroupElement, a2: GroupElement, a3: GroupElement) -> int:
    defect = hyp2.distance(a1 @ a2 @ a3, GroupElement.identity())
    if defect > TOL_PRODUCT:
        raise ValidationError(f"pants triple does not multiply to the identity ({defect:.3e})")
    for a in (a1, a2, a3):
        if not hyp2.is_elliptic(a):
            raise NotElliptic("pants boundary holonomy is not elliptic")
    total = sum(hyp2.rotation_angle(a) for a in (a1, a2, a3))
    if total <= TWO_PI + TOL_DICHOTOMY:
        return 1
    if total >= 2.0 * TWO_PI - TOL_DICHOTOMY:
        return 2
    raise DichotomyViolated(f"pants angle sum {total:.12g} lies strictly between 2 pi and 4 pi")


def pants_triples(rep: ChainRep) -> list[tuple[GroupElement, GroupElement, GroupElement]]:
    """Boundary holonomies of the chain pants decomposition, each with product one."""
    n = rep.n
    if n == 3:
        return [rep.gens]
    bs = []
    for i in range(1, n - 2):
        b = holonomy(rep, B(i))
        if not hyp2.is_elliptic(b):
            raise NotTotallyElliptic(f"holonomy of b{i} is not elliptic")
        bs.append(b)
    out = [(rep.gen(1), rep.gen(2), bs[0])]
    for j in range(1, n - 3):
        out.append((bs[j - 1].inverse(), rep.gen(j + 2), bs[j]))
    out.append((bs[-1].inverse(), rep.gen(n - 1), rep.gen(n)))
    return out


def pants_volume(triple) -> float:
    k = pants_euler_class(*triple)
    return TWO_PI * k - sum(hyp2.rotation_angle(a) for a in triple)


def relative_euler_class(rep: ChainRep) -> VolumeReport:
    triples = pants_triples(rep)
    try:
        per_pants = [pants_euler_class(*t) for t in triples]
    except NotElliptic as exc:
        raise NotTotallyElliptic(str(exc)) from exc
    k = sum(per_pants) - (rep.n - 3)
    vol = TWO_PI * k - sum(hyp2.bar_angle(g) for g in rep.gens)
    return VolumeReport(k=k, vol=vol, per_pants_k=per_pants)


def volume(rep: ChainRep) -> float:
    return relative_euler_class(rep).vol


def is_deroin_tholozan(rep: ChainRep) -> bool:
    try:
        return relative_euler_class(rep).k == rep.n - 1
    except (NotTotallyElliptic, DichotomyViolated):
        return False


def milnor_wood_bound(rep: ChainRep) -> float:
    """Right-hand side of the Milnor-Wood type inequality for ``k``."""
    return max(rep.n - 2, sum(hyp2.bar_angle(g) for g in rep.gens) / TWO_PI)

