"""Deroin-Tholozan representations from angle data.

A representation is assembled from pairs of pants along the chain
decomposition cut by ``b_1, ..., b_{n-3}``::

    P_1     = (c_1, c_2, b_1)
    P_j     = (b_{j-1}^{-1}, c_{j+1}, b_j)        2 <= j <= n-3
    P_{n-2} = (b_{n-3}^{-1}, c_{n-1}, c_n)

Each pants triple is realised by rotations about the vertices of a hyperbolic
triangle, glued along the b-curves, and finally twisted by the flows of the
b-curves.  The action coordinates ``x_i`` are the rotation angles of
``phi(b_i)``; they range over a simplex of size ``lambda`` (the moment
polytope).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import hyp2
from .errors import (
    AnglesConditionViolated,
    DimensionMismatch,
    NumericalFailure,
    PolytopeViolation,
    ValidationError,
)
from .hyp2 import TWO_PI, GroupElement, HPoint
from .surface import B, ChainRep

TOL_PANTS = 1e-12
TOL_BUILD = 1e-8


@dataclass(frozen=True)
class AngleVector:
    alpha: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if len(alpha) < 3:
            raise DimensionMismatch("need at least three angles")
        for a in alpha:
            if not 0.0 < a < TWO_PI:
                raise ValidationError(f"angle {a!r} not in (0, 2 pi)")
        if not self.lam > 0.0:
            raise AnglesConditionViolated(
                f"angles condition alpha_1 + ... + alpha_n > 2 pi (n - 1) fails: "
                f"sum = {sum(alpha):.12g}, 2 pi (n - 1) = {TWO_PI * (len(alpha) - 1):.12g}"
            )

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def lam(self) -> float:
        """Scaling parameter ``sum(alpha) - 2 pi (n - 1)``."""
        return sum(self.alpha) - TWO_PI * (len(self.alpha) - 1)

    @property
    def deficits(self) -> np.ndarray:
        return TWO_PI - np.asarray(self.alpha)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Tight axis-aligned box around the moment polytope."""
        lo = np.cumsum(self.deficits)[1:-2]
        return lo, lo + self.lam


def as_angles(alpha) -> AngleVector:
    return alpha if isinstance(alpha, AngleVector) else AngleVector(tuple(alpha))


# ---------------------------------------------------------------------------
# pairs of pants


def _triangle(th1: float, th2: float, th3: float, orientation: int):
    """Vertices of a hyperbolic triangle with interior angles ``th1, th2, th3``.

    ``P1 = i``, ``P2`` up the imaginary axis, ``P3`` on the side selected by
    ``orientation`` (+1: left of the ray P1 -> P2).
    """
    c1, c2, c3 = math.cos(th1), math.cos(th2), math.cos(th3)
    s1, s2, s3 = math.sin(th1), math.sin(th2), math.sin(th3)
    l3 = math.acosh((c1 * c2 + c3) / (s1 * s2))
    l2 = math.acosh((c1 * c3 + c2) / (s1 * s3))
    p1 = hyp2.I_POINT
    p2 = HPoint(0.0, math.exp(l3))
    p3 = HPoint.from_complex(hyp2.mobius(hyp2.rot(orientation * th1), 1j * math.exp(l2)))
    return p1, p2, p3


def _vertex_rotations(beta, orientation):
    th = [math.pi - 0.5 * b for b in beta]
    verts = _triangle(*th, orientation)
    return tuple(hyp2.rotation_about(p, b) for p, b in zip(verts, beta))


@functools.lru_cache(maxsize=None)
def _orientation() -> int:
    """Which side of the triangle makes the vertex rotations close up.

    Decided once on the equilateral triple and reused afterwards.
    """
    beta = (5.0 * math.pi / 3.0,) * 3
    for orientation in (1, -1):
        a1, a2, a3 = _vertex_rotations(beta, orientation)
        if hyp2.is_identity(a1 @ a2 @ a3):
            return orientation
    raise NumericalFailure("neither triangle orientation closes the pants relation")


def pants_rep(beta1: float, beta2: float, beta3: float):
    """Elliptic triple ``(A1, A2, A3)`` with ``A1 A2 A3 = 1`` and prescribed angles.

    Requires ``beta1 + beta2 + beta3 > 4 pi``; the triple then has relative
    Euler class 2.
    """
    beta = (float(beta1), float(beta2), float(beta3))
    for b in beta:
        if not 0.0 < b < TWO_PI:
            raise ValidationError(f"pants angle {b!r} not in (0, 2 pi)")
    if not sum(beta) > 2.0 * TWO_PI + TOL_PANTS:
        raise AnglesConditionViolated(
            f"pants angles sum to {sum(beta):.12g}, need more than 4 pi"
        )
    return _vertex_rotations(beta, _orientation())


def small_pants_rep(beta1: float, beta2: float, beta3: float):
    """Elliptic triple with product one and angle sum below ``2 pi`` (Euler class 1)."""
    beta = (float(beta1), float(beta2), float(beta3))
    if not sum(beta) < TWO_PI - TOL_PANTS or min(beta) <= 0.0:
        raise ValidationError("small pants need positive angles summing below 2 pi")
    # inverses of a supra-maximal triple, in reverse order
    a3, a2, a1 = _vertex_rotations(tuple(TWO_PI - b for b in reversed(beta)), _orientation())
    return a1.inverse(), a2.inverse(), a3.inverse()


# ---------------------------------------------------------------------------
# moment polytope


def pants_angles(alpha: Sequence[float], x: Sequence[float]) -> list[tuple[float, float, float]]:
    """Boundary angles of every pants in the chain decomposition."""
    n = len(alpha)
    if len(x) != n - 3:
        raise DimensionMismatch(f"expected {n - 3} action coordinates, got {len(x)}")
    if n == 3:
        return [tuple(alpha)]
    out = [(alpha[0], alpha[1], x[0])]
    for j in range(1, n - 3):
        out.append((TWO_PI - x[j - 1], alpha[j + 1], x[j]))
    out.append((TWO_PI - x[-1], alpha[n - 2], alpha[n - 1]))
    return out


def polytope_contains(alpha, x: Sequence[float], margin: float = 0.0) -> bool:
    av = as_angles(alpha)
    x = [float(v) for v in x]
    triples = pants_angles(av.alpha, x)
    if any(not margin < v < TWO_PI - margin for v in x):
        return False
    return all(sum(t) > 2.0 * TWO_PI + margin for t in triples)


def sample_polytope(alpha, size: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the open moment polytope, by box rejection."""
    av = as_angles(alpha)
    k = av.n - 3
    if k == 0:
        return np.zeros((size, 0))
    lo, hi = av.bounding_box()
    gaps = av.deficits[2:-2]
    out = np.empty((0, k))
    while len(out) < size:
        batch = rng.uniform(lo, hi, size=(max(64, 2 * (size - len(out)) * math.factorial(k)), k))
        keep = np.all(np.diff(batch, axis=1) > gaps, axis=1) if k > 1 else np.ones(len(batch), bool)
        out = np.vstack([out, batch[keep]])
    return out[:size]


def sample_alpha(n: int, rng: np.random.Generator, margin: float = 0.0) -> AngleVector:
    """Random angle vector satisfying the angles condition.

    The deficits ``2 pi - alpha_i`` together with ``lambda`` are drawn
    uniformly on the simplex of total size ``2 pi``; draws with a component
    below ``margin`` are rejected.
    """
    while True:
        parts = rng.dirichlet(np.ones(n + 1)) * TWO_PI
        if parts.min() > margin:
            return AngleVector(tuple(TWO_PI - parts[:n]))


# ---------------------------------------------------------------------------
# assembly


def _glue(first: GroupElement, target: GroupElement) -> GroupElement:
    """Isometry carrying the fixed point of ``first`` to that of ``target``."""
    p = hyp2.fixed_point(first)
    q = hyp2.fixed_point(target)
    return hyp2.transvection(q) @ hyp2.transvection(p).inverse()


def build_rep(alpha, x: Sequence[float], t: Optional[Sequence[float]] = None) -> ChainRep:
    """Deroin-Tholozan representation with ``theta_{b_i} = x_i``, twisted by ``t``."""
    from .dynamics import twist_flow

    av = as_angles(alpha)
    n = av.n
    x = [float(v) for v in x]
    t = [0.0] * (n - 3) if t is None else [float(v) for v in t]
    if len(x) != n - 3 or len(t) != n - 3:
        raise DimensionMismatch(f"n = {n} needs {n - 3} action and twist parameters")
    if not polytope_contains(av, x, 0.0):
        raise PolytopeViolation(f"action coordinates {x} lie outside the moment polytope")

    triples = pants_angles(av.alpha, x)
    if n == 3:
        gens = list(pants_rep(*triples[0]))
    else:
        c1, c2, bj = pants_rep(*triples[0])
        gens = [c1, c2]
        for triple in triples[1:]:
            a1, a2, a3 = pants_rep(*triple)
            h = _glue(a1, bj)
            gens.append(h.conj(a2))
            bj = h.conj(a3)
        gens.append(bj)  # the last "b" is phi(c_n)

    rep = ChainRep(n, av.alpha, tuple(gens))
    for j, tj in enumerate(t, start=1):
        if tj != 0.0:
            rep = twist_flow(rep, B(j), tj)
    defect = rep.product_defect()
    if defect > TOL_BUILD:
        raise NumericalFailure(f"assembled product deviates from identity by {defect:.3e}")
    return rep


def random_dt_rep(alpha, seed) -> ChainRep:
    """Random point of the Deroin-Tholozan component, uniform for the Liouville measure."""
    av = as_angles(alpha)
    rng = np.random.default_rng(seed)
    x = sample_polytope(av, 1, rng)[0]
    t = rng.uniform(0.0, math.pi, size=av.n - 3)
    return build_rep(av, x, t)
