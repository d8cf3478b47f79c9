"""Angle functions, tangent cocycles and Poisson brackets of chain curves.

Tangent vectors at a representation are encoded by cocycles
``v: group -> sl(2,R)`` with ``v(xy) = v(x) + Ad(phi(x)) v(y)``, given by
their values on the generators.  The flow of a b- or d-curve has the cocycle
``v(c_j) = Z - Ad(phi(c_j)) Z`` on its moving block, where ``Z`` generates
the rotations about the fixed point of the curve.

The bracket ``{theta_{b_i}, theta_{d_i}}`` is the derivative of
``theta_{d_i}`` along the flow of ``b_i``.  Along a flow orbit (normalized so
that ``phi(b_i)`` fixes ``i``) it vanishes exactly where

    cos(2t) P = sin(2t) Q,
    P = (a - d)(y + z) - (b + c)(x - w),
    Q = (x - w)(d - a) - (b + c)(y + z),

with ``(a, b; c, d) = phi(c_{i+2})^{-1}`` and ``(x, y; z, w) = phi(c_{i+1})^{-1}``.
Unless ``P = Q = 0`` this has exactly two roots in ``[0, pi)``, a quarter
period apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import hyp2
from .errors import DegenerateOrbit, NotElliptic, NotNormalized, TotalEllipticityViolation
from .hyp2 import XI, GroupElement, LieVector
from .surface import B, D, ChainCurve, ChainRep, Word, check_curve, curve_word, holonomy

TOL_NORMALIZED = 1e-8
TOL_E = 1e-7
M_MAX = 8
FD_STEP = 1e-5
TOL_DEGENERATE = 1e-10


@dataclass(frozen=True)
class TangentCocycle:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __add__(self, other: "TangentCocycle") -> "TangentCocycle":
        return TangentCocycle(tuple(u + v for u, v in zip(self.values, other.values)))

    def __mul__(self, s: float) -> "TangentCocycle":
        return TangentCocycle(tuple(v * s for v in self.values))

    __rmul__ = __mul__


@dataclass
class BracketScan:
    i: int
    zeros: list
    P: float = 0.0
    Q: float = 0.0
    ts: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    fd_values: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# angle functions


def angle_fn(rep: ChainRep, c: ChainCurve) -> float:
    g = holonomy(rep, c)
    if not hyp2.is_elliptic(g):
        raise TotalEllipticityViolation(f"holonomy of {c} is not elliptic (trace {g.trace!r})")
    return hyp2.rotation_angle(g)


def moment_map(rep: ChainRep) -> tuple:
    """``(theta_{b_1}, ..., theta_{b_{n-3}})``."""
    return tuple(angle_fn(rep, B(i)) for i in range(1, rep.n - 2))


# ---------------------------------------------------------------------------
# cocycles


def cocycle_eval(rep: ChainRep, v: TangentCocycle, w: Word) -> LieVector:
    acc = LieVector.zero()
    g_acc = GroupElement.identity()
    for j, e in w:
        g = rep.gen(j)
        val = v.values[j - 1]
        if e < 0:
            g = g.inverse()
            val = -hyp2.ad(g, val)
        acc = acc + hyp2.ad(g_acc, val)
        g_acc = g_acc @ g
    return acc


def coboundary(rep: ChainRep, xi: LieVector) -> TangentCocycle:
    return TangentCocycle(tuple(xi - hyp2.ad(g, xi) for g in rep.gens))


def _is_normalized(rep: ChainRep, c: ChainCurve) -> bool:
    p = hyp2.fixed_point(holonomy(rep, c))
    return abs(complex(p) - 1j) <= TOL_NORMALIZED


def hamiltonian_cocycle_b(rep: ChainRep, i: int) -> TangentCocycle:
    """Flow cocycle of ``b_i`` for a representation with ``fix(phi(b_i)) = i``."""
    if not _is_normalized(rep, B(i)):
        raise NotNormalized(f"fixed point of phi(b{i}) is not i")
    zero = LieVector.zero()
    return TangentCocycle(
        tuple(zero if j <= i + 1 else XI - hyp2.ad(rep.gen(j), XI) for j in range(1, rep.n + 1))
    )


def twist_cocycle(rep: ChainRep, c) -> TangentCocycle:
    """Flow cocycle of a b- or d-curve, for any representative."""
    from .dynamics import _direction, _moving_block

    check_curve(c, rep.n)
    p = hyp2.fixed_point(holonomy(rep, c))
    z = hyp2.ad(hyp2.transvection(p), XI) * _direction(c)
    block = set(_moving_block(rep.n, c))
    zero = LieVector.zero()
    return TangentCocycle(
        tuple(z - hyp2.ad(g, z) if j in block else zero for j, g in enumerate(rep.gens))
    )


def differential_zero_test(rep: ChainRep, c: ChainCurve, v: TangentCocycle) -> float:
    """``trace(phi(a) v(a))`` for the positive-trace lift; zero iff ``d theta_a (v) = 0``."""
    a = holonomy(rep, c)
    if not hyp2.is_elliptic(a):
        raise NotElliptic(f"holonomy of {c} is not elliptic")
    return hyp2.trace_with(a, cocycle_eval(rep, v, curve_word(c)))


def angle_derivative(rep: ChainRep, c: ChainCurve, v: TangentCocycle) -> float:
    """Derivative of ``theta_c`` in the direction of the cocycle ``v``.

    From ``2 cos(theta/2) = trace(A)`` for the lift ``A`` with negative
    lower-left entry.
    """
    a = holonomy(rep, c)
    if not hyp2.is_elliptic(a):
        raise NotElliptic(f"holonomy of {c} is not elliptic")
    theta = hyp2.rotation_angle(a)
    sign = -1.0 if a.m21 < 0.0 else 1.0
    return sign * hyp2.trace_with(a, cocycle_eval(rep, v, curve_word(c))) / math.sin(0.5 * theta)


# ---------------------------------------------------------------------------
# brackets


def poisson_bracket(rep: ChainRep, i: int) -> float:
    """``{theta_{b_i}, theta_{d_i}}`` from the flow cocycle of ``b_i``."""
    return angle_derivative(rep, D(i), twist_cocycle(rep, B(i)))


def poisson_bracket_fd(rep: ChainRep, i: int, h: float = FD_STEP) -> float:
    """``{theta_{b_i}, theta_{d_i}}`` by a central difference along the b-flow."""
    from .dynamics import twist_flow

    plus = angle_fn(twist_flow(rep, B(i), h), D(i))
    minus = angle_fn(twist_flow(rep, B(i), -h), D(i))
    return (plus - minus) / (2.0 * h)


def reverse_bracket_fd(rep: ChainRep, i: int, h: float = FD_STEP) -> float:
    """``{theta_{d_i}, theta_{b_i}}`` by a central difference along the d-flow."""
    from .dynamics import twist_flow

    plus = angle_fn(twist_flow(rep, D(i), h), B(i))
    minus = angle_fn(twist_flow(rep, D(i), -h), B(i))
    return (plus - minus) / (2.0 * h)


def _residual_coefficients(rep: ChainRep, i: int) -> tuple[float, float, tuple, tuple]:
    if not _is_normalized(rep, B(i)):
        raise NotNormalized(f"fixed point of phi(b{i}) is not i")
    a, b, c, d = rep.gen(i + 2).inverse().entries()
    x, y, z, w = rep.gen(i + 1).inverse().entries()
    P = (a - d) * (y + z) - (b + c) * (x - w)
    Q = (x - w) * (d - a) - (b + c) * (y + z)
    return P, Q, (a, b, c, d), (x, y, z, w)


def bracket_zero_residual(rep: ChainRep, i: int, t: float) -> float:
    """``cos(2t) P - sin(2t) Q``; zero iff the bracket vanishes after flowing for time ``t``."""
    P, Q, _, _ = _residual_coefficients(rep, i)
    return math.cos(2.0 * t) * P - math.sin(2.0 * t) * Q


def trace_condition(rep: ChainRep, i: int) -> tuple[float, float]:
    """Both sides of ``tr(Xi c_{i+2}^{-1} c_{i+1}^{-1}) = tr(Xi c_{i+1}^{-1} c_{i+2}^{-1})``."""
    if not _is_normalized(rep, B(i)):
        raise NotNormalized(f"fixed point of phi(b{i}) is not i")
    u = rep.gen(i + 2).inverse()
    s = rep.gen(i + 1).inverse()
    return hyp2.trace_with(u @ s, XI), hyp2.trace_with(s @ u, XI)


def bracket_vanishes_exact(rep: ChainRep, i: int, tol: float = 1e-9) -> bool:
    from .surface import normalize_at

    lhs, rhs = trace_condition(normalize_at(rep, B(i)), i)
    return abs(lhs - rhs) <= tol


def _degenerate_case(u: tuple, s: tuple, tol: float) -> Optional[str]:
    a, b, c, d = u
    x, y, z, w = s
    if abs(a - d) <= tol and abs(b + c) <= tol:
        return "a=d and b=-c"
    if abs(x - w) <= tol and abs(y + z) <= tol:
        return "x=w and y=-z"
    return None


def find_bracket_zeros(rep: ChainRep, i: int, grid: int = 0) -> BracketScan:
    """Zeros in ``[0, pi)`` of ``t -> {theta_{b_i}, theta_{d_i}}(Phi_{b_i}^t rep)``.

    With ``grid > 0`` the scan also records the residual and a finite-difference
    bracket on ``grid`` equally spaced times.
    """
    from .surface import normalize_at

    check_curve(B(i), rep.n)
    norm = normalize_at(rep, B(i))
    P, Q, u, s = _residual_coefficients(norm, i)
    scale = max(1.0, max(map(abs, u)) * max(map(abs, s)))
    if math.hypot(P, Q) <= TOL_DEGENERATE * scale:
        case = _degenerate_case(u, s, math.sqrt(TOL_DEGENERATE) * scale)
        raise DegenerateOrbit(
            f"bracket vanishes along the whole b{i}-orbit ({case or 'unclassified'})", case=case
        )
    t0 = (0.5 * math.atan2(P, Q)) % (0.5 * math.pi)
    zeros = [t0, t0 + 0.5 * math.pi]
    scan = BracketScan(i=i, zeros=zeros, P=P, Q=Q)
    if grid:
        ts = np.arange(grid) * (math.pi / grid)
        scan.ts = ts.tolist()
        scan.residuals = (np.cos(2.0 * ts) * P - np.sin(2.0 * ts) * Q).tolist()
        scan.fd_values = fd_bracket_along_orbit(rep, i, ts).tolist()
    return scan


def in_E(rep: ChainRep, i: int, m_max: int = M_MAX, tol: float = TOL_E) -> bool:
    """Whether some twisted bracket ``{theta_{b_i}, theta_{(tau_{b_i})^m d_i}}`` is nonzero."""
    from .dynamics import dehn_twist_power

    for m in range(-m_max, m_max + 1):
        if abs(poisson_bracket(dehn_twist_power(rep, B(i), m), i)) > tol:
            return True
    return False


def twisted_bracket(rep: ChainRep, i: int, m: int) -> float:
    """``{theta_{b_i}, theta_{(tau_{b_i})^m d_i}}`` evaluated at ``rep``."""
    from .dynamics import dehn_twist_power

    return poisson_bracket(dehn_twist_power(rep, B(i), m), i)


# ---------------------------------------------------------------------------
# vectorized orbit scan (used for dense-grid checks and CSV output)


def _angles_batch(m: np.ndarray) -> np.ndarray:
    """Rotation angles of a stack of elliptic 2x2 matrices, from trace and lower-left sign."""
    tr = m[:, 0, 0] + m[:, 1, 1]
    sgn = np.where(m[:, 1, 0] < 0.0, 1.0, -1.0)
    half = np.arctan2(np.sqrt(np.clip((2.0 - tr) * (2.0 + tr), 0.0, None)), sgn * tr)
    return 2.0 * half


def _flowed_d(rep: ChainRep, i: int, ts: np.ndarray) -> np.ndarray:
    p = hyp2.fixed_point(holonomy(rep, B(i)))
    u, v = p.re, p.im
    c, s = np.cos(ts), np.sin(ts)
    r = np.empty((len(ts), 2, 2))
    r[:, 0, 0] = c - s * u / v
    r[:, 0, 1] = s * (v + u * u / v)
    r[:, 1, 0] = -s / v
    r[:, 1, 1] = c + s * u / v
    rinv = np.empty_like(r)
    rinv[:, 0, 0] = r[:, 1, 1]
    rinv[:, 0, 1] = -r[:, 0, 1]
    rinv[:, 1, 0] = -r[:, 1, 0]
    rinv[:, 1, 1] = r[:, 0, 0]
    upper = np.array(rep.gen(i + 2).inverse().rows())
    lower = np.array(rep.gen(i + 1).inverse().rows())
    return r @ upper @ rinv @ lower


def fd_bracket_along_orbit(rep: ChainRep, i: int, ts: Sequence[float], h: float = FD_STEP) -> np.ndarray:
    """Central-difference bracket at ``Phi_{b_i}^t rep`` for every ``t`` in ``ts``."""
    ts = np.asarray(ts, dtype=float)
    plus = _angles_batch(_flowed_d(rep, i, ts + h))
    minus = _angles_batch(_flowed_d(rep, i, ts - h))
    return (plus - minus) / (2.0 * h)


def symmetric_fixed_points(alpha_each: float) -> list[ChainRep]:
    """The two fixed points of the d_1-flow for n = 4 with all angles equal.

    By symmetry they sit on the level ``theta_{b_1} = pi``; along that circle
    they are the two zeros of the bracket.
    """
    from .construct import build_rep
    from .dynamics import twist_flow

    alpha = (float(alpha_each),) * 4
    base = build_rep(alpha, (math.pi,), (0.0,))
    return [twist_flow(base, B(1), t) for t in find_bracket_zeros(base, 1).zeros]


# ---------------------------------------------------------------------------
# zero-count campaign

GRID = 4096
TOL_SEPARATION = 1e-6
TOL_GRID_MATCH = 1e-5


def grid_sign_changes(rep: ChainRep, i: int, grid: int = GRID, h: float = FD_STEP) -> list[float]:
    """Zeros of the finite-difference bracket along the b_i-orbit, located on a grid.

    Each sign change on the periodic grid over ``[0, pi)`` is polished by
    Brent's method on the finite-difference bracket itself.
    """
    from scipy.optimize import brentq

    ts = np.arange(grid + 1) * (math.pi / grid)
    f = fd_bracket_along_orbit(rep, i, ts, h)
    scalar = lambda t: float(fd_bracket_along_orbit(rep, i, [t], h)[0])
    roots = []
    for k in range(grid):
        if f[k] == 0.0:
            roots.append(float(ts[k]))
        elif f[k] * f[k + 1] < 0.0:
            roots.append(brentq(scalar, ts[k], ts[k + 1], xtol=1e-13))
    return roots


def _circular_gap(s: float, t: float, period: float = math.pi) -> float:
    d = abs(s - t) % period
    return min(d, period - d)


@dataclass
class KeyLemmaRecord:
    n: int
    i: int
    zeros: int
    separation_error: float
    grid_zeros: int
    grid_match_error: float
    degenerate: Optional[str] = None

    @property
    def ok(self) -> bool:
        return (
            self.degenerate is None
            and self.zeros <= 2
            and self.separation_error <= TOL_SEPARATION
            and self.grid_zeros == self.zeros
            and self.grid_match_error <= TOL_GRID_MATCH
        )


def key_lemma_check(rep: ChainRep, i: int, grid: int = GRID) -> KeyLemmaRecord:
    """Closed-form zeros on the b_i-orbit of ``rep`` against the grid oracle."""
    try:
        zeros = find_bracket_zeros(rep, i).zeros
    except DegenerateOrbit as exc:
        return KeyLemmaRecord(rep.n, i, 0, math.inf, 0, math.inf, degenerate=exc.case or str(exc))
    sep = abs(_circular_gap(zeros[0], zeros[1]) - 0.5 * math.pi) if len(zeros) == 2 else 0.0
    found = grid_sign_changes(rep, i, grid)
    match = max((min(_circular_gap(z, g) for g in found) for z in zeros), default=0.0) if found else math.inf
    return KeyLemmaRecord(rep.n, i, len(zeros), sep, len(found), match)


def key_lemma_trial(alpha, seed: int, grid: int = GRID) -> list[KeyLemmaRecord]:
    from .construct import random_dt_rep

    rep = random_dt_rep(alpha, seed)
    return [key_lemma_check(rep, i, grid) for i in range(1, rep.n - 2)]
