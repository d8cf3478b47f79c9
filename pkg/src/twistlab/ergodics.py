"""Random walks of the twist group and equidistribution diagnostics.

A walk starts at a random Deroin-Tholozan representation and applies, at
every step, one of the Dehn twists ``tau_{b_i}^{+-1}``, ``tau_{d_i}^{+-1}``
chosen uniformly.  The recorded quantity is the moment map
``(theta_{b_1}, ..., theta_{b_{n-3}})``.  Its reference law is the
Liouville measure pushed forward to the polytope, which is uniform there.

In the shifted coordinates ``y_j = x_j - lo_j`` the polytope is
``0 < y_1 < ... < y_{n-3} < lambda``, so uniform samples are order
statistics of ``n - 3`` uniform draws on ``(0, lambda)`` and the marginal of
``y_j / lambda`` is ``Beta(j, n - 2 - j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy import special

from . import hyp2
from .construct import AngleVector, as_angles, polytope_contains, random_dt_rep, sample_polytope
from .dynamics import dehn_twist_power, generators
from .errors import EmptySample, IntegrityError, ValidationError
from .euler import relative_euler_class
from .surface import B, D, ChainRep, chain_curves, holonomy

CHECK_EVERY = 100
TOL_WALK_DRIFT = 1e-6
TOL_POLYTOPE = 1e-6


@dataclass
class WalkConfig:
    alpha: AngleVector
    steps: int
    seed: int
    generator_set: tuple = ()
    thinning: int = 10

    def __post_init__(self):
        self.alpha = as_angles(self.alpha)
        if self.steps < 0:
            raise ValidationError("steps must be non-negative")
        if self.thinning < 1:
            raise ValidationError("thinning must be at least 1")
        if not self.generator_set:
            self.generator_set = tuple(generators(self.alpha.n))
        if not self.generator_set:
            raise ValidationError("a walk needs n >= 4 (no chain curves to twist along)")
        for c in self.generator_set:
            if not isinstance(c, (B, D)) or not 1 <= c.i <= self.alpha.n - 3:
                raise ValidationError(f"invalid walk generator {c!r}")

    def to_dict(self) -> dict:
        return {
            "alpha": list(self.alpha.alpha),
            "steps": self.steps,
            "seed": self.seed,
            "generators": [str(c) for c in self.generator_set],
            "thinning": self.thinning,
        }


@dataclass(frozen=True)
class MomentSample:
    step: int
    x: tuple


def moment(rep: ChainRep) -> tuple:
    return tuple(hyp2.rotation_angle(holonomy(rep, B(i))) for i in range(1, rep.n - 2))


def _integrity(rep: ChainRep, step: int, k_expected: int, lam: float) -> ChainRep:
    rep = rep.renormalized()
    try:
        rep.check(TOL_WALK_DRIFT, TOL_WALK_DRIFT)
        for c in chain_curves(rep.n):
            g = holonomy(rep, c)
            if not abs(g.trace) < 2.0 - hyp2.TOL_CLASS:
                raise IntegrityError(f"{c} lost ellipticity (trace {g.trace!r})")
        report = relative_euler_class(rep)
    except IntegrityError as exc:
        raise IntegrityError(f"walk step {step}: {exc}") from exc
    if report.k != k_expected:
        raise IntegrityError(f"walk step {step}: Euler class changed to {report.k}")
    if abs(report.vol + lam) > TOL_WALK_DRIFT:
        raise IntegrityError(f"walk step {step}: volume drifted to {report.vol!r}")
    return rep


def random_walk(cfg: WalkConfig, start: ChainRep | None = None) -> Iterator[MomentSample]:
    """Stream of moment-map samples at steps ``0, k, 2k, ...`` (``k`` the thinning)."""
    rep = random_dt_rep(cfg.alpha, cfg.seed) if start is None else start
    rng = np.random.default_rng([cfg.seed, 1])
    n = cfg.alpha.n
    lam = cfg.alpha.lam
    gens = cfg.generator_set
    choices = rng.integers(0, 2 * len(gens), size=cfg.steps)
    yield MomentSample(0, moment(rep))
    for step, pick in enumerate(choices, start=1):
        rep = dehn_twist_power(rep, gens[pick >> 1], 1 if pick & 1 == 0 else -1)
        if step % CHECK_EVERY == 0:
            rep = _integrity(rep, step, n - 1, lam)
        if step % cfg.thinning == 0:
            yield MomentSample(step, moment(rep))


def dh_reference_sampler(alpha, n_samples: int, seed) -> np.ndarray:
    """I.i.d. uniform samples on the moment polytope."""
    av = as_angles(alpha)
    return sample_polytope(av, n_samples, np.random.default_rng(seed))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov


def ks_statistic(empirical: Sequence[float], reference_cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sup distance between the empirical CDF of ``empirical`` and ``reference_cdf``."""
    x = np.sort(np.asarray(empirical, dtype=float).ravel())
    m = len(x)
    if m == 0:
        raise EmptySample("KS statistic of an empty sample")
    cdf = np.asarray(reference_cdf(x), dtype=float)
    above = np.arange(1, m + 1) / m - cdf
    below = cdf - np.arange(m) / m
    return float(max(above.max(), below.max(), 0.0))


def uniform_cdf(lo: float, hi: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: np.clip((np.asarray(x) - lo) / (hi - lo), 0.0, 1.0)


def marginal_cdf(alpha, j: int) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of ``x_j`` (1-based) under the uniform law on the polytope."""
    av = as_angles(alpha)
    k = av.n - 3
    if not 1 <= j <= k:
        raise ValidationError(f"no action coordinate x_{j} for n = {av.n}")
    lo = av.bounding_box()[0][j - 1]
    lam = av.lam
    return lambda x: special.betainc(j, k - j + 1, np.clip((np.asarray(x) - lo) / lam, 0.0, 1.0))


@dataclass
class DHReport:
    n_samples: int
    ks: list
    centroid: list
    reference_centroid: list
    threshold: float
    passed: bool
    outside_polytope: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def polytope_centroid(alpha) -> np.ndarray:
    av = as_angles(alpha)
    k = av.n - 3
    lo = av.bounding_box()[0]
    return lo + av.lam * np.arange(1, k + 1) / (k + 1)


def dh_test(x: np.ndarray, alpha, threshold: float = 0.05) -> DHReport:
    """Marginal KS distances of moment samples to the uniform polytope law."""
    av = as_angles(alpha)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.size == 0:
        raise EmptySample("no moment samples")
    if x.shape[1] != av.n - 3:
        raise ValidationError(f"samples have {x.shape[1]} columns, expected {av.n - 3}")
    ks = [ks_statistic(x[:, j], marginal_cdf(av, j + 1)) for j in range(x.shape[1])]
    outside = sum(not polytope_contains(av, row, -TOL_POLYTOPE) for row in x)
    notes = []
    if max(ks) >= threshold:
        notes.append("KS distance above threshold; a single orbit need not equidistribute")
    return DHReport(
        n_samples=len(x),
        ks=ks,
        centroid=x.mean(axis=0).tolist(),
        reference_centroid=polytope_centroid(av).tolist(),
        threshold=threshold,
        passed=max(ks) < threshold,
        outside_polytope=int(outside),
        notes=notes,
    )
