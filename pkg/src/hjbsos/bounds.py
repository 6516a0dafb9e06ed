"""Explicit convergence-rate formulas: coefficient norms, degree bounds, rate fits.

The Positivstellensatz degree bound is doubly exponential, so everything is
computed in log-space.  A :class:`DegreeBound` always carries a finite
``log_inner`` (the log of ``log d - log c2``), while ``log_value`` may
overflow to ``inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import Box, Polynomial, monomials, sup_norm_grid
from .sos import SemialgebraicSet

R_INFLATION = 1.01


@dataclass(frozen=True)
class BoundParams:
    """Constants of the main degree bound.

    ``c1`` is the approximation constant of the value function and ``c2``
    the Positivstellensatz constant; neither is computable, so both default
    to 1.
    """

    c1: float = 1.0
    c2: float = 1.0
    beta: float = 1.0
    fsup: float = 1.0
    M: float = 1.0
    r: float = 1.0
    n: int = 1
    m: int = 1
    d_f: int = 1

    def __post_init__(self):
        if not self.c1 > 0:
            raise ValueError("c1 must be positive")
        if not self.c2 >= 1:
            raise ValueError("c2 must be at least 1")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.fsup < 0 or self.M < 0:
            raise ValueError("fsup and M must be non-negative")
        if not self.r >= 1:
            raise ValueError("r must be at least 1")
        if self.n < 1 or self.m < 0 or self.d_f < 0:
            raise ValueError("invalid dimensions")

    @property
    def c3(self) -> float:
        return 2 * self.c1 * self.c2 * (2 * self.beta + self.fsup) / self.beta


@dataclass(frozen=True)
class DegreeBound:
    """``d = c2 * exp(X ** c2)`` stored through ``log_inner = c2 * log X``."""

    c2: float
    log_inner: float

    @property
    def log_value(self) -> float:
        """log d = log c2 + X ** c2 (``inf`` on overflow)."""
        try:
            return math.log(self.c2) + math.exp(self.log_inner)
        except OverflowError:
            return math.inf

    @property
    def value(self) -> float:
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf

    @property
    def overflow(self) -> bool:
        return math.isinf(self.value)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class RadiusResult:
    r: float
    exact: bool
    inflation: float
    s_state: float
    s_input: float


def _cube_half_width(s: SemialgebraicSet, samples: int, seed: int) -> tuple[float, bool]:
    lo, hi = np.array(s.enclosing_box.lower), np.array(s.enclosing_box.upper)
    s_box = float(np.min(np.minimum(-lo, hi)))
    if s.is_box:
        return s_box, True
    dim = s.num_vars
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(samples, dim))
    face = rng.integers(0, dim, size=samples)
    pts[np.arange(samples), face] = np.sign(pts[np.arange(samples), face]) + (pts[np.arange(samples), face] == 0)
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * dim, indexing="ij")).reshape(dim, -1).T
    interior = rng.uniform(-1.0, 1.0, size=(samples // 4, dim))
    probe = np.concatenate([pts, corners, interior])
    lo_s, hi_s = 0.0, s_box
    if np.all(s.contains(hi_s * probe)):
        return hi_s, False
    for _ in range(60):
        mid = 0.5 * (lo_s + hi_s)
        if np.all(s.contains(mid * probe)):
            lo_s = mid
        else:
            hi_s = mid
    return lo_s, False


def box_radius_r(X: SemialgebraicSet, U: SemialgebraicSet, samples: int = 4000, seed: int = 0) -> RadiusResult:
    """Reciprocal half-width of the largest origin-centred cube inside X x U.

    Sets flagged as boxes are handled exactly.  Otherwise the half-width is
    found by bisection against sampled cube points; since sampling can
    overshoot, r is multiplied by ``R_INFLATION`` and flagged inexact.
    """
    for name, s in (("X", X), ("U", U)):
        origin = np.zeros(s.num_vars)
        if not all(g.eval(origin) > 0 for g in s.inequalities):
            raise ValueError(f"origin is not interior to {name}")
    sx, ex = _cube_half_width(X, samples, seed)
    su, eu = _cube_half_width(U, samples, seed + 1)
    exact = ex and eu
    infl = 1.0 if exact else R_INFLATION
    return RadiusResult(infl / min(sx, su), exact, infl, sx, su)


def log_k_of_d(d: int, r: float) -> float:
    return (d + 1) * math.log(3.0) + d * math.log(r)


def k_of_d(d: int, r: float) -> float:
    """3^(d+1) r^d; direct when representable, else ``inf``."""
    if d < 0 or r < 1:
        raise ValueError("need d >= 0 and r >= 1")
    if log_k_of_d(d, r) < 700:
        return k_of_d_direct(d, r)
    return math.inf


def k_of_d_direct(d: int, r: float) -> float:
    return 3.0 ** (d + 1) * r**d


@dataclass(frozen=True)
class NormCheck:
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs == 0 else math.inf)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def lemma3_check(p: Polynomial, grid_points: int = 50) -> NormCheck:
    """coefficient_norm(p) against 3^(d+1) times the grid sup over [-1, 1]^n.

    The grid sup is below the true sup, so ``holds`` certifies the exact
    inequality.
    """
    d = p.degree()
    sup = sup_norm_grid(p, Box.cube(p.num_vars), grid_points) if p.num_vars else abs(p.coef(()))
    return NormCheck(p.coefficient_norm(), 3.0 ** (d + 1) * sup)


def corollary1_check(p: Polynomial, r: float, grid_points: int = 50) -> NormCheck:
    """coefficient_norm(p) against k(d) times the grid sup over [-1/r, 1/r]^n."""
    d = p.degree()
    sup = sup_norm_grid(p, Box.cube(p.num_vars, 1.0 / r), grid_points)
    return NormCheck(p.coefficient_norm(), k_of_d(d, r) * sup)


def nie_schweighofer_degree(d_p: int, n_plus_m: int, pnorm: float, pmin: float, c2: float) -> DegreeBound:
    """Module degree sufficient for a polynomial positive on X x U:
    c2 * exp((d_p^2 (n+m)^d_p pnorm / pmin) ** c2)."""
    if not pmin > 0:
        raise ValueError("pmin must be positive")
    log_x = 2 * _log(d_p) + d_p * math.log(n_plus_m) + _log(pnorm) - math.log(pmin)
    return DegreeBound(c2, c2 * log_x)


@dataclass(frozen=True)
class MainBound:
    epsilon: float
    d_p: int
    bound: DegreeBound  # formula as printed, 6 d_p^2 (3 r (n+m))^d_p ...
    proof_chain: DegreeBound  # Positivstellensatz bound with k(d_p) substituted
    numerator: float  # M + beta eps + (eps / 2) fsup
    asymptotic_log_inner: float  # log(log d) of exp[eps^(-3 c2) (3 (n+m) r)^(c3 / eps)]

    @property
    def log_d_bound(self) -> float:
        return self.bound.log_value

    @property
    def loglog_d_bound(self) -> float:
        return self.bound.log_inner


def degree_of_approximant(epsilon: float, params: BoundParams) -> int:
    """ceil(2 c1 / eps * (2 + fsup / beta) + d_f)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    p = params
    return math.ceil(2 * p.c1 / epsilon * (2 + p.fsup / p.beta) + p.d_f)


def main_degree_bound(epsilon: float, params: BoundParams) -> MainBound:
    """Degree after which the L1 gap of the hierarchy is below ``epsilon``.

    The undefined shift factor next to ``||f||`` is taken as eps / 2.
    """
    p = params
    d_p = degree_of_approximant(epsilon, p)
    nm = p.n + p.m
    numerator = p.M + p.beta * epsilon + 0.5 * epsilon * p.fsup
    log_x = math.log(6) + 2 * math.log(d_p) + d_p * math.log(3 * p.r * nm) + _log(numerator) - math.log(p.beta * epsilon)
    printed = DegreeBound(p.c2, p.c2 * log_x)
    pmin = 0.5 * p.beta * epsilon
    pnorm_log = log_k_of_d(d_p, p.r) + _log(numerator)
    chain = nie_schweighofer_degree(d_p, nm, math.exp(pnorm_log) if pnorm_log < 700 else math.inf, pmin, p.c2)
    if math.isinf(chain.log_inner):
        # recompute without materializing the norm
        chain = DegreeBound(p.c2, p.c2 * (2 * math.log(d_p) + d_p * math.log(nm) + pnorm_log - math.log(pmin)))
    asym = -3 * p.c2 * math.log(epsilon) + (p.c3 / epsilon) * math.log(3 * nm * p.r)
    return MainBound(epsilon, d_p, printed, chain, numerator, asym)


@dataclass(frozen=True)
class RateFit:
    C: float
    residual: float  # rms of gap * loglog(d) - C
    relative_residual: float


def rate_curve_fit(gaps: Sequence[tuple[float, float]]) -> RateFit:
    """Least-squares C in gap * log(log d) ~ C.

    Desk-scale degrees cannot test the asymptotic rate; this only reports.
    """
    pts = [(float(d), float(g)) for d, g in gaps if d >= 3]
    if len(pts) < 3:
        raise ValueError("need at least 3 points with d >= 3")
    d = np.array([p[0] for p in pts])
    g = np.array([p[1] for p in pts])
    scaled = g * np.log(np.log(d))
    C = float(np.mean(scaled))
    res = float(np.sqrt(np.mean((scaled - C) ** 2)))
    return RateFit(C, res, res / abs(C) if C else math.inf)


@dataclass(frozen=True)
class BoundsRow:
    epsilon: float
    d_p: int
    log_d_bound: float
    loglog_d_bound: float


def bounds_report(epsilons: Sequence[float], params: BoundParams) -> list[BoundsRow]:
    rows = []
    for eps in epsilons:
        if not eps > 0:
            raise ValueError("epsilons must be positive")
        mb = main_degree_bound(eps, params)
        rows.append(BoundsRow(eps, mb.d_p, mb.log_d_bound, mb.loglog_d_bound))
    return rows


def random_polynomial(rng: np.random.Generator, max_vars: int = 3, max_degree: int = 10) -> Polynomial:
    """Random polynomial with 1..max_vars variables and a random subset of monomials."""
    n = int(rng.integers(1, max_vars + 1))
    d = int(rng.integers(0, max_degree + 1))
    basis = monomials(n, d)
    keep = rng.random(len(basis)) < 0.5
    keep[-1] = True  # force degree d
    coefs = rng.uniform(-1.0, 1.0, size=len(basis)) * keep
    return Polynomial(n, dict(zip(basis, coefs)))
