"""Discounted polynomial optimal control and its SOS lower-bound hierarchy.

For a degree ``d`` the program is

    maximize    integral of V against mu0
    over        V in R[x]_d
    subject to  bellman(V) in Q_k(X x U)

with ``bellman(V) = l - beta V + grad V . f`` in continuous time and
``l - V + gamma V(f(x, u))`` in discrete time.  Any feasible V lies below
the value function on X.
"""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import Box, Exponent, Polynomial, monomials, moments_uniform_box
from .sdp import SolverOptions, SolverStatus, solve
from .sos import (
    GramCertificate,
    ModuleProgram,
    SemialgebraicSet,
    compile_module,
    extract_certificate,
    verify_certificate,
)

log = logging.getLogger(__name__)


class TimeMode(str, enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"

    def __str__(self) -> str:
        return self.value


class ValidationError(ValueError):
    def __init__(self, findings: list[Finding]):
        self.findings = findings
        errors = [f for f in findings if f.level == "error"]
        super().__init__("; ".join(f"{f.code}: {f.message}" for f in errors))


@dataclass(frozen=True)
class Finding:
    level: str  # "error", "warning" or "info"
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.level}] {self.code}: {self.message}"


@dataclass(frozen=True, eq=False)
class ControlProblem:
    """Dynamics ``f`` and cost ``l`` are polynomials in ``(x_1..x_n, u_1..u_m)``.

    ``discount`` is beta > 0 in continuous time and gamma in (0, 1) in
    discrete time.  ``mu0_box`` carries the uniform reference measure.
    """

    n: int
    m: int
    f: tuple[Polynomial, ...]
    l: Polynomial
    discount: float
    X: SemialgebraicSet
    U: SemialgebraicSet
    mu0_box: Box
    time_mode: TimeMode = TimeMode.CONTINUOUS

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "time_mode", TimeMode(self.time_mode))
        nv = self.n + self.m
        if len(self.f) != self.n:
            raise ValueError(f"dynamics has {len(self.f)} components, expected n = {self.n}")
        for p in self.f + (self.l,):
            if p.num_vars != nv:
                raise ValueError(f"dynamics and cost must use n + m = {nv} variables")
        if self.X.num_vars != self.n or self.U.num_vars != self.m:
            raise ValueError("state/input set dimensions do not match n, m")
        if self.mu0_box.dim != self.n:
            raise ValueError("mu0 box must live in the state space")
        if self.time_mode is TimeMode.CONTINUOUS and not self.discount > 0:
            raise ValueError("continuous-time discount beta must be positive")
        if self.time_mode is TimeMode.DISCRETE and not 0 <= self.discount < 1:
            raise ValueError("discrete-time discount gamma must lie in [0, 1)")

    @property
    def num_vars(self) -> int:
        return self.n + self.m

    @property
    def d_f(self) -> int:
        return max((p.degree() for p in self.f), default=0)

    @property
    def d_l(self) -> int:
        return self.l.degree()

    @property
    def xu_set(self) -> SemialgebraicSet:
        return self.X.product(self.U)

    def xu_points(self, points_per_axis: int) -> np.ndarray:
        """Tensor grid over the enclosing box of X x U, restricted to the set."""
        pts = self.xu_set.enclosing_box.grid(points_per_axis)
        return pts[self.xu_set.contains(pts)]


def _is_archimedean_surrogate(s: SemialgebraicSet) -> bool:
    """A ball constraint ``N - sum c_i x_i^2`` or a univariate bound on every coordinate."""
    n = s.num_vars
    covered = set()
    for g in s.inequalities:
        terms = g.terms
        vars_used = {i for a in terms for i, k in enumerate(a) if k}
        if len(vars_used) == 1:
            (i,) = vars_used
            top = max(terms, key=lambda a: a[i])
            if top[i] % 2 == 0 and terms[top] < 0:
                covered.add(i)
        if g.degree() == 2 and g.coef((0,) * n) > 0:
            squares = [terms.get(tuple(2 if j == i else 0 for j in range(n)), 0.0) for i in range(n)]
            if all(c < 0 for c in squares) and vars_used == set(range(n)):
                cross = {a: c for a, c in terms.items() if sum(a) == 2 and max(a) == 1}
                if not cross:
                    return True
    return covered == set(range(n))


def validate(problem: ControlProblem, strict: bool = True, samples: int = 20000) -> list[Finding]:
    """Check the standing assumptions that can be checked by machine.

    Errors (origin not interior, discrete-time range violation, mu0 box
    outside X) raise :class:`ValidationError` when ``strict``.
    """
    out: list[Finding] = []
    for name, s in (("X", problem.X), ("U", problem.U)):
        bx = s.enclosing_box
        if not Box.cube(s.num_vars).contains_box(bx, tol=1e-12):
            out.append(Finding("warning", "unit-box", f"enclosing box of {name} is not inside [-1, 1]^{s.num_vars}"))
        if not _is_archimedean_surrogate(s):
            out.append(
                Finding("warning", "archimedean", f"{name} has no explicit ball or per-coordinate bound constraint")
            )
        origin = np.zeros(s.num_vars)
        bad = [i for i, g in enumerate(s.inequalities) if not g.eval(origin) > 0]
        if bad:
            out.append(Finding("error", "origin-interior", f"origin is not strictly inside {name} (inequalities {bad})"))
        viol = s.enclosure_violations()
        if viol:
            out.append(Finding("warning", "enclosure", f"{viol} sampled points outside the box of {name} satisfy its inequalities"))
    corners = Box(problem.mu0_box.lower, problem.mu0_box.upper).grid(5)
    if not problem.X.enclosing_box.contains_box(problem.mu0_box, tol=1e-12) or not np.all(
        problem.X.contains(corners, tol=1e-12)
    ):
        out.append(Finding("error", "mu0-support", "mu0 box is not contained in X"))
    if problem.time_mode is TimeMode.DISCRETE:
        per_axis = max(3, int(round(samples ** (1.0 / problem.num_vars))))
        pts = problem.xu_points(per_axis)
        pts = np.concatenate([pts, problem.xu_set.sample(samples // 4, seed=0)])
        nxt = np.stack([fi.eval(pts) for fi in problem.f], axis=-1)
        outside = ~problem.X.contains(nxt, tol=1e-9)
        if np.any(outside):
            worst = pts[np.argmax(outside)]
            out.append(
                Finding(
                    "error",
                    "discrete-range",
                    f"f maps {int(outside.sum())} of {len(pts)} sampled points of X x U outside X (e.g. {worst.tolist()})",
                )
            )
    out.append(Finding("info", "lipschitz-gradient", "Lipschitz continuity of the value function gradient is not machine-checkable"))
    if problem.time_mode is TimeMode.CONTINUOUS:
        out.append(Finding("info", "relaxation-convexity", "convexity of f(x, U) and of the cost-velocity map is not machine-checkable"))
    if strict and any(f.level == "error" for f in out):
        raise ValidationError(out)
    return out


def bellman_constraint(problem: ControlProblem, V: Polynomial) -> Polynomial:
    """The Bellman residual of ``V`` as a polynomial in ``(x, u)``."""
    if V.num_vars != problem.n:
        raise ValueError(f"V has {V.num_vars} variables, state dimension is {problem.n}")
    nv = problem.num_vars
    if problem.time_mode is TimeMode.CONTINUOUS:
        out = problem.l - V.embed(nv).scale(problem.discount)
        for dV, fi in zip(V.gradient(), problem.f):
            out = out + dV.embed(nv) * fi
        return out
    return problem.l - V.embed(nv) + V.compose(problem.f).scale(problem.discount)


def module_degree(problem: ControlProblem, d: int) -> tuple[int, bool]:
    """Truncation degree k for the degree-d program, and whether it differs from the nominal one.

    Nominal is ``d + d_f`` in continuous time and ``d * d_f`` in discrete
    time; k is raised to cover the cost and the set descriptions.
    """
    nominal = d + problem.d_f if problem.time_mode is TimeMode.CONTINUOUS else max(d * problem.d_f, d)
    degs = problem.xu_set.degrees
    k = max(nominal, problem.d_l, max(degs, default=0))
    return k, k != nominal


@dataclass(frozen=True, eq=False)
class ValueProgram:
    module: ModuleProgram
    degree: int
    k: int
    k_adjusted: bool
    basis: tuple[Exponent, ...]

    @property
    def sdp(self):
        return self.module.sdp

    def value_polynomial(self, z: Sequence[float]) -> Polynomial:
        return Polynomial(len(self.basis[0]) if self.basis else 0, dict(zip(self.basis, (float(v) for v in z))))


def assemble_program(problem: ControlProblem, d: int) -> ValueProgram:
    if d < 0:
        raise ValueError("degree must be non-negative")
    basis = monomials(problem.n, d)
    k, adjusted = module_degree(problem, d)
    if adjusted:
        log.info("degree %d: module truncation raised from nominal to k = %d", d, k)
    columns = [bellman_constraint(problem, Polynomial.monomial(a)) - problem.l for a in basis]
    weights = [moments_uniform_box(problem.mu0_box, a) for a in basis]
    module = compile_module(problem.l, problem.xu_set, k, columns, weights, sense="max")
    return ValueProgram(module, d, k, adjusted, basis)


@dataclass
class ValueBound:
    degree: int
    status: SolverStatus
    V: Polynomial | None
    objective: float | None
    iterations: int
    solve_time: float
    k: int
    certificate: GramCertificate | None = None
    certificate_residual: float | None = None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status is SolverStatus.OPTIMAL


def solve_degree(problem: ControlProblem, d: int, options: SolverOptions | None = None) -> ValueBound:
    t0 = time.perf_counter()
    prog = assemble_program(problem, d)
    sol = solve(prog.sdp, options)
    elapsed = time.perf_counter() - t0
    if sol.status is not SolverStatus.OPTIMAL:
        return ValueBound(d, sol.status, None, None, sol.iterations, elapsed, prog.k, message=sol.message)
    V = prog.value_polynomial(sol.z)
    cert = extract_certificate(prog.module, sol)
    residual = verify_certificate(cert, bellman_constraint(problem, V), prog.module.set)
    return ValueBound(
        d, sol.status, V, sol.primal_objective, sol.iterations, elapsed, prog.k, cert, residual, sol.message
    )


def _solve_job(args):
    problem, d, options = args
    return solve_degree(problem, d, options)


def run_hierarchy(
    problem: ControlProblem,
    d_min: int,
    d_max: int,
    step: int = 1,
    options: SolverOptions | None = None,
    jobs: int = 1,
) -> list[ValueBound]:
    """Solve every degree in ``range(d_min, d_max + 1, step)``, ordered by degree."""
    if d_min > d_max:
        raise ValueError("d_min must not exceed d_max")
    if step < 1:
        raise ValueError("step must be positive")
    degrees = list(range(d_min, d_max + 1, step))
    jobs_args = [(problem, d, options) for d in degrees]
    if jobs > 1 and len(degrees) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_solve_job, jobs_args))
    return [_solve_job(a) for a in jobs_args]


def shift(V: Polynomial, a: float) -> Polynomial:
    """``V - a``; lowers the Bellman residual's floor by ``beta a`` (``(1 - gamma) a`` in discrete time)."""
    return V - a


def shift_to_feasible(
    V_hat: Polynomial, gap_c1: float, fsup: float, problem: ControlProblem
) -> tuple[Polynomial, float]:
    """Shift an approximation of the value function down until it satisfies the Bellman inequality.

    ``gap_c1`` must bound ``||V_hat - V*||_{C^1(X)}`` and ``fsup`` must bound
    ``sup ||f||_2`` over X x U.  Continuous time uses
    ``a = (1 + fsup / beta) * gap_c1``.  Discrete time uses
    ``a = (1 + gamma) / (1 - gamma) * gap_c1``, where only the C^0 part of
    the gap is needed.
    """
    if gap_c1 < 0 or fsup < 0:
        raise ValueError("gap and f bound must be non-negative")
    if problem.time_mode is TimeMode.CONTINUOUS:
        beta = problem.discount
        if beta <= 0:
            raise ValueError("beta must be positive")
        a = (1.0 + fsup / beta) * gap_c1
    else:
        g = problem.discount
        a = (1.0 + g) / (1.0 - g) * gap_c1
    return shift(V_hat, a), a


def f_sup_grid(problem: ControlProblem, points_per_axis: int = 50) -> float:
    """Grid estimate (a lower bound) of sup over X x U of ||f(x, u)||_2."""
    pts = problem.xu_points(points_per_axis)
    vals = np.stack([fi.eval(pts) for fi in problem.f], axis=-1)
    return float(np.max(np.linalg.norm(vals, axis=-1)))


def bellman_sup_grid(problem: ControlProblem, V: Polynomial, points_per_axis: int = 50) -> float:
    """Grid estimate of ``|| bellman(V) ||_{C^0(X x U)}``."""
    p = bellman_constraint(problem, V)
    return float(np.max(np.abs(p.eval(problem.xu_points(points_per_axis)))))


def bellman_min_grid(problem: ControlProblem, V: Polynomial, points_per_axis: int = 50) -> float:
    p = bellman_constraint(problem, V)
    return float(np.min(p.eval(problem.xu_points(points_per_axis))))
