"""Ground-truth value functions for checking the hierarchy.

Two references are provided: the closed-form scalar linear-quadratic problem
in continuous time, and grid value iteration for discrete-time problems.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.interpolate import RegularGridInterpolator

from .ocp import ControlProblem, TimeMode
from .poly import Box, Polynomial, monomials
from .sos import SemialgebraicSet

MAX_SWEEPS = 100_000


def analytic_scalar_lq(beta: float) -> float:
    """Coefficient p of V*(x) = p x^2 for f = u, l = x^2 + u^2 on [-1, 1]^2.

    p is the positive root of p^2 + beta p - 1 = 0; since p < 1 the
    unconstrained feedback u = -p x stays admissible.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    # 2 / (beta + sqrt(beta^2 + 4)) avoids cancellation for large beta
    return 2.0 / (beta + math.sqrt(beta * beta + 4.0))


def discrete_scalar_lq(a: float, b: float, q: float, r: float, gamma: float) -> float:
    """P with V*(x) = P x^2 for x+ = a x + b u, cost q x^2 + r u^2, discount gamma.

    Fixed point of the discounted scalar Riccati map, valid when the
    optimal feedback keeps inputs and states inside their constraints.
    """
    P = q
    for _ in range(10_000):
        nxt = q + gamma * a * a * P - (gamma * a * b * P) ** 2 / (r + gamma * b * b * P)
        if abs(nxt - P) <= 1e-15 * max(1.0, P):
            return nxt
        P = nxt
    return P


def scalar_lq_problem(beta: float = 1.0) -> ControlProblem:
    """f = u, l = x^2 + u^2, X = U = [-1, 1], mu0 uniform on [-1, 1]."""
    x, u = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    box = SemialgebraicSet.box([-1.0], [1.0])
    return ControlProblem(1, 1, (u,), x * x + u * u, beta, box, box, Box((-1.0,), (1.0,)))


def discrete_benchmark_problem(gamma: float = 0.9) -> ControlProblem:
    """x+ = 0.5 x + 0.25 u, l = x^2 + u^2, X = U = [-1, 1]."""
    x, u = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    box = SemialgebraicSet.box([-1.0], [1.0])
    return ControlProblem(
        1, 1, (0.5 * x + 0.25 * u,), x * x + u * u, gamma, box, box, Box((-1.0,), (1.0,)), TimeMode.DISCRETE
    )


@dataclass
class GridValueFunction:
    """Value table on a uniform tensor grid with multilinear interpolation."""

    box: Box
    points_per_axis: int
    values: np.ndarray
    sweep_deltas: tuple[float, ...] = field(default=(), compare=False)

    def __post_init__(self):
        shape = (self.points_per_axis,) * self.box.dim
        self.values = np.asarray(self.values, dtype=float).reshape(shape)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("value table contains non-finite entries")
        self._interp = RegularGridInterpolator(
            tuple(self.box.axes(self.points_per_axis)), self.values, method="linear", bounds_error=True
        )

    @property
    def nodes(self) -> np.ndarray:
        return self.box.grid(self.points_per_axis)

    def __call__(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[-1] != self.box.dim:
            raise ValueError("dimension mismatch")
        if not np.all(self.box.contains(pts, tol=1e-12)):
            raise ValueError("evaluation point outside the grid box")
        lo, hi = np.array(self.box.lower), np.array(self.box.upper)
        return self._interp(np.clip(pts, lo, hi))

    def gradient_at_nodes(self) -> np.ndarray:
        """Finite-difference gradient at every node, shape (N**dim, dim)."""
        spacing = [ax[1] - ax[0] for ax in self.box.axes(self.points_per_axis)]
        grads = np.gradient(self.values, *spacing, edge_order=2)
        if self.box.dim == 1:
            grads = [grads]
        return np.stack([g.ravel() for g in grads], axis=-1)

    def to_text(self) -> str:
        """Header lines then one value per line in row-major order."""
        buf = io.StringIO()
        buf.write("# grid value function\n")
        buf.write("lower " + " ".join(format(v, ".17g") for v in self.box.lower) + "\n")
        buf.write("upper " + " ".join(format(v, ".17g") for v in self.box.upper) + "\n")
        buf.write(f"points_per_axis {self.points_per_axis}\n")
        for v in self.values.ravel():
            buf.write(format(float(v), ".17g") + "\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> GridValueFunction:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        header = {}
        body = []
        for ln in lines:
            key, _, rest = ln.partition(" ")
            if key in ("lower", "upper", "points_per_axis"):
                header[key] = rest.split()
            else:
                body.append(float(ln))
        box = Box(tuple(map(float, header["lower"])), tuple(map(float, header["upper"])))
        return cls(box, int(header["points_per_axis"][0]), np.array(body))


def _interpolation_matrix(points: np.ndarray, box: Box, ppa: int) -> sp.csr_matrix:
    """Sparse matrix W with (W @ values.ravel())[i] the multilinear interpolant at points[i]."""
    npts, dim = points.shape
    lo, hi = np.array(box.lower), np.array(box.upper)
    h = (hi - lo) / (ppa - 1)
    t = (np.clip(points, lo, hi) - lo) / h
    idx = np.minimum(np.floor(t).astype(int), ppa - 2)
    frac = t - idx
    rows, cols, vals = [], [], []
    strides = np.array([ppa ** (dim - 1 - i) for i in range(dim)])
    for corner in range(2**dim):
        bits = np.array([(corner >> (dim - 1 - i)) & 1 for i in range(dim)])
        w = np.prod(np.where(bits, frac, 1 - frac), axis=1)
        flat = (idx + bits) @ strides
        rows.append(np.arange(npts))
        cols.append(flat)
        vals.append(w)
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(npts, ppa**dim)
    )


def value_iteration(
    problem: ControlProblem,
    points_per_axis: int = 201,
    input_samples: int = 101,
    tol: float = 1e-10,
    box: Box | None = None,
    max_sweeps: int = MAX_SWEEPS,
) -> GridValueFunction:
    """Fixed point of V(x) = min_u l(x, u) + gamma V(f(x, u)) on a state grid.

    The minimum runs over ``input_samples`` points per input axis, and V at
    successor states is interpolated multilinearly.  Sweeps stop once the
    sup-change is at most ``tol * (1 - gamma)``.
    """
    if problem.time_mode is not TimeMode.DISCRETE:
        raise ValueError("value iteration needs a discrete-time problem")
    box = box or problem.X.enclosing_box
    gamma = problem.discount
    states = box.grid(points_per_axis)
    ubox = problem.U.enclosing_box
    inputs = ubox.grid(input_samples)
    inputs = inputs[problem.U.contains(inputs)]
    if len(inputs) == 0:
        raise ValueError("no input samples inside U")
    P, Q = len(states), len(inputs)
    xu = np.concatenate([np.repeat(states, Q, axis=0), np.tile(inputs, (P, 1))], axis=1)
    stage = problem.l.eval(xu)
    nxt = np.stack([fi.eval(xu) for fi in problem.f], axis=-1)
    in_x = np.repeat(problem.X.contains(states), Q)
    bad = in_x & ~box.contains(nxt, tol=1e-12)
    if np.any(bad):
        raise ValueError(f"successor states leave the grid box at {int(bad.sum())} state-input pairs")
    W = _interpolation_matrix(nxt, box, points_per_axis)

    V = np.zeros(P)
    deltas = []
    for _ in range(max_sweeps):
        new = (stage + gamma * (W @ V)).reshape(P, Q).min(axis=1)
        delta = float(np.max(np.abs(new - V)))
        deltas.append(delta)
        V = new
        if delta <= tol * (1.0 - gamma):
            break
    else:
        raise RuntimeError(f"value iteration did not converge in {max_sweeps} sweeps")
    return GridValueFunction(box, points_per_axis, V, tuple(deltas))


Truth = GridValueFunction | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GapReport:
    value: float  # integral of (truth - V) against the uniform measure
    max_violation: float  # largest V - truth over the quadrature nodes

    @property
    def violated(self) -> bool:
        return self.max_violation > 1e-6


def l1_gap(V: Polynomial, truth: Truth, mu0_box: Box, points_per_axis: int | None = None) -> GapReport:
    """Midpoint-rule quadrature of ``truth - V`` under the uniform probability on ``mu0_box``."""
    if V.num_vars != mu0_box.dim:
        raise ValueError("dimension mismatch")
    ppa = points_per_axis or (200 if mu0_box.dim <= 2 else 40)
    nodes = mu0_box.midpoints(ppa)
    diff = np.asarray(truth(nodes), dtype=float) - V.eval(nodes)
    return GapReport(float(np.mean(diff)), float(max(0.0, -np.min(diff))))


def best_c1_fit(
    truth: Truth,
    d: int,
    box: Box | None = None,
    points_per_axis: int = 41,
    gradient: Callable[[np.ndarray], np.ndarray] | None = None,
) -> Polynomial:
    """Least-squares polynomial of degree <= d matching values and gradients.

    Values and gradient components are weighted equally.  For a
    :class:`GridValueFunction` the fit uses the table's own nodes and
    finite-difference gradients.  For a callable, ``gradient`` is used if
    given, else central differences on a grid over ``box``.
    """
    if isinstance(truth, GridValueFunction):
        pts = truth.nodes
        vals = truth.values.ravel()
        grads = truth.gradient_at_nodes()
        dim = truth.box.dim
    else:
        if box is None:
            raise ValueError("a box is required for callable truths")
        dim = box.dim
        pts = box.grid(points_per_axis)
        vals = np.asarray(truth(pts), dtype=float)
        if gradient is not None:
            grads = np.asarray(gradient(pts), dtype=float).reshape(len(pts), dim)
        else:
            lo, hi = np.array(box.lower), np.array(box.upper)
            h = 1e-6 * np.max(hi - lo)
            grads = np.empty((len(pts), dim))
            for i in range(dim):
                e = np.zeros(dim)
                e[i] = h
                plus, minus = np.clip(pts + e, lo, hi), np.clip(pts - e, lo, hi)
                grads[:, i] = (truth(plus) - truth(minus)) / (plus[:, i] - minus[:, i])
    basis = monomials(dim, d)
    rows_v = np.column_stack([Polynomial.monomial(a).eval(pts) for a in basis])
    rows_g = [
        np.column_stack([Polynomial.monomial(a).derivative(i).eval(pts) for a in basis]) for i in range(dim)
    ]
    A = np.vstack([rows_v] + rows_g)
    rhs = np.concatenate([vals] + [grads[:, i] for i in range(dim)])
    coef, _, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < len(basis):
        raise ValueError(f"rank-deficient fit: rank {rank} < {len(basis)} basis monomials; refine the grid")
    return Polynomial(dim, dict(zip(basis, coef)))
