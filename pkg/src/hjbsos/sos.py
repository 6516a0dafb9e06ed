"""Truncated quadratic modules as semidefinite programs.

``p in Q_k(S)`` means ``p = s_0 + sum_i g_i s_i`` with every ``s`` a sum of
squares, ``deg s_0 <= 2*floor(k/2)`` and ``deg s_i <= 2*floor((k - d_i)/2)``.
Each ``s`` is parametrized by a Gram matrix over a graded-lex monomial basis,
and coefficient matching over every monomial of degree <= k gives the linear
equality constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .poly import Box, Exponent, Polynomial, monomials
from .sdp import SdpProblem, SdpSolution, SolverStatus

#: relative PSD tolerance for Gram blocks
PSD_TOL = 1e-8
#: default bound on the reconstruction residual
RESIDUAL_TOL = 1e-6


class CertificateError(ValueError):
    """A Gram certificate failed a structural or PSD check."""


@dataclass(frozen=True)
class SemialgebraicSet:
    """``{x : g_i(x) >= 0 for all i}`` together with a box that contains it.

    ``is_box`` marks sets whose description is exactly their enclosing box.
    """

    num_vars: int
    inequalities: tuple[Polynomial, ...]
    enclosing_box: Box
    is_box: bool = False

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        for g in self.inequalities:
            if g.num_vars != self.num_vars:
                raise ValueError(f"inequality in {g.num_vars} variables, set has {self.num_vars}")
        if self.enclosing_box.dim != self.num_vars:
            raise ValueError("enclosing box dimension does not match num_vars")

    @classmethod
    def box(cls, lower: Sequence[float], upper: Sequence[float]) -> SemialgebraicSet:
        """Box written as ``(u_i - x_i)(x_i - l_i) >= 0``; ``[-1, 1]`` gives ``1 - x^2``."""
        bx = Box(tuple(lower), tuple(upper))
        n = bx.dim
        gs = []
        for i, (l, u) in enumerate(zip(bx.lower, bx.upper)):
            x = Polynomial.variable(i, n)
            gs.append((u - x) * (x - l))
        return cls(n, tuple(gs), bx, is_box=True)

    @classmethod
    def ball(cls, radius: float, num_vars: int) -> SemialgebraicSet:
        """Origin-centred ball ``radius^2 - |x|^2 >= 0``."""
        g = Polynomial.constant(radius**2, num_vars)
        for i in range(num_vars):
            x = Polynomial.variable(i, num_vars)
            g = g - x * x
        return cls(num_vars, (g,), Box.cube(num_vars, radius))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(g.degree() for g in self.inequalities)

    def contains(self, points, tol: float = 0.0):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        ok = np.ones(len(pts), dtype=bool)
        for g in self.inequalities:
            ok &= g.eval(pts) >= -tol
        return bool(ok[0]) if single else ok

    def embed(self, num_vars: int, offset: int) -> SemialgebraicSet:
        """Same set seen as a constraint on variables ``offset..`` of a larger space.

        The enclosing box of the result is only meaningful on those variables,
        so this is used for building module programs, not for sampling.
        """
        lower = [-1.0] * num_vars
        upper = [1.0] * num_vars
        lower[offset : offset + self.num_vars] = self.enclosing_box.lower
        upper[offset : offset + self.num_vars] = self.enclosing_box.upper
        return SemialgebraicSet(
            num_vars,
            tuple(g.embed(num_vars, offset) for g in self.inequalities),
            Box(tuple(lower), tuple(upper)),
        )

    def product(self, other: SemialgebraicSet) -> SemialgebraicSet:
        """Cartesian product; the inequality list is ours followed by theirs."""
        n = self.num_vars + other.num_vars
        gs = tuple(g.embed(n, 0) for g in self.inequalities) + tuple(
            g.embed(n, self.num_vars) for g in other.inequalities
        )
        return SemialgebraicSet(n, gs, self.enclosing_box.product(other.enclosing_box), self.is_box and other.is_box)

    def sample(self, count: int, seed: int = 0, max_rounds: int = 200) -> np.ndarray:
        """Up to ``count`` uniform samples from the set by rejection from the box."""
        rng = np.random.default_rng(seed)
        lo, hi = np.array(self.enclosing_box.lower), np.array(self.enclosing_box.upper)
        found = []
        total = 0
        for _ in range(max_rounds):
            pts = rng.uniform(lo, hi, size=(max(count, 64), self.num_vars))
            pts = pts[self.contains(pts)]
            found.append(pts)
            total += len(pts)
            if total >= count:
                break
        return np.concatenate(found)[:count] if found else np.zeros((0, self.num_vars))

    def enclosure_violations(self, count: int = 2000, seed: int = 0) -> int:
        """Number of sampled points outside the enclosing box that satisfy every g_i.

        Samples come from the box inflated by a factor two about its centre.
        Zero is evidence (not proof) that the box really contains the set.
        """
        rng = np.random.default_rng(seed)
        lo, hi = np.array(self.enclosing_box.lower), np.array(self.enclosing_box.upper)
        mid, half = (lo + hi) / 2, (hi - lo) / 2
        pts = rng.uniform(mid - 2 * half, mid + 2 * half, size=(count, self.num_vars))
        outside = ~self.enclosing_box.contains(pts, tol=1e-12)
        return int(np.count_nonzero(outside & self.contains(pts)))


@dataclass(frozen=True, eq=False)
class ModuleProgram:
    """An SDP encoding ``const + sum_j z_j * free_polys[j] in Q_k(S)``.

    Block 0 is s_0 and block ``i + 1`` belongs to ``inequalities[i]``.  Free
    scalar j of the SDP is ``z_j``.
    """

    sdp: SdpProblem
    target: Polynomial
    free_polys: tuple[Polynomial, ...]
    set: SemialgebraicSet
    k: int
    bases: tuple[tuple[Exponent, ...], ...]
    rows: tuple[Exponent, ...]

    def target_at(self, z: Sequence[float]) -> Polynomial:
        out = self.target
        for zj, q in zip(z, self.free_polys):
            out = out + q.scale(float(zj))
        return out


@dataclass(frozen=True)
class GramCertificate:
    s0_gram: np.ndarray
    multiplier_grams: tuple[np.ndarray, ...]
    monomial_bases: tuple[tuple[Exponent, ...], ...]

    @property
    def grams(self) -> tuple[np.ndarray, ...]:
        return (self.s0_gram,) + tuple(self.multiplier_grams)

    def sos_polynomials(self, num_vars: int) -> list[Polynomial]:
        out = []
        for G, basis in zip(self.grams, self.monomial_bases):
            terms: dict[Exponent, float] = {}
            for i, a in enumerate(basis):
                for j, b in enumerate(basis):
                    key = tuple(p + q for p, q in zip(a, b))
                    terms[key] = terms.get(key, 0.0) + float(G[i, j])
            out.append(Polynomial(num_vars, terms))
        return out

    def reconstruct(self, set_: SemialgebraicSet) -> Polynomial:
        """s_0 + sum_i g_i s_i."""
        sos = self.sos_polynomials(set_.num_vars)
        out = sos[0]
        for g, s in zip(set_.inequalities, sos[1:]):
            out = out + g * s
        return out


def multiplier_half_degrees(set_: SemialgebraicSet, k: int) -> list[int]:
    """Basis degrees ``floor(k/2)`` for s_0 and ``floor((k - d_i)/2)`` for each g_i."""
    return [k // 2] + [(k - d) // 2 for d in set_.degrees]


def compile_module(
    target: Polynomial,
    set_: SemialgebraicSet,
    k: int,
    free_polys: Sequence[Polynomial] = (),
    free_objective: Sequence[float] | None = None,
    sense: str = "min",
    trace_objective: bool = False,
) -> ModuleProgram:
    """General compiler behind :func:`build_membership_program`.

    Encodes ``target + sum_j z_j free_polys[j] in Q_k(set_)`` with free
    scalars ``z``.  The objective is ``free_objective . z`` and, if
    ``trace_objective``, the total trace of all Gram blocks.
    """
    n = set_.num_vars
    free_polys = tuple(free_polys)
    for q in (target,) + free_polys:
        if q.num_vars != n:
            raise ValueError(f"polynomial has {q.num_vars} variables, set has {n}")
        if q.degree() > k:
            raise ValueError(f"module degree k={k} is below the polynomial degree {q.degree()}")
    if set_.degrees and k < max(set_.degrees):
        raise ValueError(f"module degree k={k} is below the largest inequality degree {max(set_.degrees)}")

    rows = monomials(n, k)
    row_index = {a: r for r, a in enumerate(rows)}
    m = len(rows)
    multipliers = [Polynomial.constant(1.0, n)] + list(set_.inequalities)
    bases = tuple(monomials(n, h) for h in multiplier_half_degrees(set_, k))

    A_blocks, C_blocks = [], []
    for g, basis in zip(multipliers, bases):
        size = len(basis)
        Ab = np.zeros((m, size, size))
        g_terms = list(g.items())
        for i, a in enumerate(basis):
            for j in range(i, size):
                ab = tuple(p + q for p, q in zip(a, basis[j]))
                for gamma, c in g_terms:
                    r = row_index[tuple(p + q for p, q in zip(ab, gamma))]
                    Ab[r, i, j] += c
                    if i != j:
                        Ab[r, j, i] += c
        A_blocks.append(Ab)
        C_blocks.append(np.eye(size) if trace_objective else np.zeros((size, size)))

    rhs = target.coefficient_vector(rows)
    F = np.zeros((m, len(free_polys)))
    for j, q in enumerate(free_polys):
        F[:, j] = -q.coefficient_vector(rows)
    cf = np.zeros(len(free_polys)) if free_objective is None else np.asarray(free_objective, dtype=float)

    sdp = SdpProblem(
        tuple(len(b) for b in bases),
        tuple(C_blocks),
        tuple(A_blocks),
        rhs,
        sense=sense,
        free_matrix=F,
        free_objective=cf,
    )
    return ModuleProgram(sdp, target, free_polys, set_, k, bases, rows)


def build_membership_program(p: Polynomial, set_: SemialgebraicSet, k: int) -> ModuleProgram:
    """SDP that is feasible exactly when ``p in Q_k(set_)``.

    Among all certificates the one with least total Gram trace is sought,
    which keeps the optimal face bounded.
    """
    return compile_module(p, set_, k, trace_objective=True)


def extract_certificate(program: ModuleProgram, solution: SdpSolution) -> GramCertificate:
    if solution.status is not SolverStatus.OPTIMAL:
        raise CertificateError(f"cannot extract a certificate from a {solution.status} solution")
    grams = [0.5 * (X + X.T) for X in solution.X]
    return GramCertificate(grams[0], tuple(grams[1:]), program.bases)


def check_psd(cert: GramCertificate, tol: float = PSD_TOL) -> float:
    """Smallest relative eigenvalue over blocks; raises below ``-tol``."""
    worst = 0.0
    for idx, G in enumerate(cert.grams):
        if G.size == 0:
            continue
        if not np.allclose(G, G.T, rtol=0, atol=1e-12 * (1 + np.abs(G).max())):
            raise CertificateError(f"Gram block {idx} is not symmetric")
        lam = float(np.linalg.eigvalsh(G)[0])
        scale = max(np.linalg.norm(G, 2), 1e-300)
        rel = lam / scale if lam < 0 else 0.0
        if rel < -tol:
            raise CertificateError(f"Gram block {idx} has eigenvalue {lam:.3e} (relative {rel:.3e})")
        worst = min(worst, rel)
    return worst


def verify_certificate(
    cert: GramCertificate, p: Polynomial, set_: SemialgebraicSet, tol: float = PSD_TOL
) -> float:
    """Max coefficient residual of ``s_0 + sum g_i s_i - p`` after PSD checks."""
    if len(cert.multiplier_grams) != len(set_.inequalities):
        raise CertificateError(
            f"{len(cert.multiplier_grams)} multiplier blocks for {len(set_.inequalities)} inequalities"
        )
    for G, basis in zip(cert.grams, cert.monomial_bases):
        if G.shape != (len(basis), len(basis)):
            raise CertificateError(f"Gram block of shape {G.shape} does not match basis of size {len(basis)}")
        if any(len(a) != set_.num_vars for a in basis):
            raise CertificateError("basis exponent length does not match the set")
    check_psd(cert, tol)
    return cert.reconstruct(set_).max_coef_diff(p)
