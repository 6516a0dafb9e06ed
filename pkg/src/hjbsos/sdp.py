"""Dense primal-dual interior-point solver for small block-diagonal SDPs.

Standard primal form (``sense="min"``)::

    minimize    sum_b <C_b, X_b> + c_free . z
    subject to  sum_b <A_jb, X_b> + (B z)_j = b_j,   j = 1..m
                X_b PSD,  z free

and its dual::

    maximize    b . y
    subject to  C_b - sum_j y_j A_jb = S_b PSD,   B^T y = c_free

The method is an infeasible-start Mehrotra predictor-corrector with the HKM
search direction.  Free scalars enter through a saddle-point system
``[[M, B], [B^T, 0]]`` built around the Schur complement ``M``.
Infeasibility is reported when an iterate yields a Farkas ray that checks out
to tolerance, which is a heuristic (no self-dual embedding).
"""

from __future__ import annotations

import enum
import logging
import time
import warnings
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np
import scipy.linalg as sla

log = logging.getLogger(__name__)


class SolverStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    PRIMAL_INFEASIBLE = "PrimalInfeasible"
    DUAL_INFEASIBLE = "DualInfeasible"
    MAX_ITER = "MaxIter"
    NUMERICAL_TROUBLE = "NumericalTrouble"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """Block-diagonal SDP in standard primal form.

    ``constraint_matrices[b]`` has shape ``(m, n_b, n_b)``: slice ``j`` is the
    block-``b`` part of constraint ``j``.  ``free_matrix`` has shape
    ``(m, num_free)``.
    """

    block_sizes: tuple[int, ...]
    objective_matrices: tuple[np.ndarray, ...]
    constraint_matrices: tuple[np.ndarray, ...]
    rhs: np.ndarray
    sense: str = "min"
    free_matrix: np.ndarray | None = None
    free_objective: np.ndarray | None = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        sizes = tuple(int(s) for s in self.block_sizes)
        rhs = np.asarray(self.rhs, dtype=float).reshape(-1)
        m = rhs.shape[0]
        if len(self.objective_matrices) != len(sizes) or len(self.constraint_matrices) != len(sizes):
            raise ValueError("one objective and one constraint stack per block required")
        C, A = [], []
        for n, Cb, Ab in zip(sizes, self.objective_matrices, self.constraint_matrices):
            Cb = np.asarray(Cb, dtype=float)
            Ab = np.asarray(Ab, dtype=float).reshape(m, n, n) if m else np.zeros((0, n, n))
            if Cb.shape != (n, n):
                raise ValueError(f"objective block has shape {Cb.shape}, expected {(n, n)}")
            if not np.array_equal(Cb, Cb.T):
                raise ValueError("objective matrices must be symmetric")
            if not np.array_equal(Ab, np.swapaxes(Ab, 1, 2)):
                raise ValueError("constraint matrices must be symmetric")
            C.append(Cb)
            A.append(Ab)
        nf = 0 if self.free_matrix is None else np.asarray(self.free_matrix).shape[1]
        F = np.zeros((m, nf)) if self.free_matrix is None else np.asarray(self.free_matrix, dtype=float)
        cf = np.zeros(nf) if self.free_objective is None else np.asarray(self.free_objective, dtype=float)
        if F.shape != (m, nf) or cf.shape != (nf,):
            raise ValueError("free-variable data has inconsistent shape")
        for name, value in (
            ("block_sizes", sizes),
            ("objective_matrices", tuple(C)),
            ("constraint_matrices", tuple(A)),
            ("rhs", rhs),
            ("free_matrix", F),
            ("free_objective", cf),
        ):
            object.__setattr__(self, name, value)

    @property
    def num_constraints(self) -> int:
        return self.rhs.shape[0]

    @property
    def num_free(self) -> int:
        return self.free_objective.shape[0]

    def apply(self, X: Sequence[np.ndarray], z: np.ndarray | None = None) -> np.ndarray:
        """The constraint map ``A(X) + B z``."""
        out = np.zeros(self.num_constraints)
        for Ab, Xb in zip(self.constraint_matrices, X):
            out += Ab.reshape(self.num_constraints, Ab.shape[1] * Ab.shape[2]) @ np.asarray(Xb).ravel()
        if z is not None and self.num_free:
            out += self.free_matrix @ z
        return out

    def adjoint(self, y: np.ndarray) -> list[np.ndarray]:
        return [np.tensordot(y, Ab, axes=1) for Ab in self.constraint_matrices]

    def objective_value(self, X: Sequence[np.ndarray], z: np.ndarray | None = None) -> float:
        val = sum(float(np.vdot(Cb, Xb)) for Cb, Xb in zip(self.objective_matrices, X))
        if z is not None and self.num_free:
            val += float(self.free_objective @ z)
        return val

    def same_data(self, other: SdpProblem) -> bool:
        """Bit-for-bit equality of all problem data."""
        return (
            self.block_sizes == other.block_sizes
            and self.sense == other.sense
            and all(np.array_equal(a, b) for a, b in zip(self.objective_matrices, other.objective_matrices))
            and all(np.array_equal(a, b) for a, b in zip(self.constraint_matrices, other.constraint_matrices))
            and np.array_equal(self.rhs, other.rhs)
            and np.array_equal(self.free_matrix, other.free_matrix)
            and np.array_equal(self.free_objective, other.free_objective)
        )


@dataclass
class SdpSolution:
    status: SolverStatus
    X: list[np.ndarray]
    y: np.ndarray
    S: list[np.ndarray]
    z: np.ndarray
    iterations: int
    primal_objective: float
    dual_objective: float
    duality_gap: float  # relative: |p - d| / (1 + |p| + |d|)
    primal_residual: float  # ||b - A(X) - Bz||
    dual_residual: float  # ||(C - A^T y - S, c_free - B^T y)||
    solve_time: float = 0.0
    message: str = ""

    @property
    def objective(self) -> float:
        return self.primal_objective

    @property
    def ok(self) -> bool:
        return self.status is SolverStatus.OPTIMAL


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 100
    tol: float = 1e-9
    verbose: bool = False
    #: residuals accepted as Optimal if progress stalls before ``tol``
    accept_tol: float = 1e-7
    #: tolerance on the normalized Farkas ray for infeasibility reports
    infeasibility_tol: float = 1e-8
    #: upper limit of the fraction of the step to the PSD boundary; the
    #: fraction used slides between 0.9 and this with the previous steps
    step_fraction: float = 0.99


def _sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def _max_step(L: np.ndarray, D: np.ndarray) -> float:
    """Largest alpha with L L^T + alpha D PSD (inf if unbounded)."""
    if D.shape[0] == 0:
        return np.inf
    W = sla.solve_triangular(L, D, lower=True)
    W = sla.solve_triangular(L, W.T, lower=True)
    lam = np.linalg.eigvalsh(_sym(W))[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _saddle_solver(K: np.ndarray):
    """Solver for the (possibly indefinite) Newton system; pseudo-inverse on breakdown."""
    if K.size == 0:
        return lambda rhs: rhs
    if not np.all(np.isfinite(K)):
        raise np.linalg.LinAlgError("non-finite Schur complement")
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            lu = sla.lu_factor(K)
            if np.min(np.abs(np.diag(lu[0]))) > 0:
                return lambda rhs: sla.lu_solve(lu, rhs)
        except sla.LinAlgWarning:
            pass
    pinv = np.linalg.pinv(K, rcond=1e-14)
    return lambda rhs: pinv @ rhs


def _frob(blocks: Sequence[np.ndarray]) -> float:
    return float(np.sqrt(sum(np.sum(B * B) for B in blocks)))


def _inner(P: Sequence[np.ndarray], Q: Sequence[np.ndarray]) -> float:
    return float(sum(np.vdot(a, b) for a, b in zip(P, Q)))


def solve(problem: SdpProblem, options: SolverOptions | None = None, **kwargs) -> SdpSolution:
    """Solve ``problem``; keyword arguments override fields of ``options``."""
    opts = options or SolverOptions()
    if kwargs:
        opts = SolverOptions(**{**opts.__dict__, **kwargs})
    t0 = time.perf_counter()
    sol = _Solver(problem, opts).run()
    sol.solve_time = time.perf_counter() - t0
    return sol


class _Solver:
    def __init__(self, problem: SdpProblem, opts: SolverOptions):
        self.problem = problem
        self.opts = opts
        sign = 1.0 if problem.sense == "min" else -1.0
        self.sign = sign
        m = problem.num_constraints
        # Rows with no variables at all are either trivially satisfied or
        # certify infeasibility on their own; both break the Schur system.
        row_norm = np.zeros(m)
        for Ab in problem.constraint_matrices:
            row_norm += np.sum(np.abs(Ab.reshape(m, Ab.shape[1] * Ab.shape[2])), axis=1)
        row_norm += np.sum(np.abs(problem.free_matrix), axis=1)
        self.empty_rows = np.flatnonzero(row_norm == 0)
        self.keep = np.flatnonzero(row_norm != 0)
        self.sizes = problem.block_sizes
        self.C = [sign * Cb for Cb in problem.objective_matrices]
        self.A = [Ab[self.keep] for Ab in problem.constraint_matrices]
        self.Aflat = [Ab.reshape(len(self.keep), Ab.shape[1] * Ab.shape[2]) for Ab in self.A]
        self.b = problem.rhs[self.keep]
        self.B = problem.free_matrix[self.keep]
        self.cf = sign * problem.free_objective
        self.m = len(self.keep)
        self.nf = problem.num_free
        self.ntot = sum(self.sizes)

    # linear maps on the reduced problem
    def A_op(self, X):
        out = np.zeros(self.m)
        for Af, Xb in zip(self.Aflat, X):
            out += Af @ Xb.ravel()
        return out

    def At_op(self, y):
        return [np.tensordot(y, Ab, axes=1) for Ab in self.A]

    def run(self) -> SdpSolution:
        p, opts = self.problem, self.opts
        m_full = p.num_constraints
        if len(self.empty_rows):
            bad = self.empty_rows[np.abs(p.rhs[self.empty_rows]) > 0]
            if len(bad):
                return self._finish(
                    SolverStatus.PRIMAL_INFEASIBLE,
                    [np.zeros((n, n)) for n in self.sizes],
                    np.zeros(self.m),
                    [np.zeros((n, n)) for n in self.sizes],
                    np.zeros(self.nf),
                    0,
                    f"constraint rows {bad.tolist()} have no variables but nonzero right-hand side",
                )

        X, S = [], []
        normC = _frob(self.C)
        for n, Ab, Cb in zip(self.sizes, self.A, self.C):
            a_norms = np.sqrt(np.sum(Ab.reshape(self.m, -1) ** 2, axis=1)) if self.m else np.zeros(0)
            ratio = np.max((1 + np.abs(self.b)) / (1 + a_norms)) if self.m else 1.0
            xi = max(10.0, np.sqrt(n), n * ratio)
            eta = max(10.0, np.sqrt(n), np.linalg.norm(Cb), np.max(a_norms, initial=0.0))
            X.append(xi * np.eye(n))
            S.append(eta * np.eye(n))
        y = np.zeros(self.m)
        z = np.zeros(self.nf)
        nb = 1.0 + np.linalg.norm(self.b)
        nc = 1.0 + normC + np.linalg.norm(self.cf)
        best = None
        last_steps = (0.0, 0.0)

        for it in range(opts.max_iter + 1):
            rp = self.b - self.A_op(X) - self.B @ z
            ATy = self.At_op(y)
            Rd = [Cb - Ab - Sb for Cb, Ab, Sb in zip(self.C, ATy, S)]
            rf = self.cf - self.B.T @ y
            pobj = _inner(self.C, X) + self.cf @ z
            dobj = float(self.b @ y)
            pres = np.linalg.norm(rp) / nb
            dres = np.sqrt(_frob(Rd) ** 2 + np.linalg.norm(rf) ** 2) / nc
            relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
            if opts.verbose:
                log.info("it %3d pobj %+.10e dobj %+.10e pres %.2e dres %.2e gap %.2e", it, pobj, dobj, pres, dres, relgap)
            worst = max(pres, dres, relgap)
            if best is None or worst < best[0]:
                best = (worst, [x.copy() for x in X], y.copy(), [s.copy() for s in S], z.copy(), it)
            if worst <= opts.tol:
                return self._finish(SolverStatus.OPTIMAL, X, y, S, z, it)

            status = self._infeasibility(X, y, S, z, ATy)
            if status is not None:
                return self._finish(status, X, y, S, z, it, "Farkas certificate found")
            if it == opts.max_iter:
                break

            mu = _inner(X, S) / self.ntot if self.ntot else 0.0
            try:
                LX = [np.linalg.cholesky(Xb) for Xb in X]
                LS = [np.linalg.cholesky(Sb) for Sb in S]
                Sinv = [sla.cho_solve((L, True), np.eye(L.shape[0])) for L in LS]
                M = np.zeros((self.m, self.m))
                for Ab, Af, Xb, Si in zip(self.A, self.Aflat, X, Sinv):
                    G = Xb @ Ab @ Si
                    M += Af @ G.reshape(self.m, G.shape[1] * G.shape[2]).T
                M = _sym(M)
                K = np.block([[M, self.B], [self.B.T, np.zeros((self.nf, self.nf))]])
                solve_k = _saddle_solver(K)
            except (np.linalg.LinAlgError, ValueError) as exc:
                return self._stalled(best, f"factorization failed: {exc}")

            def direction(Rc):
                T = [(Rcb - Xb @ Rdb) @ Si for Rcb, Xb, Rdb, Si in zip(Rc, X, Rd, Sinv)]
                rhs = np.concatenate([rp - self.A_op(T), rf])
                sol = solve_k(rhs)
                dy, dz = sol[: self.m], sol[self.m :]
                dS = [Rdb - Ab for Rdb, Ab in zip(Rd, self.At_op(dy))]
                dX = [_sym((Rcb - Xb @ dSb) @ Si) for Rcb, Xb, dSb, Si in zip(Rc, X, dS, Sinv)]
                return dX, dy, dS, dz

            def steps(dX, dS, frac):
                ap = min([_max_step(L, D) for L, D in zip(LX, dX)], default=np.inf)
                ad = min([_max_step(L, D) for L, D in zip(LS, dS)], default=np.inf)
                return min(1.0, frac * ap), min(1.0, frac * ad)

            XS = [Xb @ Sb for Xb, Sb in zip(X, S)]
            dXa, dya, dSa, dza = direction([-W for W in XS])
            ap, ad = steps(dXa, dSa, 1.0)
            mu_aff = _inner([Xb + ap * D for Xb, D in zip(X, dXa)], [Sb + ad * D for Sb, D in zip(S, dSa)]) / max(self.ntot, 1)
            sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
            Rc = [sigma * mu * np.eye(n) - W - Da @ Ea for n, W, Da, Ea in zip(self.sizes, XS, dXa, dSa)]
            dX, dy, dS, dz = direction(Rc)
            if not all(np.all(np.isfinite(D)) for D in dX + dS) or not np.all(np.isfinite(dy)):
                return self._stalled(best, "non-finite search direction")
            # shorter steps after short steps keep the iterates centred
            frac = 0.9 + (opts.step_fraction - 0.9) * min(last_steps)
            ap, ad = steps(dX, dS, frac)
            last_steps = (ap, ad)
            if max(ap, ad) < 1e-12:
                return self._stalled(best, "step length collapsed")
            X = [Xb + ap * D for Xb, D in zip(X, dX)]
            z = z + ap * dz
            y = y + ad * dy
            S = [Sb + ad * D for Sb, D in zip(S, dS)]

        return self._stalled(best, "iteration limit reached", SolverStatus.MAX_ITER)

    def _stalled(self, best, message, fallback=SolverStatus.NUMERICAL_TROUBLE) -> SdpSolution:
        worst, X, y, S, z, it = best
        if worst <= self.opts.accept_tol:
            return self._finish(SolverStatus.OPTIMAL, X, y, S, z, it, f"accepted at {worst:.2e} ({message})")
        return self._finish(fallback, X, y, S, z, it, message)

    def _infeasibility(self, X, y, S, z, ATy) -> SolverStatus | None:
        eps = self.opts.infeasibility_tol
        t = float(self.b @ y)
        if t > 0 and self.m:
            # primal infeasible: -A^T y PSD, B^T y = 0, b.y > 0
            ray = [-W / t for W in ATy]
            lam = min((np.linalg.eigvalsh(W)[0] for W in ray if W.size), default=0.0)
            scale = 1.0 + max((np.abs(Af).max() for Af in self.Aflat if Af.size), default=0.0)
            if lam >= -eps * scale and np.linalg.norm(self.B.T @ y) / t <= eps * scale:
                return SolverStatus.PRIMAL_INFEASIBLE
        t = -(_inner(self.C, X) + float(self.cf @ z))
        if t > 0:
            # dual infeasible: A(X) + B z = 0, X PSD, <C, X> + c.z < 0
            r = self.A_op(X) + self.B @ z
            if np.linalg.norm(r) / t <= eps * (1.0 + np.linalg.norm(self.b)):
                return SolverStatus.DUAL_INFEASIBLE
        return None

    def _finish(self, status, X, y, S, z, it, message="") -> SdpSolution:
        p = self.problem
        y_full = np.zeros(p.num_constraints)
        y_full[self.keep] = y
        # report duals for the problem as posed (max sense flips y)
        y_full = self.sign * y_full
        X = [np.array(Xb) for Xb in X]
        S = [np.array(Sb) for Sb in S]
        rp = p.rhs - p.apply(X, z)
        Rd = [Cb - Ab - self.sign * Sb for Cb, Ab, Sb in zip(p.objective_matrices, p.adjoint(y_full), S)]
        rf = p.free_objective - p.free_matrix.T @ y_full
        pobj = p.objective_value(X, z)
        dobj = float(p.rhs @ y_full)
        return SdpSolution(
            status=status,
            X=X,
            y=y_full,
            S=S,
            z=np.array(z),
            iterations=it,
            primal_objective=pobj,
            dual_objective=dobj,
            duality_gap=abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj)),
            primal_residual=float(np.linalg.norm(rp)),
            dual_residual=float(np.sqrt(_frob(Rd) ** 2 + np.linalg.norm(rf) ** 2)),
            message=message,
        )


def kkt_within_contract(problem: SdpProblem, sol: SdpSolution, tol: float = 1e-7) -> bool:
    """The residual contract attached to an Optimal status."""
    nb = np.linalg.norm(problem.rhs)
    nc = _frob(problem.objective_matrices) + np.linalg.norm(problem.free_objective)
    return (
        sol.primal_residual <= tol * (1 + nb)
        and sol.dual_residual <= tol * (1 + nc)
        and sol.duality_gap <= tol
    )


def min_eigenvalues(blocks: Sequence[np.ndarray]) -> list[float]:
    return [float(np.linalg.eigvalsh(B)[0]) if B.size else 0.0 for B in blocks]


# test-instance construction


def random_feasible_instance(
    seed: int, sizes: Sequence[int], num_constraints: int, sense: str = "min"
) -> tuple[SdpProblem, float]:
    """Random SDP with a known optimal value.

    A strictly complementary primal-dual pair (X*, y*, S*) is drawn first
    (X* S* = 0, rank(X*) + rank(S*) = n per block), then ``b = A(X*)`` and
    ``C = A^T y* + S*``; the optimal value is ``<C, X*>``.
    """
    rng = np.random.default_rng(seed)
    sizes = tuple(int(s) for s in sizes)
    m = num_constraints
    A, Xs, Ss = [], [], []
    for n in sizes:
        Ab = rng.standard_normal((m, n, n))
        A.append(0.5 * (Ab + np.swapaxes(Ab, 1, 2)))
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        # rank window where a generic instance is primal and dual
        # nondegenerate: r(r+1)/2 <= m and (n-r)(n-r+1)/2 <= n(n+1)/2 - m
        tri = n * (n + 1) // 2
        lo = next((r for r in range(1, n + 1) if (n - r) * (n - r + 1) // 2 <= tri - m), n)
        hi = max((r for r in range(1, n + 1) if r * (r + 1) // 2 <= m), default=1)
        r = int(rng.integers(lo, hi + 1)) if lo <= hi else max(1, min(hi, n))
        lam = np.concatenate([rng.uniform(0.5, 2.0, r), np.zeros(n - r)])
        sig = np.concatenate([np.zeros(r), rng.uniform(0.5, 2.0, n - r)])
        Xs.append(_sym(Q @ np.diag(lam) @ Q.T))
        Ss.append(_sym(Q @ np.diag(sig) @ Q.T))
    y = rng.standard_normal(m)
    b = sum(Ab.reshape(m, -1) @ Xb.ravel() for Ab, Xb in zip(A, Xs)) if m else np.zeros(0)
    C = [_sym(np.tensordot(y, Ab, axes=1) + Sb) for Ab, Sb in zip(A, Ss)]
    value = float(sum(np.vdot(Cb, Xb) for Cb, Xb in zip(C, Xs)))
    if sense == "max":
        C = [-Cb for Cb in C]
        value = -value
    return SdpProblem(sizes, tuple(C), tuple(A), np.asarray(b, dtype=float), sense=sense), value


def infeasible_instance(seed: int, n: int, num_constraints: int) -> SdpProblem:
    """Random SDP whose first constraint forces X_11 = -1 (primal infeasible)."""
    rng = np.random.default_rng(seed)
    m = num_constraints
    Ab = rng.standard_normal((m, n, n))
    Ab = 0.5 * (Ab + np.swapaxes(Ab, 1, 2))
    Ab[0] = 0.0
    Ab[0, 0, 0] = 1.0
    X0 = np.eye(n)
    b = Ab.reshape(m, -1) @ X0.ravel()
    b[0] = -1.0
    C = _sym(rng.standard_normal((n, n)))
    C = C @ C.T + np.eye(n)
    return SdpProblem((n,), (C,), (Ab,), b)


# SDPA sparse format


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_sdpa(problem: SdpProblem, out: IO[str]) -> None:
    """Write ``problem`` in SDPA sparse format.

    SDPA's matrix-variable form is ``max <F0, Y> s.t. <Fi, Y> = ci, Y PSD``,
    so ``Fi = A_i``, ``ci = b_i`` and ``F0 = -C`` (``+C`` for max problems).
    Free scalars become a nonnegative diagonal block holding ``z+`` and ``z-``.
    """
    p = problem
    sign = -1.0 if p.sense == "min" else 1.0
    m, nf = p.num_constraints, p.num_free
    sizes = list(p.block_sizes) + ([-2 * nf] if nf else [])
    out.write(f'"hjbsos export: {p.sense} problem, {nf} free scalars split as z+ - z-"\n')
    out.write(f"{m}\n{len(sizes)}\n")
    out.write(" ".join(str(s) for s in sizes) + "\n")
    out.write(" ".join(_fmt(v) for v in p.rhs) + "\n")

    def emit(mat_no, blk, M):
        n = M.shape[0]
        for i in range(n):
            for j in range(i, n):
                if M[i, j] != 0.0:
                    out.write(f"{mat_no} {blk} {i + 1} {j + 1} {_fmt(M[i, j])}\n")

    for bi, Cb in enumerate(p.objective_matrices):
        emit(0, bi + 1, sign * Cb)
    lp = len(p.block_sizes) + 1
    for k in range(nf):
        c = sign * p.free_objective[k]
        if c != 0.0:
            out.write(f"0 {lp} {k + 1} {k + 1} {_fmt(c)}\n")
            out.write(f"0 {lp} {nf + k + 1} {nf + k + 1} {_fmt(-c)}\n")
    for j in range(m):
        for bi, Ab in enumerate(p.constraint_matrices):
            emit(j + 1, bi + 1, Ab[j])
        for k in range(nf):
            v = p.free_matrix[j, k]
            if v != 0.0:
                out.write(f"{j + 1} {lp} {k + 1} {k + 1} {_fmt(v)}\n")
                out.write(f"{j + 1} {lp} {nf + k + 1} {nf + k + 1} {_fmt(-v)}\n")


@dataclass
class SdpaData:
    """Raw contents of an SDPA sparse file: ``max <F0, Y> s.t. <Fi, Y> = c_i``."""

    block_sizes: list[int]
    c: np.ndarray
    F: list[list[np.ndarray]] = field(default_factory=list)  # F[i][block], i = 0..m


def read_sdpa(text: str) -> SdpaData:
    lines = [ln for ln in text.splitlines() if ln.strip() and ln.lstrip()[0] not in '"*']
    toks = lambda s: s.replace(",", " ").replace("{", " ").replace("}", " ").replace("(", " ").replace(")", " ").split()
    m = int(toks(lines[0])[0])
    nblocks = int(toks(lines[1])[0])
    sizes = [int(v) for v in toks(lines[2])[:nblocks]]
    c = np.array([float(v) for v in toks(lines[3])[:m]])
    F = [[np.zeros((abs(s), abs(s))) for s in sizes] for _ in range(m + 1)]
    for ln in lines[4:]:
        t = toks(ln)
        k, blk, i, j, v = int(t[0]), int(t[1]) - 1, int(t[2]) - 1, int(t[3]) - 1, float(t[4])
        F[k][blk][i, j] = v
        F[k][blk][j, i] = v
    return SdpaData(sizes, c, F)
