"""Command line: solve a problem file, print bound tables, run the coefficient-norm sweep.

Problem files are TOML with explicit term lists, for example::

    [problem]
    mode = "continuous"
    discount = 1.0
    n = 1
    m = 1

    [[dynamics]]
    terms = [{exponents = [0, 1], coef = 1.0}]

    [cost]
    terms = [{exponents = [2, 0], coef = 1.0}, {exponents = [0, 2], coef = 1.0}]

    [state_set]
    kind = "box"
    lower = [-1.0]
    upper = [1.0]

Sets are ``kind = "box"`` (lower, upper), ``"ball"`` (radius) or
``"general"`` (lower and upper of an enclosing box plus
``[[state_set.inequalities]]`` tables holding ``terms``).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import tomli
import tomli_w

from . import bounds as bnd
from .ocp import (
    ControlProblem,
    TimeMode,
    ValueBound,
    assemble_program,
    bellman_sup_grid,
    f_sup_grid,
    run_hierarchy,
    validate,
)
from .oracle import analytic_scalar_lq, l1_gap, value_iteration
from .poly import Box, Polynomial, chebyshev_table
from .sdp import SolverOptions, SolverStatus, write_sdpa
from .sos import SemialgebraicSet

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_SOLVER = 3

RESULT_HEADER = ("degree", "status", "objective", "l1_gap", "underapprox_max_violation", "solve_ms", "sdp_iterations")
BOUNDS_HEADER = ("epsilon", "d_p", "log_d_bound", "loglog_d_bound")

REQUIRED = ("problem", "dynamics", "cost", "state_set", "input_set", "measure", "hierarchy")
OPTIONAL = ("solver", "bounds", "oracle")


class SchemaError(ValueError):
    """Problem-file error, with the 1-based line it refers to when known."""

    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}" if line else source
        super().__init__(f"{where}: {message}")


# ---------------------------------------------------------------------------
# problem file model


@dataclass(frozen=True)
class SetSpec:
    kind: str  # "box", "ball" or "general"
    lower: tuple[float, ...] = ()
    upper: tuple[float, ...] = ()
    radius: float | None = None
    inequalities: tuple[Polynomial, ...] = ()

    def build(self, num_vars: int) -> SemialgebraicSet:
        if self.kind == "box":
            return SemialgebraicSet.box(self.lower, self.upper)
        if self.kind == "ball":
            return SemialgebraicSet.ball(self.radius, num_vars)
        return SemialgebraicSet(num_vars, self.inequalities, Box(self.lower, self.upper))

    def to_toml(self) -> dict:
        if self.kind == "ball":
            return {"kind": "ball", "radius": self.radius}
        out: dict[str, Any] = {"kind": self.kind, "lower": list(self.lower), "upper": list(self.upper)}
        if self.kind == "general":
            out["inequalities"] = [{"terms": g.to_terms()} for g in self.inequalities]
        return out


@dataclass(frozen=True)
class OracleSpec:
    kind: str  # "analytic_lq" or "value_iteration"
    points_per_axis: int = 401
    input_samples: int = 101
    tol: float = 1e-10


@dataclass(frozen=True)
class BoundsSpec:
    c1: float = 1.0
    c2: float = 1.0
    epsilon: tuple[float, ...] = (2.0, 1.0, 0.5)
    fsup: float | None = None
    M: float | None = None


@dataclass(frozen=True)
class ProblemFile:
    mode: TimeMode
    discount: float
    n: int
    m: int
    dynamics: tuple[Polynomial, ...]
    cost: Polynomial
    state_set: SetSpec
    input_set: SetSpec
    measure: Box
    d_min: int
    d_max: int
    step: int = 1
    tol: float = 1e-9
    max_iter: int = 100
    bounds: BoundsSpec | None = None
    oracle: OracleSpec | None = None

    def control_problem(self) -> ControlProblem:
        return ControlProblem(
            self.n,
            self.m,
            self.dynamics,
            self.cost,
            self.discount,
            self.state_set.build(self.n),
            self.input_set.build(self.m),
            self.measure,
            self.mode,
        )

    def solver_options(self) -> SolverOptions:
        return SolverOptions(max_iter=self.max_iter, tol=self.tol)


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    """Best-effort line number of a section header, or of a key inside it."""
    lines = text.splitlines()
    header = re.compile(r"^\s*\[\[?\s*" + re.escape(section) + r"(\.[\w.]+)?\s*\]\]?\s*(#.*)?$")
    any_header = re.compile(r"^\s*\[")
    start = None
    for i, ln in enumerate(lines):
        if header.match(ln):
            start = i
            if key is None:
                return i + 1
            break
    if start is None:
        return None
    kre = re.compile(r"^\s*" + re.escape(key) + r"\s*=")
    for j in range(start + 1, len(lines)):
        if any_header.match(lines[j]) and not header.match(lines[j]):
            break
        if kre.match(lines[j]):
            return j + 1
    return start + 1


class _Reader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def fail(self, message: str, section: str, key: str | None = None):
        raise SchemaError(message, _line_of(self.text, section, key), self.source)

    def table(self, doc: dict, section: str, allowed: set[str], required: set[str]) -> dict:
        t = doc[section]
        if not isinstance(t, dict):
            self.fail(f"[{section}] must be a table", section)
        for k in t:
            if k not in allowed:
                self.fail(f"unknown key '{k}' in [{section}]", section, k)
        for k in sorted(required - set(t)):
            self.fail(f"missing key '{k}' in [{section}]", section)
        return t

    def number(self, t: dict, section: str, key: str, kind=float):
        v = t[key]
        ok = isinstance(v, int) if kind is int else isinstance(v, (int, float))
        if isinstance(v, bool) or not ok:
            self.fail(f"'{key}' in [{section}] must be {'an integer' if kind is int else 'a number'}", section, key)
        return kind(v)

    def floats(self, t: dict, section: str, key: str, length: int | None = None) -> tuple[float, ...]:
        v = t[key]
        if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            self.fail(f"'{key}' in [{section}] must be a list of numbers", section, key)
        if length is not None and len(v) != length:
            self.fail(f"'{key}' in [{section}] must have {length} entries", section, key)
        return tuple(float(x) for x in v)

    def poly(self, t: dict, section: str, num_vars: int) -> Polynomial:
        terms = t.get("terms")
        if not isinstance(terms, list):
            self.fail(f"[{section}] needs a 'terms' list", section, "terms")
        for term in terms:
            if not isinstance(term, dict):
                self.fail(f"terms in [{section}] must be tables", section, "terms")
            exps = term.get("exponents")
            if isinstance(exps, list) and len(exps) != num_vars:
                self.fail(f"exponent vector of length {len(exps)} in [{section}], expected {num_vars}", section, "terms")
            if isinstance(exps, list) and any(not isinstance(a, int) or isinstance(a, bool) or a < 0 for a in exps):
                self.fail(f"exponents in [{section}] must be non-negative integers", section, "terms")
        try:
            return Polynomial.from_terms(terms, num_vars)
        except (ValueError, TypeError) as exc:
            self.fail(f"bad term list in [{section}]: {exc}", section, "terms")

    def set_spec(self, doc: dict, section: str, num_vars: int) -> SetSpec:
        t = self.table(doc, section, {"kind", "lower", "upper", "radius", "inequalities"}, {"kind"})
        kind = t["kind"]
        if kind == "box":
            self.table(doc, section, {"kind", "lower", "upper"}, {"lower", "upper"})
            return SetSpec("box", self.floats(t, section, "lower", num_vars), self.floats(t, section, "upper", num_vars))
        if kind == "ball":
            self.table(doc, section, {"kind", "radius"}, {"radius"})
            return SetSpec("ball", radius=self.number(t, section, "radius"))
        if kind == "general":
            self.table(doc, section, {"kind", "lower", "upper", "inequalities"}, {"lower", "upper", "inequalities"})
            ineqs = t["inequalities"]
            if not isinstance(ineqs, list):
                self.fail(f"[{section}] inequalities must be an array of tables", section, "inequalities")
            gs = []
            for g in ineqs:
                if not isinstance(g, dict) or set(g) != {"terms"}:
                    self.fail(f"each [[{section}.inequalities]] table holds exactly 'terms'", section + ".inequalities")
                gs.append(self.poly(g, section + ".inequalities", num_vars))
            return SetSpec(
                "general",
                self.floats(t, section, "lower", num_vars),
                self.floats(t, section, "upper", num_vars),
                inequalities=tuple(gs),
            )
        self.fail(f"unknown set kind '{kind}' in [{section}]", section, "kind")


def parse_problem_file(text: str, source: str = "<input>") -> ProblemFile:
    """Parse and schema-check a problem file.  Unknown sections or keys are errors."""
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SchemaError(f"TOML syntax error: {exc}", int(m.group(1)) if m else None, source) from None
    r = _Reader(text, source)
    for name in doc:
        if name not in REQUIRED + OPTIONAL:
            r.fail(f"unknown section [{name}]", name)
    for name in REQUIRED:
        if name not in doc:
            raise SchemaError(f"missing section [{name}]", None, source)

    pt = r.table(doc, "problem", {"mode", "discount", "n", "m"}, {"mode", "discount", "n", "m"})
    try:
        mode = TimeMode(pt["mode"])
    except ValueError:
        r.fail(f"mode must be 'continuous' or 'discrete', got {pt['mode']!r}", "problem", "mode")
    n, m = r.number(pt, "problem", "n", int), r.number(pt, "problem", "m", int)
    if n < 1 or m < 1:
        r.fail("need n >= 1 and m >= 1", "problem", "n")
    discount = r.number(pt, "problem", "discount")
    nv = n + m

    dyn = doc["dynamics"]
    if not isinstance(dyn, list):
        r.fail("dynamics must be an array of tables [[dynamics]]", "dynamics")
    fs = []
    for entry in dyn:
        if not isinstance(entry, dict) or set(entry) != {"terms"}:
            r.fail("each [[dynamics]] table holds exactly 'terms'", "dynamics")
        fs.append(r.poly(entry, "dynamics", nv))
    if len(fs) != n:
        r.fail(f"{len(fs)} [[dynamics]] entries for n = {n}", "dynamics")
    r.table(doc, "cost", {"terms"}, {"terms"})
    cost = r.poly(doc["cost"], "cost", nv)

    xs = r.set_spec(doc, "state_set", n)
    us = r.set_spec(doc, "input_set", m)
    mt = r.table(doc, "measure", {"lower", "upper"}, {"lower", "upper"})
    try:
        measure = Box(r.floats(mt, "measure", "lower", n), r.floats(mt, "measure", "upper", n))
    except ValueError as exc:
        r.fail(str(exc), "measure")

    ht = r.table(doc, "hierarchy", {"d_min", "d_max", "step"}, {"d_min", "d_max"})
    d_min, d_max = r.number(ht, "hierarchy", "d_min", int), r.number(ht, "hierarchy", "d_max", int)
    step = r.number(ht, "hierarchy", "step", int) if "step" in ht else 1
    if not 0 <= d_min <= d_max or step < 1:
        r.fail("need 0 <= d_min <= d_max and step >= 1", "hierarchy")

    kw: dict[str, Any] = {}
    if "solver" in doc:
        st = r.table(doc, "solver", {"tol", "max_iter"}, set())
        if "tol" in st:
            kw["tol"] = r.number(st, "solver", "tol")
        if "max_iter" in st:
            kw["max_iter"] = r.number(st, "solver", "max_iter", int)
    if "bounds" in doc:
        bt = r.table(doc, "bounds", {"c1", "c2", "epsilon", "fsup", "M"}, set())
        bkw: dict[str, Any] = {}
        for k in ("c1", "c2", "fsup", "M"):
            if k in bt:
                bkw[k] = r.number(bt, "bounds", k)
        if "epsilon" in bt:
            bkw["epsilon"] = r.floats(bt, "bounds", "epsilon")
            if not all(e > 0 for e in bkw["epsilon"]):
                r.fail("epsilons must be positive", "bounds", "epsilon")
        kw["bounds"] = BoundsSpec(**bkw)
    if "oracle" in doc:
        ot = r.table(doc, "oracle", {"kind", "points_per_axis", "input_samples", "tol"}, {"kind"})
        if ot["kind"] not in ("analytic_lq", "value_iteration"):
            r.fail(f"unknown oracle kind {ot['kind']!r}", "oracle", "kind")
        okw: dict[str, Any] = {"kind": ot["kind"]}
        for k, typ in (("points_per_axis", int), ("input_samples", int), ("tol", float)):
            if k in ot:
                okw[k] = r.number(ot, "oracle", k, typ)
        kw["oracle"] = OracleSpec(**okw)
    return ProblemFile(mode, discount, n, m, tuple(fs), cost, xs, us, measure, d_min, d_max, step, **kw)


def dump_problem_file(pf: ProblemFile) -> str:
    doc: dict[str, Any] = {
        "problem": {"mode": pf.mode.value, "discount": pf.discount, "n": pf.n, "m": pf.m},
        "dynamics": [{"terms": f.to_terms()} for f in pf.dynamics],
        "cost": {"terms": pf.cost.to_terms()},
        "state_set": pf.state_set.to_toml(),
        "input_set": pf.input_set.to_toml(),
        "measure": {"lower": list(pf.measure.lower), "upper": list(pf.measure.upper)},
        "hierarchy": {"d_min": pf.d_min, "d_max": pf.d_max, "step": pf.step},
        "solver": {"tol": pf.tol, "max_iter": pf.max_iter},
    }
    if pf.bounds is not None:
        b = pf.bounds
        doc["bounds"] = {"c1": b.c1, "c2": b.c2, "epsilon": list(b.epsilon)}
        if b.fsup is not None:
            doc["bounds"]["fsup"] = b.fsup
        if b.M is not None:
            doc["bounds"]["M"] = b.M
    if pf.oracle is not None:
        o = pf.oracle
        doc["oracle"] = {
            "kind": o.kind,
            "points_per_axis": o.points_per_axis,
            "input_samples": o.input_samples,
            "tol": o.tol,
        }
    return tomli_w.dumps(doc)


def load_problem_file(path: str | Path) -> ProblemFile:
    p = Path(path)
    return parse_problem_file(p.read_text(), str(p))


def bundled_problem(name: str) -> Path:
    """Path of a problem file shipped with the package (``scalar_lq.toml``, ``discrete_benchmark.toml``)."""
    return Path(__file__).parent / "data" / name


# ---------------------------------------------------------------------------
# solve


@dataclass
class ResultRow:
    degree: int
    status: str
    objective: float | None
    l1_gap: float | None
    max_violation: float | None
    solve_ms: float
    iterations: int


def _fmt(v: float | None) -> str:
    return "" if v is None else format(float(v), ".17g")


def results_csv(rows: Sequence[ResultRow], timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_HEADER)
    for r in rows:
        w.writerow(
            [
                r.degree,
                r.status,
                _fmt(r.objective),
                _fmt(r.l1_gap),
                _fmt(r.max_violation),
                _fmt(r.solve_ms if timing else 0.0),
                r.iterations,
            ]
        )
    return buf.getvalue()


def _is_scalar_lq(problem: ControlProblem) -> bool:
    x, u = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    unit = SemialgebraicSet.box([-1.0], [1.0])
    return (
        problem.time_mode is TimeMode.CONTINUOUS
        and problem.n == 1
        and problem.m == 1
        and problem.f == (u,)
        and problem.l == x * x + u * u
        and problem.X.enclosing_box == unit.enclosing_box
        and problem.U.enclosing_box == unit.enclosing_box
    )


def build_truth(problem: ControlProblem, spec: OracleSpec):
    """Ground-truth callable for the problem, per the declared oracle."""
    if spec.kind == "analytic_lq":
        if not _is_scalar_lq(problem):
            raise ValueError("analytic_lq oracle only covers f = u, l = x^2 + u^2 on [-1, 1]^2")
        p = analytic_scalar_lq(problem.discount)
        return lambda pts: p * np.asarray(pts, dtype=float)[:, 0] ** 2
    if problem.time_mode is not TimeMode.DISCRETE:
        raise ValueError("value_iteration oracle needs a discrete-time problem")
    return value_iteration(problem, spec.points_per_axis, spec.input_samples, spec.tol)


def result_rows(problem: ControlProblem, results: Sequence[ValueBound], truth=None) -> list[ResultRow]:
    rows = []
    for vb in results:
        gap = viol = None
        if truth is not None and vb.ok:
            rep = l1_gap(vb.V, truth, problem.mu0_box)
            gap, viol = rep.value, rep.max_violation
            if rep.violated:
                log.warning("degree %d exceeds the oracle by %.3g", vb.degree, viol)
        rows.append(ResultRow(vb.degree, vb.status.value, vb.objective, gap, viol, 1e3 * vb.solve_time, vb.iterations))
    return rows


def bound_params(pf: ProblemFile, problem: ControlProblem, results: Sequence[ValueBound]) -> bnd.BoundParams:
    """Calculator constants: r from the sets, ||f|| and M by grid unless given in the file."""
    spec = pf.bounds or BoundsSpec()
    fsup = spec.fsup if spec.fsup is not None else f_sup_grid(problem)
    if spec.M is not None:
        M = spec.M
    else:
        best = [vb for vb in results if vb.ok]
        # highest solved degree stands in for the value function
        M = bellman_sup_grid(problem, best[-1].V) if best else 0.0
    r = bnd.box_radius_r(problem.X, problem.U).r
    return bnd.BoundParams(spec.c1, spec.c2, problem.discount, fsup, M, max(r, 1.0), problem.n, problem.m, problem.d_f)


def bounds_csv(rows: Sequence[bnd.BoundsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUNDS_HEADER)
    for r in rows:
        w.writerow([_fmt(r.epsilon), r.d_p, _fmt(r.log_d_bound), _fmt(r.loglog_d_bound)])
    return buf.getvalue()


def emit_sdpa(problem: ControlProblem, degrees: Sequence[int], directory: str | Path) -> list[Path]:
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for d in degrees:
        path = out_dir / f"degree_{d}.dat-s"
        with path.open("w") as fh:
            write_sdpa(assemble_program(problem, d).sdp, fh)
        paths.append(path)
    return paths


def cmd_solve(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        pf = load_problem_file(args.file)
        problem = pf.control_problem()
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    findings = validate(problem, strict=False)
    for f in findings:
        print(f, file=err)
    if any(f.level == "error" for f in findings):
        return EXIT_INVALID
    truth = None
    if pf.oracle is not None:
        try:
            truth = build_truth(problem, pf.oracle)
        except ValueError as exc:
            print(f"error: oracle: {exc}", file=err)
            return EXIT_INVALID
    degrees = list(range(pf.d_min, pf.d_max + 1, pf.step))
    if args.emit_sdpa:
        emit_sdpa(problem, degrees, args.emit_sdpa)
    results = run_hierarchy(problem, pf.d_min, pf.d_max, pf.step, pf.solver_options(), jobs=args.jobs)
    text = results_csv(result_rows(problem, results, truth), timing=not args.no_timing)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    if pf.bounds is not None and problem.time_mode is TimeMode.CONTINUOUS:
        params = bound_params(pf, problem, results)
        err.write(bounds_csv(bnd.bounds_report(pf.bounds.epsilon, params)))
    failed = [vb for vb in results if vb.status in (SolverStatus.MAX_ITER, SolverStatus.NUMERICAL_TROUBLE)]
    if failed or not any(vb.ok for vb in results):
        for vb in failed:
            print(f"degree {vb.degree}: {vb.status.value} ({vb.message})", file=err)
        return EXIT_SOLVER
    return EXIT_OK


# ---------------------------------------------------------------------------
# bounds and lemma sweep

PARAM_KEYS = {"c1", "c2", "beta", "fsup", "M", "r", "n", "m", "d_f", "epsilon"}


def cmd_bounds(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    values: dict[str, Any] = {}
    if args.params:
        try:
            doc = tomli.loads(Path(args.params).read_text())
        except (OSError, tomli.TOMLDecodeError) as exc:
            print(f"error: {exc}", file=err)
            return EXIT_INVALID
        unknown = set(doc) - PARAM_KEYS
        if unknown:
            print(f"error: unknown parameter keys {sorted(unknown)}", file=err)
            return EXIT_INVALID
        values.update(doc)
    if args.c1 is not None:
        values["c1"] = args.c1
    if args.c2 is not None:
        values["c2"] = args.c2
    eps = args.eps if args.eps is not None else values.pop("epsilon", [2.0, 1.0, 0.5])
    values.pop("epsilon", None)
    try:
        params = bnd.BoundParams(**values)
        rows = bnd.bounds_report([float(e) for e in eps], params)
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    out.write(bounds_csv(rows))
    return EXIT_OK


def cmd_check_lemma3(args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    rng = np.random.default_rng(args.seed)
    worst, violations = 0.0, 0
    for _ in range(args.samples):
        chk = bnd.lemma3_check(bnd.random_polynomial(rng), args.grid_points)
        worst = max(worst, chk.ratio)
        violations += not chk.holds
    table = chebyshev_table(60)
    cheb_bad = [d for d in range(61) if table.maxabs[d] > 3**d]
    out.write(f"lemma3 samples={args.samples} seed={args.seed} violations={violations} max_ratio={worst:.6g}\n")
    out.write(f"chebyshev d<=60 violations={len(cheb_bad)}\n")
    return EXIT_OK if violations == 0 and not cheb_bad else 1


def _eps_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not vals or any(not v > 0 or math.isinf(v) for v in vals):
        raise argparse.ArgumentTypeError("epsilons must be positive and finite")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hjbsos", description="SOS lower bounds for discounted optimal control")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the hierarchy on a problem file")
    s.add_argument("file")
    s.add_argument("--out", help="write the results CSV here instead of stdout")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--no-timing", action="store_true", help="zero the solve_ms column")
    s.add_argument("--emit-sdpa", metavar="DIR", help="write one SDPA file per degree")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="tabulate the degree bound for a list of epsilons")
    b.add_argument("--c1", type=float)
    b.add_argument("--c2", type=float)
    b.add_argument("--eps", type=_eps_list, help="comma-separated, e.g. 2,1,0.5")
    b.add_argument("--params", help="TOML file with BoundParams fields and optional epsilon list")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("check-lemma3", help="coefficient norm vs grid sup norm on random polynomials")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int, default=100)
    c.add_argument("--grid-points", type=int, default=50)
    c.set_defaults(func=cmd_check_lemma3)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INVALID
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
