"""Sparse multivariate polynomials over the reals.

A :class:`Polynomial` is an immutable map from exponent tuples to float
coefficients.  Terms are kept in graded-lexicographic order so that anything
built by iterating over them (SDP rows, serialized files) is deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponent = tuple[int, ...]

#: Largest Chebyshev degree tabulated; 3**60 < 2**127 keeps every entry in
#: signed 128-bit range.
CHEBYSHEV_MAX_DEGREE = 60


def grlex_key(alpha: Exponent) -> tuple:
    """Sort key for graded-lex order: total degree first, then x1 > x2 > ..."""
    return (sum(alpha), tuple(-a for a in alpha))


@lru_cache(maxsize=None)
def monomials(num_vars: int, max_degree: int) -> tuple[Exponent, ...]:
    """All exponent vectors with total degree <= max_degree, in grlex order."""
    if max_degree < 0:
        return ()
    out = []
    for deg in range(max_degree + 1):
        out.extend(_homogeneous(num_vars, deg))
    return tuple(out)


def _homogeneous(num_vars: int, deg: int) -> list[Exponent]:
    if num_vars == 0:
        return [()] if deg == 0 else []
    if num_vars == 1:
        return [(deg,)]
    out = []
    for first in range(deg, -1, -1):
        for rest in _homogeneous(num_vars - 1, deg - first):
            out.append((first,) + rest)
    return out


def multinomial(alpha: Sequence[int]) -> int:
    """|alpha|! / (alpha_1! ... alpha_n!) in exact integer arithmetic."""
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


class Polynomial:
    """Immutable sparse polynomial in ``num_vars`` variables.

    Zero coefficients are never stored, so two polynomials with the same
    coefficients compare equal regardless of how they were built.
    """

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], float] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        clean: dict[Exponent, float] = {}
        for alpha, coef in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != num_vars:
                raise ValueError(f"exponent {alpha} has length {len(alpha)}, expected {num_vars}")
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in {alpha}")
            coef = float(coef)
            if coef != 0.0:
                clean[alpha] = clean.get(alpha, 0.0) + coef
        self.num_vars = num_vars
        self._terms = {a: clean[a] for a in sorted(clean, key=grlex_key) if clean[a] != 0.0}

    # construction helpers

    @classmethod
    def zero(cls, num_vars: int) -> Polynomial:
        return cls(num_vars)

    @classmethod
    def constant(cls, value: float, num_vars: int) -> Polynomial:
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, index: int, num_vars: int) -> Polynomial:
        if not 0 <= index < num_vars:
            raise ValueError(f"variable index {index} out of range for {num_vars} variables")
        alpha = [0] * num_vars
        alpha[index] = 1
        return cls(num_vars, {tuple(alpha): 1.0})

    @classmethod
    def monomial(cls, alpha: Sequence[int], coef: float = 1.0) -> Polynomial:
        return cls(len(alpha), {tuple(alpha): coef})

    @classmethod
    def from_terms(cls, terms: Iterable[Mapping], num_vars: int) -> Polynomial:
        """Build from the term-list text form: ``[{"exponents": [...], "coef": c}, ...]``."""
        acc: dict[Exponent, float] = {}
        for term in terms:
            unknown = set(term) - {"exponents", "coef"}
            if unknown:
                raise ValueError(f"unknown term keys {sorted(unknown)}")
            if "exponents" not in term or "coef" not in term:
                raise ValueError("each term needs 'exponents' and 'coef'")
            alpha = tuple(int(a) for a in term["exponents"])
            acc[alpha] = acc.get(alpha, 0.0) + float(term["coef"])
        return cls(num_vars, acc)

    def to_terms(self) -> list[dict]:
        return [{"exponents": list(a), "coef": c} for a, c in self._terms.items()]

    # basic queries

    @property
    def terms(self) -> dict[Exponent, float]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coef(self, alpha: Sequence[int]) -> float:
        return self._terms.get(tuple(alpha), 0.0)

    def degree(self) -> int:
        return max((sum(a) for a in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = Polynomial.constant(other, self.num_vars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self._terms == other._terms

    def __hash__(self):
        return hash((self.num_vars, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "Polynomial(0)"
        parts = []
        for alpha, c in self._terms.items():
            mono = "*".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(alpha) if a
            )
            parts.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return "Polynomial(" + " + ".join(parts) + ")"

    def allclose(self, other: Polynomial, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        self._check_same(other)
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self.coef(k) - other.coef(k)) <= atol + rtol * max(abs(self.coef(k)), abs(other.coef(k)))
            for k in keys
        )

    def max_coef_diff(self, other: Polynomial) -> float:
        self._check_same(other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self.coef(k) - other.coef(k)) for k in keys), default=0.0)

    def _check_same(self, other: Polynomial) -> None:
        if self.num_vars != other.num_vars:
            raise ValueError(f"dimension mismatch: {self.num_vars} vs {other.num_vars} variables")

    # ring operations

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check_same(other)
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Polynomial.constant(float(other), self.num_vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, 0.0) + c
        return Polynomial(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.num_vars, {a: -c for a, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: float) -> Polynomial:
        return Polynomial(self.num_vars, {a: factor * c for a, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self.scale(float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, float] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = tuple(i + j for i, j in zip(a, b))
                out[key] = out.get(key, 0.0) + ca * cb
        return Polynomial(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Polynomial.constant(1.0, self.num_vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus and substitution

    def derivative(self, index: int) -> Polynomial:
        out = {}
        for a, c in self._terms.items():
            if a[index]:
                b = list(a)
                b[index] -= 1
                out[tuple(b)] = c * a[index]
        return Polynomial(self.num_vars, out)

    def gradient(self) -> list[Polynomial]:
        return [self.derivative(i) for i in range(self.num_vars)]

    def compose(self, subs: Sequence[Polynomial]) -> Polynomial:
        """Substitute ``subs[i]`` for variable i; result lives in the subs' variables."""
        if len(subs) != self.num_vars:
            raise ValueError(f"need {self.num_vars} substitutions, got {len(subs)}")
        if not subs:
            raise ValueError("cannot compose a 0-variable polynomial without a target space")
        target = subs[0].num_vars
        for s in subs:
            if s.num_vars != target:
                raise ValueError("substituted polynomials must share num_vars")
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(1.0, target)} for _ in subs]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * subs[i]
            return cache[k]

        result = Polynomial.zero(target)
        for a, c in self._terms.items():
            term = Polynomial.constant(c, target)
            for i, k in enumerate(a):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def embed(self, num_vars: int, offset: int = 0) -> Polynomial:
        """View this polynomial as one in ``num_vars`` variables, its own
        variables occupying positions ``offset .. offset + self.num_vars - 1``."""
        if offset < 0 or offset + self.num_vars > num_vars:
            raise ValueError("embedding does not fit")
        pad_l, pad_r = (0,) * offset, (0,) * (num_vars - offset - self.num_vars)
        return Polynomial(num_vars, {pad_l + a + pad_r: c for a, c in self._terms.items()})

    # evaluation

    def __call__(self, point) -> float | np.ndarray:
        return self.eval(point)

    def eval(self, point) -> float | np.ndarray:
        """Evaluate at one point (length num_vars) or at rows of an (N, num_vars) array."""
        pts = np.asarray(point, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[-1] != self.num_vars:
            raise ValueError(f"point has {pts.shape[-1]} coordinates, polynomial has {self.num_vars} variables")
        out = np.zeros(pts.shape[0])
        if self._terms:
            maxdeg = np.max(np.array(list(self._terms)), axis=0) if self.num_vars else []
            tables = [
                np.cumprod(
                    np.concatenate([np.ones((pts.shape[0], 1)), np.repeat(pts[:, [i]], int(maxdeg[i]), axis=1)], axis=1),
                    axis=1,
                )
                for i in range(self.num_vars)
            ]
            for a, c in self._terms.items():
                term = np.full(pts.shape[0], c)
                for i, k in enumerate(a):
                    if k:
                        term = term * tables[i][:, k]
                out += term
        return float(out[0]) if single else out

    def coefficient_vector(self, basis: Sequence[Exponent]) -> np.ndarray:
        return np.array([self.coef(a) for a in basis])

    # norms

    def coefficient_norm(self) -> float:
        """max over terms of |coef| / multinomial(alpha)."""
        return max((abs(c) / multinomial(a) for a, c in self._terms.items()), default=0.0)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``[lower_1, upper_1] x ... x [lower_n, upper_n]``."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        if len(lo) != len(hi):
            raise ValueError("lower and upper must have equal length")
        if any(not l < u for l, u in zip(lo, hi)):
            raise ValueError(f"degenerate box: lower {lo} must be strictly below upper {hi}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, dim: int, half_width: float = 1.0) -> Box:
        return cls((-half_width,) * dim, (half_width,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, point, tol: float = 0.0) -> bool | np.ndarray:
        pts = np.asarray(point, dtype=float)
        lo, hi = np.array(self.lower), np.array(self.upper)
        inside = np.all((pts >= lo - tol) & (pts <= hi + tol), axis=-1)
        return bool(inside) if pts.ndim == 1 else inside

    def contains_box(self, other: Box, tol: float = 0.0) -> bool:
        return all(a >= b - tol for a, b in zip(other.lower, self.lower)) and all(
            a <= b + tol for a, b in zip(other.upper, self.upper)
        )

    def product(self, other: Box) -> Box:
        return Box(self.lower + other.lower, self.upper + other.upper)

    def axes(self, points_per_axis: int) -> list[np.ndarray]:
        return [np.linspace(l, u, points_per_axis) for l, u in zip(self.lower, self.upper)]

    def grid(self, points_per_axis: int) -> np.ndarray:
        """Tensor grid including the faces, as an (N**dim, dim) array in row-major order."""
        if points_per_axis < 2:
            raise ValueError("points_per_axis must be at least 2")
        mesh = np.meshgrid(*self.axes(points_per_axis), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def midpoints(self, points_per_axis: int) -> np.ndarray:
        """Cell midpoints of a uniform partition (tensor midpoint quadrature nodes)."""
        axes = []
        for l, u in zip(self.lower, self.upper):
            h = (u - l) / points_per_axis
            axes.append(l + h * (np.arange(points_per_axis) + 0.5))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def sup_norm_grid(p: Polynomial, box: Box, points_per_axis: int) -> float:
    """max |p| over a uniform tensor grid on ``box``.

    This is a lower bound on the true sup norm over the box.
    """
    if box.dim != p.num_vars:
        raise ValueError(f"box has dimension {box.dim}, polynomial has {p.num_vars} variables")
    return float(np.max(np.abs(p.eval(box.grid(points_per_axis)))))


def c1_norm_grid(p: Polynomial, box: Box, points_per_axis: int) -> float:
    """Grid estimate of max|p| + max||grad p||_2 (a lower bound on the C1 norm)."""
    if box.dim != p.num_vars:
        raise ValueError(f"box has dimension {box.dim}, polynomial has {p.num_vars} variables")
    pts = box.grid(points_per_axis)
    values = np.abs(p.eval(pts))
    grad = np.stack([g.eval(pts) for g in p.gradient()], axis=-1) if p.num_vars else np.zeros((len(pts), 1))
    return float(np.max(values) + np.max(np.linalg.norm(grad, axis=-1)))


@dataclass(frozen=True)
class ChebyshevTable:
    """Exact monomial coefficients of T_0 .. T_max_degree.

    ``coeffs[d][k]`` is the coefficient of y**k in T_d, ``maxabs[d]`` its
    largest absolute value.
    """

    max_degree: int
    coeffs: tuple[tuple[int, ...], ...]
    maxabs: tuple[int, ...]

    def polynomial(self, d: int) -> Polynomial:
        return Polynomial(1, {(k,): float(c) for k, c in enumerate(self.coeffs[d])})

    def evaluate(self, d: int, y: float) -> float:
        """T_d(y) by exact rational Horner at the float ``y``.

        Monomial coefficients grow like 3**d, so float Horner loses
        digits to cancellation.
        """
        acc = Fraction(0)
        yq = Fraction(float(y))
        for c in reversed(self.coeffs[d]):
            acc = acc * yq + c
        return float(acc)


def chebyshev_table(max_degree: int) -> ChebyshevTable:
    """Tabulate T_d via T_{d+1} = 2y T_d - T_{d-1} with integer arithmetic."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    if max_degree > CHEBYSHEV_MAX_DEGREE:
        raise OverflowError(f"max_degree {max_degree} exceeds the supported cap {CHEBYSHEV_MAX_DEGREE}")
    rows: list[list[int]] = [[1]]
    if max_degree >= 1:
        rows.append([0, 1])
    for d in range(1, max_degree):
        prev, cur = rows[d - 1], rows[d]
        nxt = [0] * (d + 2)
        for k, c in enumerate(cur):
            nxt[k + 1] += 2 * c
        for k, c in enumerate(prev):
            nxt[k] -= c
        rows.append(nxt)
    coeffs = tuple(tuple(r) for r in rows)
    return ChebyshevTable(max_degree, coeffs, tuple(max(abs(c) for c in r) for r in coeffs))


def moments_uniform_box(box: Box, alpha: Sequence[int]) -> float:
    """E[x^alpha] under the uniform probability measure on ``box``."""
    if len(alpha) != box.dim:
        raise ValueError(f"exponent length {len(alpha)} does not match box dimension {box.dim}")
    out = 1.0
    for k, l, u in zip(alpha, box.lower, box.upper):
        if not u > l:
            raise ValueError("degenerate box")
        out *= (u ** (k + 1) - l ** (k + 1)) / ((k + 1) * (u - l))
    return out


def integrate_uniform(p: Polynomial, box: Box) -> float:
    """Exact integral of ``p`` against the uniform probability measure on ``box``."""
    return sum(c * moments_uniform_box(box, a) for a, c in p.items())
