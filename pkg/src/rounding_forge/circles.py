"""Do the images of lines actually land on circles?

Two independent routes answer that question. The exact route restricts a
fractional-quadratic map to a rational line and decides circle membership by
the rank of an integer coefficient matrix; no floats, no thresholds. The
numeric route samples points on random lines, runs an algebraic circle fit,
and measures residuals. The two must agree, and the test suite leans on that
redundancy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import _linalg
from .jets import FracQuadMap
from .polycore import Poly, as_rational

Coeffs = tuple[Fraction, ...]  # univariate polynomial, index = power of t


class DenominatorVanishesIdentically(Exception):
    """The chosen line lies inside the zero set of the denominator."""


def _trim(c: Sequence[Fraction]) -> Coeffs:
    out = list(c)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _uni_add(a: Coeffs, b: Coeffs) -> Coeffs:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _uni_mul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _uni_eval(a: Coeffs, t: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(a):
        total = total * t + c
    return total


def poly_on_line(p: Poly, base: Sequence, direction: Sequence) -> Coeffs:
    """Coefficients of t -> p(base + t * direction)."""
    base = [as_rational(x) for x in base]
    direction = [as_rational(x) for x in direction]
    if len(base) != p.num_vars or len(direction) != p.num_vars:
        raise ValueError("line dimension mismatch")
    # Powers of each affine coordinate up to the largest exponent used.
    top = max((k for e in p.terms for k in e), default=0)
    powers = []
    for b, d in zip(base, direction):
        var = _trim((b, d))
        cur: list[Coeffs] = [(Fraction(1),)]
        for _ in range(top):
            cur.append(_uni_mul(cur[-1], var))
        powers.append(cur)
    total: Coeffs = ()
    for e, c in p.terms.items():
        term: Coeffs = (c,)
        for i, k in enumerate(e):
            if k:
                term = _uni_mul(term, powers[i][k])
        total = _uni_add(total, term)
    return total


@dataclass(frozen=True)
class Line:
    """Affine rational line t -> base + t * direction."""

    base: tuple[Fraction, ...]
    direction: tuple[Fraction, ...]

    def __post_init__(self):
        base = tuple(as_rational(x) for x in self.base)
        direction = tuple(as_rational(x) for x in self.direction)
        if len(base) != len(direction):
            raise ValueError("base and direction dimensions differ")
        if not any(direction):
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", direction)

    @property
    def dim(self) -> int:
        return len(self.base)

    def at(self, t) -> tuple[Fraction, ...]:
        t = as_rational(t)
        return tuple(b + t * d for b, d in zip(self.base, self.direction))

    def at_float(self, t: float) -> list[float]:
        return [float(b) + t * float(d) for b, d in zip(self.base, self.direction)]


@dataclass(frozen=True)
class RationalCurve:
    """Image of a line under a fractional map, as univariate data.

    numerators holds one coefficient tuple per target coordinate, denominator
    the shared quadratic, and norm_numer the restricted squared norm of the
    numerator. The constructor recomputes norm_numer from the numerators, so
    an inconsistent hand-built curve is rejected immediately.
    """

    numerators: tuple[Coeffs, ...]
    denominator: Coeffs
    norm_numer: Coeffs = None  # type: ignore[assignment]

    def __post_init__(self):
        numerators = tuple(_trim([as_rational(c) for c in num]) for num in self.numerators)
        denominator = _trim([as_rational(c) for c in self.denominator])
        if not denominator:
            raise DenominatorVanishesIdentically("denominator is the zero polynomial")
        if any(len(num) > 5 for num in numerators):
            raise ValueError("numerator degree exceeds 4")
        if len(denominator) > 3:
            raise ValueError("denominator degree exceeds 2")
        square = ()
        for num in numerators:
            square = _uni_add(square, _uni_mul(num, num))
        if self.norm_numer is not None:
            given = _trim([as_rational(c) for c in self.norm_numer])
            if given != square:
                raise ValueError("norm_numer disagrees with the numerators")
        object.__setattr__(self, "numerators", numerators)
        object.__setattr__(self, "denominator", denominator)
        object.__setattr__(self, "norm_numer", square)

    @property
    def target_dim(self) -> int:
        return len(self.numerators)

    def point(self, t) -> tuple[Fraction, ...]:
        t = as_rational(t)
        d = _uni_eval(self.denominator, t)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t = {t}")
        return tuple(_uni_eval(num, t) / d for num in self.numerators)


def restrict_to_line(fq: FracQuadMap, line: Line) -> RationalCurve:
    """Restrict numerator, denominator, and numerator norm to a rational line.

    Composing with the line is a ring homomorphism, so the norm restriction
    is recovered from the restricted numerators inside RationalCurve instead
    of restricting the much larger multivariate norm polynomial."""
    if line.dim != fq.source_dim:
        raise ValueError("line lives in the wrong source space")
    numerators = tuple(poly_on_line(c, line.base, line.direction) for c in fq.numer.coords)
    denominator = poly_on_line(fq.denom, line.base, line.direction)
    if not denominator:
        raise DenominatorVanishesIdentically(f"denominator vanishes along {line}")
    return RationalCurve(numerators=numerators, denominator=denominator)


def circle_rank_exact(curve: RationalCurve) -> tuple[int, bool]:
    """Exact circle membership for a rational curve.

    Builds the coefficient matrix of t -> (d*f_1, ..., d*f_n, <f,f>, d^2),
    one row per power of t, and computes its rank over the rationals. The
    affine span of the curve points (y, <y,y>, 1) has dimension rank - 1, and
    the image lies on a circle (or line or point) exactly when rank <= 3.
    """
    d = curve.denominator
    columns = [_uni_mul(d, num) for num in curve.numerators]
    columns.append(curve.norm_numer)
    columns.append(_uni_mul(d, d))
    nrows = max(len(c) for c in columns)
    matrix = [[col[r] if r < len(col) else Fraction(0) for col in columns] for r in range(nrows)]
    rank = _linalg.exact_rank(matrix)
    return rank, rank <= 3


@dataclass(frozen=True)
class CircleFit:
    """Least-squares circle in a best-fit plane, with degradations.

    kind is "circle", "line", or "point". center and plane_basis are in the
    ambient space; residual is the worst distance from a sample to the fitted
    object, out-of-plane components included.
    """

    kind: str
    center: np.ndarray
    radius: float
    plane_basis: np.ndarray
    residual: float


def _max_distance(points: np.ndarray, fit: CircleFit) -> float:
    w = points - fit.center
    if fit.kind == "point":
        return float(np.max(np.linalg.norm(w, axis=1)))
    b1, b2 = fit.plane_basis
    if fit.kind == "line":
        along = w @ b1
        return float(np.max(np.linalg.norm(w - np.outer(along, b1), axis=1)))
    u, v = w @ b1, w @ b2
    out = w - np.outer(u, b1) - np.outer(v, b2)
    in_plane = np.hypot(u, v) - fit.radius
    return float(np.max(np.hypot(in_plane, np.linalg.norm(out, axis=1))))


def circle_fit(points: Sequence[Sequence[float]]) -> CircleFit:
    """Algebraic circle fit through points in R^n.

    The plane is the top-2 principal subspace of the centered samples; inside
    it the classical linearized fit solves the normal equations for center
    and radius. Nearly collinear or coincident samples degrade to a line or
    point fit rather than returning a meaningless huge circle.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 5:
        raise ValueError("need at least 5 points")
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    if vt.shape[0] < 2:
        vt = np.vstack([vt, np.zeros_like(vt[0])])
        svals = np.append(svals, 0.0)
    basis = vt[:2]
    scale = float(svals[0])

    def finish(kind: str, center: np.ndarray, radius: float) -> CircleFit:
        fit = CircleFit(kind=kind, center=center, radius=radius, plane_basis=basis, residual=0.0)
        return replace(fit, residual=_max_distance(pts, fit))

    sizes = np.linalg.norm(centered, axis=1)
    if scale < 1e-12 * max(1.0, float(np.max(sizes, initial=0.0))) or scale == 0.0:
        return finish("point", centroid, 0.0)
    if svals[1] < 1e-9 * scale:
        return finish("line", centroid, float("inf"))
    u = centered @ basis[0]
    v = centered @ basis[1]
    design = np.column_stack([2 * u, 2 * v, np.ones_like(u)])
    rhs = u * u + v * v
    (cu, cv, c), *_ = np.linalg.lstsq(design, rhs, rcond=None)
    r2 = c + cu * cu + cv * cv
    radius = float(np.sqrt(max(r2, 0.0)))
    if radius > 1e9 * scale:
        return finish("line", centroid, float("inf"))
    return finish("circle", centroid + cu * basis[0] + cv * basis[1], radius)


@dataclass(frozen=True)
class NumericReport:
    """Outcome of the sampling oracle; violations index the offending trials."""

    trials: int
    seed: int
    tol: float
    points_per_line: int
    max_residual: float
    violations: tuple[int, ...]
    skipped: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


FloatMap = Callable[[Sequence[float]], Sequence[float]]

_GUARD = 1e-6  # reject parameters where |Q| < guard * (1 + |t|^2)


def _as_numeric_pair(fmap) -> tuple[list[Poly], Poly]:
    if isinstance(fmap, FracQuadMap):
        return list(fmap.numer.coords), fmap.denom
    numerators, denominator = fmap
    numerators = list(numerators)
    if not isinstance(denominator, Poly) or not all(isinstance(p, Poly) for p in numerators):
        raise TypeError("expected a FracQuadMap or (list of Poly, Poly)")
    return numerators, denominator


def verify_rounding_numeric(fmap, trials: int = 100, seed: int = 0, tol: float = 1e-7,
                            points_per_line: int = 16) -> NumericReport:
    """Sample random lines, fit circles to their images, report violations.

    fmap is a FracQuadMap, or a raw (numerators, denominator) pair of exact
    polynomials so that deliberately broken maps (degree up to 4) can be fed
    to the oracle as controls. Half the lines pass through the origin. Lines
    where not enough parameters clear the denominator guard are skipped, not
    counted as violations.
    """
    numerators, denominator = _as_numeric_pair(fmap)
    m = denominator.num_vars
    rng = random.Random(seed)
    violations: list[int] = []
    skipped: list[int] = []
    max_residual = 0.0
    for trial in range(trials):
        if trial % 2 == 0:
            base = [0.0] * m
        else:
            base = [rng.uniform(-1.0, 1.0) for _ in range(m)]
        direction = [rng.uniform(-1.0, 1.0) for _ in range(m)]
        while not any(abs(d) > 1e-3 for d in direction):
            direction = [rng.uniform(-1.0, 1.0) for _ in range(m)]
        pts = []
        for _ in range(60 * points_per_line):
            t = rng.uniform(-2.0, 2.0)
            x = [b + t * d for b, d in zip(base, direction)]
            qv = denominator.eval_float(x)
            if abs(qv) < _GUARD * (1.0 + t * t):
                continue
            pts.append([num.eval_float(x) / qv for num in numerators])
            if len(pts) >= points_per_line:
                break
        if len(pts) < points_per_line:
            skipped.append(trial)
            continue
        fit = circle_fit(pts)
        max_residual = max(max_residual, fit.residual)
        if fit.residual > tol:
            violations.append(trial)
    return NumericReport(
        trials=trials,
        seed=seed,
        tol=tol,
        points_per_line=points_per_line,
        max_residual=max_residual,
        violations=tuple(violations),
        skipped=tuple(skipped),
    )
