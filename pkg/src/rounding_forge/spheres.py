"""Lifting a canonical rounding to a quadratic map between spheres.

Homogenizing numerator and denominator with an extra variable t turns the
squared numerator norm into a product of two quadratic forms Q1 * Q2. Their
sum G is positive definite exactly when the jet is nondegenerate, and the
quadratic map f = (2 * numerator, Q1 - Q2) satisfies <f, f> = G^2 on the
nose. Rescaling the source by the exact LDL^T factorization of G therefore
carries the unit sphere of G onto the round unit sphere, and stereographic
projection recovers the original fractional map on the chart where the
denominator lives.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _linalg
from .jets import FracQuadMap, NotDivisible, RoundingJet, canonical_rounding
from .polycore import PolyMap, QuadForm, form_signature, inner_poly, poly_divmod


class Degenerate(Exception):
    """The summed form is not positive definite, so no sphere lift exists."""

    def __init__(self, signature: tuple[int, int, int]):
        super().__init__(f"summed form has signature {signature}, not positive definite")
        self.signature = signature


class Q2NotQuadratic(Exception):
    """The norm quotient failed to be a homogeneous quadratic form."""


class PoleProximity(Exception):
    """Evaluation point too close to the stereographic pole or the cone tip."""


@dataclass(frozen=True)
class HomogenizedMap:
    """Homogeneous quadratic numerator and denominator on R^(m+1).

    The extra variable is appended last; setting it to 1 recovers the
    original map.
    """

    numer: PolyMap
    denom: QuadForm

    @property
    def source_dim(self) -> int:
        return self.numer.source_dim

    @property
    def target_dim(self) -> int:
        return self.numer.target_dim


@dataclass(frozen=True)
class QuadSphereMap:
    """Quadratic map f with <f, f> = gram^2 for a positive definite gram.

    lower and diag are the exact LDL^T factors of gram's matrix; with
    u = sqrt(diag) * lower^T * x the map carries the unit sphere of gram to
    the Euclidean unit sphere of the target.
    """

    f: PolyMap
    gram: QuadForm
    lower: tuple[tuple[Fraction, ...], ...]
    diag: tuple[Fraction, ...]

    @property
    def source_dim(self) -> int:
        return self.f.source_dim

    @property
    def target_dim(self) -> int:
        return self.f.target_dim

    @staticmethod
    def checked(f: PolyMap, gram: QuadForm) -> "QuadSphereMap":
        """Validate the norm identity and factor the gram form."""
        if gram.dim != f.source_dim:
            raise ValueError("gram form lives in a different space")
        gram_poly = gram.to_poly()
        if inner_poly(f, f) != gram_poly * gram_poly:
            raise ValueError("<f, f> is not the square of the gram form")
        signature = form_signature(gram)
        if signature != (gram.dim, 0, 0):
            raise Degenerate(signature)
        lower, diag = _linalg.ldl([list(r) for r in gram.matrix])
        return QuadSphereMap(
            f=f,
            gram=gram,
            lower=tuple(tuple(row) for row in lower),
            diag=tuple(diag),
        )


def homogenize(fq: FracQuadMap) -> HomogenizedMap:
    """Homogenize a fractional-quadratic germ with denominator 1 at 0."""
    if fq.denom.constant_term() != 1:
        raise ValueError("denominator must take the value 1 at the origin")
    numer = PolyMap(fq.source_dim + 1, [c.homogenize(2) for c in fq.numer.coords])
    denom = QuadForm.from_poly(fq.denom.homogenize(2))
    return HomogenizedMap(numer=numer, denom=denom)


def split_norm(h: HomogenizedMap) -> tuple[QuadForm, QuadForm]:
    """Factor the squared numerator norm as Q1 * Q2 with Q1 the denominator.

    Both factors are normalized to take nonnegative values: when the
    quotient comes out negative semidefinite, both signs are flipped.
    """
    q1 = h.denom
    quotient, rem = poly_divmod(inner_poly(h.numer, h.numer), q1.to_poly())
    if not rem.is_zero():
        raise NotDivisible("<F, F>", rem)
    if not quotient.is_homogeneous(2):
        raise Q2NotQuadratic(f"quotient {quotient} is not homogeneous quadratic")
    q2 = QuadForm.from_poly(quotient)
    plus1, minus1, _ = form_signature(q1)
    plus2, minus2, _ = form_signature(q2)
    if minus1 == 0 and minus2 == 0:
        return q1, q2
    if plus1 == 0 and plus2 == 0:
        return -q1, -q2
    raise ValueError("norm factors are not semidefinite of a common sign")


def sphere_lift(rj: RoundingJet) -> QuadSphereMap:
    """Lift a validated jet to a quadratic map between spheres.

    Raises Degenerate exactly when the jet is degenerate; the gram form's
    failure to be positive definite is the same condition.
    """
    h = homogenize(canonical_rounding(rj))
    q1, q2 = split_norm(h)
    gram = q1 + q2
    signature = form_signature(gram)
    if signature != (gram.dim, 0, 0):
        raise Degenerate(signature)
    coords = [2 * c for c in h.numer.coords]
    coords.append(q1.to_poly() - q2.to_poly())
    f = PolyMap(h.source_dim, coords)
    return QuadSphereMap.checked(f, gram)


def sphere_points_check(sm: QuadSphereMap, samples: int = 100, seed: int = 0) -> float:
    """Worst |  |f(u)|^2 - 1  | over random points with gram(u) = 1."""
    rng = np.random.default_rng(seed)
    gram = np.array([[float(x) for x in row] for row in sm.gram.matrix])
    worst = 0.0
    for _ in range(samples):
        v = rng.normal(size=sm.source_dim)
        v /= np.sqrt(v @ gram @ v)
        image = np.array(sm.f.eval_float(list(v)))
        worst = max(worst, abs(float(image @ image) - 1.0))
    return worst


def evaluate_factored(sm: QuadSphereMap, x: Sequence[float]) -> np.ndarray:
    """Evaluate the sphere route at a chart point: embed, project, map, chart.

    The point (x, 1) is radially scaled onto the gram unit sphere, pushed
    through f onto the round sphere, and projected stereographically onto the
    hyperplane of the first n coordinates. The projection is centered so the
    lift of the origin lands at 0, which places the pole at the point
    opposite f(origin lift); denominators below 1e-9 raise PoleProximity.
    """
    point = [float(v) for v in x]
    if len(point) != sm.source_dim - 1:
        raise ValueError("expected a chart point with one fewer coordinate")
    point.append(1.0)
    gram = sm.gram
    g = sum(
        float(gram.matrix[i][j]) * point[i] * point[j]
        for i in range(gram.dim)
        for j in range(gram.dim)
    )
    if g < 1e-9:
        raise PoleProximity(f"gram value {g} at the embedded point is too small")
    image = np.array(sm.f.eval_float(point)) / g
    denom = 1.0 + image[-1]
    if abs(denom) < 1e-9:
        raise PoleProximity(f"stereographic denominator {denom} is too small")
    return image[:-1] / denom
