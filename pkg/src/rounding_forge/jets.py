"""Validation of 2-jets that round lines to circles, and the canonical
fractional-quadratic representative.

A 2-jet (A, B) with A linear of rank at least 2 and B quadratic is accepted
when <A,B> and <B,B> are exactly divisible by <A,A>; the quotients p (linear)
and q (quadratic) drive everything downstream. The canonical representative
is (A + B - 2pA) / (1 - 2p + q), whose squared numerator norm factors exactly
as (1 - 2p + q) * <A,A>; that identity is asserted, not assumed.

Degeneracy means the quadratic form q - p^2 has a nontrivial real zero on the
kernel of A. Degenerate jets factor through a rational projection onto a
smaller source space, and the reduced jet is always nondegenerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from typing import Sequence

from . import _linalg
from .polycore import (
    Poly,
    PolyMap,
    QuadForm,
    as_rational,
    divide_exact,
    inner_poly,
    poly_divmod,
    rank_linear,
)


class JetError(Exception):
    """Base class for rejections of mathematically meaningful input."""


class RankTooLow(JetError):
    def __init__(self, rank: int):
        super().__init__(f"linear part has rank {rank}, need at least 2")
        self.rank = rank


class NotDivisible(JetError):
    """One of the two divisibility conditions failed; carries the remainder."""

    def __init__(self, which: str, remainder: Poly):
        super().__init__(f"{which} is not divisible by <A,A>; remainder {remainder}")
        self.which = which
        self.remainder = remainder


class NotDegenerate(JetError):
    pass


class IrrationalKernelWitness(JetError):
    """Degeneracy is real but no rational common-kernel direction exists."""


@dataclass(frozen=True)
class Jet2:
    """A 2-jet at the origin: homogeneous linear and quadratic parts."""

    linear: PolyMap
    quad: PolyMap

    def __post_init__(self):
        if self.linear.source_dim != self.quad.source_dim:
            raise ValueError("linear and quadratic parts have different sources")
        if self.linear.target_dim != self.quad.target_dim:
            raise ValueError("linear and quadratic parts have different targets")
        if not self.linear.is_linear():
            raise ValueError("linear part is not homogeneous of degree 1")
        if not all(c.is_zero() or c.is_homogeneous(2) for c in self.quad.coords):
            raise ValueError("quadratic part is not homogeneous of degree 2")

    @property
    def source_dim(self) -> int:
        return self.linear.source_dim

    @property
    def target_dim(self) -> int:
        return self.linear.target_dim


@dataclass(frozen=True)
class RoundingJet:
    """A validated jet together with its division witnesses.

    p and q are the exact quotients <A,B> = p * <A,A> and <B,B> = q * <A,A>.
    """

    jet: Jet2
    p: Poly
    q: Poly
    rank: int

    @property
    def source_dim(self) -> int:
        return self.jet.source_dim

    @property
    def target_dim(self) -> int:
        return self.jet.target_dim


@dataclass(frozen=True)
class FracQuadMap:
    """Quadratic-over-quadratic map numer/denom on a common source space."""

    numer: PolyMap
    denom: Poly

    def __post_init__(self):
        if self.denom.num_vars != self.numer.source_dim:
            raise ValueError("denominator lives in a different variable space")
        if self.denom.degree() > 2:
            raise ValueError("denominator degree exceeds 2")

    @property
    def source_dim(self) -> int:
        return self.numer.source_dim

    @property
    def target_dim(self) -> int:
        return self.numer.target_dim

    @property
    def is_germ(self) -> bool:
        """Whether the map is defined at the origin."""
        return self.denom.constant_term() != 0

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        d = self.denom(point)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {tuple(point)}")
        return tuple(c / d for c in self.numer(point))

    def eval_float(self, point: Sequence[float]) -> list[float]:
        d = self.denom.eval_float(point)
        return [c / d for c in self.numer.eval_float(point)]


def jet_from_matrices(linear_rows: Sequence[Sequence], quad_matrices: Sequence[Sequence[Sequence]]) -> Jet2:
    """Build a Jet2 from an n x m matrix and n symmetric m x m matrices."""
    lin = PolyMap.from_linear_matrix(linear_rows)
    quad = PolyMap.from_quadratic_forms(
        [QuadForm(tuple(tuple(as_rational(x) for x in row) for row in mat)) for mat in quad_matrices]
    )
    return Jet2(lin, quad)


def validate_jet(jet: Jet2) -> RoundingJet:
    """Decide whether a 2-jet can round lines to circles.

    Raises RankTooLow or NotDivisible; on success returns the jet with its
    division witnesses attached.
    """
    a, b = jet.linear, jet.quad
    rank = rank_linear(a)
    if rank < 2:
        raise RankTooLow(rank)
    norm_a = inner_poly(a, a)
    p, rem = poly_divmod(inner_poly(a, b), norm_a)
    if not rem.is_zero():
        raise NotDivisible("<A,B>", rem)
    q, rem = poly_divmod(inner_poly(b, b), norm_a)
    if not rem.is_zero():
        raise NotDivisible("<B,B>", rem)
    return RoundingJet(jet=jet, p=p, q=q, rank=rank)


def canonical_rounding(rj: RoundingJet) -> FracQuadMap:
    """The canonical representative (A + B - 2pA) / (1 - 2p + q)."""
    a, b = rj.jet.linear, rj.jet.quad
    numer = a + b - a.times_poly(2 * rj.p)
    denom = 1 - 2 * rj.p + rj.q
    norm_identity = inner_poly(numer, numer) - denom * inner_poly(a, a)
    assert norm_identity.is_zero(), "canonical numerator norm identity failed"
    return FracQuadMap(numer=numer, denom=denom)


def fracquad_jet(fq: FracQuadMap) -> Jet2:
    """The 2-jet at the origin of a fractional-quadratic germ."""
    c0 = fq.denom.constant_term()
    if c0 == 0:
        raise ValueError("map is not a germ at the origin")
    numer = fq.numer.scaled(1 / c0)
    denom = (1 / c0) * fq.denom
    if any(c.constant_term() != 0 for c in numer.coords):
        raise ValueError("map does not fix the origin")
    f1 = numer.homogeneous_part(1)
    f2 = numer.homogeneous_part(2)
    d1 = denom.homogeneous_part(1)
    return Jet2(linear=f1, quad=f2 - f1.times_poly(d1))


def _deficiency_form(rj: RoundingJet) -> QuadForm:
    return QuadForm.from_poly(rj.q - rj.p * rj.p) if not (rj.q - rj.p * rj.p).is_zero() else QuadForm.zero(rj.source_dim)


def _rational_square_root(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    pn, pd = isqrt(f.numerator), isqrt(f.denominator)
    if pn * pn == f.numerator and pd * pd == f.denominator:
        return Fraction(pn, pd)
    return None


def is_degenerate(rj: RoundingJet) -> tuple[bool, tuple | None]:
    """Decide degeneracy exactly and, when degenerate, produce a witness.

    The test restricts q - p^2 to the kernel of A and checks whether the
    restricted form fails to be definite. The witness x0 satisfies A(x0) = 0
    and (q - p^2)(x0) = 0; it is returned over the rationals whenever the
    construction yields one (singular restriction, or an indefinite pair of
    diagonal entries whose ratio is a perfect square) and as floats otherwise.
    """
    a = rj.jet.linear
    kernel = _linalg.nullspace(a.linear_matrix(), rj.source_dim)
    k = len(kernel)
    if k == 0:
        return False, None
    restricted = _deficiency_form(rj).restricted(kernel)
    trans, diag = _linalg.congruent_diagonalize([list(r) for r in restricted.matrix])
    plus = sum(1 for d in diag if d > 0)
    minus = sum(1 for d in diag if d < 0)
    if plus == k or minus == k:
        return False, None

    cols = _linalg.transpose(trans)  # row i = i-th basis vector of the diagonalizing basis

    def lift(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            sum(c * kernel[j][i] for j, c in enumerate(coeffs)) for i in range(rj.source_dim)
        )

    zeros = [i for i, d in enumerate(diag) if d == 0]
    if zeros:
        return True, lift(cols[zeros[0]])
    pos = [i for i, d in enumerate(diag) if d > 0]
    neg = [i for i, d in enumerate(diag) if d < 0]
    for i in pos:
        for j in neg:
            root = _rational_square_root(-diag[j] / diag[i])
            if root is not None:
                return True, lift([root * x + y for x, y in zip(cols[i], cols[j])])
    i, j = pos[0], neg[0]
    scale = sqrt(float(-diag[j] / diag[i]))
    witness = tuple(
        scale * float(x) + float(y)
        for x, y in zip(lift(cols[i]), lift(cols[j]))
    )
    return True, witness


def normalize_p(rj: RoundingJet) -> RoundingJet:
    """The equivalent jet with p = 0, obtained by B <- B - pA."""
    jet = Jet2(linear=rj.jet.linear, quad=rj.jet.quad - rj.jet.linear.times_poly(rj.p))
    out = validate_jet(jet)
    assert out.p.is_zero(), "normalization failed to kill p"
    assert out.q == rj.q - rj.p * rj.p, "normalized q is not q - p^2"
    return out


def factor_degenerate(rj: RoundingJet) -> tuple[tuple[tuple[Fraction, ...], ...], RoundingJet]:
    """Factor a degenerate jet through a rational projection.

    Returns (pi, reduced) where pi is a full-rank k x m matrix whose kernel
    is ker A intersected with the radical of B - pA, and reduced is the
    validated jet on R^k with linear part Ap and quadratic part Bp such that
    Ap o pi = A and Bp o pi = B - pA. The reduced jet is nondegenerate.
    """
    degenerate, _ = is_degenerate(rj)
    if not degenerate:
        raise NotDegenerate("jet is nondegenerate, nothing to factor")
    norm = normalize_p(rj)
    a, b = norm.jet.linear, norm.jet.quad
    m = norm.source_dim
    constraints = [list(row) for row in a.linear_matrix()]
    for form in b.quadratic_forms():
        constraints.extend(list(row) for row in form.matrix)
    common = _linalg.nullspace(constraints, m)
    if not common:
        raise IrrationalKernelWitness(
            "no rational direction lies in ker A and the radical of B - pA"
        )
    proj_rows, pivots = _linalg.rref(constraints)
    proj = tuple(tuple(row) for row in proj_rows)
    k = len(proj)
    section = [[Fraction(int(p == i)) for p in pivots] for i in range(m)]  # m x k
    sec_t = _linalg.transpose(section)  # k rows of length m... columns of the section
    reduced_lin = PolyMap.from_linear_matrix(_linalg.matmul(a.linear_matrix(), section))
    reduced_quad = PolyMap.from_quadratic_forms([f.restricted(sec_t) for f in b.quadratic_forms()])
    reduced = validate_jet(Jet2(reduced_lin, reduced_quad))
    assert reduced_lin.compose_linear(proj) == a, "projection does not recover A"
    assert reduced_quad.compose_linear(proj) == b, "projection does not recover B - pA"
    assert not is_degenerate(reduced)[0], "reduced jet is still degenerate"
    return proj, reduced


def parallel_factor(a: PolyMap, c: PolyMap) -> Poly | None:
    """The linear l with C = l * A coordinate-wise, when one exists.

    Requires rank(A) >= 2, which also makes l unique.
    """
    rank = rank_linear(a)
    if rank < 2:
        raise RankTooLow(rank)
    if a.source_dim != c.source_dim or a.target_dim != c.target_dim:
        raise ValueError("maps have different shapes")
    if not all(x.is_zero() or x.is_homogeneous(2) for x in c.coords):
        raise ValueError("C must be homogeneous quadratic")
    m = a.source_dim
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for ai, ci in zip(a.coords, c.coords):
        monomials = set(ci.terms)
        for j in range(m):
            xj = Poly.variable(m, j)
            monomials.update((xj * ai).terms)
        for mono in sorted(monomials):
            row = [(Poly.variable(m, j) * ai).terms.get(mono, Fraction(0)) for j in range(m)]
            rows.append(row)
            rhs.append(ci.terms.get(mono, Fraction(0)))
    sol = _linalg.solve(rows, rhs)
    if sol is None:
        return None
    candidate = Poly.linear(sol)
    if a.times_poly(candidate) != c:
        return None
    return candidate


def transform_jet(jet: Jet2, lam, ell: Poly) -> Jet2:
    """Apply the reparametrization (A, B) -> (lam*A, lam^2*B + ell*A)."""
    lam = as_rational(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if not (ell.is_zero() or ell.is_homogeneous(1)) or ell.num_vars != jet.source_dim:
        raise ValueError("ell must be a homogeneous linear polynomial on the source")
    return Jet2(
        linear=jet.linear.scaled(lam),
        quad=jet.quad.scaled(lam * lam) + jet.linear.times_poly(ell),
    )


def jets_equivalent(j1: Jet2, j2: Jet2) -> tuple[Fraction, Poly] | None:
    """Find (lam, ell) with A2 = lam*A1 and B2 = lam^2*B1 + ell*A1, if any."""
    if j1.source_dim != j2.source_dim or j1.target_dim != j2.target_dim:
        return None
    lam = None
    for c1, c2 in zip(j1.linear.coords, j2.linear.coords):
        if not c1.is_zero():
            e, coeff = c1.leading()
            lam = c2.terms.get(e, Fraction(0)) / coeff
            break
    if not lam:
        return None
    if j1.linear.scaled(lam) != j2.linear:
        return None
    ell = parallel_factor(j1.linear, j2.quad - j1.quad.scaled(lam * lam))
    if ell is None:
        return None
    return lam, ell


@dataclass(frozen=True)
class SeriesDegreeCheck:
    """Divisibility verdict for one homogeneous degree of the two products."""

    degree: int
    inner_ok: bool
    norm_ok: bool

    @property
    def ok(self) -> bool:
        return self.inner_ok and self.norm_ok


@dataclass(frozen=True)
class SeriesReport:
    order: int
    checks: tuple[SeriesDegreeCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def at_degree(self, d: int) -> SeriesDegreeCheck:
        for c in self.checks:
            if c.degree == d:
                return c
        raise KeyError(d)


def check_series_divisibility(phi: PolyMap | Sequence[Poly], order: int) -> SeriesReport:
    """Degreewise divisibility check for a polynomial truncation.

    phi, given as a PolyMap or a plain sequence of coordinate polynomials, is
    treated as the truncation at the given order of a germ fixing the origin.
    Homogeneous components of <A, phi> and <phi, phi> of degree up to
    order + 1 are unaffected by the discarded tail, so each is tested for
    exact divisibility by <A, A>.
    """
    coords = list(phi.coords) if isinstance(phi, PolyMap) else list(phi)
    if not coords:
        raise ValueError("phi has no coordinates")
    m = coords[0].num_vars
    if not 1 <= order <= 4:
        raise ValueError("order must be between 1 and 4")
    if any(c.num_vars != m for c in coords):
        raise ValueError("coordinates live in different variable counts")
    if any(c.constant_term() != 0 for c in coords):
        raise ValueError("phi must fix the origin")
    truncated = [
        sum((c.homogeneous_part(d) for d in range(1, order + 1)), Poly.zero(m))
        for c in coords
    ]
    a_coords = [c.homogeneous_part(1) for c in truncated]
    rank = rank_linear(PolyMap(m, a_coords))
    if rank < 2:
        raise RankTooLow(rank)
    norm_a = sum((c * c for c in a_coords), Poly.zero(m))
    mixed = sum((u * v for u, v in zip(a_coords, truncated)), Poly.zero(m))
    square = sum((c * c for c in truncated), Poly.zero(m))
    checks = []
    for d in range(2, order + 2):
        inner_ok = divide_exact(mixed.homogeneous_part(d), norm_a) is not None
        norm_ok = divide_exact(square.homogeneous_part(d), norm_a) is not None
        checks.append(SeriesDegreeCheck(degree=d, inner_ok=inner_ok, norm_ok=norm_ok))
    return SeriesReport(order=order, checks=tuple(checks))
