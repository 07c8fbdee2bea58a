"""Exact rational polynomial layer: scalars, low-degree multivariate
polynomials, quadratic forms, polynomial maps, and the four exact operations
everything else is built on (inner products, exact division, linear rank,
form signatures).

Degrees are capped at 4 because the largest object anywhere in the toolkit is
a squared norm of a quadratic map. The cap is enforced at construction so a
degree blow-up fails loudly at its source.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import _linalg

Rational = Fraction
# The quartic norm identities need degree 4; squared norms of order-4 series
# truncations reach degree 8. Anything past that is a bug.
MAX_DEGREE = 8

Exponents = tuple[int, ...]


def as_rational(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions; reject floats."""
    if isinstance(x, float):
        raise TypeError("refusing to coerce a float into the exact layer")
    return Fraction(x)


def _grlex_key(exps: Exponents) -> tuple[int, Exponents]:
    # Graded lexicographic with x1 < x2 < ... : compare total degree, then
    # exponents of the later variables first.
    return (sum(exps), tuple(reversed(exps)))


class Poly:
    """Polynomial with Fraction coefficients in variables x1..xm.

    Terms are kept in a dict from exponent tuple to nonzero coefficient, so
    structural equality is dict equality. Instances are immutable by
    convention; no method mutates self.
    """

    __slots__ = ("num_vars", "terms")

    def __init__(self, num_vars: int, terms: Mapping[Exponents, object] | None = None):
        if num_vars < 0:
            raise ValueError("num_vars must be nonnegative")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for {num_vars} variables")
            if sum(exps) > MAX_DEGREE:
                raise ValueError(f"total degree {sum(exps)} exceeds cap {MAX_DEGREE}")
            c = as_rational(coeff)
            if c != 0:
                clean[exps] = c
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # ---- constructors -------------------------------------------------

    @staticmethod
    def zero(num_vars: int) -> "Poly":
        return Poly(num_vars, {})

    @staticmethod
    def constant(num_vars: int, c) -> "Poly":
        return Poly(num_vars, {(0,) * num_vars: c})

    @staticmethod
    def variable(num_vars: int, i: int) -> "Poly":
        """The coordinate polynomial x_{i+1} (index is 0-based)."""
        if not 0 <= i < num_vars:
            raise ValueError("variable index out of range")
        exps = tuple(int(j == i) for j in range(num_vars))
        return Poly(num_vars, {exps: 1})

    @staticmethod
    def linear(coeffs: Sequence) -> "Poly":
        """Homogeneous linear polynomial with the given coefficient vector."""
        n = len(coeffs)
        return Poly(n, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    # ---- queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.num_vars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.num_vars, Fraction(0))

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # ---- arithmetic ----------------------------------------------------

    def _check_same_space(self, other: "Poly") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError("polynomials live in different variable spaces")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.num_vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_same_space(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.num_vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_rational(other)
            return Poly(self.num_vars, {e: c * v for e, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_same_space(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.num_vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.constant(self.num_vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # ---- evaluation and substitution ------------------------------------

    def __call__(self, point: Sequence) -> Fraction:
        vals = [as_rational(x) for x in point]
        if len(vals) != self.num_vars:
            raise ValueError("point dimension mismatch")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return total

    def eval_float(self, point: Sequence[float]) -> float:
        if len(point) != self.num_vars:
            raise ValueError("point dimension mismatch")
        total = 0.0
        for e, c in self.terms.items():
            term = float(c)
            for v, k in zip(point, e):
                if k:
                    term *= float(v) ** k
            total += term
        return total

    def substitute(self, args: Sequence["Poly"]) -> "Poly":
        """Evaluate at polynomial arguments, one per variable."""
        if len(args) != self.num_vars:
            raise ValueError("need one argument polynomial per variable")
        if args:
            space = args[0].num_vars
            if any(a.num_vars != space for a in args):
                raise ValueError("argument polynomials live in different spaces")
        else:
            space = 0
        total = Poly.zero(space)
        for e, c in self.terms.items():
            term = Poly.constant(space, c)
            for a, k in zip(args, e):
                for _ in range(k):
                    term = term * a
            total = total + term
        return total

    def compose_linear(self, rows: Sequence[Sequence]) -> "Poly":
        """Substitute x_i by the i-th linear form of the given matrix rows."""
        if len(rows) != self.num_vars:
            raise ValueError("need one row per variable")
        return self.substitute([Poly.linear([as_rational(x) for x in r]) for r in rows])

    def homogenize(self, total: int) -> "Poly":
        """Pad with a trailing variable so every term reaches the given degree."""
        if total < self.degree():
            raise ValueError("target degree below actual degree")
        out = {}
        for e, c in self.terms.items():
            out[e + (total - sum(e),)] = c
        return Poly(self.num_vars + 1, out)

    # ---- dunderware ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.num_vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.num_vars}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                bits.append(f"{c}")
            elif c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        out = " + ".join(bits)
        return out.replace("+ -", "- ")


def poly_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Multivariate division of f by the single divisor g.

    Uses graded lexicographic order with x1 < x2 < ... . A single divisor is
    its own Groebner basis, so the remainder vanishes exactly when g divides
    f as a polynomial.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f._check_same_space(g)
    glead, gcoeff = g.leading()
    work = dict(f.terms)
    quot: dict[Exponents, Fraction] = {}
    rem: dict[Exponents, Fraction] = {}
    while work:
        le = max(work, key=_grlex_key)
        lc = work[le]
        diff = tuple(a - b for a, b in zip(le, glead))
        if all(d >= 0 for d in diff):
            c = lc / gcoeff
            quot[diff] = quot.get(diff, Fraction(0)) + c
            for ge, gc in g.terms.items():
                key = tuple(a + b for a, b in zip(diff, ge))
                v = work.get(key, Fraction(0)) - c * gc
                if v:
                    work[key] = v
                else:
                    work.pop(key, None)
        else:
            rem[le] = lc
            del work[le]
    return Poly(f.num_vars, quot), Poly(f.num_vars, rem)


def divide_exact(f: Poly, g: Poly) -> Poly | None:
    """The polynomial h with f = g*h, or None when no such h exists."""
    q, r = poly_divmod(f, g)
    return q if r.is_zero() else None


@dataclass(frozen=True)
class QuadForm:
    """Homogeneous quadratic form given by its symmetric rational matrix."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.matrix)
        rows = tuple(tuple(as_rational(x) for x in row) for row in self.matrix)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix not square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("matrix not symmetric")
        object.__setattr__(self, "matrix", rows)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @staticmethod
    def from_poly(p: Poly) -> "QuadForm":
        if not p.is_homogeneous(2):
            raise ValueError("not a homogeneous quadratic")
        n = p.num_vars
        m = [[Fraction(0)] * n for _ in range(n)]
        for e, c in p.terms.items():
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                m[i][i] = c
            else:
                m[i][j] = m[j][i] = c / 2
        return QuadForm(tuple(tuple(row) for row in m))

    @staticmethod
    def zero(n: int) -> "QuadForm":
        return QuadForm(tuple((Fraction(0),) * n for _ in range(n)))

    @staticmethod
    def identity_form(n: int) -> "QuadForm":
        return QuadForm(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def to_poly(self) -> Poly:
        n = self.dim
        terms: dict[Exponents, Fraction] = {}
        for i in range(n):
            for j in range(i, n):
                c = self.matrix[i][j] if i == j else 2 * self.matrix[i][j]
                if c:
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = c
        return Poly(n, terms)

    def __call__(self, point: Sequence) -> Fraction:
        v = [as_rational(x) for x in point]
        if len(v) != self.dim:
            raise ValueError("point dimension mismatch")
        return sum(v[i] * sum(self.matrix[i][j] * v[j] for j in range(self.dim)) for i in range(self.dim))

    def __add__(self, other: "QuadForm") -> "QuadForm":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return QuadForm(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)))

    def __sub__(self, other: "QuadForm") -> "QuadForm":
        return self + (-other)

    def __neg__(self) -> "QuadForm":
        return QuadForm(tuple(tuple(-x for x in row) for row in self.matrix))

    def scaled(self, c) -> "QuadForm":
        c = as_rational(c)
        return QuadForm(tuple(tuple(c * x for x in row) for row in self.matrix))

    def restricted(self, basis: Sequence[Sequence]) -> "QuadForm":
        """Pull the form back along the subspace spanned by the given vectors."""
        cols = [[as_rational(x) for x in v] for v in basis]
        k = _linalg.matmul([list(r) for r in self.matrix], _linalg.transpose(cols))
        inner = _linalg.matmul(cols, k)
        return QuadForm(tuple(tuple(row) for row in inner))


class PolyMap:
    """Finite tuple of polynomials sharing a source space, degree at most 2.

    This is the shape of every map in the toolkit: linear parts, quadratic
    parts, numerators of fractional-quadratic maps, sphere maps.
    """

    __slots__ = ("source_dim", "target_dim", "coords")

    def __init__(self, source_dim: int, coords: Sequence[Poly]):
        coords = tuple(coords)
        for c in coords:
            if c.num_vars != source_dim:
                raise ValueError("coordinate has wrong number of variables")
            if c.degree() > 2:
                raise ValueError("polynomial map coordinates are capped at degree 2")
        object.__setattr__(self, "source_dim", source_dim)
        object.__setattr__(self, "target_dim", len(coords))
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMap is immutable")

    # ---- constructors ----------------------------------------------------

    @staticmethod
    def from_linear_matrix(rows: Sequence[Sequence]) -> "PolyMap":
        """Map x -> Mx for an n x m coefficient matrix."""
        m = len(rows[0]) if rows else 0
        return PolyMap(m, [Poly.linear([as_rational(x) for x in row]) for row in rows])

    @staticmethod
    def from_quadratic_forms(forms: Sequence[QuadForm]) -> "PolyMap":
        if not forms:
            raise ValueError("need at least one form")
        return PolyMap(forms[0].dim, [f.to_poly() for f in forms])

    @staticmethod
    def zero(source_dim: int, target_dim: int) -> "PolyMap":
        return PolyMap(source_dim, [Poly.zero(source_dim)] * target_dim)

    @staticmethod
    def identity(n: int) -> "PolyMap":
        return PolyMap(n, [Poly.variable(n, i) for i in range(n)])

    # ---- structure -------------------------------------------------------

    def homogeneous_part(self, d: int) -> "PolyMap":
        return PolyMap(self.source_dim, [c.homogeneous_part(d) for c in self.coords])

    def degree(self) -> int:
        return max((c.degree() for c in self.coords), default=-1)

    def is_linear(self) -> bool:
        return all(c.is_zero() or c.is_homogeneous(1) for c in self.coords)

    def linear_matrix(self) -> list[list[Fraction]]:
        """Coefficient matrix of a homogeneous linear map, rows = coordinates."""
        if not self.is_linear():
            raise ValueError("map is not homogeneous linear")
        rows = []
        for c in self.coords:
            row = [Fraction(0)] * self.source_dim
            for e, coeff in c.terms.items():
                row[e.index(1)] = coeff
            rows.append(row)
        return rows

    def quadratic_forms(self) -> list[QuadForm]:
        return [QuadForm.from_poly(c) for c in self.coords]

    # ---- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "PolyMap") -> None:
        if self.source_dim != other.source_dim or self.target_dim != other.target_dim:
            raise ValueError("maps have different shapes")

    def __add__(self, other: "PolyMap") -> "PolyMap":
        self._check_compatible(other)
        return PolyMap(self.source_dim, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "PolyMap") -> "PolyMap":
        self._check_compatible(other)
        return PolyMap(self.source_dim, [a - b for a, b in zip(self.coords, other.coords)])

    def scaled(self, c) -> "PolyMap":
        c = as_rational(c)
        return PolyMap(self.source_dim, [c * p for p in self.coords])

    def times_poly(self, p: Poly) -> "PolyMap":
        """Coordinate-wise product; the degree cap still applies."""
        return PolyMap(self.source_dim, [p * c for c in self.coords])

    def compose_linear(self, rows: Sequence[Sequence]) -> "PolyMap":
        """Precompose with the linear map given by the matrix rows."""
        if len(rows) != self.source_dim:
            raise ValueError("matrix target dimension must match the map source")
        new_dim = len(rows[0]) if rows else 0
        if any(len(r) != new_dim for r in rows):
            raise ValueError("ragged matrix")
        return PolyMap(new_dim, [c.compose_linear(rows) for c in self.coords])

    # ---- evaluation ---------------------------------------------------------

    def __call__(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(c(point) for c in self.coords)

    def eval_float(self, point: Sequence[float]) -> list[float]:
        return [c.eval_float(point) for c in self.coords]

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.source_dim == other.source_dim and self.coords == other.coords

    def __hash__(self):
        return hash((self.source_dim, self.coords))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coords)
        return f"PolyMap(R^{self.source_dim} -> R^{self.target_dim}; {body})"


def inner_poly(u: PolyMap, v: PolyMap) -> Poly:
    """Pointwise Euclidean inner product <U, V> as a polynomial."""
    if u.source_dim != v.source_dim or u.target_dim != v.target_dim:
        raise ValueError("maps have different shapes")
    total = Poly.zero(u.source_dim)
    for a, b in zip(u.coords, v.coords):
        total = total + a * b
    return total


def rank_linear(a: PolyMap) -> int:
    """Exact rank of a homogeneous linear map over the rationals."""
    return _linalg.exact_rank(a.linear_matrix())


def form_signature(q: QuadForm) -> tuple[int, int, int]:
    """Inertia (n_plus, n_minus, n_zero) by Lagrange congruent diagonalization."""
    return _linalg.signature_of([list(r) for r in q.matrix])
