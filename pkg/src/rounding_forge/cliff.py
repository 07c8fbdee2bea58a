"""Clifford generator tables, Hurwitz-Radon bounds, normed bilinear pairings,
and the quadratic Hopf maps they induce.

Generators are built, never copied from a table: left multiplications in the
Cayley-Dickson algebras give the base cases up to seven generators, one
doubling step bootstraps the eighth, and the period-8 tensor construction
extends to larger sizes. Every representation is verified against the
defining identities at construction, exactly, using a signed-permutation
encoding so the checks stay cheap even at dimension 4096.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .jets import FracQuadMap
from .polycore import Poly, PolyMap, QuadForm, as_rational, divide_exact, inner_poly
from .spheres import QuadSphereMap

KAPPA_DOMAIN_CAP = 1 << 20
MAX_GENERATORS = 24

# Minimal dimensions of representations with k anticommuting orthogonal
# complex structures, k = 0..7; beyond that the dimension multiplies by 16
# every 8 generators.
_BASE_DIMS = (1, 2, 4, 4, 8, 8, 8, 8)


class SizeInfeasible(Exception):
    def __init__(self, r: int, n: int):
        super().__init__(f"no normed pairing of size [{r}, {n}, {n}]: r exceeds rho({n}) = {rho(n)}")
        self.r = r
        self.n = n


@lru_cache(maxsize=None)
def rho(n: int) -> int:
    """Hurwitz-Radon function: write n = 2^(4a+b) * odd with 0 <= b <= 3,
    then rho(n) = 8a + 2^b."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    s = 0
    while n % 2 == 0:
        n //= 2
        s += 1
    a, b = divmod(s, 4)
    return 8 * a + (1 << b)


@lru_cache(maxsize=None)
def kappa(m: int) -> int:
    """Largest n with a nonsingular bilinear [m, n, n]-pairing.

    Computed by the recursion kappa(2^t + r) = 2^t when r < rho(2^t) and
    2^t + kappa(r) otherwise, for 0 <= r < 2^t.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if m > KAPPA_DOMAIN_CAP:
        raise ValueError(f"kappa domain is capped at {KAPPA_DOMAIN_CAP}")
    t = m.bit_length() - 1
    r = m - (1 << t)
    if r < rho(1 << t):
        return 1 << t
    return (1 << t) + kappa(r)


@dataclass(frozen=True)
class _SignedPerm:
    """Matrix with exactly one entry +-1 per column: column j holds
    signs[j] at row perm[j]. Closed under product, transpose, Kronecker."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.perm)

    @staticmethod
    def eye(n: int) -> "_SignedPerm":
        return _SignedPerm(tuple(range(n)), (1,) * n)

    def __matmul__(self, other: "_SignedPerm") -> "_SignedPerm":
        return _SignedPerm(
            tuple(self.perm[p] for p in other.perm),
            tuple(self.signs[other.perm[j]] * other.signs[j] for j in range(other.dim)),
        )

    def transpose(self) -> "_SignedPerm":
        perm = [0] * self.dim
        signs = [1] * self.dim
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = j
            signs[p] = s
        return _SignedPerm(tuple(perm), tuple(signs))

    def neg(self) -> "_SignedPerm":
        return _SignedPerm(self.perm, tuple(-s for s in self.signs))

    def kron(self, other: "_SignedPerm") -> "_SignedPerm":
        d = other.dim
        perm = []
        signs = []
        for j1 in range(self.dim):
            for j2 in range(d):
                perm.append(self.perm[j1] * d + other.perm[j2])
                signs.append(self.signs[j1] * other.signs[j2])
        return _SignedPerm(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self == _SignedPerm.eye(self.dim)

    def is_neg_identity(self) -> bool:
        return self.neg().is_identity()

    def anticommutes(self, other: "_SignedPerm") -> bool:
        return (self @ other) == (other @ self).neg()

    def dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.int8)
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            out[p, j] = s
        return out


@lru_cache(maxsize=None)
def _cayley_dickson_table(dim: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Basis multiplication table of the dim-dimensional Cayley-Dickson
    algebra: entry [i][j] is (index, sign) with e_i * e_j = sign * e_index."""
    if dim == 1:
        return (((0, 1),),)
    half = dim // 2
    sub = _cayley_dickson_table(half)

    def conj_sign(j: int) -> int:
        return 1 if j == 0 else -1

    table = [[(0, 0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if i < half and j < half:
                idx, sg = sub[i][j]
                table[i][j] = (idx, sg)
            elif i < half and j >= half:
                # (a, 0)(0, d) = (0, d a)
                idx, sg = sub[j - half][i]
                table[i][j] = (half + idx, sg)
            elif i >= half and j < half:
                # (0, b)(c, 0) = (0, b conj(c))
                idx, sg = sub[i - half][j]
                table[i][j] = (half + idx, sg * conj_sign(j))
            else:
                # (0, b)(0, d) = (-conj(d) b, 0)
                idx, sg = sub[j - half][i - half]
                table[i][j] = (idx, -sg * conj_sign(j - half))
    return tuple(tuple(row) for row in table)


def _left_multiplication(dim: int, i: int) -> _SignedPerm:
    table = _cayley_dickson_table(dim)
    perm = [0] * dim
    signs = [0] * dim
    for j in range(dim):
        idx, sg = table[i][j]
        perm[j] = idx
        signs[j] = sg
    return _SignedPerm(tuple(perm), tuple(signs))


def _double(gens: Sequence[_SignedPerm], dim: int) -> list[_SignedPerm]:
    """One extra anticommuting structure on twice the dimension.

    Existing generators act as diag(E, -E); the new one swaps the halves
    with a sign twist.
    """
    out = []
    for g in gens:
        perm = list(g.perm) + [dim + p for p in g.perm]
        signs = list(g.signs) + [-s for s in g.signs]
        out.append(_SignedPerm(tuple(perm), tuple(signs)))
    swap_perm = [dim + j for j in range(dim)] + list(range(dim))
    swap_signs = [1] * dim + [-1] * dim
    out.append(_SignedPerm(tuple(swap_perm), tuple(swap_signs)))
    return out


@lru_cache(maxsize=None)
def _generator_perms(k: int) -> tuple[_SignedPerm, ...]:
    if k <= 7:
        dim = _BASE_DIMS[k]
        return tuple(_left_multiplication(dim, i) for i in range(1, k + 1))
    if k == 8:
        return tuple(_double(_generator_perms(7), 8))
    eight = _generator_perms(8)
    volume = eight[0]
    for g in eight[1:]:
        volume = volume @ g
    assert (volume @ volume).is_identity(), "volume element does not square to +1"
    sub = _generator_perms(k - 8)
    sub_dim = sub[0].dim if sub else 1
    eye = _SignedPerm.eye(sub_dim)
    out = [eye.kron(g) for g in eight]
    out.extend(f.kron(volume) for f in sub)
    return tuple(out)


class CliffordRep:
    """k anticommuting orthogonal complex structures on R^dim.

    generators materializes the dense signed-permutation matrices (dtype
    int8); the defining identities were already checked exactly on the
    compact encoding when the representation was built.
    """

    def __init__(self, k: int, perms: tuple[_SignedPerm, ...]):
        self.k = k
        self.dim = perms[0].dim if perms else 1
        self._perms = perms
        self._verify()
        self._dense: tuple[np.ndarray, ...] | None = None

    def _verify(self) -> None:
        for i, g in enumerate(self._perms):
            if sorted(g.perm) != list(range(self.dim)):
                raise AssertionError(f"generator {i} is not a permutation")
            if not (g @ g).is_neg_identity():
                raise AssertionError(f"generator {i} does not square to -identity")
            if not (g.transpose() @ g).is_identity():
                raise AssertionError(f"generator {i} is not orthogonal")
            for j in range(i):
                if not g.anticommutes(self._perms[j]):
                    raise AssertionError(f"generators {i} and {j} do not anticommute")

    @property
    def generators(self) -> tuple[np.ndarray, ...]:
        if self._dense is None:
            self._dense = tuple(g.dense() for g in self._perms)
        return self._dense

    def __repr__(self):
        return f"CliffordRep(k={self.k}, dim={self.dim})"


def clifford_generators(k: int) -> CliffordRep:
    """A minimal-dimension system of k generators, verified at construction."""
    if not 0 <= k <= MAX_GENERATORS:
        raise ValueError(f"k must lie in [0, {MAX_GENERATORS}]")
    return CliffordRep(k, _generator_perms(k))


@dataclass(frozen=True)
class NormedPairing:
    """Bilinear f: R^left x R^right -> R^target with |f(x, y)| = |x| |y|.

    tensor[i][j][c] is the coefficient of x_i y_j in coordinate c.
    """

    left_dim: int
    right_dim: int
    target_dim: int
    tensor: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def as_polymap(self) -> PolyMap:
        m = self.left_dim + self.right_dim
        coords = []
        for c in range(self.target_dim):
            terms = {}
            for i in range(self.left_dim):
                for j in range(self.right_dim):
                    coeff = self.tensor[i][j][c]
                    if coeff:
                        e = [0] * m
                        e[i] += 1
                        e[self.left_dim + j] += 1
                        terms[tuple(e)] = coeff
            coords.append(Poly(m, terms))
        return PolyMap(m, coords)

    def __call__(self, x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
        xs = [as_rational(v) for v in x]
        ys = [as_rational(v) for v in y]
        if len(xs) != self.left_dim or len(ys) != self.right_dim:
            raise ValueError("argument dimensions mismatch")
        out = []
        for c in range(self.target_dim):
            out.append(
                sum(
                    self.tensor[i][j][c] * xs[i] * ys[j]
                    for i in range(self.left_dim)
                    for j in range(self.right_dim)
                )
            )
        return tuple(out)

    @staticmethod
    def checked(left_dim: int, right_dim: int, target_dim: int, tensor) -> "NormedPairing":
        """Validate the norm identity |f(x,y)|^2 = |x|^2 |y|^2 exactly."""
        tensor = tuple(
            tuple(tuple(as_rational(c) for c in row) for row in slab) for slab in tensor
        )
        pairing = NormedPairing(left_dim, right_dim, target_dim, tensor)
        f = pairing.as_polymap()
        m = left_dim + right_dim
        xx = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(left_dim)})
        yy = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(left_dim, m)})
        if inner_poly(f, f) != xx * yy:
            raise ValueError("tensor does not satisfy the norm identity")
        return pairing


def normed_pairing(r: int, n: int) -> NormedPairing:
    """The block-diagonal Clifford pairing of size [r, n, n].

    Feasible exactly when r <= rho(n); the first slot acts as
    x_0 * identity plus x_i times the i-th generator on each block.
    """
    if r < 1 or n < 1:
        raise ValueError("sizes must be positive")
    if r > rho(n):
        raise SizeInfeasible(r, n)
    rep = clifford_generators(r - 1)
    d = rep.dim
    if n % d:
        raise AssertionError(f"rho admitted r={r} but block size {d} does not divide n={n}")
    tensor = [[[Fraction(0)] * n for _ in range(n)] for _ in range(r)]
    for j in range(n):
        tensor[0][j][j] = Fraction(1)
    for i in range(1, r):
        gen = rep._perms[i - 1]
        for block in range(n // d):
            off = block * d
            for col in range(d):
                tensor[i][off + col][off + gen.perm[col]] = Fraction(gen.signs[col])
    return NormedPairing.checked(r, n, n, tuple(tuple(tuple(row) for row in slab) for slab in tensor))


def stiefel_hopf_feasible(r: int, s: int, n: int) -> tuple[bool, list[int]]:
    """Necessary parity condition for a nonsingular [r, s, n]-pairing.

    Every binomial C(n, k) with n - r < k < s must be even; the returned
    violations list the odd ones (Lucas: C(n, k) is odd iff k AND n == k).
    """
    if r < 1 or s < 1 or n < 1:
        raise ValueError("sizes must be positive")
    lo = max(n - r + 1, 0)
    hi = min(s, n + 1)
    violations = [k for k in range(lo, hi) if (k & n) == k]
    return (not violations, violations)


def hopf_map(pairing: NormedPairing) -> QuadSphereMap:
    """The quadratic sphere-to-sphere map (2 f(x, y), |x|^2 - |y|^2)."""
    f = pairing.as_polymap()
    m = pairing.left_dim + pairing.right_dim
    xx = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(pairing.left_dim)})
    yy = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(pairing.left_dim, m)})
    coords = [2 * c for c in f.coords]
    coords.append(xx - yy)
    return QuadSphereMap.checked(PolyMap(m, coords), QuadForm.identity_form(m))


def pairing_to_rounding(pairing: NormedPairing) -> FracQuadMap:
    """View a normed pairing as the fractional map f(x, y) / |x|^2.

    The denominator vanishes at the origin, so the result is a global
    line-rounder rather than a germ; FracQuadMap.is_germ reports False.
    """
    f = pairing.as_polymap()
    m = pairing.left_dim + pairing.right_dim
    xx = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(pairing.left_dim)})
    yy = Poly(m, {tuple(2 * (v == i) for v in range(m)): 1 for i in range(pairing.left_dim, m)})
    quotient = divide_exact(inner_poly(f, f), xx)
    assert quotient == yy, "pairing norm identity failed during conversion"
    return FracQuadMap(numer=f, denom=xx)
