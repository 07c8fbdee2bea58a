"""Shared fixtures: the named example jets, random valid-jet generators built
from normed pairings, and small independent oracles (plain-dict polynomial
expansion, hand-coded quaternion arithmetic) used to cross-check the package
without touching its own arithmetic."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rounding_forge import cliff
from rounding_forge.jets import Jet2, transform_jet
from rounding_forge.polycore import Poly, PolyMap

# ---------------------------------------------------------------------------
# independent expansion oracle: polynomials as plain {exponents: Fraction}
# dicts, multiplied and added with fresh code


def dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def dict_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c != 0}


def dict_inner(coords_a: list[dict], coords_b: list[dict]) -> dict:
    total: dict = {}
    for a, b in zip(coords_a, coords_b):
        total = dict_add(total, dict_mul(a, b))
    return total


def as_dict(p: Poly) -> dict:
    return dict(p.terms)


# ---------------------------------------------------------------------------
# independent quaternion arithmetic (explicit multiplication table)

_QUAT_TABLE = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def quat_mul(a, b):
    out = [0, 0, 0, 0]
    for i in range(4):
        if not a[i]:
            continue
        for j in range(4):
            if not b[j]:
                continue
            k, s = _QUAT_TABLE[(i, j)]
            out[k] += s * a[i] * b[j]
    return tuple(out)


def quat_conj(a):
    return (a[0], -a[1], -a[2], -a[3])


def quat_inv(a):
    n = sum(x * x for x in a)
    c = quat_conj(a)
    return tuple(x / n for x in c)


# ---------------------------------------------------------------------------
# named example jets


def complex_square_jet() -> Jet2:
    """Identity plus the complex squaring map on R^2."""
    lin = PolyMap.identity(2)
    quad = PolyMap(2, [Poly(2, {(2, 0): 1, (0, 2): -1}), Poly(2, {(1, 1): 2})])
    return Jet2(lin, quad)


def quaternion_jet() -> Jet2:
    """Source (x1, x2, x3, y0..y3); linear part y, quadratic part -x*y."""
    m = 7
    lin = PolyMap(m, [Poly.variable(m, 3 + i) for i in range(4)])

    def e(i, j):
        v = [0] * m
        v[i] += 1
        v[j] += 1
        return tuple(v)

    # -(x1 i + x2 j + x3 k)(y0 + y1 i + y2 j + y3 k), coordinates 1,i,j,k
    coords = [
        Poly(m, {e(0, 4): 1, e(1, 5): 1, e(2, 6): 1}),
        Poly(m, {e(0, 3): -1, e(1, 6): -1, e(2, 5): 1}),
        Poly(m, {e(1, 3): -1, e(2, 4): -1, e(0, 6): 1}),
        Poly(m, {e(2, 3): -1, e(0, 5): -1, e(1, 4): 1}),
    ]
    return Jet2(lin, PolyMap(m, coords))


def flat_degenerate_jet() -> Jet2:
    """(x1, x2, 0)-style jet on R^3 with zero quadratic part."""
    lin = PolyMap.from_linear_matrix([[1, 0, 0], [0, 1, 0]])
    return Jet2(lin, PolyMap.zero(3, 2))


# ---------------------------------------------------------------------------
# randomized valid jets via normed pairings: with Y linear onto R^n and P
# linear into R^r, the jet (Y, f(P(.), Y(.))) is valid by construction, and
# a random reparametrization scrambles it without changing validity


def rand_fraction(rng: random.Random, span: int = 3, dens=(1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(dens))


def rand_linear_rows(rng: random.Random, rows: int, cols: int) -> list[list[Fraction]]:
    return [[rand_fraction(rng) for _ in range(cols)] for _ in range(rows)]


def _admissible_r(rng: random.Random, n: int) -> int:
    choices = [r for r in range(1, cliff.rho(n) + 1)]
    return rng.choice(choices)


def random_valid_jet(rng: random.Random, m: int | None = None, n: int | None = None,
                     scramble: bool = True) -> Jet2:
    from rounding_forge.polycore import rank_linear

    n = n if n is not None else rng.randint(2, 6)
    m = m if m is not None else rng.randint(2, 6)
    while True:
        y_rows = rand_linear_rows(rng, n, m)
        y_map = PolyMap.from_linear_matrix(y_rows)
        if rank_linear(y_map) >= 2:
            break
    r = _admissible_r(rng, n)
    pairing = cliff.normed_pairing(r, n)
    p_rows = rand_linear_rows(rng, r, m)
    p_polys = [Poly.linear(row) for row in p_rows]
    y_polys = [Poly.linear(row) for row in y_rows]
    coords = []
    for c in range(n):
        total = Poly.zero(m)
        for i in range(r):
            for j in range(n):
                coeff = pairing.tensor[i][j][c]
                if coeff:
                    total = total + coeff * (p_polys[i] * y_polys[j])
        coords.append(total)
    jet = Jet2(y_map, PolyMap(m, coords))
    if scramble:
        lam = Fraction(0)
        while lam == 0:
            lam = rand_fraction(rng)
        ell = Poly.linear([rand_fraction(rng) for _ in range(m)])
        jet = transform_jet(jet, lam, ell)
    return jet


@pytest.fixture(scope="session")
def jet_pool():
    """200 randomized valid jets shared by the acceptance criteria."""
    rng = random.Random(20260814)
    return [random_valid_jet(rng) for _ in range(200)]


# ---------------------------------------------------------------------------
# acceptance criteria reporting: one line per criterion in the terminal
# summary, visible in plain `pytest -v` runs

_CRITERIA: dict[int, str] = {}
_RESULTS: dict[int, str] = {}


def register_criterion(number: int, description: str) -> None:
    _CRITERIA[number] = description


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        try:
            number = int(name.split("_")[2])
        except (IndexError, ValueError):
            return
        _RESULTS[number] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_RESULTS):
        desc = _CRITERIA.get(number, "")
        terminalreporter.write_line(f"criterion {number:>2}: {_RESULTS[number]}  {desc}")
