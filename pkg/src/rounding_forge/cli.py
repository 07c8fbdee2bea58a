"""Command line front end and the JSON document formats.

Documents are JSON objects with a "kind" field ("jet", "fracquad", "pairing",
"spheremap"). Every exact number is a rational string like "-3/4"; floats
appear only inside numeric-oracle summaries and are rendered with 17
significant digits. Reports are emitted with sorted keys and no timestamps,
so identical inputs produce byte-identical output.

Exit codes: 0 valid / feasible, 2 mathematically invalid input or verdict,
1 operational failure (unreadable file, malformed document, bad arguments).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import circles, cliff, jets, spheres
from .polycore import Poly, PolyMap

DEFAULT_TRIALS = 100
DEFAULT_TOL = 1e-7
SEED_ENV_VAR = "ROUNDING_FORGE_SEED"


class DocumentError(Exception):
    """Malformed document; carries the JSON path of the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# scalar and polynomial serialization


def _rat_str(x: Fraction) -> str:
    return str(Fraction(x))


def _float_str(x: float) -> str:
    return format(float(x), ".17g")


def _parse_rat(value, path: str) -> Fraction:
    # JSON integers are exact; floats are not and stay rejected.
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(path, f"expected a rational string, got {type(value).__name__}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(path, f"bad rational {value!r}: {exc}") from None


def poly_to_doc(p: Poly) -> dict:
    return {
        "vars": p.num_vars,
        "terms": [[list(e), _rat_str(c)] for e, c in sorted(p.terms.items())],
    }


def poly_from_doc(doc, path: str, expect_vars: int | None = None) -> Poly:
    if not isinstance(doc, dict) or "vars" not in doc or "terms" not in doc:
        raise DocumentError(path, "expected an object with 'vars' and 'terms'")
    nv = doc["vars"]
    if not isinstance(nv, int) or nv < 0:
        raise DocumentError(f"{path}.vars", "expected a nonnegative integer")
    if expect_vars is not None and nv != expect_vars:
        raise DocumentError(f"{path}.vars", f"expected {expect_vars} variables, got {nv}")
    terms = {}
    for idx, item in enumerate(doc["terms"]):
        tpath = f"{path}.terms[{idx}]"
        if not isinstance(item, list) or len(item) != 2:
            raise DocumentError(tpath, "expected [exponents, coefficient]")
        exps, coeff = item
        if not isinstance(exps, list) or len(exps) != nv or not all(isinstance(e, int) for e in exps):
            raise DocumentError(tpath, f"expected {nv} integer exponents")
        terms[tuple(exps)] = _parse_rat(coeff, tpath)
    try:
        return Poly(nv, terms)
    except ValueError as exc:
        raise DocumentError(path, str(exc)) from None


def _matrix_from_doc(doc, path: str, rows: int, cols: int) -> list[list[Fraction]]:
    if not isinstance(doc, list) or len(doc) != rows:
        raise DocumentError(path, f"expected {rows} rows")
    out = []
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"{path}[{i}]", f"expected {cols} entries")
        out.append([_parse_rat(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return out


def _matrix_to_doc(rows) -> list[list[str]]:
    return [[_rat_str(x) for x in row] for row in rows]


# ---------------------------------------------------------------------------
# documents


@dataclass(frozen=True)
class JetDocument:
    """Parsed jet input: an n x m linear matrix and n symmetric matrices."""

    source_dim: int
    target_dim: int
    linear_rows: tuple
    quad_matrices: tuple

    def to_jet(self) -> jets.Jet2:
        return jets.jet_from_matrices(self.linear_rows, self.quad_matrices)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _expect_kind(doc, kind: str) -> None:
    if not isinstance(doc, dict):
        raise DocumentError("$", "document is not a JSON object")
    if doc.get("kind") != kind:
        raise DocumentError("$.kind", f"expected {kind!r}, got {doc.get('kind')!r}")


def _dim(doc, key: str) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or v < 1:
        raise DocumentError(f"$.{key}", "expected a positive integer")
    return v


def jet_document_from_obj(doc) -> JetDocument:
    _expect_kind(doc, "jet")
    m, n = _dim(doc, "m"), _dim(doc, "n")
    linear = _matrix_from_doc(doc.get("A"), "$.A", n, m)
    quads = doc.get("B")
    if not isinstance(quads, list) or len(quads) != n:
        raise DocumentError("$.B", f"expected {n} symmetric matrices")
    mats = []
    for i, mat in enumerate(quads):
        rows = _matrix_from_doc(mat, f"$.B[{i}]", m, m)
        for a in range(m):
            for b in range(a):
                if rows[a][b] != rows[b][a]:
                    raise DocumentError(f"$.B[{i}][{a}][{b}]", "matrix is not symmetric")
        mats.append(tuple(tuple(row) for row in rows))
    return JetDocument(
        source_dim=m,
        target_dim=n,
        linear_rows=tuple(tuple(row) for row in linear),
        quad_matrices=tuple(mats),
    )


def jet_to_doc(jet: jets.Jet2) -> dict:
    return {
        "kind": "jet",
        "m": jet.source_dim,
        "n": jet.target_dim,
        "A": _matrix_to_doc(jet.linear.linear_matrix()),
        "B": [_matrix_to_doc(f.matrix) for f in jet.quad.quadratic_forms()],
    }


def fracquad_to_doc(fq: jets.FracQuadMap) -> dict:
    return {
        "kind": "fracquad",
        "m": fq.source_dim,
        "n": fq.target_dim,
        "F": [poly_to_doc(c) for c in fq.numer.coords],
        "Q": poly_to_doc(fq.denom),
    }


def fracquad_from_obj(doc) -> jets.FracQuadMap:
    _expect_kind(doc, "fracquad")
    m, n = _dim(doc, "m"), _dim(doc, "n")
    coords_doc = doc.get("F")
    if not isinstance(coords_doc, list) or len(coords_doc) != n:
        raise DocumentError("$.F", f"expected {n} coordinate polynomials")
    coords = [poly_from_doc(c, f"$.F[{i}]", m) for i, c in enumerate(coords_doc)]
    denom = poly_from_doc(doc.get("Q"), "$.Q", m)
    try:
        return jets.FracQuadMap(numer=PolyMap(m, coords), denom=denom)
    except ValueError as exc:
        raise DocumentError("$", str(exc)) from None


def pairing_to_doc(p: cliff.NormedPairing) -> dict:
    return {
        "kind": "pairing",
        "r": p.left_dim,
        "s": p.right_dim,
        "n": p.target_dim,
        "tensor": [
            [[_rat_str(c) for c in row] for row in slab] for slab in p.tensor
        ],
    }


def pairing_from_obj(doc) -> cliff.NormedPairing:
    _expect_kind(doc, "pairing")
    r, s, n = _dim(doc, "r"), _dim(doc, "s"), _dim(doc, "n")
    tensor_doc = doc.get("tensor")
    if not isinstance(tensor_doc, list) or len(tensor_doc) != r:
        raise DocumentError("$.tensor", f"expected {r} slabs")
    tensor = []
    for i, slab in enumerate(tensor_doc):
        tensor.append(_matrix_from_doc(slab, f"$.tensor[{i}]", s, n))
    # a structurally sound tensor that fails the norm identity is a
    # mathematical rejection, not a parse error; let ValueError escape
    return cliff.NormedPairing.checked(r, s, n, tensor)


def spheremap_to_doc(sm: spheres.QuadSphereMap) -> dict:
    return {
        "kind": "spheremap",
        "m": sm.source_dim,
        "n": sm.target_dim,
        "f": [poly_to_doc(c) for c in sm.f.coords],
        "G": _matrix_to_doc(sm.gram.matrix),
        "L": _matrix_to_doc(sm.lower),
        "D": [_rat_str(d) for d in sm.diag],
    }


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    numeric: dict | None = None
    exit_status: int = 0

    def to_json(self) -> str:
        body = {
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "numeric": self.numeric,
            "exit_status": self.exit_status,
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"


def _digest(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DocumentError(path, f"cannot read: {exc}") from None
    return {"sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}


def _numeric_doc(rep: circles.NumericReport) -> dict:
    return {
        "trials": rep.trials,
        "seed": rep.seed,
        "tol": _float_str(rep.tol),
        "points_per_line": rep.points_per_line,
        "max_residual": _float_str(rep.max_residual),
        "violations": list(rep.violations),
        "skipped": list(rep.skipped),
        "ok": rep.ok,
    }


def _witness_vector(witness) -> list[str]:
    if witness is None:
        return []
    if all(isinstance(x, Fraction) for x in witness):
        return [_rat_str(x) for x in witness]
    return [_float_str(float(x)) for x in witness]


def _load_jet(path: str, report: Report, role: str = "jet"):
    report.inputs[role] = _digest(path)
    doc = jet_document_from_obj(_load_json(path))
    try:
        return jets.validate_jet(doc.to_jet())
    except jets.RankTooLow as exc:
        report.verdicts["valid"] = False
        report.verdicts["reason"] = "rank-too-low"
        report.witnesses["rank"] = exc.rank
        report.exit_status = 2
        return None
    except jets.NotDivisible as exc:
        report.verdicts["valid"] = False
        report.verdicts["reason"] = "not-divisible"
        report.witnesses["failed_product"] = exc.which
        report.witnesses["remainder"] = poly_to_doc(exc.remainder)
        report.exit_status = 2
        return None


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> Report:
    report = Report(command="check")
    rj = _load_jet(args.jet, report)
    if rj is None:
        return report
    degenerate, witness = jets.is_degenerate(rj)
    report.verdicts.update(valid=True, rank=rj.rank, degenerate=degenerate)
    report.witnesses["p"] = poly_to_doc(rj.p)
    report.witnesses["q"] = poly_to_doc(rj.q)
    if witness is not None:
        report.witnesses["degeneracy_witness"] = _witness_vector(witness)
    return report


def cmd_canon(args) -> Report:
    report = Report(command="canon")
    rj = _load_jet(args.jet, report)
    if rj is None:
        return report
    fq = jets.canonical_rounding(rj)
    degenerate, _ = jets.is_degenerate(rj)
    report.verdicts.update(valid=True, rank=rj.rank, degenerate=degenerate)
    report.witnesses["p"] = poly_to_doc(rj.p)
    report.witnesses["q"] = poly_to_doc(rj.q)
    doc = fracquad_to_doc(fq)
    report.witnesses["document"] = doc
    if args.out:
        _write_doc(args.out, doc)
    if args.verify:
        rep = circles.verify_rounding_numeric(fq, trials=args.trials, seed=args.seed, tol=args.tol)
        report.numeric = _numeric_doc(rep)
    return report


def cmd_degen(args) -> Report:
    report = Report(command="degen")
    rj = _load_jet(args.jet, report)
    if rj is None:
        return report
    degenerate, witness = jets.is_degenerate(rj)
    report.verdicts.update(valid=True, degenerate=degenerate)
    if witness is not None:
        report.witnesses["degeneracy_witness"] = _witness_vector(witness)
    return report


def cmd_factor(args) -> Report:
    report = Report(command="factor")
    rj = _load_jet(args.jet, report)
    if rj is None:
        return report
    try:
        proj, reduced = jets.factor_degenerate(rj)
    except jets.NotDegenerate:
        report.verdicts.update(valid=True, degenerate=False, factored=False)
        report.verdicts["reason"] = "not-degenerate"
        report.exit_status = 2
        return report
    except jets.IrrationalKernelWitness:
        report.verdicts.update(valid=True, degenerate=True, factored=False)
        report.verdicts["reason"] = "irrational-kernel-witness"
        report.exit_status = 2
        return report
    report.verdicts.update(valid=True, degenerate=True, factored=True)
    report.verdicts["reduced_source_dim"] = reduced.source_dim
    report.witnesses["projection"] = _matrix_to_doc(proj)
    doc = jet_to_doc(reduced.jet)
    report.witnesses["document"] = doc
    if args.out:
        _write_doc(args.out, doc)
    return report


def cmd_equiv(args) -> Report:
    report = Report(command="equiv")
    rj1 = _load_jet(args.jet1, report, role="jet1")
    if rj1 is None:
        return report
    rj2 = _load_jet(args.jet2, report, role="jet2")
    if rj2 is None:
        return report
    result = jets.jets_equivalent(rj1.jet, rj2.jet)
    if result is None:
        report.verdicts.update(valid=True, equivalent=False)
        return report
    lam, ell = result
    report.verdicts.update(valid=True, equivalent=True)
    report.witnesses["lam"] = _rat_str(lam)
    report.witnesses["ell"] = poly_to_doc(ell)
    return report


def cmd_sphere(args) -> Report:
    report = Report(command="sphere")
    rj = _load_jet(args.jet, report)
    if rj is None:
        return report
    try:
        sm = spheres.sphere_lift(rj)
    except spheres.Degenerate as exc:
        report.verdicts.update(valid=True, lifted=False)
        report.verdicts["reason"] = "degenerate"
        report.witnesses["gram_signature"] = list(exc.signature)
        report.exit_status = 2
        return report
    report.verdicts.update(valid=True, lifted=True)
    report.verdicts["gram_signature"] = [sm.source_dim, 0, 0]
    doc = spheremap_to_doc(sm)
    report.witnesses["document"] = doc
    if args.out:
        _write_doc(args.out, doc)
    return report


def cmd_pairing(args) -> Report:
    report = Report(command="pairing", inputs={"params": {"r": args.r, "n": args.n}})
    try:
        pairing = cliff.normed_pairing(args.r, args.n)
    except cliff.SizeInfeasible:
        report.verdicts.update(feasible=False)
        report.witnesses["rho"] = cliff.rho(args.n)
        report.exit_status = 2
        return report
    report.verdicts.update(feasible=True)
    report.witnesses["rho"] = cliff.rho(args.n)
    doc = pairing_to_doc(pairing)
    report.witnesses["document"] = doc
    if args.out:
        _write_doc(args.out, doc)
    return report


def cmd_hopf(args) -> Report:
    report = Report(command="hopf")
    if args.pairing:
        report.inputs["pairing"] = _digest(args.pairing)
        try:
            pairing = pairing_from_obj(_load_json(args.pairing))
        except ValueError as exc:
            report.verdicts.update(valid_pairing=False)
            report.verdicts["reason"] = str(exc)
            report.exit_status = 2
            return report
    else:
        r, n = args.size
        report.inputs["params"] = {"r": r, "n": n}
        try:
            pairing = cliff.normed_pairing(r, n)
        except cliff.SizeInfeasible:
            report.verdicts.update(feasible=False)
            report.witnesses["rho"] = cliff.rho(n)
            report.exit_status = 2
            return report
    sm = cliff.hopf_map(pairing)
    report.verdicts.update(feasible=True, source_dim=sm.source_dim, target_dim=sm.target_dim)
    doc = spheremap_to_doc(sm)
    report.witnesses["document"] = doc
    if args.out:
        _write_doc(args.out, doc)
    return report


def cmd_verify(args) -> Report:
    report = Report(command="verify")
    report.inputs["map"] = _digest(args.map)
    fq = fracquad_from_obj(_load_json(args.map))
    rep = circles.verify_rounding_numeric(fq, trials=args.trials, seed=args.seed, tol=args.tol)
    report.numeric = _numeric_doc(rep)
    report.verdicts["ok"] = rep.ok
    if not rep.ok:
        report.exit_status = 2
    return report


def cmd_tables(args) -> Report:
    report = Report(command="tables")
    lines: list[str] = []
    if args.rho is not None:
        report.inputs["params"] = {"rho_up_to": args.rho}
        values = {str(n): cliff.rho(n) for n in range(1, args.rho + 1)}
        report.verdicts["rho"] = values
        lines.append(f"{'n':>6}  {'rho(n)':>6}")
        lines.extend(f"{n:>6}  {cliff.rho(n):>6}" for n in range(1, args.rho + 1))
    elif args.kappa is not None:
        report.inputs["params"] = {"kappa_up_to": args.kappa}
        values = {str(m): cliff.kappa(m) for m in range(1, args.kappa + 1)}
        report.verdicts["kappa"] = values
        lines.append(f"{'m':>6}  {'kappa(m)':>8}")
        lines.extend(f"{m:>6}  {cliff.kappa(m):>8}" for m in range(1, args.kappa + 1))
    else:
        r, s, n = args.stiefel
        report.inputs["params"] = {"r": r, "s": s, "n": n}
        feasible, violations = cliff.stiefel_hopf_feasible(r, s, n)
        report.verdicts["feasible"] = feasible
        report.witnesses["odd_binomials"] = violations
        verdict = "feasible" if feasible else "infeasible"
        lines.append(f"[{r}, {s}, {n}]: {verdict}")
        if violations:
            lines.append("odd binomials at k = " + ", ".join(str(k) for k in violations))
        if not feasible:
            report.exit_status = 2
    report.witnesses.setdefault("table", lines)
    return report


def _write_doc(path: str, doc: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise DocumentError(path, f"cannot write: {exc}") from None


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise DocumentError("arguments", message)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise DocumentError(SEED_ENV_VAR, f"not an integer seed: {raw!r}") from None


def _add_numeric_flags(sub) -> None:
    sub.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--tol", type=float, default=DEFAULT_TOL)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rounding-forge", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="validate a jet and report degeneracy")
    p.add_argument("jet")
    p.set_defaults(handler=cmd_check)

    p = subs.add_parser("canon", help="emit the canonical fractional-quadratic map")
    p.add_argument("jet")
    p.add_argument("--out")
    p.add_argument("--verify", action="store_true")
    _add_numeric_flags(p)
    p.set_defaults(handler=cmd_canon)

    p = subs.add_parser("degen", help="degeneracy verdict and witness")
    p.add_argument("jet")
    p.set_defaults(handler=cmd_degen)

    p = subs.add_parser("factor", help="factor a degenerate jet through a projection")
    p.add_argument("jet")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_factor)

    p = subs.add_parser("equiv", help="decide jet equivalence and return (lam, ell)")
    p.add_argument("jet1")
    p.add_argument("jet2")
    p.set_defaults(handler=cmd_equiv)

    p = subs.add_parser("sphere", help="lift a nondegenerate jet to a sphere map")
    p.add_argument("jet")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_sphere)

    p = subs.add_parser("pairing", help="construct a normed pairing [r, n, n]")
    p.add_argument("r", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_pairing)

    p = subs.add_parser("hopf", help="Hopf sphere map of a pairing")
    p.add_argument("pairing", nargs="?")
    p.add_argument("--size", nargs=2, type=int, metavar=("R", "N"))
    p.add_argument("--out")
    p.set_defaults(handler=cmd_hopf)

    p = subs.add_parser("tables", help="rho / kappa tables and parity verdicts")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rho", type=int, metavar="N")
    group.add_argument("--kappa", type=int, metavar="M")
    group.add_argument("--stiefel", nargs=3, type=int, metavar=("R", "S", "N"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_tables)

    p = subs.add_parser("verify", help="numeric line-to-circle check of a map document")
    p.add_argument("map")
    _add_numeric_flags(p)
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _default_seed()
        if args.command == "hopf" and not args.pairing and not args.size:
            raise DocumentError("arguments", "hopf needs a pairing file or --size R N")
        report = args.handler(args)
    except DocumentError as exc:
        print(f"rounding-forge: error: {exc}", file=sys.stderr)
        return 1
    if args.command == "tables" and not args.json:
        for line in report.witnesses.get("table", []):
            print(line)
        return report.exit_status
    sys.stdout.write(report.to_json())
    return report.exit_status


def entrypoint() -> None:
    raise SystemExit(main())
