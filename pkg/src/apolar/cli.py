"""Command-line interface: ``apolar <subcommand> [options]``.

Exit status is 0 on success, 1 on a domain error (degenerate
determinant, missing moments, non-real or repeated nodes) and 2 on a
usage error.  Exact values are written as ``"p/q"`` strings; floats
appear only in quadrature output and carry 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .covariants import (
    BinaryForm,
    apolar_pairing,
    apolar_space_dim,
    covariant_J,
    covariant_J_det,
    form_from_moments,
    hessian,
    transvectant,
)
from .multivar import (
    MultiEntry,
    box_enumerate,
    multi_gops_det,
    multi_gops_symbolic,
    multi_ops_full,
    multi_orthogonality,
)
from .ops import DegenerateAuxWarning, GopsEntry, check_orthogonality, gops_det, gops_symbolic, leading_coefficient
from .quadrature import DEFAULT_TOL, NodesNotDistinctError, discriminant_moment, gauss_rule
from .ring import dehomogenize, parse_rational, poly_to_json, rational_to_str
from .symfun import p_alpha_k, verify_schur_monomial_identities
from .umbral import BUILTIN_NAMES, MissingMomentError, MomentFunctional, builtin_table, load_moments, product_table

__all__ = ["RunConfig", "DomainError", "emit_table", "dumps", "build_parser", "main"]

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class DomainError(Exception):
    """A mathematically invalid request (exit status 1)."""


class UsageError(Exception):
    """Malformed arguments (exit status 2)."""


@dataclass
class RunConfig:
    subcommand: str
    moments_source: str = "hermite"
    output: str | None = None
    format: str = "json"
    tol: float = DEFAULT_TOL


# -- serialization ---------------------------------------------------------


def _float(v: float) -> str:
    if math.isnan(v) or math.isinf(v):
        return json.dumps(str(v))
    return format(v, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with sorted-as-given keys and 17-digit floats."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return json.dumps(rational_to_str(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, Fraction)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _pq(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _key(k: Sequence[int]) -> str:
    return ",".join(str(c) for c in k)


def _entry_json(e: GopsEntry) -> dict:
    return {
        "n": e.n,
        "m": e.m,
        "path": e.path,
        "aux_classes": list(e.aux_classes),
        "coeffs": [rational_to_str(c) for c in e.coeffs()],
        "poly": poly_to_json(e.poly),
        "text": str(e.poly),
    }


def _multi_json(e: MultiEntry) -> dict:
    coeffs = {_key(k): rational_to_str(e.coefficient(k)) for k in box_enumerate(e.n)}
    return {
        "n": list(e.n),
        "m": None if e.m is None else list(e.m),
        "path": e.path,
        "aux": list(e.aux),
        "coeffs": coeffs,
        "poly": poly_to_json(e.poly),
        "text": str(e.poly),
    }


def emit_table(entries: Sequence, fmt: str = "json") -> str:
    """Serialize a list of univariate or multivariate entries.

    CSV columns are ``n, m`` followed by one coefficient per column in
    ``"p/q"`` form: ``c0 .. c_N`` for univariate entries, or one column
    per multi-index ``"k0,k1"`` for multivariate ones.
    """
    entries = list(entries)
    multi = any(isinstance(e, MultiEntry) for e in entries)
    if fmt == "json":
        return dumps([_multi_json(e) if multi else _entry_json(e) for e in entries]) + "\n"
    if fmt != "csv":
        raise UsageError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if multi:
        top = tuple(max(c) for c in zip(*(e.n for e in entries)))
        wanted = {tuple(k) for e in entries for k in box_enumerate(e.n)}
        keys = [tuple(k) for k in box_enumerate(top) if tuple(k) in wanted]
        writer.writerow(["n", "m"] + [_key(k) for k in keys])
        for e in entries:
            cells = [_pq(e.coefficient(k)) for k in keys]
            writer.writerow([_key(e.n), "" if e.m is None else _key(e.m)] + cells)
    else:
        width = max((e.n for e in entries), default=-1) + 1
        writer.writerow(["n", "m"] + [f"c{j}" for j in range(width)])
        for e in entries:
            cs = e.coeffs() + [Fraction(0)] * (width - e.n - 1)
            writer.writerow([e.n, e.m] + [_pq(c) for c in cs])
    return buf.getvalue()


# -- argument helpers ------------------------------------------------------


def _ints(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip() != "")
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated integers, got {text!r}") from None


def _rationals(text: str, name: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_rational(t) for t in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name} expects comma-separated rationals, got {text!r}") from None


def _load(source: str, aux: str | None = None, d: int = 0) -> MomentFunctional:
    """A builtin name, a comma-separated product of builtins, or a JSON file."""
    try:
        names = source.split(",")
        if all(nm in BUILTIN_NAMES for nm in names) and (d > 0 or len(names) > 1):
            if len(names) == 1:
                names = names * (d + 1)
            if len(names) != d + 1:
                raise UsageError(f"--moments lists {len(names)} factors but d = {d}")
            M = MomentFunctional({1: product_table(*names)}, d=d)
        else:
            M = load_moments(source)
    except OSError as exc:
        raise UsageError(f"cannot read moments: {exc}") from None
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed moment file {source!r}: {exc}") from None
    if M.d != d:
        raise UsageError(f"moment source has d = {M.d}, expected {d}")
    if aux:
        tables = {}
        for j, name in enumerate(aux.split(","), start=2):
            parts = name.split(":")
            if len(parts) > 1 and all(pt in BUILTIN_NAMES for pt in parts):
                if len(parts) != d + 1:
                    raise UsageError(f"auxiliary product {name!r} needs d + 1 = {d + 1} factors")
                tables[j] = product_table(*parts)
            elif name in BUILTIN_NAMES:
                tables[j] = builtin_table(name) if d == 0 else product_table(*[name] * (d + 1))
            else:
                try:
                    tables[j] = load_moments(name).table(1)
                except OSError as exc:
                    raise UsageError(f"cannot read auxiliary moments: {exc}") from None
        M = M.with_tables(tables)
    return M


def _tol(args) -> float:
    if args.tol is not None:
        return args.tol
    env = os.environ.get("APOLAR_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"APOLAR_TOL must be a number, got {env!r}") from None
    return DEFAULT_TOL


def _degenerate_guard(fn, *args, **kwargs):
    """Call fn; a degenerate-determinant warning becomes a DomainError."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateAuxWarning)
        out = fn(*args, **kwargs)
    for w in caught:
        if issubclass(w.category, DegenerateAuxWarning):
            raise DomainError(str(w.message))
    return out


# -- subcommands -----------------------------------------------------------


def cmd_ops(args) -> object:
    M = _load(args.moments, args.aux)
    n, m = args.n, args.m
    if n < 1 or not 1 <= m <= n:
        raise UsageError("need 1 <= m <= n")
    if args.max_n:
        build = gops_det if args.path in ("det", "both") else gops_symbolic
        entries = [
            _degenerate_guard(build, M, nn, mm, monic=args.monic)
            for nn in range(1, args.max_n + 1)
            for mm in range(1, nn + 1)
            if args.all_m or mm == 1
        ]
        return entries
    out: dict = {}
    entries = {}
    if args.path in ("det", "both"):
        entries["det"] = _degenerate_guard(gops_det, M, n, m, monic=args.monic)
    if args.path in ("sym", "both"):
        entries["sym"] = _degenerate_guard(gops_symbolic, M, n, m, monic=args.monic)
    main_entry = entries.get("det", entries.get("sym"))
    if args.format == "csv":
        return list(entries.values())
    out["entry"] = _entry_json(main_entry)
    if len(entries) == 2:
        out["symbolic"] = _entry_json(entries["sym"])
        factor = math.factorial(n - m + 1)
        ratio_ok = args.monic and entries["sym"].poly == entries["det"].poly
        ratio_ok = ratio_ok or entries["sym"].poly == entries["det"].poly * factor
        out["ratio"] = {"expected": factor, "confirmed": ratio_ok}
    out["orthogonality_report"] = check_orthogonality(M, main_entry).to_json()
    out["leading"] = rational_to_str(leading_coefficient(M, n, m))
    return out


def cmd_covariant(args) -> object:
    if args.form:
        f = BinaryForm(_rationals(args.form, "form"))
    else:
        if args.n is None:
            raise UsageError("give --form or --n (with --moments)")
        f = form_from_moments(_load(args.moments), 1, args.n)
    n = f.degree
    aux = [BinaryForm(_rationals(a, "aux-form")) for a in (args.aux_form or [])]
    out: dict = {"form": f.to_json()}
    if args.op in ("J", "J-det"):
        m = args.m
        if m is None or not 1 <= m <= n:
            raise UsageError("--m must satisfy 1 <= m <= n")
        if 2 * m - n < 1:
            raise DomainError(f"J needs 2m - n >= 1 (n = {n}, m = {m})")
        if len(aux) != 2 * m - n - 1:
            raise UsageError(f"J with n = {n}, m = {m} needs {2 * m - n - 1} --aux-form values")
        if any(g.degree != m for g in aux):
            raise UsageError(f"auxiliary forms must have degree {m}")
        g = (covariant_J if args.op == "J" else covariant_J_det)(f, aux, m)
        out.update(
            m=m,
            weight=math.comb(n - m + 1, 2) + math.comb(m, 2),
            result=poly_to_json(g),
            text=str(g),
            dehomogenized=str(dehomogenize(g)),
            apolar=apolar_pairing(f, g).is_zero(),
        )
    elif args.op == "transvectant":
        if len(aux) != 1:
            raise UsageError("transvectant needs exactly one --aux-form")
        g = transvectant(f, aux[0], args.k)
        out.update(k=args.k, result=poly_to_json(g), text=str(g))
    elif args.op == "hessian":
        g = hessian(f)
        out.update(result=poly_to_json(g), text=str(g))
    elif args.op == "dim":
        m = args.m if args.m is not None else n
        out.update(m=m, apolar_dim=apolar_space_dim(f, m), generic=max(0, 2 * m - n))
    return out


def cmd_quad(args) -> object:
    M = _load(args.moments, args.aux)
    tol = _tol(args)
    rule = gauss_rule(M, args.n, tol)
    out: dict = {"n": args.n, "nodes": list(rule.nodes), "weights": list(rule.weights)}
    if args.check_exactness:
        res = rule.residuals(M, 2 * args.n)
        out["residuals"] = {str(k): v for k, v in res.items()}
        out["exact_through"] = 2 * args.n - 1
        out["passed"] = all(res[k] <= tol for k in range(2 * args.n))
    if args.discriminant:
        Nk = _ints(args.discriminant, "discriminant")
        if len(Nk) != 2:
            raise UsageError("--discriminant expects N,k")
        out["discriminant"] = discriminant_moment(M, Nk[0], Nk[1], args.n, tol).to_json()
    if args.format == "csv":
        rows = [["i", "node", "weight"]] + [[i, _float(z), _float(c)] for i, (z, c) in enumerate(zip(rule.nodes, rule.weights))]
        return "\n".join(",".join(map(str, r)) for r in rows) + "\n"
    return out


def cmd_symfun(args) -> object:
    alpha = _ints(args.alpha, "alpha")
    if args.N is not None and args.N != len(alpha):
        raise UsageError(f"--alpha has {len(alpha)} parts but --N is {args.N}")
    if args.verify:
        return verify_schur_monomial_identities(alpha, args.k).to_json()
    M = _load(args.moments, args.aux)
    P = p_alpha_k(M, alpha, args.k, average=args.average)
    return {"alpha": list(alpha), "k": args.k, "average": args.average, "poly": poly_to_json(P), "text": str(P)}


def cmd_mops(args) -> object:
    M = _load(args.moments, args.aux, d=args.d)
    n = _ints(args.n, "n")
    if len(n) != args.d + 1:
        raise UsageError(f"--n needs {args.d + 1} components")
    if args.full:
        e = _degenerate_guard(multi_ops_full, M, n, args.path)
        lower = [k for k in box_enumerate(n) if tuple(k) != n]
    else:
        if not args.m:
            raise UsageError("give --m or --full")
        m = _ints(args.m, "m")
        build = multi_gops_det if args.path == "det" else multi_gops_symbolic
        e = _degenerate_guard(build, M, n, m)
        if e.degenerate:
            raise DomainError(f"p_({n},{m}) vanishes: the auxiliary rows are dependent")
        lower = list(box_enumerate(tuple(a - b for a, b in zip(n, m))))
    if args.format == "csv":
        return [e]
    out = _multi_json(e)
    orth = multi_orthogonality(M, e.poly, lower)
    out["orthogonality"] = {_key(k): rational_to_str(v) for k, v in orth.items()}
    out["orthogonal"] = all(v == 0 for v in orth.values())
    return out


def cmd_selfcheck(args) -> object:
    from .selfcheck import CHECKS, run_check

    wanted = _ints(args.only, "only") if args.only else tuple(num for num, *_ in CHECKS)
    known = {num for num, *_ in CHECKS}
    if not set(wanted) <= known:
        raise UsageError(f"unknown check numbers {sorted(set(wanted) - known)}")
    results = []
    for num in wanted:
        r = run_check(num)
        print(r.line(), file=sys.stderr, flush=True)
        results.append(r)
    payload = {
        "passed": all(r.passed for r in results),
        "checks": [
            {"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
    }
    if not payload["passed"]:
        raise _SelfcheckFailed(payload)
    return payload


class _SelfcheckFailed(Exception):
    def __init__(self, payload):
        super().__init__("self-check failed")
        self.payload = payload


# -- parser ----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 already; keep the message short
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--moments", default="hermite", help="builtin name, comma-separated builtins, or JSON file")
    common.add_argument(
        "--aux",
        help="comma-separated auxiliary classes 2, 3, ...: builtin names, products such as "
        "laguerre:chebyshev1 (for d > 0), or JSON files",
    )
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write here instead of stdout")
    common.add_argument("--tol", type=float, help=f"quadrature tolerance (default {DEFAULT_TOL}, or APOLAR_TOL)")

    p = _Parser(prog="apolar", description="Exact orthogonal polynomials, covariants and quadrature from moments.")
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("ops", parents=[common], help="generalized orthogonal polynomials p_nm")
    s.add_argument("--n", type=int, default=1)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--path", choices=("det", "sym", "both"), default="det")
    s.add_argument("--monic", action="store_true")
    s.add_argument("--max-n", type=int, help="emit a table of p_n1 for n = 1 .. MAX_N")
    s.add_argument("--all-m", action="store_true", help="with --max-n, include every m")
    s.set_defaults(func=cmd_ops)

    s = sub.add_parser("covariant", parents=[common], help="J covariant, transvectants, apolarity")
    s.add_argument("--form", help="coefficients a0,...,an")
    s.add_argument("--n", type=int, help="degree of the moment form when --form is absent")
    s.add_argument("--m", type=int)
    s.add_argument("--aux-form", action="append", help="auxiliary form coefficients (repeatable)")
    s.add_argument("--op", choices=("J", "J-det", "transvectant", "hessian", "dim"), default="J")
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_covariant)

    s = sub.add_parser("quad", parents=[common], help="Gauss quadrature and discriminant moments")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--check-exactness", action="store_true")
    s.add_argument("--discriminant", help="N,k")
    s.set_defaults(func=cmd_quad)

    s = sub.add_parser("symfun", parents=[common], help="symmetric-function covariants")
    s.add_argument("--alpha", required=True, help="weakly decreasing parts, e.g. 2,1,0")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--N", type=int)
    s.add_argument("--verify", action="store_true", help="check the closed form of S_alpha,k")
    s.add_argument("--average", action="store_true", help="divide P by N!")
    s.set_defaults(func=cmd_symfun)

    s = sub.add_parser("mops", parents=[common], help="multivariate orthogonal polynomials")
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--n", required=True, help="multi-degree, e.g. 2,1")
    s.add_argument("--m", help="multi-degree m for the generalized system")
    s.add_argument("--full", action="store_true", help="full system p_n")
    s.add_argument("--path", choices=("det", "sym"), default="det")
    s.set_defaults(func=cmd_mops)

    s = sub.add_parser("selfcheck", parents=[common], help="run the acceptance checks")
    s.add_argument("--only", help="comma-separated check numbers")
    s.set_defaults(func=cmd_selfcheck)
    return p


def _render(result, fmt: str) -> str:
    if isinstance(result, str):
        return result
    if isinstance(result, list):
        return emit_table(result, fmt)
    if fmt == "csv":
        raise UsageError("this output has no CSV form; use --format json")
    return dumps(result) + "\n"


def _write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        _write(_render(result, args.format), args.output)
        return EXIT_OK
    except _SelfcheckFailed as exc:
        _write(dumps(exc.payload) + "\n", args.output)
        return EXIT_DOMAIN
    except UsageError as exc:
        print(f"apolar: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, NodesNotDistinctError, MissingMomentError, ArithmeticError) as exc:
        print(f"apolar: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"apolar: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
