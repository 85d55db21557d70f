"""Command-line front end: every pipeline and verification as a subcommand.

Each subcommand is a thin wrapper over one library call and prints a
deterministic report to standard output, as indented text or as a single
JSON line (``--format json``).  Given identical inputs the output bytes
are identical.

Exit codes: 0 means the property was verified (or the artifact built),
1 means the input was well formed but the property failed (not a scheme,
not roux, no labeling, infeasible triple, ...), 2 means a usage or I/O
error.  A stage-count failure inside ``hoggar-verify`` also exits 2: the
counts are forced, so a deviation is a broken installation rather than a
negative verdict about the input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath

from . import hoggar
from .constructions import cyclotomic_scheme
from .groups import ParseError, group_from_spec
from .roux import (
    ClassCountMismatch,
    IncompatiblePair,
    PrecisionTooLow,
    RouxMatrix,
    build_roux_matrix,
    decompose,
    etf_export,
    find_labelings,
    verify_roux,
)
from .schemes import (
    LocalNotScheme,
    SchemeTable,
    local_restrict,
    orbital_scheme,
    thin_radical,
    valencies,
    validate_scheme,
)
from .spectra import (
    EigenData,
    NegativeKrein,
    eigen_compute,
    eigen_from_tensor,
    krein_params,
    roux_detect,
)
from .triple import TripleSolver, tensor_from_eigen, triple_report

__all__ = ["main"]


class _Usage(Exception):
    """Invalid invocation or unreadable input; maps to exit code 2."""


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc}") from None


def _load_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise _Usage(f"{path} is not valid JSON: {exc}") from None


def _load_scheme(path):
    try:
        return SchemeTable.from_json(_read(path))
    except (ValueError, TypeError) as exc:
        raise _Usage(f"bad scheme file {path}: {exc}") from None


def _load_roux(path):
    try:
        return RouxMatrix.from_json(_read(path))
    except (ValueError, TypeError, ParseError) as exc:
        raise _Usage(f"bad roux file {path}: {exc}") from None


def _parse_group(spec):
    try:
        return group_from_spec(spec)
    except ParseError as exc:
        raise _Usage(str(exc)) from None


def _scheme_payload(t):
    return json.loads(t.to_json())


def _text_lines(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)):
                lines.append(f"{prefix}{key}:")
                lines.extend(_text_lines(val, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {val}")
    elif isinstance(obj, list):
        if obj and all(isinstance(v, list) for v in obj):
            for v in obj:
                lines.append(prefix + " ".join(str(x) for x in v))
        elif all(not isinstance(v, (dict, list)) for v in obj):
            lines.append(prefix + " ".join(str(v) for v in obj))
        else:
            for v in obj:
                lines.extend(_text_lines(v, prefix))
    else:
        lines.append(f"{prefix}{obj}")
    return lines


def _emit(report, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True))
        sys.stdout.write("\n")
    else:
        for line in _text_lines(report):
            sys.stdout.write(line + "\n")


# ---------------------------------------------------------------------------
# subcommands; each returns (exit code, report)


def _cmd_validate(args):
    t = _load_scheme(args.scheme)
    res = validate_scheme(t)
    if not res.ok:
        return 1, {
            "valid": False,
            "points": t.n,
            "classes": t.d,
            "witness": str(res),
        }
    ks = valencies(res.tensor, res.transpose)
    return 0, {
        "valid": True,
        "points": t.n,
        "classes": t.d,
        "valencies": [int(k) for k in ks],
    }


def _cmd_eigen(args):
    t = _load_scheme(args.scheme)
    try:
        e = eigen_compute(t)
    except ValueError as exc:
        return 1, {"error": str(exc)}
    except ArithmeticError as exc:
        raise _Usage(f"cannot compute the eigenmatrices: {exc}") from None
    return 0, e.to_report()


def _cmd_krein(args):
    t = _load_scheme(args.scheme)
    try:
        kt = krein_params(eigen_compute(t))
    except (ValueError, NegativeKrein) as exc:
        return 1, {"error": str(exc)}
    except ArithmeticError as exc:
        raise _Usage(f"cannot compute the Krein parameters: {exc}") from None
    vanishing = sorted([int(a), int(b), int(c)] for a, b, c in kt.vanishing)
    return 0, {
        "classes": t.d + 1,
        "vanishing_count": len(vanishing),
        "vanishing": vanishing,
    }


def _cmd_thin_radical(args):
    t = _load_scheme(args.scheme)
    try:
        rad = thin_radical(t)
    except ValueError as exc:
        return 1, {"error": str(exc)}
    return 0, {
        "order": rad.order,
        "group": rad.group.spec_string(),
        "classes": [int(c) for c in rad.indices],
        "embedding": [int(c) for c in rad.embedding],
    }


def _cmd_roux_detect(args):
    t = _load_scheme(args.scheme)
    try:
        e = eigen_compute(t)
    except ValueError as exc:
        return 1, {"error": str(exc)}
    except ArithmeticError as exc:
        raise _Usage(f"cannot compute the eigenmatrices: {exc}") from None
    det = roux_detect(e.P, e.valencies)
    if not det.ok:
        return 1, {"roux": False, "reason": det.reason}
    return 0, {
        "roux": True,
        "group": det.group.spec_string(),
        "d_plus": [int(x) for x in det.d_plus],
        "d_minus": [int(x) for x in det.d_minus],
        "thin_columns": [int(x) for x in det.thin_cols],
        "thick_columns": [int(x) for x in det.thick_cols],
    }


def _cmd_roux_check(args):
    t = _load_scheme(args.scheme)
    group = _parse_group(args.group)
    res = validate_scheme(t)
    if not res.ok:
        return 1, {"error": f"not an association scheme: {res}"}
    labs = find_labelings(t, group)
    ks = valencies(res.tensor, res.transpose)
    rows = [
        {
            "classes": [int(lab[g]) for g in group.elements],
            "c": [int(ks[lab[g]]) for g in group.elements],
        }
        for lab in labs
    ]
    report = {
        "group": group.spec_string(),
        "labelings": len(labs),
        "compatible": rows,
    }
    return (0 if labs else 1), report


def _cmd_roux_build(args):
    t = _load_scheme(args.scheme)
    group = _parse_group(args.group)
    if args.labeling == "auto":
        labs = find_labelings(t, group)
        if not labs:
            return 1, {"error": "no compatible labeling for this pair"}
        labeling = labs[0]
    else:
        try:
            classes = [int(c) for c in json.loads(args.labeling)]
        except (ValueError, TypeError) as exc:
            raise _Usage(f"bad labeling {args.labeling!r}: {exc}") from None
        if len(classes) != group.order:
            raise _Usage("labeling needs one class per group element")
        labeling = dict(zip(group.elements, classes))
    try:
        b = build_roux_matrix(t, group, labeling)
    except (IncompatiblePair, ClassCountMismatch, ValueError) as exc:
        return 1, {"error": str(exc)}
    chk = verify_roux(b)
    report = {
        "dim": b.dim,
        "group": group.spec_string(),
        "labeling": [int(labeling[g]) for g in group.elements],
        "c": [int(x) for x in chk.param_list(group)],
        "roux": json.loads(b.to_json()),
    }
    if args.out:
        try:
            b.to_file(args.out)
        except OSError as exc:
            raise _Usage(f"cannot write {args.out}: {exc}") from None
        report["written"] = args.out
    return 0, report


def _cmd_roux_verify(args):
    b = _load_roux(args.rouxfile)
    chk = verify_roux(b)
    if not chk.ok:
        return 1, {"roux": False, "reason": str(chk)}
    return 0, {
        "roux": True,
        "dim": b.dim,
        "group": b.group.spec_string(),
        "c": [int(x) for x in chk.param_list(b.group)],
    }


def _cmd_decompose(args):
    t = _load_scheme(args.scheme)
    try:
        out = decompose(t, base_vertex=args.vertex)
    except ValueError as exc:
        return 1, {"error": str(exc)}
    if not out.ok:
        return 1, {"decomposable": False, "reason": out.reason}
    return 0, {
        "decomposable": True,
        "group": out.group.spec_string(),
        "labeling": [int(out.labeling[g]) for g in out.group.elements],
        "base_vertex": int(out.base_vertex),
        "thick_class": int(out.thick_class),
        "local": _scheme_payload(out.local),
    }


def _cmd_triple_solve(args):
    if (args.scheme is None) == (args.params is None):
        raise _Usage("give exactly one of a scheme file or --params")
    if args.scheme is not None:
        t = _load_scheme(args.scheme)
        res = validate_scheme(t)
        if not res.ok:
            return 1, {"error": f"not an association scheme: {res}"}
        tensor = res.tensor
        eigen = eigen_from_tensor(tensor)
    else:
        obj = _load_json(args.params)
        if isinstance(obj, dict) and "P" not in obj and "eigen" in obj:
            obj = obj["eigen"]
        try:
            eigen = EigenData.from_report(obj)
        except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
            raise _Usage(f"bad eigen file {args.params}: {exc}") from None
        try:
            tensor = tensor_from_eigen(eigen)
        except ValueError as exc:
            return 1, {"error": str(exc)}
    krein = krein_params(eigen)
    if args.triple is not None:
        u, v, w = args.triple
        solver = TripleSolver(eigen, tensor, krein)
        try:
            out = solver.solve(u, v, w)
        except ValueError as exc:
            return 1, {"error": str(exc)}
        if out.ok:
            return 0, {
                "triple": [u, v, w],
                "status": "unique",
                "tensor": out.tensor.values.tolist(),
            }
        return 1, {"triple": [u, v, w], "status": str(out)}
    return 0, triple_report(eigen, tensor, krein, threads=args.threads)


def _cmd_local(args):
    t = _load_scheme(args.scheme)
    try:
        lt, class_map = local_restrict(t, args.vertex, args.relation)
    except LocalNotScheme as exc:
        return 1, {"error": str(exc)}
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    return 0, {
        "points": lt.n,
        "classes": lt.d,
        "class_map": [int(c) for c in class_map],
        "scheme": _scheme_payload(lt),
    }


def _cmd_orbital(args):
    obj = _load_json(args.permfile)
    try:
        n = int(obj["degree"])
        gens = [[int(x) for x in g] for g in obj["generators"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise _Usage(f"bad permutation file {args.permfile}: {exc}") from None
    try:
        t = orbital_scheme(n, gens)
    except ValueError as exc:
        return 1, {"error": str(exc)}
    res = validate_scheme(t)
    ks = valencies(res.tensor, res.transpose)
    return 0, {
        "points": t.n,
        "classes": t.d,
        "valencies": [int(k) for k in ks],
        "scheme": _scheme_payload(t),
    }


def _cmd_cyclotomic(args):
    try:
        t = cyclotomic_scheme(args.p, args.n, args.r)
    except (ValueError, ArithmeticError) as exc:
        raise _Usage(str(exc)) from None
    res = validate_scheme(t)
    ks = valencies(res.tensor, res.transpose)
    return 0, {
        "q": args.p**args.n,
        "points": t.n,
        "classes": t.d,
        "valencies": [int(k) for k in ks],
        "scheme": _scheme_payload(t),
    }


def _cmd_etf(args):
    b = _load_roux(args.rouxfile)
    group = b.group
    if not 0 <= args.character < group.order:
        raise _Usage(
            f"character index out of range 0..{group.order - 1}"
        )
    alpha = group.elements[args.character]
    try:
        rows = etf_export(b, alpha, precision=args.precision)
    except PrecisionTooLow as exc:
        return 1, {"error": str(exc)}
    except ValueError as exc:
        return 1, {"error": str(exc)}
    d = len(rows)
    n = len(rows[0])
    with mpmath.workprec(args.precision + 64):
        beta = mpmath.mpf(n) / d
        frame_dev = mpmath.mpf(0)
        for i in range(d):
            for j in range(d):
                acc = mpmath.mpc(0)
                for k in range(n):
                    acc += rows[i][k] * mpmath.conj(rows[j][k])
                target = beta if i == j else 0
                frame_dev = max(frame_dev, abs(acc - target))
        lo, hi = None, None
        for i in range(n):
            for j in range(i + 1, n):
                acc = mpmath.mpc(0)
                for r in range(d):
                    acc += mpmath.conj(rows[r][i]) * rows[r][j]
                mag = abs(acc)
                lo = mag if lo is None else min(lo, mag)
                hi = mag if hi is None else max(hi, mag)
        report = {
            "rows": d,
            "cols": n,
            "beta": mpmath.nstr(beta, 20),
            "frame_deviation": mpmath.nstr(frame_dev, 10),
            "coherence_min": mpmath.nstr(lo, 20),
            "coherence_max": mpmath.nstr(hi, 20),
        }
    return 0, report


def _cmd_hoggar_verify(args):
    try:
        report = hoggar.run_pipeline(threads=args.threads)
    except hoggar.StageMismatch as exc:
        raise _Usage(f"pipeline stage failed: {exc}") from None
    out = report.to_report()
    if args.emit_schemes:
        try:
            os.makedirs(args.emit_schemes, exist_ok=True)
            emitted = {}
            for name, t in (
                ("hex_fission_63", report.scheme63),
                ("hoggar_256", report.scheme256),
            ):
                path = os.path.join(args.emit_schemes, f"{name}.json")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(t.to_json())
                    fh.write("\n")
                emitted[name] = path
        except OSError as exc:
            raise _Usage(f"cannot emit schemes: {exc}") from None
        out["emitted"] = emitted
    return 0, out


# ---------------------------------------------------------------------------
# parser


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="roux",
        description="exact computations with association schemes and roux matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    default_threads = os.cpu_count() or 1

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument(
            "--format",
            choices=("text", "json"),
            default="text",
            help="report format (default text)",
        )
        p.set_defaults(func=func)
        return p

    p = add("validate", _cmd_validate, "check the scheme axioms of a table file")
    p.add_argument("scheme")

    p = add("eigen", _cmd_eigen, "exact eigenmatrices, multiplicities, valencies")
    p.add_argument("scheme")

    p = add("krein", _cmd_krein, "Krein parameters and their vanishing set")
    p.add_argument("scheme")

    p = add("thin-radical", _cmd_thin_radical, "the group of valency-1 relations")
    p.add_argument("scheme")

    p = add("roux-detect", _cmd_roux_detect, "recognize the two-block roux spectrum")
    p.add_argument("scheme")

    p = add("roux-check", _cmd_roux_check, "list compatible labelings by a group")
    p.add_argument("scheme")
    p.add_argument("--group", required=True, help="group spec, e.g. Z4 or Z2xZ2")

    p = add("roux-build", _cmd_roux_build, "border a labeled scheme into a roux matrix")
    p.add_argument("scheme")
    p.add_argument("--group", required=True, help="group spec, e.g. Z4 or Z2xZ2")
    p.add_argument(
        "--labeling",
        default="auto",
        help="auto, or a JSON list of class indices in group-element order",
    )
    p.add_argument("--out", help="write the roux matrix to this file")

    p = add("roux-verify", _cmd_roux_verify, "check B^2 = (N-1)I + sum c_g gB exactly")
    p.add_argument("rouxfile")

    p = add("decompose", _cmd_decompose, "recover local scheme, group and labeling")
    p.add_argument("scheme")
    p.add_argument("--vertex", type=int, default=0, help="base vertex (default 0)")

    p = add(
        "triple-solve",
        _cmd_triple_solve,
        "solve triple intersection numbers from parameters alone",
    )
    p.add_argument("scheme", nargs="?", help="scheme file (or use --params)")
    p.add_argument("--params", help="eigen report JSON instead of a scheme file")
    p.add_argument(
        "--triple",
        nargs=3,
        type=int,
        metavar=("U", "V", "W"),
        help="solve one pair-class triple instead of the full report",
    )
    p.add_argument("--threads", type=int, default=default_threads)

    p = add("local", _cmd_local, "restrict the scheme to a relation neighbourhood")
    p.add_argument("scheme")
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--relation", type=int, required=True)

    p = add("orbital", _cmd_orbital, "orbital scheme of a permutation group")
    p.add_argument("permfile", help='JSON {"degree": n, "generators": [[...], ...]}')

    p = add("cyclotomic", _cmd_cyclotomic, "cyclotomic scheme on a finite field")
    p.add_argument("--p", type=int, required=True, help="field characteristic")
    p.add_argument("--n", type=int, required=True, help="extension degree")
    p.add_argument("--r", type=int, required=True, help="index of the power subgroup")

    p = add("etf", _cmd_etf, "export and certify the tight frame at a character")
    p.add_argument("rouxfile")
    p.add_argument("--character", type=int, required=True, help="character index")
    p.add_argument("--precision", type=int, default=128, help="bits (default 128)")

    p = add("hoggar-verify", _cmd_hoggar_verify, "run the full uniqueness pipeline")
    p.add_argument("--emit-schemes", metavar="DIR", help="write the recovered schemes")
    p.add_argument("--threads", type=int, default=default_threads)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        code, report = args.func(args)
    except _Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
