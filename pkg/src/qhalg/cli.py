"""Command-line interface: ``qhalg analyze|check|dual|verify|corpus``.

Exit status is 0 when every verdict passes, 1 when some verdict fails, and 2
for unreadable input or bad usage.  An input may be a file path or
``corpus:NAME`` for a built-in example.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import List, Optional

from .algebra import NotFiniteDimensional, build_algebra, extract_presentation, grading_diagnostics
from .duality import is_balanced, koszul_dual, koszulity_checks, ringel_dual
from .presentation import PresentationError, corpus, corpus_names, parse, render
from .report import AnalysisReport, algebra_summary, analyze, verdict, verify_closure, verify_theorem1
from .scalars import Field
from .structural import NotQuasiHereditary, is_quasi_hereditary

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def load(source: str, fld: Optional[Field] = None):
    if source.startswith("corpus:"):
        try:
            p = corpus(source[len("corpus:"):])
        except KeyError as exc:
            raise UsageError(str(exc.args[0] if exc.args else exc))
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"{source}: {exc.strerror}")
        try:
            p = parse(text)
        except PresentationError as exc:
            raise UsageError(f"{source}: {exc}")
    if fld is not None and fld != p.field:
        try:
            p = parse(render(dataclasses.replace(p, field=fld)))
        except (PresentationError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"{source}: cannot read over {fld}: {exc}")
    return p


def _build(p, max_degree):
    try:
        return build_algebra(p, max_degree)
    except (NotFiniteDimensional, ValueError) as exc:
        raise UsageError(f"{p.name}: {exc}")


def _check(kind: str, a) -> AnalysisReport:
    rep = AnalysisReport(f"check {kind}", algebra_summary(a))
    if kind == "qh":
        # The listed vertex order decides the exit code; the opposite order is informational.
        cert = is_quasi_hereditary(a, "natural")
        w = None if cert else {"vertex": a.vertices[cert.failing], "reason": cert.reason}
        rep.verdicts["quasi_hereditary"] = verdict(bool(cert), w)
        rep.algebra["quasi_hereditary_in_opposite_order"] = bool(is_quasi_hereditary(a, "opposite"))
    elif kind == "balanced":
        b = is_balanced(a)
        rep.verdicts["balanced"] = verdict(b.value, b.witness)
    elif kind == "koszul":
        k = koszulity_checks(a, standard=False)
        rep.verdicts["koszul"] = verdict(k.koszul.value, k.koszul.witness)
    elif kind == "standard-koszul":
        cert = is_quasi_hereditary(a, "natural")
        if not cert:
            rep.verdicts["standard_koszul"] = verdict(False, {"reason": "not quasi-hereditary", "vertex": a.vertices[cert.failing]})
        else:
            k = koszulity_checks(a)
            rep.verdicts["standard_koszul"] = verdict(k.standard_koszul.value, k.standard_koszul.witness)
    return rep


def _emit(rep: AnalysisReport, fmt: str, out) -> int:
    out.write((rep.to_json() if fmt == "json" else rep.to_text()) + "\n")
    return EXIT_OK if rep.ok() else EXIT_FAIL


def _dual(kind: str, a, path: Optional[str], out) -> int:
    try:
        res = ringel_dual(a) if kind == "ringel" else koszul_dual(a)
    except NotQuasiHereditary as exc:
        sys.stderr.write(f"ringel dual undefined: {exc}\n")
        return EXIT_FAIL
    d = res.algebra
    if not grading_diagnostics(d).positively_graded:
        sys.stderr.write(f"{d.name} is not positively graded (graded dims {d.graded_dims()}); "
                         "no quiver presentation written\n")
        return EXIT_FAIL
    text = render(extract_presentation(d))
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:P; overrides the field named in the input")
    common.add_argument("--max-degree", type=int, default=None, help="degree cap for the ideal closure")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")

    ap = argparse.ArgumentParser(prog="qhalg", description="Graded quasi-hereditary algebra toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full verdict report for one algebra")
    p.add_argument("file")

    p = sub.add_parser("check", parents=[common], help="a single property")
    p.add_argument("what", choices=("balanced", "koszul", "standard-koszul", "qh"))
    p.add_argument("file")

    p = sub.add_parser("dual", parents=[common], help="write the Ringel or Koszul dual as a presentation")
    p.add_argument("which", choices=("ringel", "koszul"))
    p.add_argument("file")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify", parents=[common], help="run the balancedness theorem or the closure checks")
    p.add_argument("what", choices=("theorem1", "closure"))
    p.add_argument("file")
    p.add_argument("file2", nargs="?")

    p = sub.add_parser("corpus", parents=[common], help="list or print built-in examples")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    return ap


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        fld = Field.parse(args.field) if args.field else None
    except ValueError as exc:
        sys.stderr.write(f"qhalg: {exc}\n")
        return EXIT_USAGE
    try:
        if args.cmd == "corpus":
            if args.action == "list":
                out.write("\n".join(corpus_names()) + "\n")
                return EXIT_OK
            if not args.name:
                raise UsageError("corpus show needs a NAME")
            out.write(render(load("corpus:" + args.name, fld)))
            return EXIT_OK
        p = load(args.file, fld)
        a = _build(p, args.max_degree)
        if args.cmd == "analyze":
            return _emit(analyze(p, a, timings=args.timings), args.format, out)
        if args.cmd == "check":
            return _emit(_check(args.what, a), args.format, out)
        if args.cmd == "dual":
            return _dual(args.which, a, args.output, out)
        if args.what == "theorem1":
            return _emit(verify_theorem1(p, a, timings=args.timings), args.format, out)
        q = load(args.file2, fld) if args.file2 else None
        b = _build(q, args.max_degree) if q is not None else None
        return _emit(verify_closure(p, q, a, b, timings=args.timings), args.format, out)
    except UsageError as exc:
        sys.stderr.write(f"qhalg: {exc}\n")
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
