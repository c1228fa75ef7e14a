"""Analysis reports: verdicts with witnesses, serialized as versioned JSON."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field as dc_field
from typing import Any, Dict, Optional

from .algebra import (
    GradedAlgebra,
    build_algebra,
    direct_sum,
    extract_presentation,
    grading_diagnostics,
    tensor,
    truncate,
)
from .duality import (
    graded_iso_check,
    is_balanced,
    koszul_dual,
    koszulity_checks,
    qh_order,
    ringel_dual,
)
from .homological import end_algebra_of_complexes, is_linear, tilting_complex_of_simple
from .presentation import QuiverPresentation, render
from .structural import catalog, in_order, is_quasi_hereditary

SCHEMA = 1
PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


def verdict(ok: Optional[bool], witness: Any = None, note: Optional[str] = None) -> Dict[str, Any]:
    status = SKIPPED if ok is None else (PASS if ok else FAIL)
    out: Dict[str, Any] = {"status": status}
    if witness is not None:
        out["witness"] = witness
    if note:
        out["note"] = note
    return out


@dataclass
class AnalysisReport:
    kind: str
    algebra: Dict[str, Any]
    verdicts: Dict[str, Any] = dc_field(default_factory=dict)
    duals: Dict[str, Any] = dc_field(default_factory=dict)
    theorem1: Dict[str, Any] = dc_field(default_factory=dict)
    closure: Dict[str, Any] = dc_field(default_factory=dict)
    timings: Dict[str, float] = dc_field(default_factory=dict)
    schema: int = SCHEMA

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        data = json.loads(text)
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        return cls(**data)

    def statuses(self):
        """Every verdict status in the report."""
        def walk(x):
            if isinstance(x, dict):
                if "status" in x and x["status"] in (PASS, FAIL, SKIPPED):
                    yield x["status"]
                for k, v in x.items():
                    if k != "witness":
                        yield from walk(v)

        yield from walk(self.verdicts)
        yield from walk(self.theorem1)
        yield from walk(self.closure)

    def ok(self) -> bool:
        return FAIL not in set(self.statuses())

    def to_text(self) -> str:
        lines = [f"{self.kind}: {self.algebra.get('name')} (dim {self.algebra.get('dim')}, graded dims {self.algebra.get('graded_dims')})"]

        def emit(prefix, x, depth=1):
            if isinstance(x, dict) and "status" in x:
                line = "  " * depth + f"{prefix}: {x['status'].upper()}"
                if x.get("note"):
                    line += f" ({x['note']})"
                lines.append(line)
                if x["status"] == FAIL and "witness" in x:
                    lines.append("  " * (depth + 1) + "witness: " + json.dumps(x["witness"], sort_keys=True))
                for k, v in x.items():
                    if k not in ("status", "witness", "note") and isinstance(v, dict):
                        emit(k, v, depth + 1)
            elif isinstance(x, dict):
                lines.append("  " * depth + f"{prefix}:")
                for k, v in x.items():
                    emit(k, v, depth + 1)
            elif isinstance(x, str) and "\n" in x:
                lines.append("  " * depth + f"{prefix}:")
                lines.extend("  " * (depth + 1) + ln for ln in x.rstrip("\n").splitlines())
            else:
                lines.append("  " * depth + f"{prefix}: {x}")

        for section in ("verdicts", "duals", "theorem1", "closure"):
            val = getattr(self, section)
            if val:
                emit(section, val, 0)
        if self.timings:
            emit("timings", {k: f"{v:.3f}s" for k, v in self.timings.items()}, 0)
        return "\n".join(lines)


class _Timer:
    def __init__(self, sink: Dict[str, float], enabled: bool):
        self.sink, self.enabled = sink, enabled

    def __call__(self, name):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                if timer.enabled:
                    timer.sink[name] = time.perf_counter() - self.t

        return _Ctx()


def algebra_summary(a: GradedAlgebra) -> Dict[str, Any]:
    return {
        "name": a.name,
        "field": str(a.field),
        "vertices": list(a.vertices),
        "dim": a.dim,
        "graded_dims": {str(k): v for k, v in a.graded_dims().items()},
    }


def dual_summary(a: GradedAlgebra) -> Dict[str, Any]:
    diag = grading_diagnostics(a) if a.is_positively_graded() else None
    out = algebra_summary(a)
    out["positively_graded"] = a.is_positively_graded()
    out["quadratic"] = diag.quadratic if diag else False
    out["presentation"] = render(extract_presentation(a)) if diag else None
    return out


def _qh_verdicts(a: GradedAlgebra) -> Dict[str, Any]:
    """Verdict for the listed order; both orders are also recorded as plain facts."""
    certs = {order: is_quasi_hereditary(a, order) for order in ("natural", "opposite")}
    nat = certs["natural"]
    w = None if nat else {"vertex": a.vertices[nat.failing], "reason": nat.reason}
    out = verdict(bool(nat), w)
    out["orders"] = {order: bool(c) for order, c in certs.items()}
    return out


def analyze(p: QuiverPresentation, a: Optional[GradedAlgebra] = None, timings: bool = False) -> AnalysisReport:
    a = a or build_algebra(p)
    rep = AnalysisReport("analyze", algebra_summary(a))
    t = _Timer(rep.timings, timings)
    with t("quasi_hereditary"):
        rep.verdicts["quasi_hereditary"] = _qh_verdicts(a)
    qh = rep.verdicts["quasi_hereditary"]["status"] == PASS
    with t("koszulity"):
        k = koszulity_checks(a, standard=qh)
    rep.verdicts["koszul"] = verdict(k.koszul.value, k.koszul.witness)
    rep.verdicts["standard_koszul"] = verdict(k.standard_koszul.value if qh else None, k.standard_koszul.witness,
                                              None if qh else "requires quasi-heredity")
    with t("balanced"):
        b = is_balanced(a) if qh else None
    rep.verdicts["balanced"] = verdict(b.value if b is not None else None, b.witness if b is not None else None,
                                       None if qh else "requires quasi-heredity")
    if qh:
        with t("ringel_dual"):
            rep.duals["ringel"] = dual_summary(ringel_dual(a, check=False).algebra)
    with t("koszul_dual"):
        rep.duals["koszul"] = dual_summary(koszul_dual(a).algebra)
    return rep


def _balanced_in_order(a: GradedAlgebra):
    order = qh_order(a)
    if order is None:
        return None, verdict(False, {"reason": "not quasi-hereditary in the natural or opposite order"})
    ordered = in_order(a, order)
    b = is_balanced(ordered)
    v = verdict(b.value, b.witness)
    v["order"] = order
    return ordered, v


def verify_theorem1(p: QuiverPresentation, a: Optional[GradedAlgebra] = None, timings: bool = False) -> AnalysisReport:
    a = a or build_algebra(p)
    rep = AnalysisReport("theorem1", algebra_summary(a))
    t = _Timer(rep.timings, timings)
    cert = is_quasi_hereditary(a, "natural")
    if not cert:
        rep.theorem1["hypothesis"] = verdict(False, {"reason": "not quasi-hereditary", "vertex": cert.failing, "detail": cert.reason})
        for item in ("i", "ii", "iii", "iv"):
            rep.theorem1[item] = verdict(None, note="hypothesis fails")
        return rep
    with t("hypothesis"):
        bal = is_balanced(a)
    k = koszulity_checks(a)
    rep.verdicts["koszul"] = verdict(k.koszul.value, k.koszul.witness)
    rep.verdicts["standard_koszul"] = verdict(k.standard_koszul.value, k.standard_koszul.witness)
    rep.theorem1["hypothesis"] = verdict(bal.value, bal.witness)
    if not bal:
        for item in ("i", "ii", "iii", "iv"):
            rep.theorem1[item] = verdict(None, note="hypothesis fails")
        return rep
    # (i)
    wit = None
    if not k.koszul:
        wit = {"koszul": k.koszul.witness}
    elif not k.standard_koszul:
        wit = {"standard_koszul": k.standard_koszul.witness}
    rep.theorem1["i"] = verdict(bool(k.koszul) and bool(k.standard_koszul), wit)
    # (ii)
    with t("duals"):
        r = ringel_dual(a).algebra
        e = koszul_dual(a).algebra
        e_ord, v_e = _balanced_in_order(e)
        er = koszul_dual(r).algebra
        er_ord, v_er = _balanced_in_order(er)
        re = ringel_dual(e_ord).algebra if e_ord is not None else None
        re_ord, v_re = _balanced_in_order(re) if re is not None else (None, verdict(None, note="E(A) not quasi-hereditary"))
    v_a = verdict(True)
    rb = is_balanced(r)
    v_r = verdict(rb.value, rb.witness)
    parts = {"A": v_a, "R(A)": v_r, "E(A)": v_e, "E(R(A))": v_er, "R(E(A))": v_re}
    ok = all(x["status"] == PASS for x in parts.values())
    rep.theorem1["ii"] = dict(verdict(ok), **{"parts": parts})
    rep.duals["ringel"] = dual_summary(r)
    rep.duals["koszul"] = dual_summary(e)
    rep.duals["koszul_of_ringel"] = dual_summary(er)
    if re is not None:
        rep.duals["ringel_of_koszul"] = dual_summary(re)
    # (iii)
    with t("tilting_complexes"):
        cat = catalog(a)
        complexes = []
        bad = None
        for lam in range(a.n):
            c = tilting_complex_of_simple(cat, lam)
            complexes.append(c)
            lin = is_linear(c, "T", cat)
            if not lin and bad is None:
                bad = dict(simple=a.vertices[lam], **lin.witness)
        rep.theorem1["iii"] = verdict(bad is None, bad)
        rep.theorem1["iii"]["complexes"] = {a.vertices[lam]: _complex_summary(c, a) for lam, c in enumerate(complexes)}
    # (iv)
    with t("isomorphisms"):
        if re is None:
            rep.theorem1["iv"] = verdict(False, {"reason": "R(E(A)) unavailable"})
        else:
            iso = graded_iso_check(re, er, "graded")
            for lam, c in enumerate(complexes):
                c.name = a.vertices[lam]
            endo = end_algebra_of_complexes(complexes, name="End(L)").algebra.opposite()
            cross = graded_iso_check(endo, e, "graded")
            ok = iso.isomorphic and cross.isomorphic
            rep.theorem1["iv"] = dict(verdict(ok, None if ok else {"R(E(A)) vs E(R(A))": iso.status, "End vs E(A)": cross.status}),
                                      **{"R(E(A)) vs E(R(A))": {"status": PASS if iso.isomorphic else FAIL, "result": iso.status, "map": iso.witness},
                                         "End(L) vs E(A)": {"status": PASS if cross.isomorphic else FAIL, "result": cross.status, "map": cross.witness}})
    return rep


def _complex_summary(c, a) -> Dict[str, Any]:
    out = {}
    for pos, items in c.summary().items():
        out[str(pos)] = [f"{k}({a.vertices[lam]})<{s}>^{m}" for k, lam, s, m in items]
    return out


def verify_closure(p: QuiverPresentation, q: Optional[QuiverPresentation] = None,
                   a: Optional[GradedAlgebra] = None, b: Optional[GradedAlgebra] = None,
                   timings: bool = False) -> AnalysisReport:
    a = a or build_algebra(p)
    if q is not None or b is not None:
        b = b or build_algebra(q)
    else:
        b = a
    rep = AnalysisReport("closure", algebra_summary(a))
    t = _Timer(rep.timings, timings)
    ba = is_balanced(a)
    bb = is_balanced(b) if b is not a else ba
    rep.closure["inputs_balanced"] = verdict(bool(ba) and bool(bb), None if (ba and bb) else {"a": ba.witness, "b": bb.witness})
    if not (ba and bb):
        for item in ("truncate", "direct_sum", "tensor"):
            rep.closure[item] = verdict(None, note="inputs not balanced")
        return rep
    with t("closure"):
        for item, build in (("truncate", lambda: truncate(a, a.n - 1)),
                            ("direct_sum", lambda: direct_sum(a, b)),
                            ("tensor", lambda: tensor(a, b))):
            c = build()
            v = is_balanced(c)
            rep.closure[item] = dict(verdict(v.value, v.witness), algebra=algebra_summary(c))
    rep.closure["tensor"]["order"] = "lexicographic product order"
    return rep
