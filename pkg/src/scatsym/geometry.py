"""Charts and Laurent-graded exterior calculus.

A SingularForm is a sum of terms ``coeff * x^{-k} * dI`` where coeff is a
symbolic expression, x is the chart's Z-defining coordinate, k is an exact
integer, and dI is a strictly increasing covector multi-index.  The same
container (kind="vector") holds multivector fields, where k <= 0 records
the vanishing order at Z on the vector side.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .expr import (
    Const,
    Expr,
    ExprError,
    PiecewiseDecay,
    Var,
    ZERO,
    ZeroVerdict,
    add,
    canon,
    differentiate,
    evaluate,
    free_vars,
    is_provably_zero,
    is_zero,
    mul,
    parse,
    powx,
    sample_points,
    ser,
    split_x_power,
    substitute,
)


class GeometryError(ExprError):
    pass


@dataclass(frozen=True)
class Chart:
    """Named coordinates with ranges; at most one Z-defining coordinate."""

    names: tuple
    ranges: tuple  # ((lo, hi) per coordinate), floats
    x: Optional[str] = None  # Z-defining coordinate, Z = {x = 0}
    circles: frozenset = frozenset()  # names of circle-valued coordinates

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise GeometryError("duplicate coordinate names")
        if len(self.ranges) != len(self.names):
            raise GeometryError("ranges must match coordinates")
        if self.x is not None and self.x not in self.names:
            raise GeometryError(f"Z coordinate '{self.x}' not in chart")
        for lo, hi in self.ranges:
            if not lo < hi:
                raise GeometryError("empty coordinate range")

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GeometryError(f"unknown coordinate '{name}'") from None

    def box(self) -> dict:
        return {n: r for n, r in zip(self.names, self.ranges)}


def chart(names: Sequence[str], ranges: Mapping[str, tuple], x: Optional[str] = None,
          circles: Sequence[str] = ()) -> Chart:
    return Chart(tuple(names), tuple(tuple(map(float, ranges[n])) for n in names),
                 x, frozenset(circles))


def _sorted_index(chart_: Chart, idx: Sequence[str]):
    """Sort a multi-index into chart order, returning (sign, tuple) or None
    on a repeated coordinate."""
    positions = [chart_.index(n) for n in idx]
    if len(set(positions)) != len(positions):
        return None
    sign = 1
    order = list(range(len(positions)))
    # insertion sort, counting swaps
    for i in range(1, len(order)):
        j = i
        while j > 0 and positions[order[j - 1]] > positions[order[j]]:
            order[j - 1], order[j] = order[j], order[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx[o] for o in order)


@dataclass(frozen=True)
class SingularForm:
    chart: Chart
    degree: int
    terms: tuple  # of (k: int, coeff: Expr, idx: tuple[str])
    kind: str = "form"  # or "vector"

    def __add__(self, other: "SingularForm") -> "SingularForm":
        if self.chart != other.chart or self.kind != other.kind:
            raise GeometryError("chart/kind mismatch in form addition")
        if self.terms and other.terms and self.degree != other.degree:
            raise GeometryError("degree mismatch in form addition")
        deg = self.degree if self.terms else other.degree
        return make_form(self.chart, deg,
                         list(self.terms) + list(other.terms), self.kind)

    def __sub__(self, other: "SingularForm") -> "SingularForm":
        return self + other.scale(Const(Fraction(-1)))

    def __neg__(self) -> "SingularForm":
        return self.scale(Const(Fraction(-1)))

    def scale(self, factor) -> "SingularForm":
        return make_form(self.chart, self.degree,
                         [(k, mul(factor, c), i) for k, c, i in self.terms],
                         self.kind)

    @property
    def is_zero_form(self) -> bool:
        return not self.terms

    def max_pole(self) -> int:
        return max((k for k, _, _ in self.terms), default=0)

    def coefficient(self, k: int, idx: Sequence[str]) -> Expr:
        srt = _sorted_index(self.chart, idx)
        if srt is None:
            return ZERO
        sign, key = srt
        for k0, c, i in self.terms:
            if k0 == k and i == key:
                return mul(sign, c)
        return ZERO


def make_form(chart_: Chart, degree: int, terms, kind: str = "form") -> SingularForm:
    """Normalize: sort indices, absorb bare x powers from coefficients into
    the Laurent exponent, merge duplicates, drop zero coefficients."""
    merged: dict = {}
    for k, coeff, idx in terms:
        if len(idx) != degree:
            raise GeometryError(f"index {idx} does not match degree {degree}")
        srt = _sorted_index(chart_, idx)
        if srt is None:
            continue
        sign, key = srt
        coeff = mul(sign, coeff)
        if chart_.x is not None:
            for j, part in split_x_power(coeff, chart_.x).items():
                kk = int(k) - j
                slot = (kk, key)
                merged[slot] = add(merged.get(slot, ZERO), part)
        else:
            slot = (int(k), key)
            merged[slot] = add(merged.get(slot, ZERO), coeff)
    out = []
    for (k, key), coeff in merged.items():
        coeff = canon(coeff)
        if not is_provably_zero(coeff):
            out.append((k, coeff, key))
    out.sort(key=lambda t: (-t[0], t[2]))
    return SingularForm(chart_, degree, tuple(out), kind)


def zero_form(chart_: Chart, degree: int, kind: str = "form") -> SingularForm:
    return SingularForm(chart_, degree, (), kind)


def form_from_terms(chart_: Chart, terms, kind: str = "form") -> SingularForm:
    degree = len(terms[0][2]) if terms else 0
    return make_form(chart_, degree, terms, kind)


def smooth_form(chart_: Chart, coeff_by_index: Mapping[tuple, Expr]) -> SingularForm:
    terms = [(0, c, idx) for idx, c in coeff_by_index.items()]
    degree = len(next(iter(coeff_by_index))) if coeff_by_index else 0
    return make_form(chart_, degree, terms)


def wedge(a: SingularForm, b: SingularForm) -> SingularForm:
    if a.chart != b.chart:
        raise GeometryError("chart mismatch in wedge")
    if a.kind != b.kind:
        raise GeometryError("kind mismatch in wedge")
    terms = []
    for k1, c1, i1 in a.terms:
        for k2, c2, i2 in b.terms:
            if set(i1) & set(i2):
                continue
            terms.append((k1 + k2, mul(c1, c2), i1 + i2))
    return make_form(a.chart, a.degree + b.degree, terms, a.kind)


def exterior_derivative(f: SingularForm) -> SingularForm:
    """d(x^{-k} g dI) = -k x^{-k-1} dx wedge g dI + x^{-k} dg wedge dI."""
    if f.kind != "form":
        raise GeometryError("exterior derivative applies to forms")
    ch = f.chart
    terms = []
    for k, c, idx in f.terms:
        if ch.x is not None and k != 0 and ch.x not in idx:
            terms.append((k + 1, mul(-k, c), (ch.x,) + idx))
        for name in ch.names:
            if name in idx:
                continue
            dc = differentiate(c, name)
            if is_provably_zero(dc):
                continue
            terms.append((k, dc, (name,) + idx))
    return make_form(ch, f.degree + 1, terms)


def interior_product(v: SingularForm, f: SingularForm) -> SingularForm:
    """Contraction of a multivector into a form; i_{X wedge Y} = i_X i_Y."""
    if v.chart != f.chart:
        raise GeometryError("chart mismatch in contraction")
    if v.kind != "vector" or f.kind != "form":
        raise GeometryError("contraction takes (multivector, form)")
    if v.degree > f.degree:
        raise GeometryError("multivector degree exceeds form degree")
    out_terms = []
    for kv, cv, iv in v.terms:
        partial = [(kf, mul(cv, cf), idxf) for kf, cf, idxf in f.terms]
        # contract the vector factors right-to-left: i_{v1^v2} = i_v1 i_v2
        for name in reversed(iv):
            nxt = []
            for k, c, idx in partial:
                if name not in idx:
                    continue
                pos = idx.index(name)
                sign = (-1) ** pos
                nxt.append((k, mul(sign, c), idx[:pos] + idx[pos + 1:]))
            partial = nxt
        out_terms.extend((kv + k, c, idx) for k, c, idx in partial)
    return make_form(f.chart, f.degree - v.degree, out_terms)


def top_power(f: SingularForm, n: int) -> SingularForm:
    if f.degree != 2:
        raise GeometryError("top_power expects a degree-2 form")
    out = f
    for _ in range(n - 1):
        out = wedge(out, f)
    return out


@dataclass(frozen=True)
class CoordinateMap:
    source: Chart
    target: Chart
    exprs: tuple  # one Expr per target coordinate, in source variables

    def __post_init__(self):
        if len(self.exprs) != self.target.dim:
            raise GeometryError("map needs one expression per target coordinate")
        allowed = set(self.source.names)
        for e in self.exprs:
            bad = free_vars(e) - allowed
            if bad:
                raise GeometryError(f"map expression uses unknown variables {sorted(bad)}")

    def component(self, name: str) -> Expr:
        return self.exprs[self.target.index(name)]

    def substitution(self) -> dict:
        return {n: e for n, e in zip(self.target.names, self.exprs)}

    def is_b_map(self, n_samples: int = 50) -> bool:
        """Pullback of the target Z coordinate is (positive) * source x."""
        if self.target.x is None or self.source.x is None:
            return False
        phi = self.component(self.target.x)
        parts = split_x_power(phi, self.source.x)
        if set(parts) - {1}:
            return False
        factor = parts.get(1, ZERO)
        box = self.source.box()
        from .expr import sample_points
        for pt in sample_points(sorted(free_vars(factor)), box, n_samples):
            if float(evaluate(factor, pt)) <= 0:
                return False
        return True


def compose(outer: CoordinateMap, inner: CoordinateMap) -> CoordinateMap:
    if inner.target != outer.source:
        raise GeometryError("maps do not compose")
    sub = inner.substitution()
    return CoordinateMap(inner.source, outer.target,
                         tuple(substitute(e, sub) for e in outer.exprs))


def pullback(m: CoordinateMap, f: SingularForm) -> SingularForm:
    if f.chart != m.target:
        raise GeometryError("form does not live on the map's target chart")
    if f.kind != "form":
        raise GeometryError("pullback applies to forms")
    sub = m.substitution()
    ch = m.source
    terms = []
    for k, c, idx in f.terms:
        coeff = substitute(c, sub)
        pieces = [(coeff, ())]
        for name in idx:
            phi = m.component(name)
            nxt = []
            for cf, partial in pieces:
                for src in ch.names:
                    if src in partial:
                        continue
                    d = differentiate(phi, src)
                    if is_provably_zero(d):
                        continue
                    nxt.append((mul(cf, d), partial + (src,)))
            pieces = nxt
        for cf, partial in pieces:
            if k != 0:
                cf = mul(cf, powx(m.component(m.target.x), -k))
            terms.append((0, cf, partial))
    return make_form(ch, f.degree, terms)


@dataclass(frozen=True)
class LaurentSlot:
    exponent: int  # the k of x^{-k}
    dx_part: SingularForm  # alpha with term x^{-k} dx wedge alpha
    rest: SingularForm  # beta with term x^{-k} beta (no dx factor)


def laurent_decompose(f: SingularForm, order: int = 0):
    """Expand coefficients in x about Z and split off dx components.

    Returns LaurentSlots sorted by decreasing exponent, covering exponents
    from the deepest pole down to -order.  Coefficients must be analytic
    in x at 0; PiecewiseDecay nodes in x are rejected.
    """
    ch = f.chart
    if ch.x is None:
        raise GeometryError("chart has no Z-defining coordinate")
    xname = ch.x
    slots: dict = {}

    def put(expo, idx, coeff):
        has_dx = xname in idx
        if has_dx:
            pos = idx.index(xname)
            sign = (-1) ** pos
            idx = idx[:pos] + idx[pos + 1:]
            coeff = mul(sign, coeff)
        dx_terms, rest_terms = slots.setdefault(expo, ([], []))
        (dx_terms if has_dx else rest_terms).append((0, coeff, idx))

    for k, c, idx in f.terms:
        _check_expandable(c, xname)
        g = c
        for j in range(0, k + order + 1):
            cj = substitute(g, {xname: ZERO})
            cj = mul(Fraction(1, math.factorial(j)), cj)
            cj = canon(cj)
            if not is_provably_zero(cj):
                put(k - j, idx, cj)
            g = differentiate(g, xname)
    out = []
    for expo in sorted(slots, reverse=True):
        dx_terms, rest_terms = slots[expo]
        if expo < -order:
            continue
        dxf = make_form(ch, f.degree - 1, dx_terms) if dx_terms else zero_form(ch, f.degree - 1)
        restf = make_form(ch, f.degree, rest_terms) if rest_terms else zero_form(ch, f.degree)
        if dxf.is_zero_form and restf.is_zero_form:
            continue
        out.append(LaurentSlot(expo, dxf, restf))
    return out


def reassemble(ch: Chart, degree: int, slots) -> SingularForm:
    terms = []
    for s in slots:
        for k, c, idx in s.dx_part.terms:
            terms.append((s.exponent + k, c, (ch.x,) + idx))
        for k, c, idx in s.rest.terms:
            terms.append((s.exponent + k, c, idx))
    return make_form(ch, degree, terms)


def _check_expandable(e: Expr, xname: str):
    if isinstance(e, PiecewiseDecay):
        if xname in free_vars(e.arg):
            raise GeometryError("piecewise coefficient straddles x = 0; "
                                "expansion unsupported")
        return
    for child in _children(e):
        _check_expandable(child, xname)


def _children(e: Expr):
    from .expr import Sum, Prod, Pow, Exp, Sin, Cos
    if isinstance(e, (Sum, Prod)):
        return e.args
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, (Exp, Sin, Cos)):
        return (e.arg,)
    return ()


# ---------------------------------------------------------------------------
# pointwise evaluation


def coefficient_matrix(f: SingularForm, point: Mapping[str, float],
                       drop_pole: bool = False):
    """Numeric antisymmetric matrix of a degree-2 form/bivector at a point.

    With drop_pole=True, the x^{-k} factors are omitted (frame-normalized
    evaluation); otherwise they are evaluated and x must be nonzero for
    terms with k > 0.
    """
    if f.degree != 2:
        raise GeometryError("matrix evaluation expects degree 2")
    ch = f.chart
    n = ch.dim
    m = [[0.0] * n for _ in range(n)]
    for k, c, (a, b) in f.terms:
        val = float(evaluate(c, point))
        if k != 0 and not drop_pole:
            val *= float(point[ch.x]) ** (-k)
        i, j = ch.index(a), ch.index(b)
        m[i][j] += val
        m[j][i] -= val
    return m


def evaluate_form(f: SingularForm, point: Mapping[str, float]) -> dict:
    """Numeric coefficients keyed by multi-index (poles evaluated)."""
    out: dict = {}
    ch = f.chart
    for k, c, idx in f.terms:
        val = float(evaluate(c, point))
        if k != 0:
            val *= float(point[ch.x]) ** (-k)
        out[idx] = out.get(idx, 0.0) + val
    return out


def forms_equal(a: SingularForm, b: SingularForm, n_samples: int = 200,
                tol: float = 1e-9, domain: Optional[dict] = None) -> ZeroVerdictMap:
    """Per-slot zero verdicts for a - b."""
    diff = a - b
    dom = dict(domain or a.chart.box())
    verdicts = {}
    for k, c, idx in diff.terms:
        verdicts[(k, idx)] = is_zero(c, dom, n_samples, tol)
    return ZeroVerdictMap(verdicts)


def pointwise_equal(a: SingularForm, b: SingularForm, n_samples: int = 200,
                    tol: float = 1e-8,
                    domain: Optional[dict] = None) -> "ZeroVerdictMap":
    """Slot-insensitive comparison: total numeric coefficients per index at
    sampled points, with poles evaluated (so differently graded but equal
    forms compare as equal).  Relative tolerance against the larger value."""
    if a.chart != b.chart or a.degree != b.degree or a.kind != b.kind:
        raise GeometryError("pointwise comparison needs matching shapes")
    dom = dict(domain or a.chart.box())
    if a.chart.x is not None:
        # keep samples away from the pole locus
        lo, hi = dom[a.chart.x]
        span = float(hi) - float(lo)
        if float(lo) < 0.0 < float(hi):
            dom[a.chart.x] = (0.05 * span, float(hi))
    pts = sample_points(a.chart.names, dom, n_samples)
    verdicts: dict = {}
    indices = {idx for _, _, idx in a.terms} | {idx for _, _, idx in b.terms}
    for idx in sorted(indices):
        worst = 0.0
        witness = None
        for pt in pts:
            va = _total_coefficient(a, idx, pt)
            vb = _total_coefficient(b, idx, pt)
            err = abs(va - vb) / max(1.0, abs(va), abs(vb))
            if err > worst:
                worst = err
                witness = tuple(sorted(pt.items()))
        kind = "numerically-zero" if worst <= tol else "nonzero"
        verdicts[idx] = ZeroVerdict(kind, worst, tol,
                                    witness if kind == "nonzero" else None)
    return ZeroVerdictMap(verdicts)


def _total_coefficient(f: SingularForm, idx: tuple, pt: dict) -> float:
    total = 0.0
    for k, c, i in f.terms:
        if i != idx:
            continue
        v = float(evaluate(c, pt))
        if k != 0:
            v *= float(pt[f.chart.x]) ** (-k)
        total += v
    return total


@dataclass(frozen=True)
class ZeroVerdictMap:
    verdicts: dict

    @property
    def is_zero(self) -> bool:
        return all(v.is_zero for v in self.verdicts.values())

    def max_abs(self) -> float:
        return max((v.max_abs for v in self.verdicts.values()), default=0.0)


# ---------------------------------------------------------------------------
# serialization


def form_to_json(f: SingularForm) -> str:
    doc = {
        "chart": {
            "names": list(f.chart.names),
            "ranges": [list(r) for r in f.chart.ranges],
            "x": f.chart.x,
            "circles": sorted(f.chart.circles),
        },
        "degree": f.degree,
        "kind": f.kind,
        "terms": [
            {"k": k, "coeff": ser(c), "index": list(idx)} for k, c, idx in f.terms
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def form_from_json(text: str) -> SingularForm:
    doc = json.loads(text)
    c = doc["chart"]
    ch = Chart(tuple(c["names"]), tuple(tuple(r) for r in c["ranges"]),
               c.get("x"), frozenset(c.get("circles", ())))
    terms = [(t["k"], parse(t["coeff"]), tuple(t["index"])) for t in doc["terms"]]
    return make_form(ch, doc["degree"], terms, doc.get("kind", "form"))
