"""Rescaled coframes and the judgments they induce.

A frame is a list of generators (smooth covector, weight w): the actual
coframe element is covector / x^w.  A singular form is a smooth section of
the frame when, rewritten in the coframe basis, every coefficient has
Laurent exponent <= 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .certificates import Certificate, certify_positive, chart_grid, proven, refuted
from .expr import (
    Const, Expr, ONE, ZERO, add, canon, evaluate, is_provably_zero, mul, powx,
    split_x_power, substitute, var,
)
from .geometry import (
    Chart, GeometryError, SingularForm, exterior_derivative, laurent_decompose,
    make_form, smooth_form, top_power, wedge, zero_form,
)
from .linalg import sym_det, sym_inverse

FLAVORS = ("b", "zero", "sc", "sc^k", "b^k", "zero^m-b^k", "rigged-sc", "rigged-b^k")


class FrameError(GeometryError):
    pass


@dataclass(frozen=True)
class AlgebroidFrame:
    flavor: str
    chart: Chart
    generators: tuple  # of (label: str, covector: SingularForm deg 1 smooth, weight: int)

    def __post_init__(self):
        if len(self.generators) != self.chart.dim:
            raise FrameError("frame rank must equal chart dimension")

    @property
    def weights(self) -> tuple:
        return tuple(w for _, _, w in self.generators)

    @property
    def labels(self) -> tuple:
        return tuple(lbl for lbl, _, _ in self.generators)

    def coefficient_matrix(self):
        """Rows: generator covectors expressed in the coordinate basis."""
        ch = self.chart
        m = []
        for _, cov, _ in self.generators:
            row = [ZERO] * ch.dim
            for k, c, (name,) in cov.terms:
                if k != 0:
                    raise FrameError("frame covectors must be smooth")
                row[ch.index(name)] = c
            m.append(row)
        return m

    def volume_weight(self) -> int:
        return sum(self.weights)


def _coordinate_covector(ch: Chart, name: str) -> SingularForm:
    return smooth_form(ch, {(name,): ONE})


def coframe(flavor: str, chart_: Chart, k: int = 1, m: int = 1,
            aux: Optional[dict] = None) -> AlgebroidFrame:
    """Build the coframe of the requested flavor on a chart with Z = {x=0}.

    Weight tables (weight w means generator = covector / x^w):
      b            dx/x,      dy_j
      zero         dx/x,      dy_j/x
      sc           dx/x^2,    dy_j/x
      sc^k         dx/x^{k+1}, dy_j/x^k
      b^k          dx/x^k,    dy_j
      zero^m-b^k   dx/x^{k+m}, dy_j/x^m
      rigged-sc    dx/x^3, alpha/x^3, xi-covectors/x^2   (aux: alpha, xi)
      rigged-b^k   dx/x^k, theta/x^k, rest smooth        (aux: theta, rest)
    """
    if chart_.x is None:
        raise FrameError("coframe requires a chart with a Z coordinate")
    xname = chart_.x
    others = [n for n in chart_.names if n != xname]
    dxc = _coordinate_covector(chart_, xname)

    def plain(wx: int, wy: int) -> AlgebroidFrame:
        gens = [(f"d{xname}", dxc, wx)]
        gens += [(f"d{n}", _coordinate_covector(chart_, n), wy) for n in others]
        return AlgebroidFrame(flavor, chart_, tuple(gens))

    if flavor == "b":
        return plain(1, 0)
    if flavor == "zero":
        return plain(1, 1)
    if flavor == "sc":
        return plain(2, 1)
    if flavor == "sc^k":
        return plain(k + 1, k)
    if flavor == "b^k":
        return plain(k, 0)
    if flavor == "zero^m-b^k":
        return plain(k + m, m)
    if flavor == "rigged-sc":
        if not aux or "alpha" not in aux or "xi" not in aux:
            raise FrameError("rigged-sc needs aux={'alpha': 1-form, 'xi': [1-forms]}")
        gens = [(f"d{xname}", dxc, 3), ("alpha", aux["alpha"], 3)]
        gens += [(f"xi{i}", covec, 2) for i, covec in enumerate(aux["xi"])]
        return AlgebroidFrame(flavor, chart_, tuple(gens))
    if flavor == "rigged-b^k":
        if not aux or "theta" not in aux or "rest" not in aux:
            raise FrameError("rigged-b^k needs aux={'theta': 1-form, 'rest': [1-forms]}")
        gens = [(f"d{xname}", dxc, k), ("theta", aux["theta"], k)]
        gens += [(f"h{i}", covec, 0) for i, covec in enumerate(aux["rest"])]
        return AlgebroidFrame(flavor, chart_, tuple(gens))
    raise FrameError(f"unknown flavor '{flavor}'")


def rewrite_in_frame(f: SingularForm, frame: AlgebroidFrame):
    """Express f in the frame's coframe basis.

    Returns {(exponent, generator-label multi-index): coeff} where the form
    equals sum coeff * x^{-exponent} * wedge of generators.
    """
    if f.chart != frame.chart:
        raise FrameError("chart mismatch")
    ch = f.chart
    mat = frame.coefficient_matrix()
    inv = sym_inverse(mat)
    weights = frame.weights
    labels = frame.labels
    # dc_j = sum_l inv[j][l] * x^{w_l} * gen_l
    out: dict = {}
    for k, c, idx in f.terms:
        expansions = [
            [(l, inv[ch.index(name)][l]) for l in range(ch.dim)
             if not is_provably_zero(inv[ch.index(name)][l])]
            for name in idx
        ]
        for combo in itertools.product(*expansions):
            ls = [l for l, _ in combo]
            if len(set(ls)) != len(ls):
                continue
            sign = _perm_sign(ls)
            coeff = mul(Const(Fraction(sign)), c, *[e for _, e in combo])
            wsum = sum(weights[l] for l in ls)
            key_idx = tuple(sorted(ls))
            # absorb bare x powers from the coefficient
            for j, part in split_x_power(coeff, ch.x).items():
                slot = (k - wsum - j, key_idx)
                out[slot] = add(out.get(slot, ZERO), part)
    result = {}
    for (expo, ls), coeff in out.items():
        coeff = canon(coeff)
        if not is_provably_zero(coeff):
            result[(expo, tuple(labels[l] for l in ls))] = coeff
    return result


def _perm_sign(seq) -> int:
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class SectionVerdict:
    accepted: bool
    offending: tuple = ()  # ((exponent, labels), ...) with exponent > 0

    def __bool__(self) -> bool:
        return self.accepted


def is_smooth_section(f: SingularForm, frame: AlgebroidFrame) -> SectionVerdict:
    coeffs = rewrite_in_frame(f, frame)
    bad = tuple(sorted((expo, labels) for (expo, labels) in coeffs if expo > 0))
    return SectionVerdict(not bad, bad)


def nondegenerate(f: SingularForm, frame: AlgebroidFrame, grid=None,
                  tol: float = 1e-8) -> Certificate:
    """Certify wedge^n f is nonzero against the frame volume, x = 0 included."""
    if f.degree != 2:
        raise FrameError("non-degeneracy expects a degree-2 form")
    ch = f.chart
    if ch.dim % 2:
        raise FrameError("non-degeneracy expects an even-dimensional chart")
    n = ch.dim // 2
    verdict = is_smooth_section(f, frame)
    if not verdict:
        return refuted({}, detail=f"not a smooth section: {verdict.offending}")
    top = top_power(f, n)
    wsum = frame.volume_weight()
    det = sym_det(frame.coefficient_matrix())
    # top = sum_t c_t x^{-k_t} dVol; frame volume = det / x^{wsum} dVol
    pieces = []
    for k, c, _ in top.terms:
        if k > wsum:
            return refuted({}, detail=f"top power exceeds frame volume pole "
                                      f"({k} > {wsum})")
        pieces.append(mul(c, powx(var(ch.x), wsum - k)) if k != wsum else c)
    if not pieces:
        return refuted({}, detail="top power vanishes identically")
    scalar = canon(mul(add(*pieces), powx(det, -1)))
    if grid is None:
        grid = chart_grid(ch)
    return certify_positive(lambda pt: abs(float(evaluate(scalar, pt))), grid, tol,
                            detail="|wedge^n omega / frame volume|")


@dataclass(frozen=True)
class NoGoReport:
    applicable: bool
    beta_forced_zero: Optional[bool] = None
    top_power_vanishes: Optional[bool] = None
    detail: str = ""

    @property
    def refutes(self) -> bool:
        return bool(self.applicable and self.beta_forced_zero
                    and self.top_power_vanishes)


def no_go_check(m: int, k: int, dim: int, seed: int = 1) -> NoGoReport:
    """For omega = dx/x^{k+m} wedge alpha + beta/x^m with m > 0, k != 1,
    dim > 2: closedness forces beta|_Z = 0, and then wedge^n omega vanishes
    at Z.  Both facts are derived on randomized smooth alpha, beta."""
    if m <= 0 or k == 1 or dim <= 2 or dim % 2:
        return NoGoReport(False, detail="parameters outside the obstruction range")
    n = dim // 2
    names = ["x"] + [f"y{i}" for i in range(1, dim)]
    ch = Chart(tuple(names), tuple((-1.0, 1.0) for _ in names), "x")

    rng = _lcg(seed)
    ys = names[1:]

    def rand_coeff():
        terms = [Const(Fraction(next(rng) % 7 - 3))]
        for nm in ys[:3]:
            terms.append(mul(Const(Fraction(next(rng) % 5 - 2)), var(nm)))
        return add(*terms)

    alpha = smooth_form(ch, {(nm,): rand_coeff() for nm in ys})
    beta_terms = {}
    for i in range(len(ys)):
        for j in range(i + 1, len(ys)):
            beta_terms[(ys[i], ys[j])] = rand_coeff()
    beta = smooth_form(ch, beta_terms)

    omega = make_form(ch, 2,
                      [(k + m, c, ("x",) + idx) for _, c, idx in alpha.terms]
                      + [(m, c, idx) for _, c, idx in beta.terms])
    d_omega = exterior_derivative(omega)

    # closedness at the x^{-(m+1)} dx-slot: equals -m * beta|_Z exactly,
    # because k + m != m + 1 keeps the d(alpha) term out of this slot
    slot_ok = True
    slots = laurent_decompose(d_omega, order=0)
    target = beta.scale(Const(Fraction(-m)))
    found = None
    for s in slots:
        if s.exponent == m + 1:
            found = s
            break
    if found is None:
        slot_ok = is_provably_zero(canon(add(*[c for _, c, _ in target.terms], ZERO)))
    else:
        diff = found.dx_part - _restrict_to_z(target)
        slot_ok = diff.is_zero_form

    # impose beta|_Z = 0 (beta -> x * beta) and inspect the top power at Z
    omega2 = make_form(ch, 2,
                       [(k + m, c, ("x",) + idx) for _, c, idx in alpha.terms]
                       + [(m - 1, c, idx) for _, c, idx in beta.terms])
    top = top_power(omega2, n)
    vol_pole = k + m * n
    vanishes = True
    for kt, c, _ in top.terms:
        # frame-normalized coefficient is c * x^{vol_pole - kt}; it must
        # vanish at x = 0
        if kt < vol_pole:
            continue
        at_z = canon(substitute(c, {"x": ZERO}))
        if not is_provably_zero(at_z):
            vanishes = False
    return NoGoReport(True, slot_ok, vanishes,
                      detail=f"m={m}, k={k}, dim={dim}")


def _restrict_to_z(f: SingularForm) -> SingularForm:
    terms = [(0, substitute(c, {f.chart.x: ZERO}), idx)
             for k, c, idx in f.terms if k == 0 and f.chart.x not in idx]
    return make_form(f.chart, f.degree, terms)


def _lcg(seed: int):
    state = seed * 2654435761 % (2 ** 31)
    while True:
        state = (1103515245 * state + 12345) % (2 ** 31)
        yield state
