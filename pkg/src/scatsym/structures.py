"""Symplectic, Poisson, contact, and cosymplectic verifications."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebroids import AlgebroidFrame, SectionVerdict, coframe, is_smooth_section, nondegenerate
from .certificates import (
    Certificate, certify_positive, chart_grid, proven, refuted, verified,
)
from .expr import (
    Const, Expr, ONE, ZERO, ZeroVerdict, add, canon, evaluate, is_provably_zero,
    is_zero, mul, powx, substitute, var,
)
from .geometry import (
    Chart, CoordinateMap, GeometryError, SingularForm, ZeroVerdictMap,
    coefficient_matrix, exterior_derivative, forms_equal, interior_product,
    laurent_decompose, make_form, smooth_form, top_power, wedge, zero_form,
)
from .linalg import sym_adjugate, sym_det, sym_inverse

TOL_CLOSED = 1e-9
TOL_NONDEG = 1e-8


class StructureError(GeometryError):
    pass


def closedness(f: SingularForm, n_samples: int = 500,
               tol: float = TOL_CLOSED) -> ZeroVerdictMap:
    df = exterior_derivative(f)
    return forms_equal(df, zero_form(f.chart, f.degree + 1),
                       n_samples=n_samples, tol=tol)


@dataclass(frozen=True)
class SymplecticReport:
    section: SectionVerdict
    closed: ZeroVerdictMap
    nondegeneracy: Certificate

    @property
    def passed(self) -> bool:
        return bool(self.section) and self.closed.is_zero and self.nondegeneracy.passed


def verify_sc_symplectic(omega: SingularForm, frame: Optional[AlgebroidFrame] = None,
                         grid=None, n_samples: int = 500) -> SymplecticReport:
    if omega.degree != 2:
        raise StructureError("expected a degree-2 form")
    if frame is None:
        frame = coframe("sc", omega.chart)
    section = is_smooth_section(omega, frame)
    closed = closedness(omega, n_samples)
    nd = nondegenerate(omega, frame, grid) if section else refuted(
        {}, detail="not a smooth section")
    return SymplecticReport(section, closed, nd)


# ---------------------------------------------------------------------------
# contact / cosymplectic data


def z_chart(ch: Chart) -> Chart:
    if ch.x is None:
        raise StructureError("chart has no Z coordinate")
    names = tuple(n for n in ch.names if n != ch.x)
    ranges = tuple(r for n, r in zip(ch.names, ch.ranges) if n != ch.x)
    circles = frozenset(c for c in ch.circles if c != ch.x)
    return Chart(names, ranges, None, circles)


def restrict_to_z(f: SingularForm) -> SingularForm:
    """Restrict a smooth form to Z = {x = 0}: drop dx terms, set x = 0."""
    ch = f.chart
    zch = z_chart(ch)
    terms = []
    for k, c, idx in f.terms:
        if k > 0 or ch.x in idx:
            continue
        coeff = substitute(c, {ch.x: ZERO}) if k == 0 else mul(
            powx(var(ch.x), -k), c)
        if k < 0:
            coeff = ZERO  # vanishes at Z
        terms.append((0, coeff, idx))
    return make_form(zch, f.degree, terms)


def lift(f: SingularForm, ch: Chart, k: int = 0) -> SingularForm:
    """Interpret a form on Z as a form on the chart with x, scaled x^{-k}."""
    return make_form(ch, f.degree, [(k + k0, c, idx) for k0, c, idx in f.terms],
                     f.kind)


@dataclass(frozen=True)
class SampledField:
    """Reeb field sampled on a grid when no symbolic solution is recognized."""
    chart: Chart
    samples: tuple  # of (point items tuple, vector tuple)


@dataclass(frozen=True)
class ContactData:
    chart: Chart  # chart of Z
    alpha: SingularForm
    reeb: object  # SingularForm (kind vector) or SampledField

    def verify(self, grid=None, tol: float = TOL_NONDEG) -> Certificate:
        n2 = self.chart.dim  # 2n - 1
        n = (n2 + 1) // 2
        vol = self.alpha
        da = exterior_derivative(self.alpha)
        for _ in range(n - 1):
            vol = wedge(vol, da)
        if grid is None:
            grid = chart_grid(self.chart)
        from .geometry import evaluate_form
        cert = certify_positive(
            lambda pt: max(abs(v) for v in evaluate_form(vol, pt).values())
            if vol.terms else 0.0,
            grid, tol, detail="|alpha wedge (d alpha)^{n-1}|")
        if not cert.passed:
            return cert
        if isinstance(self.reeb, SingularForm):
            pair = interior_product(self.reeb, self.alpha)
            rest = interior_product(self.reeb, da)
            ok1 = forms_equal(pair, _one_form_scalar(self.chart), tol=tol)
            ok2 = forms_equal(rest, zero_form(self.chart, 1), tol=tol)
            if not (ok1.is_zero and ok2.is_zero):
                return refuted({}, detail="Reeb identities fail")
        return cert


def _one_form_scalar(ch: Chart) -> SingularForm:
    return make_form(ch, 0, [(0, ONE, ())])


@dataclass(frozen=True)
class CosymplecticData:
    chart: Chart
    theta: SingularForm  # closed 1-form
    eta: SingularForm  # closed 2-form
    reeb: object

    def verify(self, grid=None, tol: float = TOL_NONDEG) -> Certificate:
        if not closedness(self.theta).is_zero:
            return refuted({}, detail="theta not closed")
        if not closedness(self.eta).is_zero:
            return refuted({}, detail="eta not closed")
        n = (self.chart.dim + 1) // 2
        vol = self.theta
        for _ in range(n - 1):
            vol = wedge(vol, self.eta)
        if grid is None:
            grid = chart_grid(self.chart)
        from .geometry import evaluate_form
        cert = certify_positive(
            lambda pt: max(abs(v) for v in evaluate_form(vol, pt).values())
            if vol.terms else 0.0,
            grid, tol, detail="|theta wedge eta^{n-1}|")
        if not cert.passed:
            return cert
        if isinstance(self.reeb, SingularForm):
            ok1 = forms_equal(interior_product(self.reeb, self.theta),
                              _one_form_scalar(self.chart), tol=tol)
            ok2 = forms_equal(interior_product(self.reeb, self.eta),
                              zero_form(self.chart, 1), tol=tol)
            if not (ok1.is_zero and ok2.is_zero):
                return refuted({}, detail="Reeb identities fail")
        return cert


def reeb(alpha: SingularForm, closed_two: Optional[SingularForm] = None,
         grid=None, tol: float = TOL_NONDEG):
    """Field R with alpha(R) = 1 and i_R d(alpha) = 0 (or i_R eta = 0 for the
    cosymplectic variant when closed_two is given).

    Tries symbolic candidates first (single coordinate fields and the
    coefficient-vector ansatz); otherwise solves the linear system per grid
    point and returns a SampledField.
    """
    ch = alpha.chart
    two = closed_two if closed_two is not None else exterior_derivative(alpha)

    def check(cand: SingularForm) -> bool:
        pair = interior_product(cand, alpha)
        rest = interior_product(cand, two)
        return (forms_equal(pair, _one_form_scalar(ch), tol=tol).is_zero
                and forms_equal(rest, zero_form(ch, 1), tol=tol).is_zero)

    for name in ch.names:
        cand = make_form(ch, 1, [(0, ONE, (name,))], "vector")
        if check(cand):
            return cand
    # metric-dual ansatz: R components = alpha coefficients
    cand = make_form(ch, 1, [(k, c, idx) for k, c, idx in alpha.terms], "vector")
    if check(cand):
        return cand
    # numeric fallback
    import numpy as np
    if grid is None:
        grid = chart_grid(ch)
    d = ch.dim
    samples = []
    from .geometry import evaluate_form
    for pt in grid:
        a = np.zeros(d)
        for idx, v in evaluate_form(alpha, pt).items():
            a[ch.index(idx[0])] = v
        m = np.array(coefficient_matrix(two, pt))
        sys = np.vstack([a, m])
        rhs = np.zeros(d + 1)
        rhs[0] = 1.0
        sol, res, rank, _ = np.linalg.lstsq(sys, rhs, rcond=None)
        err = np.linalg.norm(sys @ sol - rhs)
        if err > 1e-6:
            return refuted(pt, err, detail="contact condition fails: singular system")
        samples.append((tuple(sorted(pt.items())), tuple(map(float, sol))))
    return SampledField(ch, tuple(samples))


# ---------------------------------------------------------------------------
# contact structure induced on Z


def induced_contact(omega: SingularForm, grid=None) -> ContactData:
    """Read alpha from the dx/x^3 slot and check the x^{-2} slot is -d(alpha)/2
    at Z."""
    ch = omega.chart
    slots = {s.exponent: s for s in laurent_decompose(omega, order=0)}
    if 3 not in slots or slots[3].dx_part.is_zero_form:
        raise StructureError("no dx/x^3 slot; not a scattering form")
    zch = z_chart(ch)
    alpha = _drop_x(slots[3].dx_part, zch)
    beta = _drop_x(slots[2].rest, zch) if 2 in slots else zero_form(zch, 2)
    expected = exterior_derivative(alpha).scale(Const(Fraction(-1, 2)))
    diff = forms_equal(beta, expected, tol=TOL_CLOSED)
    if not diff.is_zero:
        raise StructureError("x^{-2} slot does not equal -d(alpha)/2 at Z; "
                             "form is not closed")
    r = reeb(alpha, grid=grid)
    return ContactData(zch, alpha, r)


def _drop_x(f: SingularForm, zch: Chart) -> SingularForm:
    xname = f.chart.x
    terms = []
    for k, c, idx in f.terms:
        if xname in idx or k != 0:
            raise StructureError("slot coefficient still involves x")
        terms.append((0, c, idx))
    return make_form(zch, f.degree, terms)


# ---------------------------------------------------------------------------
# duality


def _full_matrix(f: SingularForm):
    """Symbolic antisymmetric coefficient matrix with poles folded in."""
    ch = f.chart
    d = ch.dim
    m = [[ZERO] * d for _ in range(d)]
    for k, c, (a, b) in f.terms:
        entry = mul(c, powx(var(ch.x), -k)) if k != 0 else c
        i, j = ch.index(a), ch.index(b)
        m[i][j] = add(m[i][j], entry)
        m[j][i] = add(m[j][i], mul(Const(Fraction(-1)), entry))
    return m


def _matrix_to_bivector(ch: Chart, m, kind: str) -> SingularForm:
    terms = []
    d = ch.dim
    for i in range(d):
        for j in range(i + 1, d):
            if is_provably_zero(canon(m[i][j])):
                continue
            terms.append((0, m[i][j], (ch.names[i], ch.names[j])))
    return make_form(ch, 2, terms, kind)


def dualize(omega: SingularForm) -> SingularForm:
    """Inverse bivector: pi matrix = (omega matrix)^{-1}, so that the sharp
    map of pi inverts the flat map of omega."""
    if omega.degree != 2 or omega.kind != "form":
        raise StructureError("dualize expects a degree-2 form")
    w = _full_matrix(omega)
    inv = sym_inverse(w)
    return _matrix_to_bivector(omega.chart, inv, "vector")


def dualize_inverse(pi: SingularForm) -> SingularForm:
    if pi.degree != 2 or pi.kind != "vector":
        raise StructureError("dualize_inverse expects a bivector")
    p = _full_matrix(pi)
    inv = sym_inverse(p)
    return _matrix_to_bivector(pi.chart, inv, "form")


def _sample_domain(ch: Chart, domain: Optional[dict]) -> dict:
    """Chart box with the x axis kept away from the pole locus."""
    dom = dict(domain or ch.box())
    if ch.x is not None and ch.x in dom:
        lo, hi = (float(v) for v in dom[ch.x])
        if lo < 0.0 < hi:
            dom[ch.x] = (0.05 * (hi - lo), hi)
    return dom


def dual_roundtrip_check(omega: SingularForm, n_samples: int = 100,
                         tol: float = 1e-8,
                         domain: Optional[dict] = None) -> Certificate:
    """dualize_inverse(dualize(omega)) = omega, certified numerically.

    The doubly adjugated coefficient matrix is kept as a raw expression DAG
    (no normal forms), so the check stays cheap even when the entries are
    piecewise or algebraic.  With W the matrix of omega and N = adj(W), the
    round trip evaluates det(W) * adj(N) / det(N)."""
    from .expr import evaluate_dag, sample_points
    ch = omega.chart
    d = ch.dim
    w = _full_matrix(omega)
    wadj = sym_adjugate(w, canonical=False)
    wdet = sym_det(w, canonical=False)
    padj = sym_adjugate(wadj, canonical=False)
    pdet = sym_det(wadj, canonical=False)
    dom = _sample_domain(ch, domain)
    pts = sample_points(ch.names, dom, n_samples)
    worst = 0.0
    for pt in pts:
        cache: dict = {}
        det_v = float(evaluate_dag(wdet, pt, cache))
        pdet_v = float(evaluate_dag(pdet, pt, cache))
        if pdet_v == 0.0:
            return refuted(pt, detail="adjugate matrix is singular")
        for i in range(d):
            for j in range(i + 1, d):
                back = det_v * float(evaluate_dag(padj[i][j], pt, cache)) / pdet_v
                orig = float(evaluate_dag(w[i][j], pt, cache))
                err = abs(back - orig) / max(1.0, abs(back), abs(orig))
                if err > tol:
                    return refuted(pt, err,
                                   detail=f"round trip differs at entry "
                                          f"({i},{j})")
                worst = max(worst, err)
    return verified(len(pts), tol, tol - worst, detail="dualize round trip")


def dual_jacobi_check(omega: SingularForm, n_samples: int = 100,
                      tol: float = TOL_CLOSED,
                      domain: Optional[dict] = None) -> Certificate:
    """[pi, pi] = 0 for pi the dual of omega, with pi = adj(W)/det(W) held
    as a raw expression DAG; the alternative to dualize + schouten when the
    canonical dual is expensive to normalize."""
    from .expr import differentiate, evaluate_dag, sample_points
    ch = omega.chart
    d = ch.dim
    w = _full_matrix(omega)
    adj = sym_adjugate(w, canonical=False)
    det = sym_det(w, canonical=False)
    inv_det = powx(det, -1)
    p = [[mul(adj[i][j], inv_det) for j in range(d)] for i in range(d)]
    dp = [[[differentiate(p[i][j], nm) for j in range(d)] for i in range(d)]
          for nm in ch.names]
    dom = _sample_domain(ch, domain)
    pts = sample_points(ch.names, dom, n_samples)
    worst = 0.0
    for pt in pts:
        cache: dict = {}
        pv = [[float(evaluate_dag(p[i][j], pt, cache)) for j in range(d)]
              for i in range(d)]
        dv = [[[float(evaluate_dag(dp[m][i][j], pt, cache)) for j in range(d)]
               for i in range(d)] for m in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                for l in range(j + 1, d):
                    comp = 0.0
                    for m in range(d):
                        comp += (pv[m][i] * dv[m][j][l]
                                 + pv[m][j] * dv[m][l][i]
                                 + pv[m][l] * dv[m][i][j])
                    if abs(comp) > tol:
                        return refuted(pt, comp,
                                       detail=f"[pi,pi]^({i},{j},{l}) != 0")
                    worst = max(worst, abs(comp))
    if d <= 2:
        return proven(detail="Jacobi is automatic below three components")
    return verified(len(pts), tol, tol - worst, detail="[pi,pi] = 0")


def schouten_jacobi_check(pi: SingularForm, n_samples: int = 100,
                          tol: float = TOL_CLOSED,
                          domain: Optional[dict] = None) -> Certificate:
    """[pi,pi] = 0 componentwise via the coordinate Schouten formula."""
    if pi.degree != 2 or pi.kind != "vector":
        raise StructureError("expected a bivector")
    ch = pi.chart
    d = ch.dim
    p = _full_matrix(pi)
    from .expr import differentiate
    dom = dict(domain or ch.box())
    worst = 0.0
    count = 0
    for i in range(d):
        for j in range(i + 1, d):
            for l in range(j + 1, d):
                comp = ZERO
                for mdx in range(d):
                    comp = add(
                        comp,
                        mul(p[mdx][i], differentiate(p[j][l], ch.names[mdx])),
                        mul(p[mdx][j], differentiate(p[l][i], ch.names[mdx])),
                        mul(p[mdx][l], differentiate(p[i][j], ch.names[mdx])),
                    )
                v = is_zero(comp, dom, n_samples, tol)
                count += 1
                if not v.is_zero:
                    return refuted(dict(v.witness or ()), v.value or 0.0,
                                   detail=f"[pi,pi]^({i},{j},{l}) != 0")
                worst = max(worst, v.max_abs)
    if d <= 2 or count == 0:
        return proven(detail="Jacobi is automatic below three components")
    return verified(n_samples, tol, tol - worst, detail="[pi,pi] = 0")


# ---------------------------------------------------------------------------
# normal form and filling


def normal_form(ch: Chart, alpha: SingularForm, beta1: Optional[SingularForm],
                beta2: Optional[SingularForm]) -> SingularForm:
    """omega = dx/x^3 wedge (alpha + x^2 beta1) - d(alpha)/(2 x^2) + beta2,
    inputs given on the Z chart of ch."""
    zch = z_chart(ch)
    for b in (beta1, beta2):
        if b is not None and not closedness(b).is_zero:
            raise StructureError("beta inputs must be closed")
    xname = ch.x
    a = lift(alpha, ch)
    terms = [(3, c, (xname,) + idx) for k, c, idx in a.terms]
    if beta1 is not None:
        b1 = lift(beta1, ch)
        terms += [(1, c, (xname,) + idx) for k, c, idx in b1.terms]
    da = lift(exterior_derivative(alpha), ch)
    terms += [(2, mul(Const(Fraction(-1, 2)), c), idx) for k, c, idx in da.terms]
    if beta2 is not None:
        b2 = lift(beta2, ch)
        terms += [(0, c, idx) for k, c, idx in b2.terms]
    return make_form(ch, 2, terms)


@dataclass(frozen=True)
class FillingVerdict:
    filling: bool
    nonzero_slot: Optional[str] = None  # "b1" | "b2"
    liouville_contraction: Optional[ZeroVerdictMap] = None
    liouville_derivative: Optional[ZeroVerdictMap] = None

    @property
    def passed(self) -> bool:
        if not self.filling:
            return False
        return (self.liouville_contraction.is_zero
                and self.liouville_derivative.is_zero)


def decompose(omega: SingularForm):
    """Cohomology decomposition slots (a, b1, b2) of a normal-form omega."""
    ch = omega.chart
    zch = z_chart(ch)
    slots = {s.exponent: s for s in laurent_decompose(omega, order=0)}
    a = _drop_x(slots[3].dx_part, zch) if 3 in slots else zero_form(zch, 1)
    b1 = _drop_x(slots[1].dx_part, zch) if 1 in slots and not slots[1].dx_part.is_zero_form \
        else zero_form(zch, 1)
    b2 = _drop_x(slots[0].rest, zch) if 0 in slots and not slots[0].rest.is_zero_form \
        else zero_form(zch, 2)
    return a, b1, b2


def strong_filling_check(omega: SingularForm, tol: float = TOL_CLOSED) -> FillingVerdict:
    """Filling iff the b1 and b2 slots vanish; then the Liouville field
    V = -(x/2) d/dx satisfies i_V omega = alpha/x^2 and L_V omega = omega."""
    ch = omega.chart
    a, b1, b2 = decompose(omega)
    if not b1.is_zero_form:
        return FillingVerdict(False, "b1")
    if not b2.is_zero_form:
        return FillingVerdict(False, "b2")
    xname = ch.x
    v = make_form(ch, 1, [(-1, Const(Fraction(-1, 2)), (xname,))], "vector")
    ivo = interior_product(v, omega)
    # i_V omega = -a/(2 x^2); for d(alpha/x^2) the slot is a = -2 alpha, so
    # this reads i_V omega = alpha/x^2 in terms of the contact primitive
    expected = lift(a.scale(Const(Fraction(-1, 2))), ch, k=2)
    c1 = forms_equal(ivo, expected, tol=tol)
    lie = exterior_derivative(ivo) + interior_product(v, exterior_derivative(omega))
    c2 = forms_equal(lie, omega, tol=tol)
    return FillingVerdict(True, None, c1, c2)


def cosymplectic_extract(omega: SingularForm, k: int) -> CosymplecticData:
    """theta from the dx/x^k slot and eta from the smooth slot, at Z."""
    ch = omega.chart
    slots = {s.exponent: s for s in laurent_decompose(omega, order=0)}
    zch = z_chart(ch)
    if k not in slots or slots[k].dx_part.is_zero_form:
        raise StructureError(f"no dx/x^{k} slot")
    theta = _drop_x(slots[k].dx_part, zch)
    eta = _drop_x(slots[0].rest, zch) if 0 in slots else zero_form(zch, 2)
    r = reeb(theta, closed_two=eta)
    data = CosymplecticData(zch, theta, eta, r)
    cert = data.verify()
    if not cert.passed:
        raise StructureError(f"cosymplectic invariants fail: {cert.detail}")
    return data


# ---------------------------------------------------------------------------
# folded forms


@dataclass(frozen=True)
class FoldedVerdict:
    closed: ZeroVerdictMap
    vanishing_on_fold: ZeroVerdict
    transversal: Certificate
    restriction_nonvanishing: Certificate

    @property
    def passed(self) -> bool:
        return (self.closed.is_zero and self.vanishing_on_fold.is_zero
                and self.transversal.passed
                and self.restriction_nonvanishing.passed)


def verify_folded(omega: SingularForm, grid=None,
                  tol: float = TOL_NONDEG) -> FoldedVerdict:
    """omega smooth and closed; top power vanishes transversally exactly on
    the declared fold {x = 0}; omega^{d-1} pulls back nonvanishingly to Z."""
    ch = omega.chart
    if omega.max_pole() > 0:
        raise StructureError("folded verification expects a smooth form")
    if ch.dim % 2:
        raise StructureError("even-dimensional chart required")
    d = ch.dim // 2
    closed = closedness(omega)
    top = top_power(omega, d)
    coeff = ZERO
    for k, c, _ in top.terms:
        coeff = add(coeff, mul(c, powx(var(ch.x), -k)) if k else c)
    at_z = canon(substitute(coeff, {ch.x: ZERO}))
    vanish = is_zero(at_z, z_chart(ch).box() or {"_": (0, 1)}, 200, TOL_CLOSED) \
        if not is_provably_zero(at_z) else \
        ZeroVerdict("proven-zero", tolerance=TOL_CLOSED)
    from .expr import differentiate
    ddx = canon(substitute(differentiate(coeff, ch.x), {ch.x: ZERO}))
    zch = z_chart(ch)
    zgrid = chart_grid(zch) if grid is None else grid
    transversal = certify_positive(
        lambda pt: abs(float(evaluate(ddx, pt))), zgrid, tol,
        detail="|d/dx of top coefficient| on the fold")
    sub = top_power(omega, d - 1) if d > 1 else _one_form_scalar2(ch)
    restr = restrict_to_z(sub)
    from .geometry import evaluate_form
    nonvanish = certify_positive(
        lambda pt: max((abs(v) for v in evaluate_form(restr, pt).values()),
                       default=0.0),
        zgrid, tol, detail="|omega^{d-1} restricted to the fold|")
    return FoldedVerdict(closed, vanish, transversal, nonvanish)


def _one_form_scalar2(ch: Chart) -> SingularForm:
    return make_form(ch, 0, [(0, ONE, ())])
