"""Collar gluings along a shared contact hypersurface.

Two convex collars glue to a scattering form on an annulus r1 in (1/2, 2)
with singular locus r1 = 1 (the second collar enters through r2 = 1/r1).
Two concave collars glue to a folded form on r1 in (-2, 2) with fold at
r1 = 0 (r2 = -r1).  A convex/concave pair glues classically to d(e^r alpha).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .certificates import (
    Certificate, axis_points, certify_positive, geometric_refinement, proven,
    refuted,
)
from .expr import (
    Const, Expr, ONE, Piece, PiecewiseDecay, ZERO, add, differentiate,
    evaluate, exp, mul, powx, substitute, var,
)
from .geometry import (
    Chart, GeometryError, SingularForm, exterior_derivative, forms_equal,
    make_form, top_power, zero_form,
)
from .structures import (
    ContactData, FoldedVerdict, StructureError, closedness, lift,
    restrict_to_z, verify_folded,
)

GLUE_R = "r1"


class GluingError(StructureError):
    pass


# ---------------------------------------------------------------------------
# bump functions


def _t() -> Expr:
    return var("t")


def bump_phi() -> Expr:
    """Smooth bump supported in (1/2, 2): exp(r / ((r - 1/2)(r - 2))).

    The exponent is invariant under r -> 1/r, so the bump is multiplicatively
    symmetric about 1.
    """
    t = _t()
    g = mul(t, powx(mul(add(t, Const(Fraction(-1, 2))),
                        add(t, Const(Fraction(-2)))), -1))
    return PiecewiseDecay(var("r"), "t", (
        Piece(None, Fraction(1, 2), ZERO),
        Piece(Fraction(1, 2), Fraction(2), exp(g)),
        Piece(Fraction(2), None, ZERO),
    ))


def bump_psi_sc() -> Expr:
    """Smooth step: 1 on (-inf, 7/8], descending on (7/8, 1), 0 on [1, inf).

    The transition is 1 - e^a / (e^a + e^b) with a = -1/(r-1), b = -1/(7/8-r);
    it is rewritten as a logistic in a - b, split at r = 47/50, so that only
    bounded exponentials are ever evaluated.
    """
    t = _t()
    a = mul(Const(Fraction(-1)), powx(add(t, Const(Fraction(-1))), -1))
    b = mul(Const(Fraction(-1)), powx(add(Const(Fraction(7, 8)),
                                          mul(Const(Fraction(-1)), t)), -1))
    # 1 - e^a/(e^a+e^b) = 1/(1 + e^{a-b}) = e^{b-a}/(1 + e^{b-a})
    u = add(a, mul(Const(Fraction(-1)), b))
    low = powx(add(ONE, exp(u)), -1)
    high = mul(exp(mul(Const(Fraction(-1)), u)),
               powx(add(ONE, exp(mul(Const(Fraction(-1)), u))), -1))
    return PiecewiseDecay(var("r"), "t", (
        Piece(None, Fraction(7, 8), ONE),
        Piece(Fraction(7, 8), Fraction(47, 50), low),
        Piece(Fraction(47, 50), Fraction(1), high),
        Piece(Fraction(1), None, ZERO),
    ))


def bump_psi_f() -> Expr:
    """Smooth step: 0 on (-inf, -2], ascending on (-2, -1), 1 on [-1, inf).

    Transition e^a / (e^a + e^b) with a = -1/(r+2), b = -1/(-1-r); both
    exponents stay below -1 on the transition interval.
    """
    t = _t()
    a = mul(Const(Fraction(-1)), powx(add(t, Const(Fraction(2))), -1))
    b = mul(Const(Fraction(-1)), powx(add(Const(Fraction(-1)),
                                          mul(Const(Fraction(-1)), t)), -1))
    mid = mul(exp(a), powx(add(exp(a), exp(b)), -1))
    return PiecewiseDecay(var("r"), "t", (
        Piece(None, Fraction(-2), ZERO),
        Piece(Fraction(-2), Fraction(-1), mid),
        Piece(Fraction(-1), None, ONE),
    ))


@dataclass(frozen=True)
class BumpFunctions:
    phi: Expr
    psi_sc: Expr
    psi_f: Expr

    @classmethod
    def default(cls) -> "BumpFunctions":
        return cls(bump_phi(), bump_psi_sc(), bump_psi_f())


def _at(f: Expr, arg: Expr) -> Expr:
    """Compose a bump (an expression in the free variable r) with arg."""
    return substitute(f, {"r": arg})


# ---------------------------------------------------------------------------
# collars


@dataclass(frozen=True)
class FillingCollar:
    """Collar Z x [0, length)_r with normal form d(e^{-r} alpha) (convex)
    or d(e^{r} alpha) (concave)."""

    contact: ContactData
    convexity: str  # "convex" | "concave"
    length: float = 3.0
    r: str = GLUE_R

    def __post_init__(self):
        if self.convexity not in ("convex", "concave"):
            raise GluingError("convexity must be 'convex' or 'concave'")
        if self.length <= 0:
            raise GluingError("collar length must be positive")

    def collar_chart(self) -> Chart:
        zch = self.contact.chart
        return Chart((self.r,) + zch.names,
                     ((0.0, self.length),) + zch.ranges, None, zch.circles)

    def collar_form(self) -> SingularForm:
        ch = self.collar_chart()
        sign = Fraction(-1) if self.convexity == "convex" else Fraction(1)
        scalar = exp(mul(Const(sign), var(self.r)))
        eta = lift(self.contact.alpha, ch).scale(scalar)
        return exterior_derivative(eta)

    def verify(self, grid=None, tol: float = 1e-8) -> Certificate:
        """d(e^{-+r} alpha) is symplectic on the collar."""
        omega = self.collar_form()
        if not closedness(omega).is_zero:
            return refuted({}, detail="collar form not closed")
        return _nonvanishing_top(omega, grid, tol)


def _nonvanishing_top(omega: SingularForm, grid, tol: float) -> Certificate:
    from .certificates import chart_grid
    from .geometry import evaluate_form
    ch = omega.chart
    if ch.dim % 2:
        raise GluingError("even-dimensional chart required")
    top = top_power(omega, ch.dim // 2)
    if grid is None:
        grid = chart_grid(ch)
    return certify_positive(
        lambda pt: max((abs(v) for v in evaluate_form(top, pt).values()),
                       default=0.0),
        grid, tol, detail="|top power of the glued form|")


def _check_pair(c1: FillingCollar, c2: FillingCollar, want: tuple):
    if (c1.convexity, c2.convexity) != want and \
            (c2.convexity, c1.convexity) != want:
        raise GluingError(
            f"expected a {want[0]}/{want[1]} pair, got "
            f"{c1.convexity}/{c2.convexity}")
    if c1.contact.chart != c2.contact.chart:
        raise GluingError("collars live over different Z charts")
    if not forms_equal(c1.contact.alpha, c2.contact.alpha).is_zero:
        raise GluingError("collars carry different contact forms")


# ---------------------------------------------------------------------------
# glued forms


@dataclass(frozen=True)
class GluedForm:
    kind: str  # "sc" | "folded" | "classic"
    chart: Chart
    omega: SingularForm
    alpha: SingularForm  # contact form on the Z chart
    locus: Optional[float] = None  # r1 value of the singular locus / fold
    bumps: Optional[BumpFunctions] = None
    coefficients: tuple = ()  # named scalar coefficients ((name, Expr), ...)

    def coefficient(self, name: str) -> Expr:
        for nm, e in self.coefficients:
            if nm == name:
                return e
        raise GluingError(f"no stored coefficient '{name}'")


def _annulus_chart(zch: Chart, lo: float, hi: float,
                   x: Optional[str] = None) -> Chart:
    return Chart((GLUE_R,) + zch.names, ((lo, hi),) + zch.ranges, x,
                 zch.circles)


def glue_convex_convex(c1: FillingCollar, c2: FillingCollar,
                       bumps: Optional[BumpFunctions] = None) -> GluedForm:
    """omega = d((phi(r1)/(r1-1)^2 + psi(r1)) gamma~)
             + d((phi(r2)/(r2-1)^2 + psi(r2)) gamma),  r2 = 1/r1,
    with gamma = e^{-r1} alpha and gamma~ = e^{-1/r1 + r1} gamma."""
    _check_pair(c1, c2, ("convex", "convex"))
    if min(c1.length, c2.length) <= 2:
        raise GluingError("convex-convex gluing needs collar lengths > 2")
    if bumps is None:
        bumps = BumpFunctions.default()
    zch = c1.contact.chart
    ch = _annulus_chart(zch, 0.5, 2.0)
    r1 = var(GLUE_R)
    r2 = powx(r1, -1)
    alpha = lift(c1.contact.alpha, ch)

    def f(s: Expr) -> Expr:
        return add(mul(_at(bumps.phi, s), powx(add(s, Const(Fraction(-1))), -2)),
                   _at(bumps.psi_sc, s))

    gamma = alpha.scale(exp(mul(Const(Fraction(-1)), r1)))
    gammatilde = alpha.scale(exp(mul(Const(Fraction(-1)), r2)))
    eta = gammatilde.scale(f(r1)) + gamma.scale(f(r2))
    omega = exterior_derivative(eta)

    a_expr, b_expr = _sc_coefficients(bumps)
    return GluedForm("sc", ch, omega, c1.contact.alpha, 1.0, bumps,
                     (("A", a_expr), ("B", b_expr)))


def _sc_coefficients(bumps: BumpFunctions):
    """The dr1-wedge-gamma and d-gamma coefficients A and B of the glued
    form, assembled term by term."""
    r1 = var(GLUE_R)
    r2 = powx(r1, -1)
    phi, psi = bumps.phi, bumps.psi_sc
    dphi = differentiate(phi, "r")
    dpsi = differentiate(psi, "r")
    neg = Const(Fraction(-1))
    rm1_2 = powx(add(r1, neg), -2)
    rm1_3 = powx(add(r1, neg), -3)
    efac = exp(add(mul(neg, r2), r1))
    one_plus = add(powx(r1, -2), ONE)
    a_expr = add(
        mul(efac, _at(dphi, r1), rm1_2),
        mul(Const(Fraction(-2)), efac, _at(phi, r1), rm1_3),
        mul(efac, _at(dpsi, r1)),
        mul(neg, _at(dpsi, r2), powx(r1, -2)),
        mul(one_plus, efac, _at(phi, r1), rm1_2),
        mul(one_plus, efac, _at(psi, r1)),
        mul(neg, _at(dphi, r2), rm1_2),
        mul(Const(Fraction(-2)), _at(phi, r2), r1, rm1_3),
    )
    b_expr = add(
        mul(efac, _at(phi, r1), rm1_2),
        mul(efac, _at(psi, r1)),
        mul(_at(phi, r2), powx(r1, 2), rm1_2),
        _at(psi, r2),
    )
    return a_expr, b_expr


def glue_convex_concave(c1: FillingCollar, c2: FillingCollar) -> GluedForm:
    """Classical gluing: omega = d(e^r alpha), smooth symplectic on the
    joined collar r in (-1, 1)."""
    _check_pair(c1, c2, ("convex", "concave"))
    zch = c1.contact.chart
    ch = _annulus_chart(zch, -1.0, 1.0)
    eta = lift(c1.contact.alpha, ch).scale(exp(var(GLUE_R)))
    omega = exterior_derivative(eta)
    return GluedForm("classic", ch, omega, c1.contact.alpha)


def glue_concave_concave(c1: FillingCollar, c2: FillingCollar,
                         bumps: Optional[BumpFunctions] = None) -> GluedForm:
    """omega = d(psi(r1) e^{r1} alpha) + d(psi(r2) e^{r2} alpha), r2 = -r1;
    folded with fold at r1 = 0."""
    _check_pair(c1, c2, ("concave", "concave"))
    if min(c1.length, c2.length) <= 2:
        raise GluingError("concave-concave gluing needs collar lengths > 2")
    if bumps is None:
        bumps = BumpFunctions.default()
    zch = c1.contact.chart
    ch = _annulus_chart(zch, -2.0, 2.0, x=GLUE_R)
    r1 = var(GLUE_R)
    r2 = mul(Const(Fraction(-1)), r1)
    psi = bumps.psi_f
    alpha = lift(c1.contact.alpha, ch)
    eta = alpha.scale(add(mul(_at(psi, r1), exp(r1)),
                          mul(_at(psi, r2), exp(r2))))
    omega = exterior_derivative(eta)
    dpsi = differentiate(psi, "r")
    a_expr = add(mul(exp(r1), _at(dpsi, r1)),
                 mul(exp(r1), _at(psi, r1)),
                 mul(Const(Fraction(-1)), exp(r2), _at(dpsi, r2)),
                 mul(Const(Fraction(-1)), exp(r2), _at(psi, r2)))
    b_expr = add(mul(_at(psi, r1), exp(r1)), mul(_at(psi, r2), exp(r2)))
    return GluedForm("folded", ch, omega, c1.contact.alpha, 0.0, bumps,
                     (("A", a_expr), ("B", b_expr)))


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class ScGluingCertificate:
    phi_quotient_exceeds_139: Certificate
    psi_slope_at_least_minus_128: Certificate
    b_positive: Certificate
    a_minus_b_positive: Certificate

    @property
    def passed(self) -> bool:
        return all(c.passed for c in (
            self.phi_quotient_exceeds_139, self.psi_slope_at_least_minus_128,
            self.b_positive, self.a_minus_b_positive))


def certify_sc_gluing(g: GluedForm, grid=None,
                      constant_points: int = 10000) -> ScGluingCertificate:
    """Certify B > 0 and A - B > 0 on r1 in (1/2, 1) (the symmetric half),
    plus the two slope constants the positivity argument rests on."""
    if g.kind != "sc":
        raise GluingError("expected a convex-convex glued form")
    bumps = g.bumps
    phi, psi = bumps.phi, bumps.psi_sc
    dphi = differentiate(phi, "r")
    dpsi = differentiate(psi, "r")
    r = var("r")
    neg = Const(Fraction(-1))
    quotient = add(mul(dphi, powx(add(r, neg), -2)),
                   mul(Const(Fraction(-2)), phi, powx(add(r, neg), -3)))
    pts = [{"r": v} for v in axis_points(0.875, 1.0, constant_points)]
    c_phi = certify_positive(
        lambda pt: float(evaluate(quotient, pt)) - 139.0, pts, 0.0,
        detail="phi'/(r-1)^2 - 2 phi/(r-1)^3 - 139 on (7/8, 1)")
    # inf psi' = -128 exactly (at r = 15/16), so the bound is non-strict
    c_psi = certify_positive(
        lambda pt: float(evaluate(dpsi, pt)) + 128.0, pts, -1e-9,
        detail="psi' + 128 on (7/8, 1), non-strict")

    a_expr = g.coefficient("A")
    b_expr = g.coefficient("B")
    if grid is None:
        grid = [{GLUE_R: v}
                for v in geometric_refinement(1.0, 0.5, 1.0, base=256,
                                              closest=1e-6)]
    c_b = certify_positive(lambda pt: float(evaluate(b_expr, pt)), grid, 0.0,
                           detail="B on (1/2, 1)")
    c_ab = certify_positive(
        lambda pt: float(evaluate(a_expr, pt)) - float(evaluate(b_expr, pt)),
        grid, 0.0, detail="A - B on (1/2, 1)")
    return ScGluingCertificate(c_phi, c_psi, c_b, c_ab)


@dataclass(frozen=True)
class FoldedGluingCertificate:
    gap_on_1_2: Certificate  # e^r - 4 e^{-r} > 0, i.e. e^2 > 4
    ratio_on_0_1: Certificate  # e^{2r} > 1
    dr_alpha_coefficient_positive: Certificate
    dalpha_coefficient_positive: Certificate
    fold: FoldedVerdict
    restriction_is_2_dalpha: object  # ZeroVerdictMap

    @property
    def passed(self) -> bool:
        return (self.gap_on_1_2.passed and self.ratio_on_0_1.passed
                and self.dr_alpha_coefficient_positive.passed
                and self.dalpha_coefficient_positive.passed
                and self.fold.passed and self.restriction_is_2_dalpha.is_zero)


def certify_folded_gluing(g: GluedForm, grid=None,
                          points: int = 2000) -> FoldedGluingCertificate:
    """The positivity clauses behind folded non-degeneracy for r1 > 0, the
    two explicit exponential inequalities, and the fold at r1 = 0."""
    if g.kind != "folded":
        raise GluingError("expected a concave-concave glued form")
    import math
    gap_pts = [{"r": v} for v in axis_points(1.0, 2.0, points)]
    gap = certify_positive(
        lambda pt: math.exp(pt["r"]) - 4.0 * math.exp(-pt["r"]), gap_pts, 0.0,
        detail="e^r - 4 e^{-r} on (1, 2); equivalently e^2 > 4")
    ratio_pts = [{"r": v} for v in axis_points(0.0, 1.0, points, include=(1.0,))]
    ratio = certify_positive(
        lambda pt: math.exp(2.0 * pt["r"]) - 1.0,
        [p for p in ratio_pts if p["r"] > 0], 0.0,
        detail="e^{2r} - 1 on (0, 1]")

    a_expr = g.coefficient("A")
    b_expr = g.coefficient("B")
    if grid is None:
        grid = [{GLUE_R: v} for v in axis_points(0.0, 2.0, points)]
    pos_a = certify_positive(
        lambda pt: float(evaluate(a_expr, pt)), grid, 0.0,
        detail="dr1 wedge alpha coefficient on (0, 2)")
    pos_b = certify_positive(
        lambda pt: float(evaluate(b_expr, pt)), grid, 0.0,
        detail="d alpha coefficient on (0, 2)")

    fold = verify_folded(g.omega)
    da2 = exterior_derivative(g.alpha).scale(Const(Fraction(2)))
    restr = forms_equal(restrict_to_z(g.omega), da2, tol=1e-9)
    return FoldedGluingCertificate(gap, ratio, pos_a, pos_b, fold, restr)
