"""Symplectic, contact, cosymplectic, Poisson duality, and filling checks."""

import math
from fractions import Fraction

import pytest

from scatsym.catalog import (
    build_example, darboux_chart, darboux_contact_primitive, torus_contact,
)
from scatsym.certificates import chart_grid
from scatsym.expr import Const, ONE, cos, mul, sin, var
from scatsym.geometry import (
    Chart, forms_equal, make_form, smooth_form, zero_form,
)
from scatsym.structures import (
    StructureError, closedness, cosymplectic_extract, decompose,
    dual_jacobi_check, dual_roundtrip_check, dualize, dualize_inverse,
    induced_contact, lift, normal_form, schouten_jacobi_check,
    strong_filling_check, verify_sc_symplectic, z_chart,
)

TWO_PI = 2.0 * math.pi


@pytest.fixture
def darboux():
    ch = darboux_chart(2)
    alpha = darboux_contact_primitive(ch, 2, inner_sign=-1)
    return ch, alpha, normal_form(ch, alpha, None, None)


def test_sc_symplectic_normal_form(darboux):
    ch, _, omega = darboux
    rep = verify_sc_symplectic(omega, grid=chart_grid(ch, 3))
    assert rep.passed


def test_closedness_catches_non_closed(darboux):
    ch, _, omega = darboux
    bad = omega + smooth_form(ch, {("x1", "y2"): var("y1")})
    assert not closedness(bad).is_zero


def test_contact_torus():
    contact = torus_contact()
    cert = contact.verify(chart_grid(contact.chart, 9))
    assert cert.passed


def test_induced_contact_from_normal_form(darboux):
    _, alpha, omega = darboux
    data = induced_contact(omega)
    assert forms_equal(data.alpha, alpha).is_zero


def test_decompose_roundtrip(darboux):
    ch, alpha, _ = darboux
    zch = z_chart(ch)
    b1 = smooth_form(zch, {("x2",): ONE})
    b2 = smooth_form(zch, {("x2", "y2"): Const(Fraction(2))})
    omega = normal_form(ch, alpha, b1, b2)
    a, got_b1, got_b2 = decompose(omega)
    assert forms_equal(got_b1, b1).is_zero
    assert forms_equal(got_b2, b2).is_zero


def test_filling_verdicts(darboux):
    ch, alpha, omega = darboux
    assert strong_filling_check(omega).passed
    zch = z_chart(ch)
    with_b1 = normal_form(ch, alpha, smooth_form(zch, {("x2",): ONE}), None)
    v1 = strong_filling_check(with_b1)
    assert not v1.filling and v1.nonzero_slot == "b1"
    with_b2 = normal_form(ch, alpha, None,
                          smooth_form(zch, {("x2", "y2"): ONE}))
    v2 = strong_filling_check(with_b2)
    assert not v2.filling and v2.nonzero_slot == "b2"


def test_dualize_inverse_is_symbolic_inverse(darboux):
    ch, _, omega = darboux
    pi = dualize(omega)
    assert pi.kind == "vector"
    back = dualize_inverse(pi)
    assert forms_equal(back, omega).is_zero


def test_dual_roundtrip_check(darboux):
    _, _, omega = darboux
    cert = dual_roundtrip_check(omega)
    assert cert.passed


def test_dual_jacobi_check(darboux):
    _, _, omega = darboux
    cert = dual_jacobi_check(omega)
    assert cert.passed


def test_schouten_refutes_non_poisson():
    ch = Chart(("u", "v", "w"), ((0.1, 1.0),) * 3, None)
    # p_uv = w, p_uw = u, p_vw = v has [pi, pi]^{uvw} = -2w != 0
    pi = make_form(ch, 2, [(0, var("w"), ("u", "v")),
                           (0, var("u"), ("u", "w")),
                           (0, var("v"), ("v", "w"))], "vector")
    cert = schouten_jacobi_check(pi, n_samples=20)
    assert not cert.passed


def test_schouten_accepts_so3_bracket():
    ch = Chart(("u", "v", "w"), ((0.1, 1.0),) * 3, None)
    pi = make_form(ch, 2, [(0, var("w"), ("u", "v")),
                           (0, mul(Const(Fraction(-1)), var("v")), ("u", "w")),
                           (0, var("u"), ("v", "w"))], "vector")
    cert = schouten_jacobi_check(pi, n_samples=20)
    assert cert.passed


def test_cosymplectic_extract():
    rec = build_example("b2-r-times-t3")
    data = cosymplectic_extract(rec.extras["normal_form"], rec.extras["k"])
    cert = data.verify(chart_grid(data.chart, 9))
    assert cert.passed


def test_cosymplectic_extract_requires_slot(darboux):
    ch, _, omega = darboux
    with pytest.raises(StructureError):
        cosymplectic_extract(omega, 5)


def test_lift_restores_pole(darboux):
    ch, alpha, _ = darboux
    lifted = lift(alpha, ch, k=2)
    assert lifted.max_pole() == 2
    assert lifted.chart == ch
