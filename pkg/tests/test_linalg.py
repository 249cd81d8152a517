"""Symbolic determinants, adjugates, and inverses on small matrices."""

from fractions import Fraction

import pytest

from scatsym.expr import (
    Const, ExprError, ONE, ZERO, add, canon, evaluate, evaluate_dag,
    is_provably_zero, mul, var,
)
from scatsym.linalg import mat_vec, sym_adjugate, sym_det, sym_inverse

X = var("x")
Y = var("y")


def _entry_zero(e):
    return is_provably_zero(canon(e))


def test_det_2x2_exact():
    m = [[Const(Fraction(1, 2)), X], [Y, Const(Fraction(4))]]
    det = sym_det(m)
    want = add(Const(Fraction(2)), mul(Const(Fraction(-1)), X, Y))
    assert _entry_zero(add(det, mul(Const(Fraction(-1)), want)))


def test_adjugate_identity_3x3():
    m = [[ONE, X, ZERO], [ZERO, ONE, Y], [X, ZERO, ONE]]
    det = sym_det(m)
    adj = sym_adjugate(m)
    # M . adj(M) = det(M) . I
    for i in range(3):
        prod = mat_vec(m, [adj[r][i] for r in range(3)])
        for j in range(3):
            want = det if i == j else ZERO
            assert _entry_zero(add(prod[j], mul(Const(Fraction(-1)), want)))


def test_inverse_numerically():
    m = [[Const(Fraction(2)), X], [X, Const(Fraction(3))]]
    inv = sym_inverse(m)
    pt = {"x": 0.7}
    mv = [[float(evaluate(e, pt)) for e in row] for row in m]
    iv = [[float(evaluate(e, pt)) for e in row] for row in inv]
    for i in range(2):
        for j in range(2):
            got = sum(mv[i][k] * iv[k][j] for k in range(2))
            assert got == pytest.approx(1.0 if i == j else 0.0, abs=1e-12)


def test_singular_matrix_rejected():
    m = [[X, X], [X, X]]
    with pytest.raises(ExprError):
        sym_inverse(m)


def test_raw_expansion_matches_canonical():
    m = [[add(X, ONE), Y, ZERO, ONE],
         [ZERO, X, ONE, Y],
         [ONE, ZERO, add(X, Y), ZERO],
         [Y, ONE, ZERO, X]]
    pt = {"x": 1.3, "y": -0.4}
    cache = {}
    raw = float(evaluate_dag(sym_det(m, canonical=False), pt, cache))
    assert raw == pytest.approx(float(evaluate(sym_det(m), pt)), rel=1e-12)
    raw_adj = sym_adjugate(m, canonical=False)
    can_adj = sym_adjugate(m)
    for i in range(4):
        for j in range(4):
            a = float(evaluate_dag(raw_adj[i][j], pt, cache))
            b = float(evaluate(can_adj[i][j], pt))
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
