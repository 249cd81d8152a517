"""Symbolic matrix helpers: determinant and adjugate inverse for the small
coefficient matrices that come up in frame changes and duality."""

from __future__ import annotations

from fractions import Fraction
from typing import List

from .expr import Const, Expr, ExprError, ZERO, add, canon, mul, powx


def sym_det(m: List[List[Expr]], canonical: bool = True) -> Expr:
    """Determinant; with canonical=False the Laplace expansion is returned
    as a raw expression tree (cheap to build, evaluate with a DAG cache)."""
    n = len(m)
    if n == 0:
        return Const(Fraction(1))
    if n == 1:
        return m[0][0]
    terms = []
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = Const(Fraction((-1) ** j))
        terms.append(mul(sign, m[0][j], sym_det(minor, canonical=False)))
    out = add(*terms)
    return canon(out) if canonical else out


def sym_adjugate(m: List[List[Expr]], canonical: bool = True) -> List[List[Expr]]:
    n = len(m)
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [m[r][c] for c in range(n) if c != j]
                for r in range(n) if r != i
            ]
            sign = Const(Fraction((-1) ** (i + j)))
            entry = mul(sign, sym_det(minor, canonical=False))
            adj[j][i] = canon(entry) if canonical else entry
    return adj


def sym_inverse(m: List[List[Expr]], max_dim: int = 8) -> List[List[Expr]]:
    """Adjugate inverse; entries are adj / det.  Raises on a provably
    singular matrix."""
    n = len(m)
    if n > max_dim:
        raise ExprError(f"symbolic inversion capped at {max_dim}x{max_dim}")
    det = sym_det(m)
    from .expr import is_provably_zero
    if is_provably_zero(det):
        raise ExprError("matrix is singular")
    adj = sym_adjugate(m)
    inv_det = powx(det, -1)
    return [[canon(mul(adj[i][j], inv_det)) for j in range(n)] for i in range(n)]


def mat_vec(m: List[List[Expr]], v: List[Expr]) -> List[Expr]:
    return [canon(add(*[mul(m[i][j], v[j]) for j in range(len(v))]))
            for i in range(len(m))]
