"""The worked-example registry: every record passes its expected checks."""

import pytest

from scatsym.catalog import (
    CatalogError, build_example, list_examples, run_example,
    sphere_slot_coefficient,
)
from scatsym.expr import is_provably_zero, canon, add, mul, powx, var, Const
from fractions import Fraction


def test_registry_names():
    names = list_examples()
    assert "sc-sphere" in names
    assert "t2xs2" in names
    assert len(names) == 11


def test_unknown_name_rejected():
    with pytest.raises(CatalogError):
        build_example("klein-bottle")


def test_parameter_cap():
    with pytest.raises(CatalogError):
        build_example("sc-sphere", n=9)
    with pytest.raises(CatalogError):
        build_example("euclidean-end", n=0)


@pytest.mark.parametrize("name,params", [
    ("b2-r-times-t3", {}),
    ("bk-torus", {"k": 2, "n": 1}),
    ("folded-darboux", {"n": 2}),
    ("sc-darboux", {"n": 2}),
    ("sc-poisson-darboux", {"n": 2}),
    ("symplectization", {"z": "s1"}),
    ("torus-sc-folded", {"m": 2, "n": 1}),
    ("euclidean-end", {"n": 1}),
    ("sc-sphere", {"n": 1}),
])
def test_fast_records_pass(name, params):
    rec = build_example(name, **params)
    rep = run_example(rec)
    failing = {k: v for k, v in rep["checks"].items() if not v["passed"]}
    assert rep["passed"], failing


def test_torus_sc_folded_loci():
    rec = build_example("torus-sc-folded", m=2, n=1)
    sc = rec.extras["sc_loci"]
    folds = rec.extras["fold_loci"]
    assert len(sc) == 4 and len(folds) == 4
    import math
    assert sc == pytest.approx([j * math.pi / 2 for j in range(4)])
    assert folds == pytest.approx([(2 * j + 1) * math.pi / 4 for j in range(4)])


def test_sphere_slot_coefficient_structure():
    rec = build_example("sc-sphere", n=1)
    got = sphere_slot_coefficient(rec.omega, "z", "y1")
    y1, z = var("y1"), var("z")
    x1 = powx(add(Const(Fraction(1)),
                  mul(Const(Fraction(-1)), powx(y1, 2)),
                  mul(Const(Fraction(-1)), powx(z, 2))), Fraction(1, 2))
    want = mul(Const(Fraction(-1)),
               add(x1, mul(powx(y1, 2), powx(x1, -1)),
                   mul(powx(z, 2), powx(x1, -1))))
    assert is_provably_zero(canon(add(got, mul(Const(Fraction(-1)), want))))
