"""Symbolic and numeric exterior calculus for singular symplectic geometry.

Charts carry a distinguished hypersurface Z = {x = 0}; forms are Laurent
polynomials in x with smooth coefficients.  The package verifies symplectic,
Poisson, contact, cosymplectic, and folded structures on such charts,
certifies gluing constructions, and evaluates cohomology formulas."""

from .expr import (
    Const, DEFAULT_SEED, DomainError, Expr, ExprError, Var, ZeroVerdict,
    add, canon, cos, const, differentiate, evaluate, exp, is_provably_zero,
    is_zero, mul, parse, powx, ser, sin, sqrt, var,
)
from .geometry import (
    Chart, GeometryError, SingularForm, ZeroVerdictMap, chart,
    exterior_derivative, form_from_json, form_to_json, forms_equal,
    interior_product, laurent_decompose, make_form, pointwise_equal,
    smooth_form, top_power, wedge, zero_form,
)
from .certificates import Certificate, chart_grid, thread_count
from .linalg import sym_adjugate, sym_det, sym_inverse
from .algebroids import (
    AlgebroidFrame, NoGoReport, SectionVerdict, coframe, is_smooth_section,
    no_go_check, nondegenerate,
)
from .structures import (
    ContactData, CosymplecticData, FillingVerdict, FoldedVerdict,
    SymplecticReport, closedness, cosymplectic_extract, decompose,
    dual_jacobi_check, dual_roundtrip_check, dualize, dualize_inverse,
    induced_contact, lift, normal_form, reeb, restrict_to_z,
    schouten_jacobi_check, strong_filling_check, verify_folded,
    verify_sc_symplectic, z_chart,
)
from .gluing import (
    BumpFunctions, FillingCollar, GluedForm, certify_folded_gluing,
    certify_sc_gluing, glue_concave_concave, glue_convex_concave,
    glue_convex_convex,
)
from .cohomology import (
    BettiProfile, CohomologyReport, FiniteRank, InfiniteDimensional,
    Unresolved, Zero, bk_poisson, d_h_squared_check, horizontal_d, kunneth,
    lie_derivative, quotient_kernel_check_rigged, quotient_kernel_check_sc,
    rigged_closed_representative, sc_derham, sc_poisson,
    sc_reduced_element, sc_reduction_primitive,
)
from .catalog import ExampleRecord, build_example, list_examples, run_example
