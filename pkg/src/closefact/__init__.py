"""closefact: integers with several close factorizations.

Exact representation and validation of close-factorization tuples, the
skew/divisor case engine reducing the four-factorization question to
generalized Pell equations, congruence-obstruction certificates, the
limiting-ratio census with supremum 0.04742065558..., constructive
extremal families, and an exhaustive brute-force oracle.
"""

from .core import (
    CloseFactorization,
    GcdDecomposition,
    InvalidFactorization,
    SkewTriple,
    StructureReport,
    check_structure,
    closeness_ratio,
    compute_skews,
    derive_km,
    equal_skew_identity,
    gcd_decompose,
    large_skew_bound,
    offset_ratio_bound,
    reconstruct_base,
    verify_quadruple,
)
from .pell import (
    FundamentalUnit,
    ObstructionCertificate,
    PellEquation,
    PellVerdict,
    auto_obstruct,
    bounded_search,
    classify_equation,
    fundamental_solution,
    prime_power_obstruction,
    qnr_obstruction,
    residue_obstruction,
    unit_power,
)
from .cases import (
    CaseParams,
    CaseRow,
    build_pell,
    census,
    classify,
    derive_params,
    emit_tables,
    enumerate_cases,
    paper_diff,
    ratio_limit,
    solvable_census,
    supremum_ratio,
)
from .search import (
    FamilyInstance,
    SearchBox,
    brute_force,
    k3_family,
    max_ratio,
    optimal_family,
    sub_quadruples,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
