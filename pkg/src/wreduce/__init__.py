"""Classical W-algebra pencils on affine Slodowy slices.

Exact (rational) symbolic construction of the reduced bihamiltonian
structure attached to a nilpotent element of a simple Lie algebra, by
three independent routes that are verified against each other:

* a tensor lift solving the slice conditions degree by degree,
* Dirac reduction of the matrix differential operator pencil,
* gauge fixing of the first-order group action plus a Leibniz-type
  change of coordinates.

Stored operators carry a formal dispersion parameter eps; the bracket
they encode is the stored coefficient divided by eps, so every table
and comparison stays polynomial.
"""

__version__ = "0.1.0"

from .linalg import frac
from .diffalg import (
    DiffPoly,
    LinDiffOp,
    LocalFunctional,
    MatDiffOp,
    frechet_derivative,
    functional_equal,
    total_derivative,
    variational_derivative,
)
from .liealg import (
    GoodGradingReport,
    GradedSetup,
    Grading,
    LieAlgebra,
    LieAlgebraError,
    SL2Triple,
    SetupError,
    build_sl_n,
    derive_subspaces,
    dynkin_grading,
    graded_canonical_basis,
    setup_from_json,
    setup_to_json,
    sl2_from_partition,
    verify_good_grading,
)
from .loop_poisson import (
    CasimirReport,
    LocalPoissonOp,
    PoissonPencil,
    PoissonStructureError,
    bracket_table,
    bracket_table_json,
    casimir_set_check,
    lie_poisson_pencil,
    pencil_in_frame,
)
from .reduction import (
    METHODS,
    ORDER_CAP_ENV,
    GaugeFixMap,
    NoFiniteOrderInverse,
    ReducedPencil,
    ReductionError,
    compare_methods,
    dirac_reduce,
    ds_gauge_fix,
    ds_reduce,
    finite_dirac_sample,
    invert_minor,
    leading_term,
    leibnitz_transform,
    restrict_to_S,
    tensor_procedure,
)
from .builtin import (
    BUILTIN_NAMES,
    builtin_setup,
    fkdv_setup,
    fkdv_variants,
    kdv_setup,
    sl4_setup,
)

__all__ = [
    "BUILTIN_NAMES",
    "CasimirReport",
    "DiffPoly",
    "GaugeFixMap",
    "GoodGradingReport",
    "GradedSetup",
    "Grading",
    "LieAlgebra",
    "LieAlgebraError",
    "LinDiffOp",
    "LocalFunctional",
    "LocalPoissonOp",
    "MatDiffOp",
    "METHODS",
    "NoFiniteOrderInverse",
    "ORDER_CAP_ENV",
    "PoissonPencil",
    "PoissonStructureError",
    "ReducedPencil",
    "ReductionError",
    "SL2Triple",
    "SetupError",
    "bracket_table",
    "bracket_table_json",
    "build_sl_n",
    "builtin_setup",
    "casimir_set_check",
    "compare_methods",
    "derive_subspaces",
    "dirac_reduce",
    "ds_gauge_fix",
    "ds_reduce",
    "dynkin_grading",
    "finite_dirac_sample",
    "fkdv_setup",
    "fkdv_variants",
    "frac",
    "frechet_derivative",
    "functional_equal",
    "graded_canonical_basis",
    "invert_minor",
    "kdv_setup",
    "leading_term",
    "leibnitz_transform",
    "lie_poisson_pencil",
    "pencil_in_frame",
    "restrict_to_S",
    "setup_from_json",
    "setup_to_json",
    "sl2_from_partition",
    "sl4_setup",
    "tensor_procedure",
    "total_derivative",
    "variational_derivative",
    "verify_good_grading",
]
