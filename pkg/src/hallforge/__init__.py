"""hallforge: exact Hall number computation and polynomial fitting for
modules over representation-finite bound quiver algebras."""

from .errors import (
    BudgetExceededError,
    CharacteristicMismatchError,
    DegreeZeroError,
    DimensionError,
    DivideByZeroError,
    HallforgeError,
    InfiniteDimensionalError,
    MixedContextError,
    NonPrimeError,
    NotAdmissibleError,
    NotInCatalogError,
    NotIndecomposableError,
    NotPrimeBaseError,
    UndecidableError,
    UnknownPresetError,
)
from .gf import FieldCtx, Mat, enumerate_subspaces, gaussian_binomial, make_field, rref
from .hall import (
    HallFit,
    IntPolynomial,
    conservative_degrees,
    fit_hall_polynomial,
    hall_number,
    submodule_count,
    submodule_profile,
    submodules,
    verify_theorem,
)
from .presentation import (
    Arrow,
    BoundQuiverAlgebra,
    Quiver,
    Relation,
    Rep,
    build_algebra,
    injective,
    make_rep,
    parse_algebra,
    preset,
    projective,
    simple,
    zero_rep,
)
from .repcat import (
    IndecCatalog,
    base_change,
    decompose,
    direct_sum,
    ext1_dim,
    hom_basis,
    hom_dim,
    is_indecomposable,
    is_isomorphic,
    list_indecomposables,
    min_projective_presentation,
    module_to_text,
    parse_module,
    residue_degree,
    stable_hom_dim,
    tau,
)

__version__ = "0.1.0"
