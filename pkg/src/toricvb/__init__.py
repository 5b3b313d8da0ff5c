"""Exact computations with toric vector bundles.

Vector bundles are handled through their filtration data, the per-cone
multisets of linear functions that record splitting types, equivariant
Chern classes as integral piecewise polynomials, and the framed moduli
cut out by rank conditions inside products of partial flag varieties.
All arithmetic is exact, over Q or a prime field F_p.
"""

__version__ = "0.1.0"

from toricvb.errors import BudgetError, InferenceError, Report, SchemaError
from toricvb.kernels import BACKEND as KERNEL_BACKEND
from toricvb.linalg import (
    Field,
    IntMat,
    Mat,
    Subspace,
    complement_within,
    hermite_normal_form,
    integer_kernel,
    intersect,
    primitive_vector,
    rref,
    subspace_sum,
)
from toricvb.fan import (
    ConeRef,
    Fan,
    LinearClass,
    class_eval,
    class_reduce,
    class_restrict,
    perp_lattice,
    span_lattice,
    validate_fan,
)
from toricvb.klyachko import (
    Filtration,
    KlyachkoData,
    MultisetPsi,
    Splitting,
    check_compatibility,
    counting_function,
    eval_filtration,
    infer_multiset,
    intersection_dimension,
    is_morphism,
    psi_of,
    split_cone,
    validate_filtrations,
    validate_psi,
)
from toricvb.chern import (
    PiecewisePoly,
    Poly,
    chern_of_psi,
    elem_sym_piece,
    pp_equal,
    validate_continuity,
    vanishes_on_span,
)
from toricvb.moduli import (
    FlagCollection,
    FlagShape,
    OrbitReport,
    PointSet,
    RankCondition,
    apply_frame_change,
    check_membership,
    enumerate_points,
    flag_shape,
    flags_to_klyachko,
    generate_conditions,
    orbit_analysis,
)
from toricvb.mnev import (
    Configuration,
    IncidencePattern,
    build_universality_instance,
    flags_of_config,
    incidence_pattern_of,
    verify_equivalence,
)
