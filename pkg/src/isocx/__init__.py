"""Chain moduli rings at prime powers, their cochain complexes, the dual
ring of power-operation words, and the companion subgroup-lattice and
isogeny-polynomial computations, with CLI verification suites over all of it.

Everything is exact: small finite fields via lookup tables, truncated power
series over them, integer Smith normal form where torsion matters.
"""

from .field import GF, FieldSpec, TruncSeries, series
from .linalg import fq_rank, fq_rref, fq_matmul, smith_normal_form
from .isogeny import (
    DEFAULT_TRUNC,
    ChainShape,
    IsogRingElement,
    f_poly,
    sigma_pow,
    reduce,
    ring_mul,
    u_map,
    s_map,
    monomial,
    one,
    socle_check,
    relations_sequence_check,
)
from .complexes import (
    FieldComplex,
    Specialization,
    build_complex,
    expected_profile,
    rank_generating_check,
    h2_cokernel_check,
)
from .gamma import (
    GammaRing,
    GammaElement,
    admissible_basis,
    is_admissible,
    sample_element,
    word_order_key,
)
from .bar import bar_complex, bar_homology, descent_set, gr_piece_check
from .groups import (
    AbelianPGroup,
    Subgroup,
    build_group_complex,
    enumerate_subgroups,
    order_complex,
    product_decomposition_check,
    reduced_homology,
    steinberg_rank,
)
from .fpoly import (
    FiniteRingSpec,
    category_closure_check,
    f_m,
    ideal_membership,
)
from .report import SuiteConfig, run

__version__ = "0.1.0"
