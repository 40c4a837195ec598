"""Exact-arithmetic toolkit for simultaneous-approximation lattices.

Approximates any full-rank integer lattice by a lattice generated by the
identity columns and a single rational vector, and reduces shortest-vector,
shortest-independent-vectors, and closest-vector problems to their analogues
on that family while preserving the approximation factor.  Ships exact
enumeration solvers, interchangeable oracles, and a verification suite for
every quantitative guarantee.
"""

from .approximate import (
    InflationTrace,
    MODE_SMALL_N,
    MODE_STRICT,
    SAInstance,
    generation_check,
    multiplier_c,
    recover_coefficient,
    sa_approximate,
)
from .enumeration import (
    DEFAULT_BUDGET,
    EnumResult,
    SuccessiveMinima,
    enum_closest,
    enum_shortest,
    enum_successive,
    enum_within,
)
from .errors import (
    BothZero,
    BudgetExceeded,
    DimensionTooSmall,
    HypothesisViolated,
    InstanceError,
    LatticeError,
    ModeUnavailable,
    NoSolution,
    RankDeficient,
    ShiftSearchExhausted,
    SingularMatrix,
    TargetDenominatorTooLarge,
    TooLarge,
)
from .instances import GeneralInstance, random_instance
from .linalg import (
    Matrix,
    NormKind,
    Vector,
    bareiss_det,
    bareiss_det_adj,
    centered_frac,
    hnf,
    leq_with_factor,
    norm_value,
    rat_inverse,
    snf_diagonal,
    solve_linear,
)
from .numtheory import (
    BezoutResult,
    GapHistogram,
    coprime_gap_experiment,
    coprime_shift,
    ext_gcd,
    jacobsthal,
)
from .oracles import (
    OracleAnswer,
    OracleContext,
    SABasis,
    cap_oracle,
    sa_basis,
    sap_oracle,
    siap_oracle,
)
from .reductions import ReductionResult, reduce_cvp, reduce_sivp, reduce_svp
from .verify import (
    CheckReport,
    check_bitlength,
    check_covolume,
    check_entry_inflation,
    check_gap_preserved,
    check_minkowski,
    check_opnorm_sandwich,
    perturbation_stats,
)

__version__ = "0.1.0"
