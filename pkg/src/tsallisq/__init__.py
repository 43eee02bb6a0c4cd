"""Tsallis-q entanglement toolkit.

Closed-form two-qubit entanglement for entropic order q, monogamy and
polygamy residuals on multiqubit pure states, critical-order and
critical-curve numerics, a convex-roof decomposition search, and a batch
CLI that reproduces every headline artifact.
"""

from .errors import (
    BadIndexError,
    BadPartitionError,
    BadRankError,
    DomainError,
    DuplicateIndexError,
    EndpointError,
    IndexOutOfRangeError,
    InvalidDensityMatrixError,
    MaxIterationsError,
    NegativeBeyondToleranceError,
    NegativeEigenvalueError,
    NoConvergenceError,
    NoSignChangeError,
    NonConvergenceError,
    NotHermitianError,
    NotTwoQubitsError,
    OutOfRangeError,
    QIsOneError,
    QOutsideAnalyticRangeError,
    TsallisqError,
    UnsupportedSizeError,
    ZeroBasePowerError,
)
from .linalg import (
    hermitian_eig,
    hermiticity_defect,
    kron,
    partial_trace,
    sqrt_psd,
)
from .measures import (
    ANALYTIC_Q_MAX,
    ANALYTIC_Q_MIN,
    BipartitionSpec,
    QParam,
    Regime,
    as_qparam,
    big_F,
    concurrence_pure,
    concurrence_wootters,
    d2g_dx2,
    dTq2_dx,
    f_q,
    focus_vs_rest,
    g_q,
    limit_F_at_x0,
    limit_F_at_x1,
    limit_d2Tq2_dx2_at_1,
    limit_d2g_dx2_at_1,
    tsallis_entropy,
    tsallis_pure,
    tsallis_two_qubit_mixed,
    x1_curvature_bracket,
)
from .monogamy import (
    Inequality,
    MonogamyRecord,
    ckw_residual,
    focus_and_pair_entanglements,
    mu_power_residual,
    scalar_power_lemma_check,
    stqe_residual,
    three_tangle,
    three_tangle_analytic,
)
from .numerics import (
    CriticalCurve,
    CurveCondition,
    EnsembleDecomposition,
    convex_roof_upper_bound,
    find_p2,
    find_qc_pair_T2,
    find_qc_pair_g,
    find_root_bracketed,
    finite_diff_2nd,
    trace_critical_curve,
)
from .states import (
    DensityMatrix,
    SeededSampler,
    StateVector,
    density_of,
    ghz,
    ghz_w_superposition,
    load_state_file,
    random_mixed,
    random_pure,
    reduced_density,
    save_state_file,
    w,
)

__version__ = "0.1.0"

__all__ = [
    "ANALYTIC_Q_MAX",
    "ANALYTIC_Q_MIN",
    "BadIndexError",
    "BadPartitionError",
    "BadRankError",
    "BipartitionSpec",
    "CriticalCurve",
    "CurveCondition",
    "DensityMatrix",
    "DomainError",
    "DuplicateIndexError",
    "EndpointError",
    "EnsembleDecomposition",
    "IndexOutOfRangeError",
    "Inequality",
    "InvalidDensityMatrixError",
    "MaxIterationsError",
    "MonogamyRecord",
    "NegativeBeyondToleranceError",
    "NegativeEigenvalueError",
    "NoConvergenceError",
    "NoSignChangeError",
    "NonConvergenceError",
    "NotHermitianError",
    "NotTwoQubitsError",
    "OutOfRangeError",
    "QIsOneError",
    "QOutsideAnalyticRangeError",
    "QParam",
    "Regime",
    "SeededSampler",
    "StateVector",
    "TsallisqError",
    "UnsupportedSizeError",
    "ZeroBasePowerError",
    "as_qparam",
    "big_F",
    "ckw_residual",
    "concurrence_pure",
    "concurrence_wootters",
    "convex_roof_upper_bound",
    "d2g_dx2",
    "dTq2_dx",
    "density_of",
    "f_q",
    "find_p2",
    "find_qc_pair_T2",
    "find_qc_pair_g",
    "find_root_bracketed",
    "finite_diff_2nd",
    "focus_and_pair_entanglements",
    "focus_vs_rest",
    "g_q",
    "ghz",
    "ghz_w_superposition",
    "hermitian_eig",
    "hermiticity_defect",
    "kron",
    "limit_F_at_x0",
    "limit_F_at_x1",
    "limit_d2Tq2_dx2_at_1",
    "limit_d2g_dx2_at_1",
    "load_state_file",
    "mu_power_residual",
    "partial_trace",
    "random_mixed",
    "random_pure",
    "reduced_density",
    "save_state_file",
    "scalar_power_lemma_check",
    "sqrt_psd",
    "stqe_residual",
    "three_tangle",
    "three_tangle_analytic",
    "trace_critical_curve",
    "tsallis_entropy",
    "tsallis_pure",
    "tsallis_two_qubit_mixed",
    "w",
    "x1_curvature_bracket",
]
