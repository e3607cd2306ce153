"""Support analysis and atom recovery for truncated moment sequences.

The package answers three questions about a linear functional known only
through its moments up to a fixed degree: does it behave like integration
against a compactly supported measure, where can that support live, and
which single points carry positive mass.  All verdict-critical arithmetic
is exact over the rationals; floats appear only in final estimates.
"""

from .errors import (
    BudgetExceeded,
    DegreeExceeded,
    DimensionMismatch,
    GrowthDiverging,
    IllConditioned,
    MomentFileError,
    MomentSupportError,
    NegativePower,
    RankUnstable,
)
from .growth import (
    GrowthProfile,
    carleman_partial,
    growth_profile,
    kernel_check,
    ladder,
    p_d,
    root_sequence,
    roots_monotone_exact,
    seminorm_props,
)
from .moments import (
    AtomicMeasure,
    MomentSequence,
    PsdReport,
    apply,
    cbs_check,
    dirac_series_measure,
    from_atomic,
    from_closed_form,
    loads,
    localizing_matrix,
    moment_matrix,
    psd_check,
)
from .poly import Polynomial
from .recovery import (
    MatchReport,
    RecoveryResult,
    compare,
    grid_scan,
    prony_recover,
)
from .support import (
    FiniteSupportReport,
    KlResult,
    MassEstimate,
    SupportBox,
    atom_mass,
    bump,
    chebyshev_tail,
    finite_support_check,
    kl_member,
    ql_certificates,
    support_box,
)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure",
    "BudgetExceeded",
    "DegreeExceeded",
    "DimensionMismatch",
    "FiniteSupportReport",
    "GrowthDiverging",
    "GrowthProfile",
    "IllConditioned",
    "KlResult",
    "MassEstimate",
    "MatchReport",
    "MomentFileError",
    "MomentSequence",
    "MomentSupportError",
    "NegativePower",
    "Polynomial",
    "PsdReport",
    "RankUnstable",
    "RecoveryResult",
    "SupportBox",
    "apply",
    "atom_mass",
    "bump",
    "carleman_partial",
    "cbs_check",
    "chebyshev_tail",
    "compare",
    "dirac_series_measure",
    "finite_support_check",
    "from_atomic",
    "from_closed_form",
    "grid_scan",
    "growth_profile",
    "kernel_check",
    "kl_member",
    "ladder",
    "loads",
    "localizing_matrix",
    "moment_matrix",
    "p_d",
    "prony_recover",
    "psd_check",
    "ql_certificates",
    "root_sequence",
    "roots_monotone_exact",
    "seminorm_props",
    "support_box",
]
