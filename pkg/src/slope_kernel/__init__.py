"""Exact enumeration of lattice paths below a rational-slope line.

Directed walks with two jumps, their kernel-method closed forms, the
identities they satisfy and the asymptotic constants that govern them,
each cross-checked against brute-force counting.
"""
from .asymptotics import (
    AsymptoticConstants,
    duchon_area_constant,
    fit_local_expansion,
    knuth_constants,
    leading_constant_check,
    ratio_convergence,
    structural_constants,
    tau2,
    verify_minimal_polynomials,
)
from .bijection import (
    DirectedPath,
    NEPath,
    SlopeBarrier,
    directed_to_ne,
    ne_to_directed,
    verify_bijection,
    verify_time_reversal,
)
from .core import (
    DUCHON_JUMPS,
    KNUTH_JUMPS,
    JumpSet,
    SeriesError,
    TruncSeries,
    binomial,
    series_add,
    series_div_unit,
    series_mul,
)
from .enumeration import (
    AreaTable,
    CountTable,
    build_area_table,
    build_counts,
    count_ne_below_line,
    duchon_excursions,
    duchon_mean_area,
    knuth_AB,
    knuth_sequences,
)
from .identities import (
    PRecurrence,
    aplusb_closed_form,
    guess_precurrence,
    thm61_sum,
    verify_aplusb,
    verify_hypergeometric_recurrence,
    verify_thm61,
    verify_three_routes,
)
from .kernel import (
    BranchAmbiguityError,
    BranchValue,
    KernelForm,
    numeric_branches,
    series_F0_G1,
    small_branch_series,
    sym_power_series,
    verify_rotation_law,
)

__version__ = "0.1.0"
