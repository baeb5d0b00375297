"""Lattice structure of judged IR runs and the metrics it admits."""
from .errors import BudgetExceeded, InvalidRun, InvalidScale, KindMismatch, NotDistributive
from .lattice import (
    FinitePoset,
    LatticeTables,
    NotALattice,
    StructureVerdict,
    analyze,
    birkhoff_decompose,
    build_poset,
    classify_structure,
    export_hasse,
    irreducibles_below,
    irredundant_decompositions,
    join_irreducibles,
    rank_function,
    structure_for,
    verify_lattice,
)
from .measures import (
    ClassificationReport,
    MeasureKind,
    MeasureSpec,
    Property,
    classify,
    dcg,
    eval_measure,
    find_counterexample,
    gp,
    gr,
    grbp,
    make_measure,
    rbp_threshold,
    verify_rbp_threshold,
)
from .orders import Ordering, closed_form_meet_join, cover, leq, leq_matrix
from .runs import (
    JudgedRun,
    RelevanceScale,
    RunKind,
    RunSpace,
    canonicalize_set_run,
    enumerate_runs,
    gain_sum,
    make_run,
    make_scale,
    parse_run,
    rank_run,
)
from .valuation import (
    Valuation,
    ValuationCheck,
    WeightAssignment,
    chain_closed_form_rank,
    chain_closed_form_set,
    check_metric_axioms,
    check_valuation,
    distance,
    natural_valuation,
    replacement_closed_form,
    shortest_path_distance,
    valuation_from_weights,
)

__version__ = "0.1.0"
