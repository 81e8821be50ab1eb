"""Weak Orlicz-Hardy spaces of martingales on finite filtrations.

Exact (rational) and float backends for filtrations, martingales, stopping
times, weak Orlicz quasi-norms, atomic decompositions, Campanato norms and
the inequality suites that tie them together.
"""
from .atomic import (
    AtomicDecomposition,
    WeakAtom,
    decompose,
    decompose_control,
    decompose_M,
    decompose_s,
    decompose_S,
    equivalence_report,
    rebuild_control,
    tail_convergence,
)
from .boundedness import (
    boundedness_suite,
    check_atom_support,
    inequality_chain,
    square_vs_conditional,
)
from .campanato import (
    classic_campanato,
    dual_test_martingale,
    duality_ratio,
    john_nirenberg_report,
    pairing,
    stopped_campanato,
    w_atom_campanato,
    w_campanato_norm,
)
from .corpus import generate_corpus, generate_pairs, running_example
from .norms import (
    PredictableControl,
    all_hardy_norms,
    atomic_quasinorm,
    control_norm,
    hardy_norms,
    lq_norm,
    luxemburg_norm,
    minimal_control,
    weak_orlicz_norm,
)
from .orlicz import (
    DualWeight,
    OrliczFunction,
    PiecewiseLinearConcave,
    Power,
    PowerLog,
    dual_weight,
    grid_properties,
    index,
    parse_phi,
    verify_type,
)
from .process import (
    BUILTIN_OPERATORS,
    Martingale,
    OperatorSpec,
    conditional_quadratic,
    maximal,
    quadratic,
    stop,
)
from .space import (
    FiniteFiltration,
    conditional_expectation,
    dyadic_filtration,
    make_filtration,
    random_filtration,
    regularity_constant,
)
from .stopping import (
    StoppingTime,
    count_stopping_times,
    enumerate_stopping_times,
    first_passage_predictable,
    max_gap,
    regular_cover,
)
from .suites import SuiteConfig, run_suite

__version__ = "0.1.0"
