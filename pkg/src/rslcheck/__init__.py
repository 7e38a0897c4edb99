"""Strategy logic with move restrictions over finite two-player game trees."""

__version__ = "0.1.0"

from .checker import check, pruned_tree, strategy_reach
from .ctlstar import (
    ctlstar_check, to_ctlstar_model, tr_formula, tr_spec, xcheck,
)
from .errors import (
    CapacityError, DeadEndError, EmptyComponentError, IncompleteStrategyError, ModelError,
    ParseError, ReductionError, RSLError, SolverError, SpecError, TranslationError,
    UnknownActionError, UnknownStateError,
)
from .game import (
    GameTree, Strategy, moves, restrict_strategy, restricted_strategy_tree, strategy_tree,
    validate_model, validate_strategy,
)
from .parsing import (
    format_model, format_strategy, parse_formula, parse_model, parse_spec, parse_strategy,
)
from .reduction import reduce
from .solvers import backward_induction, centipede, rationality_spec
from .specs import AXIOM, SET_MINUS, conforms, enabled_moves, spec_equiv
from .axioms import axiom_suite


def data_path(name: str):
    """Path to a bundled data file such as ``centipede.game``."""
    from importlib.resources import files

    return files(__name__) / "data" / name
