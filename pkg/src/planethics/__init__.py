"""planethics: judge plans under ethical principles, explain what-ifs contrastively."""

from .compilation import (
    HModelResult,
    Suggestion,
    check_suggestion_satisfied,
    compile_chain,
    compile_suggestion,
    forbid,
    force,
    order,
    parse_suggestion,
    replace,
    strip_auxiliaries,
)
from .errors import (
    BudgetExceeded,
    ConflictingSuggestion,
    InvalidPlan,
    ModelSemanticError,
    ModelSyntaxError,
    NoPlanFound,
    PlanEthicsError,
    PreconditionViolation,
    RestoreFailed,
    SizeExceeded,
    UnknownAction,
    ValidationFailed,
)
from .ethics import CausalLink, PrincipleFormula, PrincipleId, ReasonAtom, Verdict, causal_links, evaluate
from .explain import (
    ContrastiveExplanation,
    ExplanationProblem,
    plan_diff,
    render_nl,
    solve_explanation_problem,
)
from .model import (
    Action,
    AUX_PREFIX,
    IntrinsicValue,
    Plan,
    PlanningModel,
    apply_action,
    check_goal,
    execute_plan,
    final_state_utility,
)
from .parser import SourceDocument, parse_model, serialize_model
from .planner import Objective, SearchBudget, enumerate_plans, find_plan
from .reasons import (
    Reason,
    ReasonSet,
    prime_implicants,
    prime_implicates,
    reasons_for,
    to_clausal_form,
)
from .service import SessionStore

__version__ = "0.1.0"
