"""A kernel for a dependent type theory with irrelevant function spaces.

Terms use de Bruijn indices (``iitt.core``); the concrete syntax lives in
``iitt.surface``. Typical use::

    from iitt import read_term, infer, EMPTY
    infer(EMPTY, read_term("Set0"))   # SortT(level=1)
"""

from iitt.checker import (
    Report,
    TypeCheckError,
    check,
    check_context,
    check_is_type,
    check_program,
    has_type,
    infer,
    typed_program,
)
from iitt.core import (
    DUMMY,
    EMPTY,
    IRR,
    REL,
    UNIT_TY,
    UNIT_VAL,
    Ann,
    App,
    Binding,
    Context,
    Dummy,
    Lam,
    PairW,
    Pi,
    SigmaW,
    SortT,
    SplitW,
    SqElim,
    SqTy,
    SqVal,
    Substitution,
    Term,
    UnitTy,
    UnitVal,
    Var,
    alpha_eq,
    resurrect,
    shift,
    sort_axiom,
    sort_rule,
    subst,
    subst1,
)
from iitt.diagnostics import Code, Diagnostic, IITTError, Span
from iitt.equality import EqResult, EqStatus, ne_eq, ne_eq_irr, ne_eq_whnf, tm_eq, tm_eq_whnf, ty_eq, ty_eq_whnf
from iitt.erasure import erase_annotations, erase_external, internal_erase
from iitt.evaluation import DEFAULT_FUEL, Fuel, FuelExhausted, IllShaped, app_active, classify, nf_beta_eta, whnf
from iitt.surface import elaborate, parse, print_term, read_term

__all__ = [name for name in dir() if not name.startswith("_")]
