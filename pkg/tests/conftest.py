from __future__ import annotations

from hypothesis import strategies as st

from iitt.core import (
    IRR,
    REL,
    App,
    Context,
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
)
from iitt.surface import read_term

anns = st.sampled_from([REL, IRR])


def terms(max_free: int = 3, max_leaves: int = 12) -> st.SearchStrategy[Term]:
    """Arbitrary (not necessarily well-scoped or well-typed) core terms."""
    leaves = st.one_of(
        st.integers(0, max_free + 2).map(Var),
        st.integers(0, 3).map(SortT),
        st.just(UnitTy()),
        st.just(UnitVal()),
    )

    def extend(kids):
        return st.one_of(
            st.builds(Pi, anns, kids, kids),
            st.builds(Lam, anns, kids, kids),
            st.builds(SigmaW, anns, kids, kids),
            st.builds(App, anns, kids, kids),
            st.builds(PairW, anns, kids, kids),
            st.builds(SplitW, kids, kids),
            st.builds(SqTy, kids),
            st.builds(SqVal, kids),
            st.builds(SqElim, kids, kids),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def substitutions(max_terms: int = 3) -> st.SearchStrategy[Substitution]:
    return st.builds(
        Substitution,
        st.lists(terms(max_leaves=4), max_size=max_terms).map(tuple),
        st.integers(0, 3),
    )


def ctx_of(*entries: str) -> Context:
    """``ctx_of("X : Set0", "u ÷ X")`` builds a context from surface text."""
    ctx = Context()
    for entry in entries:
        irrelevant = "÷" in entry
        name, ty = entry.split("÷" if irrelevant else ":", 1)
        ctx = ctx.extend(IRR if irrelevant else REL, read_term(ty.strip(), ctx.names()), name.strip())
    return ctx


def term(ctx: Context, source: str) -> Term:
    return read_term(source, ctx.names())


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
