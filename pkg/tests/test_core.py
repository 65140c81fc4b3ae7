import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ctx_of, substitutions, terms
from iitt.core import (
    IRR,
    REL,
    UNIT_TY,
    UNIT_VAL,
    Ann,
    App,
    Context,
    Lam,
    Pi,
    ScopeError,
    SortT,
    Substitution,
    Var,
    alpha_eq,
    compose,
    resurrect,
    shift,
    sort_axiom,
    sort_rule,
    strengthen,
    subst,
    subst1,
)
from iitt.oracles import from_named, named_subst, nvar, to_named


def test_shift_examples():
    assert shift(Var(0), 1, 0) == Var(1)
    assert shift(Lam(REL, UNIT_TY, Var(0)), 1, 0) == Lam(REL, UNIT_TY, Var(0))
    assert shift(Lam(REL, UNIT_TY, Var(1)), 1, 0) == Lam(REL, UNIT_TY, Var(2))


def test_shift_matches_named_weakening():
    # adding a fresh innermost name leaves the named term alone
    t = Lam(REL, UNIT_TY, App(REL, Var(1), Var(0)))
    named = to_named(t, ["f"])
    assert from_named(named, ["f", "g"]) == shift(t, 1, 0)


def test_subst1_examples():
    assert subst1(Var(0), UNIT_VAL) == UNIT_VAL
    assert subst1(Var(1), UNIT_VAL) == Var(0)
    f = Var(5)
    body = App(REL, Var(0), Lam(REL, UNIT_TY, Var(0)))
    assert subst1(body, f) == App(REL, f, Lam(REL, UNIT_TY, Var(0)))


def test_subst1_against_named_oracle():
    # (x (λy. y))[x := f] with f free
    body = App(REL, Var(0), Lam(REL, UNIT_TY, Var(0)))
    named = named_subst(to_named(body, ["f", "x"]), "x", nvar("f"))
    assert from_named(named, ["f"]) == subst1(body, Var(0))


def test_alpha_eq():
    assert alpha_eq(Lam(REL, UNIT_TY, Var(0), "x"), Lam(REL, UNIT_TY, Var(0), "y"))
    assert not alpha_eq(Var(0), Var(1))
    assert not alpha_eq(Pi(REL, SortT(0), Var(0)), Pi(IRR, SortT(0), Var(0)))


def test_resurrect():
    ctx = ctx_of("U : Set0", "V : Set0", "x ÷ U", "y : V")
    r = resurrect(ctx)
    assert [b.ann for b in r] == [REL] * 4
    assert [b.ty for b in r] == [b.ty for b in ctx]
    assert r.names() == ctx.names()
    rel = ctx_of("X : Set0", "x : X")
    assert resurrect(rel) == rel
    assert resurrect(r) == r


def test_annotation_order():
    assert REL <= IRR and not IRR <= REL
    assert len(Ann) == 2


def test_sorts():
    assert sort_axiom(0) == 1
    assert sort_axiom(3) == 4
    assert all(sort_axiom(k) > k for k in range(65))
    assert sort_rule(0, 0) == 0
    assert sort_rule(1, 0) == 1
    assert all(sort_rule(i, j) == sort_rule(j, i) for i in range(9) for j in range(9))


def test_lookup_shifts_and_rejects_out_of_range():
    ctx = ctx_of("X : Set0", "x : X")
    assert ctx.lookup(0) == (REL, Var(1))
    with pytest.raises(ScopeError):
        ctx.lookup(2)


def test_strengthen():
    assert strengthen(Var(2), 1) == Var(1)
    assert strengthen(Var(0), 1) is None
    assert strengthen(Lam(REL, UNIT_TY, Var(1)), 1) is None


@settings(max_examples=1000)
@given(terms())
def test_identity_substitution(t):
    assert subst(t, Substitution.identity()) == t


@settings(max_examples=500)
@given(terms(), substitutions(), substitutions())
def test_substitution_composition(t, sigma, tau):
    assert subst(subst(t, sigma), tau) == subst(t, compose(sigma, tau))


@settings(max_examples=500)
@given(terms(), st.integers(0, 4), st.integers(0, 4), st.integers(0, 3))
def test_shift_additive(t, a, b, c):
    assert shift(shift(t, a, c), b, c) == shift(t, a + b, c)


@settings(max_examples=500)
@given(terms(), terms(max_leaves=4))
def test_subst1_agrees_with_parallel_substitution(t, u):
    assert subst1(t, u) == subst(t, Substitution.single(u))


@settings(max_examples=300)
@given(terms(), st.integers(1, 3))
def test_shift_is_weakening_substitution(t, k):
    assert shift(t, k) == subst(t, Substitution.weakening(k))


@given(st.lists(st.tuples(st.sampled_from([REL, IRR]), st.integers(0, 2)), max_size=6))
def test_resurrect_idempotent_and_length_preserving(entries):
    ctx = Context()
    for ann, k in entries:
        ctx = ctx.extend(ann, SortT(k))
    r = resurrect(ctx)
    assert len(r) == len(ctx)
    assert resurrect(r) == r
    assert all(b.ann is REL for b in r)
