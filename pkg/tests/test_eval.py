import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import ctx_of, term, terms
from iitt.checker import check
from iitt.core import IRR, REL, UNIT_TY, UNIT_VAL, App, Lam, SortT, Var
from iitt.corpus import corpus_items
from iitt.equality import tm_eq
from iitt.erasure import erase_annotations
from iitt.evaluation import (
    FuelExhausted,
    IllShaped,
    WhnfView,
    app_active,
    classify,
    nf_beta_eta,
    whnf,
)
from iitt.oracles import small_step_normal_form
from iitt.surface import CmdCheck, CmdEq, Def
from iitt.untyped import UApp, ULam, UVar

OMEGA_HALF = Lam(REL, UNIT_TY, App(REL, Var(0), Var(0)))
OMEGA = App(REL, OMEGA_HALF, OMEGA_HALF)


def test_whnf_examples():
    assert whnf(SortT(3)) == SortT(3)
    assert whnf(App(REL, Lam(REL, UNIT_TY, Var(0)), UNIT_VAL)) == UNIT_VAL
    neutral = App(REL, Var(0), UNIT_VAL)
    assert whnf(neutral) == neutral


def test_omega_runs_out_of_fuel():
    with pytest.raises(FuelExhausted):
        whnf(OMEGA, 10_000)


def test_extension_reductions():
    assert whnf(term(ctx_of(), "let (x, y) = ((), Unit) in y")) == UNIT_TY
    assert whnf(term(ctx_of(), "let sq x = sq Set0 in x")) == SortT(0)
    stuck = term(ctx_of("p : Sig (x : Unit). Unit"), "let (x, y) = p in y")
    assert whnf(stuck) == stuck and classify(stuck) is WhnfView.NEUTRAL


def test_app_active():
    assert app_active(Lam(REL, UNIT_TY, Var(0)), REL, UNIT_VAL) == UNIT_VAL
    u = Var(3)
    assert app_active(Var(0), IRR, u) == App(IRR, Var(0), u)
    with pytest.raises(IllShaped):
        app_active(SortT(0), REL, u)


def test_annotation_mismatch_is_ill_shaped():
    with pytest.raises(IllShaped):
        whnf(App(IRR, Lam(REL, UNIT_TY, Var(0)), UNIT_VAL))


def test_classify():
    assert classify(SortT(0)) is WhnfView.SORT
    assert classify(Var(0)) is WhnfView.NEUTRAL
    assert classify(OMEGA) is WhnfView.NOT_WHNF


def test_nf_examples():
    # λx. f x with f free outside
    assert nf_beta_eta(ULam(UApp(UVar(1), UVar(0)))) == UVar(0)
    identity = ULam(UVar(0))
    assert nf_beta_eta(UApp(identity, identity)) == identity
    # λf.λx.f x η-reduces to λf.f
    assert nf_beta_eta(ULam(ULam(UApp(UVar(1), UVar(0))))) == identity


def test_nf_example_against_small_step():
    t = ULam(ULam(UApp(UVar(1), UVar(0))))
    assert nf_beta_eta(t) == small_step_normal_form(t)


def _whnf_or(t, fuel):
    try:
        return whnf(t, fuel)
    except (FuelExhausted, IllShaped) as e:
        return type(e)


@settings(max_examples=500)
@given(terms())
def test_whnf_deterministic_and_idempotent(t):
    a, b = _whnf_or(t, 1000), _whnf_or(t, 1000)
    assert a == b
    if not isinstance(a, type):
        assert whnf(a) is a
        assert classify(a) is not WhnfView.NOT_WHNF


@settings(max_examples=500)
@given(terms(), st.integers(0, 20), st.integers(0, 50))
def test_fuel_monotone(t, small, extra):
    got = _whnf_or(t, small)
    assume(got is not FuelExhausted)
    assert _whnf_or(t, small + extra) == got


@settings(max_examples=300, deadline=None)
@given(terms(max_leaves=10))
def test_nf_agrees_with_small_step_reducer(t):
    u = erase_annotations(t)
    try:
        expected = small_step_normal_form(u, 500)
    except FuelExhausted:
        assume(False)
    assert nf_beta_eta(u, 100_000) == expected


def _corpus_terms():
    for it in corpus_items():
        if isinstance(it, Def):
            yield it.body, it.type
        elif isinstance(it, CmdCheck):
            yield it.term, it.type
        elif isinstance(it, CmdEq):
            yield it.lhs, it.type
            yield it.rhs, it.type


def test_corpus_terms_normalize_and_reduce_to_equals():
    ctx = ctx_of()
    n = 0
    for t, ty in _corpus_terms():
        w = whnf(t)
        check(ctx, w, ty)
        assert tm_eq(ctx, t, w, ty).accepted
        n += 1
    assert n >= 20
