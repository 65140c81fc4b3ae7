import pytest

from conftest import ctx_of, term
from iitt.checker import (
    TypeCheckError,
    check,
    check_context,
    check_is_type,
    check_program,
    has_type,
    infer,
    typed_program,
)
from iitt.core import DUMMY, IRR, REL, UNIT_TY, UNIT_VAL, Context, Pi, SortT, Var
from iitt.corpus import corpus_items
from iitt.diagnostics import Code, IITTError
from iitt.equality import ty_eq
from iitt.evaluation import FuelExhausted
from iitt.surface import elaborate, parse

EMPTY = ctx_of()


def program(source: str):
    return check_program(elaborate(parse(source))[0])


def test_infer_sorts_and_pi():
    assert infer(EMPTY, SortT(0)) == SortT(1)
    assert infer(EMPTY, Pi(REL, SortT(0), SortT(0))) == SortT(1)
    assert infer(EMPTY, term(EMPTY, "(X : Set1) -> X")) == SortT(2)
    assert infer(EMPTY, term(EMPTY, "[X : Set1] -> Set0")) == SortT(2)


def test_irrelevant_eta_expansion_infers():
    ctx = ctx_of("U : Set0", "f : [y : U] -> U")
    got = infer(ctx, term(ctx, "fun [x : U] => f [x]"))
    assert ty_eq(ctx, got, term(ctx, "[x : U] -> U"))


def test_irrelevant_variable_cannot_be_returned():
    with pytest.raises(TypeCheckError) as e:
        infer(EMPTY, term(EMPTY, "fun [x : Set0] => x"))
    assert e.value.diagnostic.code is Code.TYPE


def test_irrelevant_quantification_over_types_is_ill_formed():
    with pytest.raises(TypeCheckError):
        infer(EMPTY, Pi(IRR, SortT(0), Pi(REL, Var(0), Var(1))))


def test_check_modes():
    ctx = ctx_of("U : Set0", "u ÷ U")
    check(ctx, Var(0), Var(1), IRR)
    with pytest.raises(TypeCheckError):
        check(ctx, Var(0), Var(1), REL)


def test_dummy():
    check(EMPTY, DUMMY, UNIT_TY, IRR, allow_dummy=True)
    with pytest.raises(TypeCheckError) as e:
        check(EMPTY, DUMMY, UNIT_TY, REL, allow_dummy=True)
    assert e.value.diagnostic.code is Code.DUMMY
    with pytest.raises(TypeCheckError):
        check(EMPTY, DUMMY, UNIT_TY, IRR)
    with pytest.raises(TypeCheckError):
        infer(EMPTY, DUMMY, allow_dummy=True)


def test_check_is_type():
    assert check_is_type(EMPTY, UNIT_TY) == 0
    assert check_is_type(EMPTY, SortT(2)) == 3
    with pytest.raises(TypeCheckError):
        check_is_type(EMPTY, UNIT_VAL)


def test_check_context():
    check_context(Context())
    check_context(ctx_of("X : Set0", "x : X"))
    with pytest.raises(TypeCheckError):
        check_context(Context().extend(REL, UNIT_VAL, "x"))


def test_no_cumulativity():
    assert not has_type(EMPTY, UNIT_TY, SortT(1))
    assert not has_type(EMPTY, SortT(0), SortT(0))


def test_lambda_annotation_must_match():
    with pytest.raises(TypeCheckError):
        check(EMPTY, term(EMPTY, "fun (x : Set0) => x"), term(EMPTY, "[x : Set0] -> Set0"))


def test_application_resurrects_for_irrelevant_arguments():
    ctx = ctx_of("U : Set0", "f : [x : U] -> U", "u ÷ U")
    assert infer(ctx, term(ctx, "fun (v : U) => f [u]")) is not None
    with pytest.raises(TypeCheckError):
        infer(ctx, term(ctx, "fun (g : (x : U) -> U) => g u"))


def test_sigma_and_squash_rules():
    ctx = ctx_of("U : Set0", "u : U")
    assert infer(ctx, term(ctx, "Sig (x : U). U")) == SortT(0)
    check(ctx, term(ctx, "([u], u)"), term(ctx, "Sig [x : U]. U"))
    assert infer(ctx, term(ctx, "Sq Set0")) == SortT(1)
    check(ctx, term(ctx, "sq u"), term(ctx, "Sq U"))
    # eliminating a squash into a relevant type is refused
    sq = ctx_of("U : Set0", "p : Sq U")
    with pytest.raises(TypeCheckError):
        check(sq, term(sq, "let sq x = p in x"), Var(1))


def test_program_examples():
    numerals = program(
        "#eq fun (f : Unit -> Unit) (x : Unit) => x = fun (f : Unit -> Unit) (x : Unit) => f x"
        " : (Unit -> Unit) -> Unit -> Unit;"
    )
    assert numerals.ok and numerals.items[0].output == "accepted"
    assert program("#fail #check (fun [x:Set0] => x) : [x:Set0] -> Set0;").ok
    empty = program("")
    assert empty.ok and empty.items == []


def test_fail_that_succeeds_is_an_error():
    r = program("#fail #infer Set0;")
    assert not r.ok


def test_failures_are_per_item():
    r = program("#infer Set0; #infer nope; #check Set0 : Set0; #infer Unit;")
    assert [i.ok for i in r.items] == [True, False, False, True]
    assert r.items[1].diagnostic.code is Code.SCOPE


def test_json_shape():
    item = program("#infer Set0;").to_json()["items"][0]
    assert set(item) >= {"span", "kind", "status", "diagnostic"}
    assert item["status"] == "ok" and item["output"] == "Set1"


def test_typed_program():
    entries = typed_program(elaborate(parse("def A : Set1 := Set0; def a : Set1 := A;"))[0])
    assert [e.name for e in entries] == ["A", "a"]
    with pytest.raises(IITTError):
        typed_program(elaborate(parse("def bad : Set0 := Set0;"))[0])


def test_corpus_passes():
    report = check_program(corpus_items())
    assert len(report.items) >= 20
    bad = [(i.span, i.diagnostic) for i in report.items if not i.ok]
    assert not bad


def test_deep_terms_fail_cleanly():
    deep = SortT(0)
    for _ in range(20_000):
        deep = Pi(REL, SortT(0), deep)
    try:
        assert infer(EMPTY, deep) == SortT(1)
    except FuelExhausted:
        pass
