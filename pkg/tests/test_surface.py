import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import terms
from iitt.core import DUMMY, IRR, REL, UNIT_TY, UNIT_VAL, App, Lam, Pi, SortT, Var, free_vars, size
from iitt.corpus import corpus_files, corpus_items
from iitt.diagnostics import Code, IITTError
from iitt.surface import (
    CmdEq,
    Def,
    ElabFailure,
    Fail,
    ParseError,
    elaborate,
    iter_terms,
    parse,
    print_term,
    read_term,
    tokenize,
)


def test_parse_def():
    items = parse("def id : (x : Set0) -> (y : x) -> x := fun (x : Set0) (y : x) => y;")
    assert len(items) == 1 and isinstance(items[0], Def)


def test_parse_numeral_eq():
    src = (
        "#eq fun (f : Unit -> Unit) (x : Unit) => x = fun (f : Unit -> Unit) (x : Unit) => f x"
        " : (Unit -> Unit) -> Unit -> Unit;"
    )
    items = parse(src)
    assert len(items) == 1 and isinstance(items[0], CmdEq)


def test_parse_error_has_span():
    with pytest.raises(ParseError) as e:
        parse("def bad := ;")
    assert e.value.diagnostic.code is Code.PARSE
    assert e.value.diagnostic.span is not None


def test_comments_and_unicode_arrow():
    assert read_term("Set0 → Set0 -- a comment") == read_term("Set0 -> Set0")


def test_elaborate_lambda():
    assert read_term("fun (x : Set0) => x") == Lam(REL, SortT(0), Var(0))


def test_unknown_identifier_is_a_scope_error():
    items, _ = elaborate(parse("#infer foo;"))
    assert isinstance(items[0], ElabFailure)
    assert items[0].diagnostic.code is Code.SCOPE


def test_irrelevant_variable_elaborates():
    # rejecting it is the checker's job
    assert read_term("fun [x : Set0] => x") == Lam(IRR, SortT(0), Var(0))


def test_definitions_are_inlined():
    items, env = elaborate(parse("def U : Set1 := Set0; #check Unit : U;"))
    assert env["U"] == SortT(0)
    assert items[1].type == SortT(0)


def test_failed_def_under_fail_is_not_defined():
    items, env = elaborate(parse("#fail def bad : Set0 := Set0;"))
    assert isinstance(items[0], Fail) and "bad" not in env


def test_nested_fail_is_rejected():
    with pytest.raises(IITTError):
        parse("#fail #fail #infer Set0;")


def test_print_examples():
    assert print_term(Lam(IRR, UNIT_TY, UNIT_VAL)) == "fun [x : Unit] => ()"
    assert print_term(App(REL, App(REL, Var(1), Var(0)), Var(0)), ["f", "x"]) == "f x x"
    assert print_term(App(REL, Var(1), App(REL, Var(0), Var(0))), ["f", "x"]) == "f (x x)"
    arrows = Pi(REL, Pi(REL, SortT(0), SortT(0)), Pi(REL, SortT(0), SortT(0)))
    assert print_term(arrows) == "(Set0 -> Set0) -> Set0 -> Set0"
    assert print_term(DUMMY) == "irr"


def test_print_freshens_shadowed_context_names():
    # both context entries are called x; the outer one must be renamed
    outer, inner = print_term(App(REL, Var(1), Var(0)), ["x", "x"]).split()
    assert inner == "x" and outer != "x"
    assert print_term(Var(0), ["_"]) != "_"


def test_corpus_round_trip():
    count = 0
    for item in corpus_items():
        for t in iter_terms(item):
            assert read_term(print_term(t)) == t
            count += 1
    assert count > 50


def test_spans_are_monotone():
    for path in corpus_files():
        items = parse(path.read_text(encoding="utf-8"))
        spans = [it.span for it in items]
        assert spans == sorted(spans)
        toks = tokenize(path.read_text(encoding="utf-8"))
        assert [t.span for t in toks] == sorted(t.span for t in toks)


@settings(max_examples=500)
@given(terms(max_free=2))
def test_round_trip_arbitrary_terms(t):
    names = [f"v{k}" for k in range(max(free_vars(t), default=-1) + 1)]
    assert read_term(print_term(t, names), names) == t


@settings(max_examples=1000)
@given(st.text(alphabet="()[]:;,.=->#_ xyfunletinsqSigSet0123Unit\n", max_size=60))
def test_parse_is_total(source):
    try:
        items, _ = elaborate(parse(source))
    except IITTError as e:
        assert e.diagnostic.code is Code.PARSE
    else:
        assert isinstance(items, list)


@given(st.text(max_size=40))
def test_parse_is_total_on_any_text(source):
    try:
        parse(source)
    except IITTError:
        pass


def test_deep_nesting_is_a_diagnostic():
    src = "#infer " + "(" * 5000 + "Set0" + ")" * 5000 + ";"
    try:
        parse(src)
    except IITTError as e:
        assert e.diagnostic.code is Code.PARSE


def test_size_counts_nodes():
    assert size(read_term("fun (x : Set0) => x")) == 3
