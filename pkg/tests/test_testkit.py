import itertools

import pytest

from iitt.checker import infer
from iitt.core import EMPTY, SortT, Var
from iitt.equality import tm_eq, ty_eq
from iitt.oracles import Named, from_named, named_free, named_terms, nvar, to_named
from iitt.testkit import (
    STANDARD_CONTEXTS,
    SUITES,
    X_SET0,
    EnumBudget,
    Enumerator,
    brute_force_well_typed,
    dispatch_key,
    enum_well_typed,
    named_subst_oracle,
    run_suite,
    type_key,
)

UNIT = Named("unit")


def lam(x, body):
    return Named("lam", None, (((), UNIT), ((x,), body)))


def test_named_subst_renames_to_avoid_capture():
    got = named_subst_oracle(lam("y", nvar("x")), "x", nvar("y"))
    (_, dom), ((fresh,), body) = got.kids
    assert fresh != "y" and body == nvar("y")
    assert fresh.startswith("y")


def test_named_subst_variable():
    u = lam("z", nvar("z"))
    assert named_subst_oracle(nvar("x"), "x", u) == u
    assert named_subst_oracle(nvar("y"), "x", u) == nvar("y")


def test_named_subst_respects_shadowing():
    t = lam("x", nvar("x"))
    assert named_subst_oracle(t, "x", nvar("y")) == t


def test_named_round_trip():
    for t in named_terms(4):
        scope = sorted(named_free(t))
        assert to_named(from_named(t, scope), scope) is not None
        assert from_named(to_named(from_named(t, scope), scope), scope) == from_named(t, scope)


def test_named_term_counts():
    assert [sum(1 for _ in named_terms(n)) for n in range(1, 5)] == [3, 3, 75, 219]


def test_enumeration_small_examples():
    triples = set(enum_well_typed(EnumBudget(1, context=X_SET0)))
    assert (X_SET0, SortT(0), SortT(1)) in triples
    assert (X_SET0, Var(0), SortT(0)) in triples
    assert (EMPTY, SortT(0), SortT(1)) in set(enum_well_typed(EnumBudget(1)))


def test_enumeration_is_sound_and_duplicate_free():
    for ctx in STANDARD_CONTEXTS.values():
        seen = set()
        for c, t, ty in enum_well_typed(EnumBudget(4, context=ctx)):
            assert infer(c, t) == ty
            assert t not in seen
            seen.add(t)


def test_enumeration_matches_brute_force_closed():
    budget = EnumBudget(4)
    fast = {t: ty for _, t, ty in enum_well_typed(budget)}
    slow = brute_force_well_typed(budget)
    assert fast == slow
    assert len(fast) > 100


def test_check_sized_agrees_with_checker():
    from iitt.checker import has_type

    e = Enumerator(EnumBudget(4, context=STANDARD_CONTEXTS["X:Set0, x:X"]))
    ctx = e.budget.context
    targets = e.types_sized(ctx, 1) + e.types_sized(ctx, 3)
    for ty in targets:
        found = {t for n in range(1, 4) for t in e.check_sized(ctx, n, ty)}
        for n in range(1, 4):
            for t, _ in e.infer_sized(ctx, n):
                assert (t in found) == has_type(ctx, t, ty), (t, ty)


@pytest.mark.parametrize("name", ["X:Set0, x:X", "U:Set0, u÷U"])
def test_keys_separate_only_unequal_terms(name):
    # exhaustive at size 3: different keys always mean rejection
    ctx = STANDARD_CONTEXTS[name]
    triples = list(enum_well_typed(EnumBudget(3, context=ctx)))
    for (_, a, ta), (_, b, tb) in itertools.product(triples, repeat=2):
        if ty_eq(ctx, ta, tb) and dispatch_key(ctx, a, ta) != dispatch_key(ctx, b, ta):
            assert not tm_eq(ctx, a, b, ta)
    types = {ty for _, _, ty in triples} | {t for _, t, ty in triples if isinstance(ty, SortT)}
    for a, b in itertools.product(types, repeat=2):
        if type_key(a) != type_key(b):
            assert not ty_eq(ctx, a, b)


def test_run_suite_unknown_name():
    with pytest.raises(KeyError):
        run_suite("no-such-suite")


def test_small_suites_are_deterministic():
    a = run_suite("per", size=3)
    b = run_suite("per", size=3)
    assert a.ok and b.ok
    assert (a.cases, a.stats) == (b.cases, b.stats)


def test_failures_sorted_by_size():
    r = run_suite("injectivity", size=3)
    assert r.ok and r.cases > 0
    assert r.failures == sorted(r.failures, key=lambda f: f.size)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_every_suite_passes_at_a_small_size(name):
    r = run_suite(name, size=3)
    assert r.ok, r.summary() + "\n" + "\n".join(map(str, r.failures[:5]))
    assert r.cases > 0


# slower suites at their default budgets that the acceptance file does not cover
@pytest.mark.parametrize("name", ["uniqueness", "injectivity", "named-subst", "normalizer", "enum-completeness"])
def test_default_budgets(name):
    r = run_suite(name)
    assert r.ok, r.summary() + "\n" + "\n".join(map(str, r.failures[:5]))
