from conftest import ctx_of, term
from iitt.core import IRR, REL, Pi, SigmaW, SortT, Var, alpha_eq
from iitt.equality import (
    EqStatus,
    ne_eq,
    ne_eq_irr,
    ne_eq_whnf,
    tm_eq,
    tm_eq_whnf,
    ty_eq,
    ty_eq_whnf,
)
from iitt.evaluation import Fuel, whnf

EMPTY = ctx_of()
X = ctx_of("X : Set0")
F = ctx_of("U : Set0", "u : U", "v : U", "f : [x : U] -> U")


def test_ty_eq_examples():
    assert ty_eq(EMPTY, SortT(0), SortT(0))
    assert not ty_eq(EMPTY, term(EMPTY, "(x : Set0) -> Set0"), term(EMPTY, "[x : Set0] -> Set0"))
    assert ty_eq(X, term(X, "(fun (Y : Set0) => Y) X"), term(X, "X"))


def test_ty_eq_whnf_examples():
    pi = Pi(REL, SortT(0), SortT(0))
    assert ty_eq_whnf(EMPTY, pi, pi)
    r = ty_eq_whnf(EMPTY, SortT(0), SortT(1))
    assert r.status is EqStatus.REJECTED and r.reason is not None
    assert ty_eq_whnf(X, Var(0), Var(0))


def test_ty_eq_sees_through_codomain_reduction():
    a = term(X, "(x : X) -> (fun (Y : Set0) => Y) X")
    assert ty_eq(X, a, term(X, "X -> X"))
    assert not ty_eq(X, term(X, "Sig (x : X). X"), term(X, "Sig [x : X]. X"))
    assert ty_eq(X, term(X, "Sq ((fun (Y : Set0) => Y) X)"), term(X, "Sq X"))


def test_ne_eq_examples():
    r = ne_eq(F, term(F, "f [u]"), term(F, "f [v]"))
    assert r and r.type == Var(3)
    ctx = ctx_of("U : Set0", "x : U")
    r = ne_eq(ctx, Var(0), Var(0))
    assert r and r.type == Var(1)
    ctx = ctx_of("U : Set0", "x : U", "y : U")
    assert not ne_eq(ctx, Var(1), Var(0))


def test_relevant_arguments_are_compared():
    ctx = ctx_of("U : Set0", "u : U", "v : U", "f : (x : U) -> U")
    assert not ne_eq(ctx, term(ctx, "f u"), term(ctx, "f v"))
    assert ne_eq(ctx, term(ctx, "f u"), term(ctx, "f u"))


def test_ne_eq_whnf_returns_pi():
    ctx = ctx_of("U : Set0", "u : U", "f : [x : U] -> (y : U) -> U")
    r = ne_eq_whnf(ctx, term(ctx, "f [u]"), term(ctx, "f [u]"))
    assert r and isinstance(r.type, Pi)


def test_ne_eq_whnf_reduces_instantiated_codomain():
    ctx = ctx_of("f : (x : Set0) -> (fun (Y : Set0) => Y) (x -> x)", "A : Set0")
    n = term(ctx, "f A")
    # ne_eq returns the instantiated codomain as is, a redex
    assert not isinstance(ne_eq(ctx, n, n).type, Pi)
    r = ne_eq_whnf(ctx, n, n)
    assert r and isinstance(r.type, Pi)


def test_rejection_propagates():
    ctx = ctx_of("U : Set0", "x : U", "y : U", "g : (a : U) -> U")
    r = ne_eq_whnf(ctx, term(ctx, "g x"), term(ctx, "g y"))
    assert r.status is EqStatus.REJECTED
    assert r.trail[0] == "ne_eq_whnf"


def test_tm_eq_examples():
    numeral_type = term(EMPTY, "(Unit -> Unit) -> Unit -> Unit")
    zero = term(EMPTY, "fun (f : Unit -> Unit) (x : Unit) => x")
    one = term(EMPTY, "fun (f : Unit -> Unit) (x : Unit) => f x")
    assert tm_eq(EMPTY, zero, one, numeral_type)
    ctx = ctx_of("U : Set0", "f : (x : U) -> U")
    assert tm_eq(ctx, term(ctx, "f"), term(ctx, "fun (x : U) => f x"), term(ctx, "(x : U) -> U"))
    assert tm_eq(EMPTY, SortT(0), SortT(0), SortT(1))


def test_numerals_differ_over_a_type_with_two_elements():
    ty = term(EMPTY, "(Set0 -> Set0) -> Set0 -> Set0")
    zero = term(EMPTY, "fun (f : Set0 -> Set0) (x : Set0) => x")
    one = term(EMPTY, "fun (f : Set0 -> Set0) (x : Set0) => f x")
    assert not tm_eq(EMPTY, zero, one, ty)


def test_irrelevant_eta():
    ctx = ctx_of("U : Set0", "f : [y : U] -> U")
    assert tm_eq(ctx, term(ctx, "fun [x : U] => f [x]"), term(ctx, "f"), term(ctx, "[x : U] -> U"))


def test_squash_and_unit_accept_anything():
    ctx = ctx_of("U : Set0", "t : U", "s : U", "p : Sq U")
    sq_u = term(ctx, "Sq U")
    assert tm_eq(ctx, term(ctx, "sq t"), term(ctx, "sq s"), sq_u)
    assert tm_eq(ctx, term(ctx, "sq t"), term(ctx, "p"), sq_u)
    assert tm_eq(ctx_of("a : Unit", "b : Unit"), Var(0), Var(1), term(EMPTY, "Unit"))


def test_sigma_pairs():
    ctx = ctx_of("U : Set0", "u : U", "v : U")
    irr = SigmaW(IRR, Var(2), Var(3))
    rel = SigmaW(REL, Var(2), Var(3))
    assert tm_eq(ctx, term(ctx, "([u], v)"), term(ctx, "([v], v)"), irr)
    assert not tm_eq(ctx, term(ctx, "(u, v)"), term(ctx, "(v, v)"), rel)
    assert tm_eq(ctx, term(ctx, "(u, v)"), term(ctx, "(u, v)"), rel)


def test_no_eta_for_sigma():
    ctx = ctx_of("U : Set0", "p : Sig (x : U). U")
    ty = term(ctx, "Sig (x : U). U")
    assert not tm_eq(ctx, term(ctx, "p"), term(ctx, "let (a, b) = p in (a, b)"), ty)


def test_split_bodies_compared_under_binders():
    ctx = ctx_of("U : Set0", "p : Sig (x : U). U")
    a = term(ctx, "let (x, y) = p in x")
    b = term(ctx, "let (x, y) = p in y")
    assert tm_eq(ctx, a, a, Var(1))
    assert not tm_eq(ctx, a, b, Var(1))


def test_tm_eq_whnf_on_whnf_type():
    ctx = ctx_of("U : Set0", "f : (x : U) -> U")
    ty = whnf(term(ctx, "(x : U) -> U"))
    assert tm_eq_whnf(ctx, term(ctx, "f"), term(ctx, "fun (x : U) => f x"), ty)


def test_ne_eq_irr_examples():
    ctx = ctx_of("U : Set0", "x ÷ U", "y ÷ U")
    assert ne_eq_irr(ctx, Var(1), Var(0))
    # Var 5 is not bound at all
    assert not ne_eq_irr(ctx, Var(1), Var(5))
    rel = ctx_of("U : Set0", "x : U")
    assert ne_eq_irr(rel, Var(0), Var(0))


def test_ne_eq_irr_requires_a_common_type():
    ctx = ctx_of("U : Set0", "V : Set0", "x ÷ U", "y ÷ V")
    assert not ne_eq_irr(ctx, Var(1), Var(0))


def test_inferred_type_unique_for_left_neutral():
    ctx = ctx_of("U : Set0", "u : U", "v : U", "f : [x : U] -> U", "g : (x : U) -> U")
    candidates = [term(ctx, s) for s in ("f [u]", "f [v]", "g u", "g (f [v])", "g (f [u])")]
    for left in candidates:
        types = [r.type for r in (ne_eq(ctx, left, right) for right in candidates) if r]
        assert types and all(alpha_eq(t, types[0]) for t in types)


def test_fuel_exhaustion_is_reported():
    redex = term(X, "(fun (Y : Set0) => Y) X")
    r = ty_eq(X, redex, Var(0), Fuel(0))
    assert r.status is EqStatus.FUEL_EXHAUSTED
    assert ty_eq(X, redex, Var(0), Fuel(1))
