"""Bidirectional type checking.

Relevant obligations ``Γ ⊢ t : T`` and irrelevant ones ``Γ ⊢ t ÷ T``; the
latter are checked in the resurrected context. Abstractions carry their domain,
so nearly every term is inferable. The exceptions are pairs: a literal pair
infers its non-dependent Σ type, which fails when that type would mention a
pattern variable of an enclosing eliminator. ``check`` adds the dependent pair
rule, a structural rule for λ against Π, and the dummy rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from iitt.core import (
    IRR,
    REL,
    Ann,
    App,
    Context,
    Dummy,
    Lam,
    PairW,
    Pi,
    ScopeError,
    SigmaW,
    SortT,
    SplitW,
    SqElim,
    SqTy,
    SqVal,
    Term,
    UnitTy,
    UnitVal,
    Var,
    resurrect,
    shift,
    sort_axiom,
    sort_rule,
    strengthen,
    subst1,
    UNIT_TY,
)
from iitt.diagnostics import Code, Diagnostic, IITTError, Span
from iitt.equality import _ty, Mismatch
from iitt.evaluation import Fuel, FuelExhausted, IllShaped, _fuel, whnf

CheckMode = Ann


class TypeCheckError(IITTError):
    """A typing rule failed. ``rule`` names it."""

    def __init__(self, diagnostic: Diagnostic, rule: str = ""):
        super().__init__(diagnostic)
        self.rule = rule


def _show(ctx: Context, t: Term) -> str:
    from iitt.surface import print_term

    return print_term(t, ctx.names())


class _Checker:
    def __init__(self, fuel: Fuel, allow_dummy: bool):
        self.fuel = fuel
        self.allow_dummy = allow_dummy

    def fail(self, rule: str, message: str, code: Code = Code.TYPE) -> TypeCheckError:
        return TypeCheckError(Diagnostic(code, f"[{rule}] {message}"), rule)

    def whnf(self, t: Term) -> Term:
        try:
            return whnf(t, self.fuel)
        except IllShaped as e:
            raise self.fail("whnf", f"ill-typed redex: {e}") from None

    def conv(self, ctx: Context, got: Term, want: Term, rule: str) -> None:
        if got == want:
            return
        try:
            _ty(ctx, got, want, self.fuel)
        except (Mismatch, IllShaped):
            raise self.fail(
                rule, f"type mismatch: expected {_show(ctx, want)}, got {_show(ctx, got)}"
            ) from None

    def sort_of(self, ctx: Context, ty: Term) -> int:
        s = self.whnf(self.infer(ctx, ty))
        if not isinstance(s, SortT):
            raise self.fail("type", f"{_show(ctx, ty)} is not a type; it has type {_show(ctx, s)}")
        return s.level

    def infer(self, ctx: Context, t: Term) -> Term:
        match t:
            case Var(i):
                try:
                    ann, ty = ctx.lookup(i)
                except ScopeError as e:
                    raise self.fail("var", str(e), Code.SCOPE) from None
                if ann is IRR:
                    raise self.fail(
                        "var", f"irrelevant variable {_show(ctx, t)} used in a relevant position"
                    )
                return ty
            case SortT(k):
                return SortT(sort_axiom(k))
            case Pi(ann, dom, cod, name) | SigmaW(ann, dom, cod, name):
                s1 = self.sort_of(ctx, dom)
                s2 = self.sort_of(ctx.extend(ann, dom, name), cod)
                return SortT(sort_rule(s1, s2))
            case Lam(ann, dom, body, name):
                self.sort_of(ctx, dom)
                inner = ctx.extend(ann, dom, name)
                cod = self.infer(inner, body)
                self.sort_of(inner, cod)
                return Pi(ann, dom, cod, name)
            case App(ann, f, u):
                fty = self.whnf(self.infer(ctx, f))
                if not isinstance(fty, Pi):
                    raise self.fail("app", f"{_show(ctx, f)} is not a function; it has type {_show(ctx, fty)}")
                if fty.ann is not ann:
                    raise self.fail(
                        "app",
                        f"{_show(ctx, f)} expects a {'relevant' if fty.ann is REL else 'irrelevant'} argument",
                    )
                self.check(ctx, u, fty.dom, ann)
                return subst1(fty.cod, u)
            case UnitTy():
                return SortT(0)
            case UnitVal():
                return UNIT_TY
            case PairW(ann, a, b):
                # a literal pair is given its non-dependent Σ type
                if isinstance(a, Dummy):
                    raise self.fail("pair", "the type of ([irr], _) cannot be inferred", Code.DUMMY)
                dom = self.infer(resurrect(ctx) if ann is IRR else ctx, a)
                cod = self.infer(ctx, b)
                return SigmaW(ann, dom, shift(cod), "_")
            case SplitW(p, body, (x, y)):
                sty = self.split_scrutinee(ctx, p)
                inner = ctx.extend(sty.ann, sty.dom, x).extend(REL, sty.cod, y)
                return self.strengthened(ctx, self.infer(inner, body), 2, "split")
            case SqTy(a):
                return SortT(self.sort_of(ctx, a))
            case SqVal(a):
                if isinstance(a, Dummy):
                    raise self.fail("squash-intro", "the type of sq irr cannot be inferred", Code.DUMMY)
                return SqTy(self.infer(resurrect(ctx), a))
            case SqElim(p, body, x):
                sty = self.sq_scrutinee(ctx, p)
                bty = self.infer(ctx.extend(IRR, sty.inner, x), body)
                return self.strengthened(ctx, bty, 1, "squash-elim")
            case Dummy():
                raise self.fail("dummy", "irr is only accepted in irrelevant positions", Code.DUMMY)
        raise TypeError(f"not a core term: {t!r}")

    def strengthened(self, ctx: Context, ty: Term, by: int, rule: str) -> Term:
        out = strengthen(ty, by)
        if out is None:
            out = strengthen(self.whnf(ty), by)
        if out is None:
            raise self.fail(rule, "the result type depends on the pattern variables")
        return out

    def split_scrutinee(self, ctx: Context, p: Term) -> SigmaW:
        sty = self.whnf(self.infer(ctx, p))
        if not isinstance(sty, SigmaW):
            raise self.fail("split", f"{_show(ctx, p)} is not a pair; it has type {_show(ctx, sty)}")
        return sty

    def sq_scrutinee(self, ctx: Context, p: Term) -> SqTy:
        sty = self.whnf(self.infer(ctx, p))
        if not isinstance(sty, SqTy):
            raise self.fail("squash-elim", f"{_show(ctx, p)} is not squashed; it has type {_show(ctx, sty)}")
        return sty

    def check(self, ctx: Context, t: Term, ty: Term, mode: Ann = REL) -> None:
        if mode is IRR:
            ctx = resurrect(ctx)
        if isinstance(t, Dummy):
            if mode is not IRR:
                raise self.fail("dummy", "irr used in a relevant position", Code.DUMMY)
            if not self.allow_dummy:
                raise self.fail("dummy", "irr is not allowed here (enable --allow-irr)", Code.DUMMY)
            return
        match t:
            case Lam(ann, dom, body, name):
                want = self.whnf(ty)
                if isinstance(want, Pi):
                    if want.ann is not ann:
                        raise self.fail("lam", "abstraction and function type disagree on relevance")
                    self.sort_of(ctx, dom)
                    self.conv(ctx, dom, want.dom, "lam")
                    self.check(ctx.extend(ann, dom, name), body, want.cod)
                    return
            case PairW(ann, a, b):
                want = self.whnf(ty)
                if not isinstance(want, SigmaW):
                    raise self.fail("pair", f"a pair cannot have type {_show(ctx, want)}")
                if want.ann is not ann:
                    raise self.fail("pair", "pair and Σ type disagree on relevance")
                self.check(ctx, a, want.dom, ann)
                self.check(ctx, b, subst1(want.cod, a))
                return
            case SqVal(a):
                want = self.whnf(ty)
                if isinstance(want, SqTy):
                    self.check(ctx, a, want.inner, IRR)
                    return
            case SplitW(p, body, (x, y)):
                sty = self.split_scrutinee(ctx, p)
                inner = ctx.extend(sty.ann, sty.dom, x).extend(REL, sty.cod, y)
                self.check(inner, body, shift(ty, 2))
                return
            case SqElim(p, body, x):
                sty = self.sq_scrutinee(ctx, p)
                self.check(ctx.extend(IRR, sty.inner, x), body, shift(ty, 1))
                return
        self.conv(ctx, self.infer(ctx, t), ty, "conversion")


def _guard(fn):
    """Map exhausted recursion to ``FuelExhausted``."""

    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RecursionError:
            raise FuelExhausted("recursion depth exceeded") from None

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_guard
def infer(ctx: Context, t: Term, fuel: Fuel | int | None = None, allow_dummy: bool = False) -> Term:
    """The type of ``t`` in ``ctx``; raises ``TypeCheckError``.

    ``ctx`` is assumed well-formed (see ``check_context``).
    """
    return _Checker(_fuel(fuel), allow_dummy).infer(ctx, t)


@_guard
def check(
    ctx: Context,
    t: Term,
    ty: Term,
    mode: CheckMode = REL,
    fuel: Fuel | int | None = None,
    allow_dummy: bool = False,
) -> None:
    """Check ``t`` against the well-formed type ``ty``; raises ``TypeCheckError``."""
    _Checker(_fuel(fuel), allow_dummy).check(ctx, t, ty, mode)


@_guard
def check_is_type(ctx: Context, ty: Term, fuel: Fuel | int | None = None, allow_dummy: bool = False) -> int:
    """Level ``k`` such that ``ty : Set k``."""
    return _Checker(_fuel(fuel), allow_dummy).sort_of(ctx, ty)


@_guard
def check_context(ctx: Context, fuel: Fuel | int | None = None) -> None:
    c = _Checker(_fuel(fuel), False)
    prefix = Context()
    for b in ctx:
        try:
            c.sort_of(prefix, b.ty)
        except TypeCheckError as e:
            raise TypeCheckError(
                Diagnostic(Code.TYPE, f"[context] binding {b.name}: {e.diagnostic.message}"), "context"
            ) from None
        prefix = prefix.extend(b.ann, b.ty, b.name)


def infer_in(ctx: Context, t: Term, fuel: Fuel) -> Term:
    """Inference for use inside the equality algorithm, sharing its fuel."""
    return _Checker(fuel, True).infer(ctx, t)


def has_type(ctx: Context, t: Term, ty: Term, mode: CheckMode = REL, **kw) -> bool:
    try:
        check(ctx, t, ty, mode, **kw)
    except TypeCheckError:
        return False
    return True


def try_infer(ctx: Context, t: Term, **kw) -> Term | None:
    try:
        return infer(ctx, t, **kw)
    except TypeCheckError:
        return None


# -- programs ------------------------------------------------------------------


@dataclass(frozen=True)
class ItemResult:
    kind: str
    span: Span | None
    ok: bool
    output: str | None = None
    diagnostic: Diagnostic | None = None
    name: str | None = None

    def to_json(self) -> dict:
        return {
            "span": None if self.span is None else {"line": self.span.line, "col": self.span.col},
            "kind": self.kind,
            "status": "ok" if self.ok else "error",
            "output": self.output,
            "diagnostic": None if self.diagnostic is None else self.diagnostic.to_json(),
        }


@dataclass
class Report:
    items: list[ItemResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.items)

    def to_json(self) -> dict:
        return {"items": [r.to_json() for r in self.items]}


@dataclass(frozen=True)
class TypedEntry:
    name: str
    type: Term
    body: Term


def run_item(item, fuel: int | None = None, allow_irr: bool = False, erase_style: str = "named") -> ItemResult:
    """Check or execute one elaborated item."""
    from iitt import surface as S

    if isinstance(item, S.Fail):
        inner = run_item(item.inner, fuel, allow_irr, erase_style)
        if inner.ok:
            diag = Diagnostic(Code.TYPE, f"#fail: the {item.inner.kind} item succeeded", item.span)
            return ItemResult("fail", item.span, False, None, diag)
        return ItemResult("fail", item.span, True, f"failed as expected: {inner.diagnostic.message}")
    if isinstance(item, S.ElabFailure):
        return ItemResult(item.inner_kind, item.span, False, None, item.diagnostic.at(item.span))
    try:
        output = _execute(item, _fuel(fuel), allow_irr, erase_style)
    except IITTError as e:
        return ItemResult(item.kind, item.span, False, None, e.diagnostic.at(item.span),
                          getattr(item, "name", None))
    except FuelExhausted as e:
        return ItemResult(item.kind, item.span, False, None, Diagnostic(Code.FUEL, str(e), item.span))
    except RecursionError:
        diag = Diagnostic(Code.FUEL, "recursion depth exceeded", item.span)
        return ItemResult(item.kind, item.span, False, None, diag)
    return ItemResult(item.kind, item.span, True, output, None, getattr(item, "name", None))


def _execute(item, fuel: Fuel, allow_irr: bool, erase_style: str) -> str:
    from iitt import surface as S
    from iitt.equality import _run, _tm
    from iitt.erasure import erase_external
    from iitt.untyped import show

    c = _Checker(fuel, allow_irr)
    ctx = Context()
    match item:
        case S.Def(name, ty, body):
            c.sort_of(ctx, ty)
            c.check(ctx, body, ty)
            return f"{name} : {_show(ctx, ty)}"
        case S.CmdCheck(t, ty):
            c.sort_of(ctx, ty)
            c.check(ctx, t, ty)
            return "ok"
        case S.CmdInfer(t):
            return _show(ctx, c.infer(ctx, t))
        case S.CmdEq(a, b, ty):
            c.sort_of(ctx, ty)
            c.check(ctx, a, ty)
            c.check(ctx, b, ty)
            res = _run("tm_eq", lambda: _tm(ctx, a, b, ty, fuel))
            if res.accepted:
                return "accepted"
            if res.status.name == "FUEL_EXHAUSTED":
                raise FuelExhausted(res.reason.message)
            raise IITTError(Diagnostic(Code.EQ, f"not equal: {res.reason.message}"))
        case S.CmdWhnf(t):
            c.infer(ctx, t)
            return _show(ctx, c.whnf(t))
        case S.CmdErase(t):
            c.infer(ctx, t)
            return show(erase_external(t), erase_style)
    raise TypeError(f"not an item: {item!r}")


def check_program(items, fuel: int | None = None, allow_irr: bool = False, erase_style: str = "named") -> Report:
    """Run elaborated items in order; failures are reported per item."""
    return Report([run_item(it, fuel, allow_irr, erase_style) for it in items])


def typed_program(items, fuel: int | None = None) -> list[TypedEntry]:
    """The verified definitions of a program, in order; raises on the first bad one."""
    from iitt import surface as S

    out = []
    for it in items:
        if isinstance(it, S.Def):
            r = run_item(it, fuel)
            if not r.ok:
                raise IITTError(r.diagnostic)
            out.append(TypedEntry(it.name, it.type, it.body))
    return out
