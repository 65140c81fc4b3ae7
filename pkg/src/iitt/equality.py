"""Algorithmic definitional equality.

Six mutually recursive judgements:

* ``ty_eq`` / ``ty_eq_whnf``      type equality on arbitrary types / whnfs
* ``ne_eq`` / ``ne_eq_whnf``      structural equality of neutrals, inferring their type
* ``tm_eq`` / ``tm_eq_whnf``      type-directed equality, η-expanding at Π

plus ``ne_eq_irr`` for neutrals in irrelevant positions. All judgements assume
well-typed inputs; on ill-typed inputs they stay total (fuel, ``IllShaped``)
but their answer carries no meaning.

Internally a failed comparison raises ``Mismatch``; the public wrappers turn
outcomes into ``EqResult`` values.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from iitt.core import (
    IRR,
    REL,
    App,
    Context,
    Dummy,
    PairW,
    Pi,
    ScopeError,
    SigmaW,
    SortT,
    SplitW,
    SqElim,
    SqTy,
    Term,
    UnitTy,
    Var,
    resurrect,
    shift,
    strengthen,
    subst1,
)
from iitt.diagnostics import Code, Diagnostic, IITTError
from iitt.evaluation import Fuel, FuelExhausted, IllShaped, _fuel, is_neutral, whnf


class Mismatch(Exception):
    """Two sides are not algorithmically equal.

    The message may be given as a thunk; rejections are common during
    enumeration and most messages are never read.
    """

    def __init__(self, message, judgement: str = ""):
        super().__init__()
        self._message = message
        self.judgement = judgement

    @property
    def message(self) -> str:
        if callable(self._message):
            self._message = self._message()
        return self._message

    def __str__(self) -> str:
        return self.message


class EqStatus(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    FUEL_EXHAUSTED = "fuel-exhausted"


@dataclass(frozen=True)
class EqResult:
    """Outcome of an equality query.

    ``type`` is the inferred type for structural judgements. On rejection
    ``trail`` names the judgement that was asked and, if different, the
    innermost one that failed.
    """

    status: EqStatus
    reason: Diagnostic | None = None
    type: Term | None = None
    trail: tuple[str, ...] = ()

    @property
    def accepted(self) -> bool:
        return self.status is EqStatus.ACCEPTED

    def __bool__(self) -> bool:
        return self.accepted


def _show(ctx: Context, t: Term) -> str:
    from iitt.surface import print_term

    try:
        return print_term(t, ctx.names())
    except Exception:  # printing must never mask the real failure
        return repr(t)


# -- type equality ------------------------------------------------------------


def _ty(ctx: Context, a: Term, b: Term, fuel: Fuel) -> None:
    _ty_whnf(ctx, whnf(a, fuel), whnf(b, fuel), fuel)


def _ty_whnf(ctx: Context, a: Term, b: Term, fuel: Fuel) -> None:
    ka, kb = type(a), type(b)
    if ka is kb:
        if ka is SortT:
            if a.level != b.level:
                raise Mismatch(lambda: f"Set{a.level} is not Set{b.level}", "ty_eq_whnf")
            return
        if ka is Pi or ka is SigmaW:
            if a.ann is b.ann:
                _ty(ctx, a.dom, b.dom, fuel)
                _ty(ctx.extend(REL, a.dom, a.name), a.cod, b.cod, fuel)
                return
        elif ka is UnitTy:
            return
        elif ka is SqTy:
            _ty(ctx, a.inner, b.inner, fuel)
            return
    if is_neutral(a) and is_neutral(b):
        _ne(ctx, a, b, fuel)
        return
    raise Mismatch(lambda: f"type {_show(ctx, a)} is not {_show(ctx, b)}", "ty_eq_whnf")


# -- structural equality ------------------------------------------------------


def _check_infer(ctx: Context, t: Term, fuel: Fuel) -> Term:
    from iitt.checker import infer_in

    try:
        return infer_in(ctx, t, fuel)
    except IITTError as e:
        raise Mismatch(f"cannot type eliminator body: {e.diagnostic.message}", "ne_eq") from None


def _ne(ctx: Context, n: Term, n2: Term, fuel: Fuel, expected: Term | None = None) -> Term:
    """Compare neutrals; return the type of the left one.

    ``expected``, when known, is the common type of both sides; it is only used
    to type the bodies of split and squash eliminators.
    """
    match n, n2:
        case Var(i), Var(j):
            if i != j:
                raise Mismatch(lambda: f"variables {_show(ctx, n)} and {_show(ctx, n2)} differ", "ne_eq")
            try:
                ann, ty = ctx.lookup(i)
            except ScopeError as e:
                raise Mismatch(str(e), "ne_eq") from None
            if ann is IRR:
                raise Mismatch(lambda: f"irrelevant variable {_show(ctx, n)} in relevant position", "ne_eq")
            return ty
        case App(ann, f, u), App(ann2, f2, u2) if ann is ann2:
            fty = _ne_whnf(ctx, f, f2, fuel)
            if not (isinstance(fty, Pi) and fty.ann is ann):
                raise Mismatch(lambda: f"head {_show(ctx, f)} does not have a {ann.value}-function type", "ne_eq")
            if ann is REL:
                _tm(ctx, u, u2, fty.dom, fuel)
            return subst1(fty.cod, u)
        case SplitW(p, v, names), SplitW(p2, v2):
            sty = _ne_whnf(ctx, p, p2, fuel)
            if not isinstance(sty, SigmaW):
                raise Mismatch("split scrutinee is not a pair", "ne_eq")
            inner = ctx.extend(sty.ann, sty.dom, names[0]).extend(REL, sty.cod, names[1])
            return _eliminator_bodies(ctx, inner, 2, v, v2, fuel, expected)
        case SqElim(p, v, name), SqElim(_, v2):
            # all inhabitants of a squash type are equal, so scrutinees need no comparison
            sty = _ne_whnf(ctx, p, p, fuel)
            if not isinstance(sty, SqTy):
                raise Mismatch("squash eliminator scrutinee is not squashed", "ne_eq")
            inner = ctx.extend(IRR, sty.inner, name)
            return _eliminator_bodies(ctx, inner, 1, v, v2, fuel, expected)
    raise Mismatch(lambda: f"neutrals {_show(ctx, n)} and {_show(ctx, n2)} differ", "ne_eq")


def _eliminator_bodies(
    ctx: Context, inner: Context, bound: int, v: Term, v2: Term, fuel: Fuel, expected: Term | None
) -> Term:
    body_ty = shift(expected, bound) if expected is not None else _check_infer(inner, v, fuel)
    _tm(inner, v, v2, body_ty, fuel)
    if expected is not None:
        return expected
    result = strengthen(body_ty, bound)
    if result is None:
        result = strengthen(whnf(body_ty, fuel), bound)
    if result is None:
        raise Mismatch("eliminator result type depends on the bound variables", "ne_eq")
    return result


def _ne_whnf(ctx: Context, n: Term, n2: Term, fuel: Fuel) -> Term:
    return whnf(_ne(ctx, n, n2, fuel), fuel)


# -- type-directed equality ---------------------------------------------------


def _tm(ctx: Context, t: Term, t2: Term, ty: Term, fuel: Fuel) -> None:
    _tm_whnf(ctx, t, t2, whnf(ty, fuel), fuel)


def _tm_whnf(ctx: Context, t: Term, t2: Term, ty: Term, fuel: Fuel) -> None:
    match ty:
        case Pi(ann, dom, cod, name):
            inner = ctx.extend(ann, dom, name)
            x = Var(0)
            _tm(inner, App(ann, shift(t), x), App(ann, shift(t2), x), cod, fuel)
        case SortT():
            _ty(ctx, t, t2, fuel)
        case UnitTy() | SqTy():
            pass
        case SigmaW(ann, dom, cod):
            a, b = whnf(t, fuel), whnf(t2, fuel)
            if isinstance(a, PairW) and isinstance(b, PairW):
                if ann is REL:
                    _tm(ctx, a.fst, b.fst, dom, fuel)
                else:
                    _irr_self(ctx, a.fst, b.fst, dom, fuel)
                _tm(ctx, a.snd, b.snd, subst1(cod, a.fst), fuel)
            elif is_neutral(a) and is_neutral(b):
                _ne(ctx, a, b, fuel, expected=ty)
            else:
                raise Mismatch(lambda: f"{_show(ctx, a)} and {_show(ctx, b)} differ at a Σ type", "tm_eq_whnf")
        case _ if is_neutral(ty):
            a, b = whnf(t, fuel), whnf(t2, fuel)
            if not (is_neutral(a) and is_neutral(b)):
                raise Mismatch(lambda: f"{_show(ctx, a)} and {_show(ctx, b)} are not both neutral", "tm_eq_whnf")
            _ne(ctx, a, b, fuel, expected=ty)
        case _:
            raise Mismatch(lambda: f"{_show(ctx, ty)} is not a type", "tm_eq_whnf")


def _irr_self(ctx: Context, u: Term, u2: Term, ty: Term, fuel: Fuel) -> None:
    """Both sides self-related in the resurrected context; never cross-compared."""
    rctx = resurrect(ctx)
    for side in (u, u2):
        if not isinstance(side, Dummy):
            _tm(rctx, side, side, ty, fuel)


def _ne_irr(ctx: Context, n: Term, n2: Term, fuel: Fuel) -> Term:
    rctx = resurrect(ctx)
    a = _ne_whnf(rctx, n, n, fuel)
    b = _ne_whnf(rctx, n2, n2, fuel)
    if a != b:
        _ty_whnf(rctx, a, b, fuel)
    return a


# -- public API ---------------------------------------------------------------


def _run(judgement: str, thunk) -> EqResult:
    try:
        ty = thunk()
    except Mismatch as m:
        trail = (judgement,) if m.judgement in ("", judgement) else (judgement, m.judgement)
        return EqResult(EqStatus.REJECTED, Diagnostic(Code.EQ, m.message), trail=trail)
    except IllShaped as e:
        return EqResult(EqStatus.REJECTED, Diagnostic(Code.EQ, f"ill-typed input: {e}"))
    except FuelExhausted as e:
        return EqResult(EqStatus.FUEL_EXHAUSTED, Diagnostic(Code.FUEL, str(e)))
    except RecursionError:
        return EqResult(EqStatus.FUEL_EXHAUSTED, Diagnostic(Code.FUEL, "recursion depth exceeded"))
    return EqResult(EqStatus.ACCEPTED, type=ty)


def ty_eq(ctx: Context, a: Term, b: Term, fuel: Fuel | int | None = None) -> EqResult:
    """Are the types ``a`` and ``b`` equal in ``ctx``?"""
    f = _fuel(fuel)
    return _run("ty_eq", lambda: _ty(ctx, a, b, f))


def ty_eq_whnf(ctx: Context, a: Term, b: Term, fuel: Fuel | int | None = None) -> EqResult:
    f = _fuel(fuel)
    return _run("ty_eq_whnf", lambda: _ty_whnf(ctx, a, b, f))


def ne_eq(ctx: Context, n: Term, n2: Term, fuel: Fuel | int | None = None) -> EqResult:
    """Structural equality; on success ``result.type`` is the inferred type."""
    f = _fuel(fuel)
    return _run("ne_eq", lambda: _ne(ctx, n, n2, f))


def ne_eq_whnf(ctx: Context, n: Term, n2: Term, fuel: Fuel | int | None = None) -> EqResult:
    f = _fuel(fuel)
    return _run("ne_eq_whnf", lambda: _ne_whnf(ctx, n, n2, f))


def tm_eq(ctx: Context, t: Term, t2: Term, ty: Term, fuel: Fuel | int | None = None) -> EqResult:
    """Are ``t`` and ``t2`` equal at type ``ty``?"""
    f = _fuel(fuel)
    return _run("tm_eq", lambda: _tm(ctx, t, t2, ty, f))


def tm_eq_whnf(ctx: Context, t: Term, t2: Term, ty: Term, fuel: Fuel | int | None = None) -> EqResult:
    f = _fuel(fuel)
    return _run("tm_eq_whnf", lambda: _tm_whnf(ctx, t, t2, ty, f))


def ne_eq_irr(ctx: Context, n: Term, n2: Term, fuel: Fuel | int | None = None) -> EqResult:
    """Irrelevant structural equality: each side self-related in the resurrected context."""
    f = _fuel(fuel)
    return _run("ne_eq_irr", lambda: _ne_irr(ctx, n, n2, f))
