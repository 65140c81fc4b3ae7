"""Erasure of irrelevant subterms.

``internal_erase`` stays inside the theory: every checked irrelevant argument
is replaced by the dummy ``irr``. ``erase_external`` extracts an untyped
program, deleting irrelevant abstractions and applications outright.
"""

from __future__ import annotations

from iitt.core import (
    DUMMY,
    IRR,
    REL,
    Ann,
    App,
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
    Term,
    UnitTy,
    UnitVal,
    Var,
    resurrect,
    resurrect_if,
    shift,
    subst1,
)
from iitt.checker import _Checker
from iitt.evaluation import Fuel, _fuel
from iitt.untyped import (
    UApp,
    UDummy,
    ULam,
    UntypedTerm,
    UPair,
    UPi,
    USigma,
    USort,
    USplit,
    USq,
    UUnit,
    UUnitTy,
    UVar,
    ushift,
)


def internal_erase(ctx: Context, t: Term, ty: Term, fuel: Fuel | int | None = None) -> Term:
    """Replace every maximal irrelevantly-checked subterm of ``t`` by ``irr``.

    Requires ``ctx ⊢ t : ty``. The walk follows the checker's modes: an
    irrelevant argument whose type must be inferred (a squash or pair literal
    in eliminator position, say) keeps its shape and is erased inside. The
    result re-checks against ``ty`` with dummies allowed and is
    algorithmically equal to ``t``.
    """
    return _Eraser(_fuel(fuel)).check(ctx, t, ty, REL)


class _Eraser:
    def __init__(self, fuel: Fuel):
        self.c = _Checker(fuel, allow_dummy=True)

    def type_of(self, ctx: Context, t: Term) -> Term:
        return self.c.whnf(self.c.infer(ctx, t))

    def infer(self, ctx: Context, t: Term) -> Term:
        match t:
            case Pi(ann, a, b, n) | SigmaW(ann, a, b, n):
                return type(t)(ann, self.infer(ctx, a), self.infer(ctx.extend(ann, a, n), b), n)
            case Lam(ann, a, b, n):
                return Lam(ann, self.infer(ctx, a), self.infer(ctx.extend(ann, a, n), b), n)
            case App(ann, f, u):
                fty = self.type_of(ctx, f)
                return App(ann, self.infer(ctx, f), self.check(ctx, u, fty.dom, ann))
            case PairW(ann, a, b):
                return PairW(ann, self.infer(resurrect_if(ann, ctx), a), self.infer(ctx, b))
            case SplitW(p, body, (x, y)):
                sty = self.type_of(ctx, p)
                inner = ctx.extend(sty.ann, sty.dom, x).extend(REL, sty.cod, y)
                return SplitW(self.infer(ctx, p), self.infer(inner, body), (x, y))
            case SqTy(a):
                return SqTy(self.infer(ctx, a))
            case SqVal(a):
                return SqVal(self.infer(resurrect(ctx), a))
            case SqElim(p, body, x):
                sty = self.type_of(ctx, p)
                return SqElim(self.infer(ctx, p), self.infer(ctx.extend(IRR, sty.inner, x), body), x)
        return t

    def check(self, ctx: Context, t: Term, ty: Term, mode: Ann) -> Term:
        if mode is IRR:
            return DUMMY
        match t:
            case Lam(ann, a, b, n):
                want = self.c.whnf(ty)
                if isinstance(want, Pi):
                    return Lam(ann, self.infer(ctx, a), self.check(ctx.extend(ann, a, n), b, want.cod, REL), n)
            case PairW(ann, a, b):
                want = self.c.whnf(ty)
                return PairW(ann, self.check(ctx, a, want.dom, ann), self.check(ctx, b, subst1(want.cod, a), REL))
            case SqVal(_):
                if isinstance(self.c.whnf(ty), SqTy):
                    return SqVal(DUMMY)
            case SplitW(p, body, (x, y)):
                sty = self.type_of(ctx, p)
                inner = ctx.extend(sty.ann, sty.dom, x).extend(REL, sty.cod, y)
                return SplitW(self.infer(ctx, p), self.check(inner, body, shift(ty, 2), REL), (x, y))
            case SqElim(p, body, x):
                sty = self.type_of(ctx, p)
                return SqElim(self.infer(ctx, p), self.check(ctx.extend(IRR, sty.inner, x), body, shift(ty, 1), REL), x)
        return self.infer(ctx, t)


def erase_external(t: Term) -> UntypedTerm:
    """Extract an untyped term.

    Irrelevant λ-binders and irrelevant applications disappear, squash
    introductions become ``*``, and squash eliminations keep only their body.
    Type formers survive as codes because types may be passed as arguments.
    """
    return _external(t, [])


def _index(i: int, kept: list[bool]) -> UntypedTerm:
    # kept[-1 - i] says whether binder i survives erasure
    if i >= len(kept):
        return UVar(i - len(kept) + sum(kept))
    if not kept[-1 - i]:
        return UDummy()  # only reachable on unchecked input
    return UVar(sum(kept[len(kept) - i:]))


def _external(t: Term, kept: list[bool]) -> UntypedTerm:
    match t:
        case Var(i):
            return _index(i, kept)
        case Lam(Ann.IRR, _, body):
            return _external(body, kept + [False])
        case Lam(_, _, body):
            return ULam(_external(body, kept + [True]))
        case App(Ann.IRR, f, _):
            return _external(f, kept)
        case App(_, f, u):
            return UApp(_external(f, kept), _external(u, kept))
        case UnitVal():
            return UUnit()
        case PairW(Ann.IRR, _, b):
            return UPair(UDummy(), _external(b, kept))
        case PairW(_, a, b):
            return UPair(_external(a, kept), _external(b, kept))
        case SplitW(p, body):
            return USplit(_external(p, kept), _external(body, kept + [True, True]))
        case SqVal(_):
            return UDummy()
        case SqElim(_, body):
            return _external(body, kept + [False])
        case Dummy():
            return UDummy()
    return _type_code(t, kept, _external)


def _type_code(t: Term, kept: list[bool], rec) -> UntypedTerm:
    match t:
        case SortT(k):
            return USort(k)
        case UnitTy():
            return UUnitTy()
        case Pi(ann, a, b):
            return UPi(ann is IRR, rec(a, kept), rec(b, kept + [True]))
        case SigmaW(ann, a, b):
            return USigma(ann is IRR, rec(a, kept), rec(b, kept + [True]))
        case SqTy(a):
            return USq(rec(a, kept))
    raise TypeError(f"not a core term: {t!r}")


def erase_annotations(t: Term) -> UntypedTerm:
    """Drop domain annotations only; irrelevant λ and application are kept.

    Squash is read through its encoding as an irrelevant Σ with unit second
    component: ``sq u`` becomes ``(u, ())``.
    """
    return _annotations(t, [])


def _annotations(t: Term, kept: list[bool]) -> UntypedTerm:
    match t:
        case Var(i):
            return UVar(i)
        case Lam(_, _, body):
            return ULam(_annotations(body, kept + [True]))
        case App(_, f, u):
            return UApp(_annotations(f, kept), _annotations(u, kept))
        case UnitVal():
            return UUnit()
        case PairW(_, a, b):
            return UPair(_annotations(a, kept), _annotations(b, kept))
        case SplitW(p, body):
            return USplit(_annotations(p, kept), _annotations(body, kept + [True, True]))
        case SqVal(a):
            return UPair(_annotations(a, kept), UUnit())
        case SqElim(p, body):
            # let sq x = p in v  ~  let (x, _) = p in v
            return USplit(_annotations(p, kept), ushift(_annotations(body, kept + [True]), 1, 0))
        case Dummy():
            return UDummy()
    return _type_code(t, kept, _annotations)
