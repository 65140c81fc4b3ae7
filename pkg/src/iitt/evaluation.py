"""Weak head evaluation and whnf classification.

``whnf`` runs on an explicit eliminator stack, so long reduction sequences do
not grow the Python stack. Every β-step (function, split or squash) costs one
unit of fuel.
"""

from __future__ import annotations

import enum
import os

from iitt.core import (
    Ann,
    App,
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
    subst1,
    subst2,
)
from iitt.untyped import UApp, ULam, UPair, USplit, UVar, UntypedTerm, ufree, ushift, usubst
from iitt.untyped import children as _ubinders
from iitt.untyped import rebuild as _urebuild

DEFAULT_FUEL = 1_000_000


class FuelExhausted(Exception):
    """The step budget ran out; the input diverges or is too large."""


class IllShaped(Exception):
    """An eliminator met a value of the wrong shape; the input is ill-typed."""


class Fuel:
    """A step budget, created fresh for each top-level call."""

    __slots__ = ("remaining",)

    def __init__(self, steps: int | None = None):
        self.remaining = default_fuel() if steps is None else steps

    def tick(self) -> None:
        if self.remaining <= 0:
            raise FuelExhausted("step budget exhausted")
        self.remaining -= 1

    def __repr__(self) -> str:
        return f"Fuel({self.remaining})"


def default_fuel() -> int:
    env = os.environ.get("IITT_FUEL")
    return int(env) if env else DEFAULT_FUEL


def _fuel(fuel: Fuel | int | None) -> Fuel:
    return fuel if isinstance(fuel, Fuel) else Fuel(fuel)


class WhnfView(enum.Enum):
    SORT = "sort"
    PI = "pi"
    LAM = "lam"
    UNIT_TY = "unit-ty"
    UNIT_VAL = "unit-val"
    SIGMA = "sigma"
    PAIR = "pair"
    SQ_TY = "sq-ty"
    SQ_VAL = "sq-val"
    DUMMY = "dummy"
    NEUTRAL = "neutral"
    NOT_WHNF = "not-whnf"


_VALUE_VIEWS = {
    SortT: WhnfView.SORT,
    Pi: WhnfView.PI,
    Lam: WhnfView.LAM,
    UnitTy: WhnfView.UNIT_TY,
    UnitVal: WhnfView.UNIT_VAL,
    SigmaW: WhnfView.SIGMA,
    PairW: WhnfView.PAIR,
    SqTy: WhnfView.SQ_TY,
    SqVal: WhnfView.SQ_VAL,
    Dummy: WhnfView.DUMMY,
}


def classify(t: Term) -> WhnfView:
    view = _VALUE_VIEWS.get(type(t))
    if view is not None:
        return view
    return WhnfView.NEUTRAL if is_neutral(t) else WhnfView.NOT_WHNF


def is_neutral(t: Term) -> bool:
    while True:
        match t:
            case Var():
                return True
            case App(_, f, _):
                t = f
            case SplitW(p, _) | SqElim(p, _):
                t = p
            case _:
                return False


def is_whnf(t: Term) -> bool:
    return classify(t) is not WhnfView.NOT_WHNF


def head_var(t: Term) -> int | None:
    """Index of the head variable of a neutral, else ``None``."""
    while True:
        match t:
            case Var(i):
                return i
            case App(_, f, _):
                t = f
            case SplitW(p, _) | SqElim(p, _):
                t = p
            case _:
                return None


_ELIMINATORS = (App, SplitW, SqElim)


def whnf(t: Term, fuel: Fuel | int | None = None) -> Term:
    """Weak head normal form of ``t``.

    Raises ``FuelExhausted`` when the budget runs out and ``IllShaped`` when
    reduction gets stuck on a non-neutral value.
    """
    if type(t) not in _ELIMINATORS:
        return t
    fuel = _fuel(fuel)
    orig = t
    reduced = False
    frames: list[Term] = []
    while True:
        match t:
            case App(_, f, _):
                frames.append(t)
                t = f
                continue
            case SplitW(p, _) | SqElim(p, _):
                frames.append(t)
                t = p
                continue
        # t is now a head: a variable or a value
        if not frames:
            return t
        if isinstance(t, Var):
            return _rebuild(t, frames) if reduced else orig
        frame = frames.pop()
        t = _reduce(t, frame, fuel)
        reduced = True


def _rebuild(head: Term, frames: list[Term]) -> Term:
    for frame in reversed(frames):
        match frame:
            case App(ann, _, u):
                head = App(ann, head, u)
            case SplitW(_, body, names):
                head = SplitW(head, body, names)
            case SqElim(_, body, name):
                head = SqElim(head, body, name)
    return head


def _reduce(value: Term, frame: Term, fuel: Fuel) -> Term:
    match frame, value:
        case App(ann, _, u), Lam(lann, _, body) if ann is lann:
            fuel.tick()
            return subst1(body, u)
        case SplitW(_, body), PairW(_, a, b):
            fuel.tick()
            return subst2(body, a, b)
        case SqElim(_, body), SqVal(a):
            fuel.tick()
            return subst1(body, a)
    raise IllShaped(f"cannot eliminate {type(value).__name__} with {type(frame).__name__}")


def app_active(f: Term, ann: Ann, u: Term, fuel: Fuel | int | None = None) -> Term:
    """Apply a whnf ``f`` to ``u`` and evaluate the result to whnf."""
    fuel = _fuel(fuel)
    match f:
        case Lam(lann, _, body) if lann is ann:
            fuel.tick()
            return whnf(subst1(body, u), fuel)
    if is_neutral(f):
        return App(ann, f, u)
    raise IllShaped(f"cannot apply {type(f).__name__}")


def whnf_or_none(t: Term, fuel: Fuel | int | None = None) -> Term | None:
    """``whnf`` that maps ``IllShaped`` to ``None`` (fuel errors still raise)."""
    try:
        return whnf(t, fuel)
    except IllShaped:
        return None


# -- untyped βη normalization (test oracle only) ------------------------------



def _uwhnf(t: UntypedTerm, fuel: Fuel) -> UntypedTerm:
    frames: list[UntypedTerm] = []
    while True:
        if isinstance(t, UApp):
            frames.append(t)
            t = t.fn
            continue
        if isinstance(t, USplit):
            frames.append(t)
            t = t.scrut
            continue
        if not frames:
            return t
        frame = frames[-1]
        if isinstance(frame, UApp) and isinstance(t, ULam):
            frames.pop()
            fuel.tick()
            t = usubst(t.body, (frame.arg,))
        elif isinstance(frame, USplit) and isinstance(t, UPair):
            frames.pop()
            fuel.tick()
            t = usubst(frame.body, (t.snd, t.fst))
        else:
            for f in reversed(frames):
                t = UApp(t, f.arg) if isinstance(f, UApp) else USplit(t, f.body)
            return t


def _nf(t: UntypedTerm, fuel: Fuel) -> UntypedTerm:
    t = _uwhnf(t, fuel)
    match t:
        case UApp(f, a):
            return UApp(_nf(f, fuel), _nf(a, fuel))
        case USplit(p, b):
            return USplit(_nf(p, fuel), _nf(b, fuel))
    kids = _ubinders(t)
    if not kids:
        return t
    return _urebuild(t, [_nf(k, fuel) for k, _ in kids])


def eta_reduce(t: UntypedTerm) -> UntypedTerm:
    """Maximal η-reduction, innermost first."""
    kids = _ubinders(t)
    if kids:
        t = _urebuild(t, [eta_reduce(k) for k, _ in kids])
    match t:
        case ULam(UApp(f, UVar(0))) if 0 not in ufree(f):
            return ushift(f, -1)
    return t


def nf_beta_eta(t: UntypedTerm, fuel: Fuel | int | None = None) -> UntypedTerm:
    """Full β-normal form (normal order), then maximal η-reduction."""
    return eta_reduce(_nf(t, _fuel(fuel)))
