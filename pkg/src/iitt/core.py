"""Terms, contexts and substitution for IITT.

Terms use de Bruijn indices. Binder name hints are carried for printing only
and are excluded from equality and hashing, so ``==`` on terms is
alpha-equivalence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class Ann(enum.Enum):
    """Binding annotation. ``REL`` is written ``:``, ``IRR`` is written ``÷``."""

    REL = ":"
    IRR = "÷"

    def __le__(self, other: Ann) -> bool:
        return self is Ann.REL or other is Ann.IRR

    def __lt__(self, other: Ann) -> bool:
        return self is Ann.REL and other is Ann.IRR


REL = Ann.REL
IRR = Ann.IRR


class Term:
    """Base class of core expressions."""

    __slots__ = ()

    def __str__(self) -> str:
        from iitt.surface import print_term

        return print_term(self)


def _hint(default: str):
    return field(default=default, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class SortT(Term):
    level: int


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Pi(Term):
    ann: Ann
    dom: Term
    cod: Term
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class Lam(Term):
    ann: Ann
    dom: Term
    body: Term
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class App(Term):
    ann: Ann
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class UnitTy(Term):
    pass


@dataclass(frozen=True, slots=True)
class UnitVal(Term):
    pass


@dataclass(frozen=True, slots=True)
class SigmaW(Term):
    ann: Ann
    dom: Term
    cod: Term
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class PairW(Term):
    ann: Ann
    fst: Term
    snd: Term


@dataclass(frozen=True, slots=True)
class SplitW(Term):
    """``let (x, y) = scrut in body``; ``body`` binds x at index 1 and y at 0."""

    scrut: Term
    body: Term
    names: tuple[str, str] = _hint(("x", "y"))


@dataclass(frozen=True, slots=True)
class SqTy(Term):
    inner: Term


@dataclass(frozen=True, slots=True)
class SqVal(Term):
    inner: Term


@dataclass(frozen=True, slots=True)
class SqElim(Term):
    """``let sq x = scrut in body``; ``x`` is bound irrelevantly."""

    scrut: Term
    body: Term
    name: str = _hint("x")


@dataclass(frozen=True, slots=True)
class Dummy(Term):
    """Placeholder for an erased proof."""


UNIT_TY = UnitTy()
UNIT_VAL = UnitVal()
DUMMY = Dummy()


def size(t: Term) -> int:
    """Node count."""
    match t:
        case Pi(_, a, b) | Lam(_, a, b) | SigmaW(_, a, b) | App(_, a, b) | PairW(_, a, b):
            return 1 + size(a) + size(b)
        case SplitW(a, b) | SqElim(a, b):
            return 1 + size(a) + size(b)
        case SqTy(a) | SqVal(a):
            return 1 + size(a)
        case _:
            return 1


def is_type_former(t: Term) -> bool:
    return isinstance(t, (SortT, Pi, SigmaW, UnitTy, SqTy))


# -- contexts ---------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Binding:
    name: str = field(compare=False)
    ann: Ann
    ty: Term


class ScopeError(LookupError):
    """A de Bruijn index points past the end of the context."""


@dataclass(frozen=True, slots=True)
class Context:
    """Bindings ordered outermost first; index 0 refers to the last one."""

    bindings: tuple[Binding, ...] = ()

    def __len__(self) -> int:
        return len(self.bindings)

    def __iter__(self) -> Iterator[Binding]:
        return iter(self.bindings)

    def extend(self, ann: Ann, ty: Term, name: str = "x") -> Context:
        return Context(self.bindings + (Binding(name, ann, ty),))

    def lookup(self, index: int) -> tuple[Ann, Term]:
        """Annotation and type of variable ``index``, shifted into scope."""
        if index < 0 or index >= len(self.bindings):
            raise ScopeError(f"variable #{index} is not bound in a context of length {len(self.bindings)}")
        b = self.bindings[-1 - index]
        return b.ann, shift(b.ty, index + 1)

    def names(self) -> list[str]:
        return [b.name for b in self.bindings]

    @classmethod
    def of(cls, *entries: tuple[str, Ann, Term]) -> Context:
        return cls(tuple(Binding(n, a, t) for n, a, t in entries))


EMPTY = Context()


def resurrect(ctx: Context) -> Context:
    """Make every irrelevant binding relevant."""
    if all(b.ann is REL for b in ctx.bindings):
        return ctx
    return Context(tuple(Binding(b.name, REL, b.ty) for b in ctx.bindings))


def resurrect_if(ann: Ann, ctx: Context) -> Context:
    return resurrect(ctx) if ann is IRR else ctx


# -- sorts ------------------------------------------------------------------


def sort_axiom(k: int) -> int:
    """Level of the sort containing ``Set k``."""
    return k + 1


def sort_rule(i: int, j: int) -> int:
    """Level of a Π or Σ whose domain lives in ``Set i`` and codomain in ``Set j``."""
    return max(i, j)


# -- substitution -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Substitution:
    """Parallel substitution.

    Index ``i < len(terms)`` maps to ``terms[i]``; any larger index ``i`` maps
    to ``Var(i - len(terms) + shift)``.
    """

    terms: tuple[Term, ...] = ()
    shift: int = 0
    _lifted: Substitution | None = field(default=None, init=False, repr=False, compare=False)

    def __call__(self, i: int) -> Term:
        if i < len(self.terms):
            return self.terms[i]
        return Var(i - len(self.terms) + self.shift)

    def lift(self) -> Substitution:
        """The substitution to use under one more binder."""
        if self._lifted is None:
            # memoised: a substitution is usually pushed under the same binders many times
            lifted = Substitution((Var(0),) + tuple(shift(t, 1) for t in self.terms), self.shift + 1)
            object.__setattr__(self, "_lifted", lifted)
        return self._lifted

    def is_identity(self) -> bool:
        return self.shift == len(self.terms) and all(
            isinstance(t, Var) and t.index == i for i, t in enumerate(self.terms)
        )

    @classmethod
    def identity(cls) -> Substitution:
        return cls((), 0)

    @classmethod
    def weakening(cls, by: int) -> Substitution:
        return cls((), by)

    @classmethod
    def single(cls, u: Term) -> Substitution:
        return cls((u,), 0)


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """``compose(s, t)`` satisfies ``subst(subst(x, s), t) == subst(x, compose(s, t))``."""
    ls, lt = len(sigma.terms), len(tau.terms)
    length = max(ls, ls - sigma.shift + lt)
    terms = tuple(subst(sigma(i), tau) for i in range(length))
    return Substitution(terms, length - ls + sigma.shift - lt + tau.shift)


def shift(t: Term, by: int = 1, cutoff: int = 0) -> Term:
    """Add ``by`` to every free index ``>= cutoff``."""
    if by == 0:
        return t
    return _shift(t, by, cutoff)


def _shift(t: Term, by: int, c: int) -> Term:
    match t:
        case Var(i):
            return Var(i + by) if i >= c else t
        case Pi(ann, a, b, n):
            return Pi(ann, _shift(a, by, c), _shift(b, by, c + 1), n)
        case Lam(ann, a, b, n):
            return Lam(ann, _shift(a, by, c), _shift(b, by, c + 1), n)
        case SigmaW(ann, a, b, n):
            return SigmaW(ann, _shift(a, by, c), _shift(b, by, c + 1), n)
        case App(ann, f, u):
            return App(ann, _shift(f, by, c), _shift(u, by, c))
        case PairW(ann, a, b):
            return PairW(ann, _shift(a, by, c), _shift(b, by, c))
        case SplitW(p, b, ns):
            return SplitW(_shift(p, by, c), _shift(b, by, c + 2), ns)
        case SqTy(a):
            return SqTy(_shift(a, by, c))
        case SqVal(a):
            return SqVal(_shift(a, by, c))
        case SqElim(p, b, n):
            return SqElim(_shift(p, by, c), _shift(b, by, c + 1), n)
        case _:
            return t


def subst(t: Term, sigma: Substitution) -> Term:
    """Apply a parallel substitution, capture-avoiding."""
    if sigma.is_identity():
        return t
    return _subst(t, sigma)


def _subst(t: Term, s: Substitution) -> Term:
    match t:
        case Var(i):
            return s(i)
        case Pi(ann, a, b, n):
            return Pi(ann, _subst(a, s), _subst(b, s.lift()), n)
        case Lam(ann, a, b, n):
            return Lam(ann, _subst(a, s), _subst(b, s.lift()), n)
        case SigmaW(ann, a, b, n):
            return SigmaW(ann, _subst(a, s), _subst(b, s.lift()), n)
        case App(ann, f, u):
            return App(ann, _subst(f, s), _subst(u, s))
        case PairW(ann, a, b):
            return PairW(ann, _subst(a, s), _subst(b, s))
        case SplitW(p, b, ns):
            return SplitW(_subst(p, s), _subst(b, s.lift().lift()), ns)
        case SqTy(a):
            return SqTy(_subst(a, s))
        case SqVal(a):
            return SqVal(_subst(a, s))
        case SqElim(p, b, n):
            return SqElim(_subst(p, s), _subst(b, s.lift()), n)
        case _:
            return t


def subst1(t: Term, u: Term) -> Term:
    """Instantiate index 0 of ``t`` with ``u`` and lower the other free indices."""
    return _inst(t, u, 0)


def subst2(t: Term, outer: Term, inner: Term) -> Term:
    """Instantiate a two-variable body: index 1 with ``outer``, index 0 with ``inner``."""
    return subst(t, Substitution((inner, outer), 0))


def _inst(t: Term, u: Term, d: int) -> Term:
    match t:
        case Var(i):
            if i < d:
                return t
            if i == d:
                return shift(u, d)
            return Var(i - 1)
        case Pi(ann, a, b, n):
            return Pi(ann, _inst(a, u, d), _inst(b, u, d + 1), n)
        case Lam(ann, a, b, n):
            return Lam(ann, _inst(a, u, d), _inst(b, u, d + 1), n)
        case SigmaW(ann, a, b, n):
            return SigmaW(ann, _inst(a, u, d), _inst(b, u, d + 1), n)
        case App(ann, f, x):
            return App(ann, _inst(f, u, d), _inst(x, u, d))
        case PairW(ann, a, b):
            return PairW(ann, _inst(a, u, d), _inst(b, u, d))
        case SplitW(p, b, ns):
            return SplitW(_inst(p, u, d), _inst(b, u, d + 2), ns)
        case SqTy(a):
            return SqTy(_inst(a, u, d))
        case SqVal(a):
            return SqVal(_inst(a, u, d))
        case SqElim(p, b, n):
            return SqElim(_inst(p, u, d), _inst(b, u, d + 1), n)
        case _:
            return t


def alpha_eq(t: Term, u: Term) -> bool:
    """Syntactic identity up to bound names."""
    return t == u


def free_vars(t: Term, depth: int = 0) -> set[int]:
    """Free de Bruijn indices of ``t`` (relative to the outside)."""
    out: set[int] = set()
    _fv(t, depth, out)
    return out


def _fv(t: Term, d: int, out: set[int]) -> None:
    match t:
        case Var(i):
            if i >= d:
                out.add(i - d)
        case Pi(_, a, b) | Lam(_, a, b) | SigmaW(_, a, b):
            _fv(a, d, out)
            _fv(b, d + 1, out)
        case App(_, a, b) | PairW(_, a, b):
            _fv(a, d, out)
            _fv(b, d, out)
        case SplitW(p, b):
            _fv(p, d, out)
            _fv(b, d + 2, out)
        case SqElim(p, b):
            _fv(p, d, out)
            _fv(b, d + 1, out)
        case SqTy(a) | SqVal(a):
            _fv(a, d, out)


def strengthen(t: Term, by: int) -> Term | None:
    """Remove the ``by`` innermost binders from the scope of ``t``.

    Returns ``None`` when ``t`` mentions one of them.
    """
    if any(i < by for i in free_vars(t)):
        return None
    return subst(t, Substitution(tuple(Var(0) for _ in range(by)), 0)) if by else t


def is_closed_under(t: Term, depth: int) -> bool:
    return all(i < depth for i in free_vars(t))


def pis(binders: Sequence[tuple[str, Ann, Term]], cod: Term) -> Term:
    """Right-nested Π from a telescope, for building terms in tests and demos."""
    for name, ann, dom in reversed(binders):
        cod = Pi(ann, dom, cod, name)
    return cod


def lams(binders: Sequence[tuple[str, Ann, Term]], body: Term) -> Term:
    for name, ann, dom in reversed(binders):
        body = Lam(ann, dom, body, name)
    return body
