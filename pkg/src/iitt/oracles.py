"""Independent reference implementations used to cross-check the kernel.

Nothing here is used by the checker. Each oracle takes a different route to
the same answer as the code it checks:

* named terms with textbook capture-avoiding substitution, against de Bruijn
  ``subst``;
* a one-redex-at-a-time reducer with its own substitution, against
  ``nf_beta_eta``;
* raw enumeration of every syntax tree filtered through the checker, against
  rule-directed enumeration (see ``iitt.testkit``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from iitt.core import (
    IRR,
    REL,
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
)
from iitt.evaluation import FuelExhausted
from iitt.untyped import UApp, ULam, UntypedTerm, UPair, USplit, UVar, children, rebuild

# -- named terms ----------------------------------------------------------------


@dataclass(frozen=True)
class Named:
    """A core term with named variables.

    ``data`` is the variable name for ``var``, the level for ``sort`` and the
    annotation for annotated formers. Each kid is ``(bound_names, term)``.
    """

    tag: str
    data: object = None
    kids: tuple[tuple[tuple[str, ...], Named], ...] = ()


def nvar(x: str) -> Named:
    return Named("var", x)


def named_free(t: Named) -> set[str]:
    if t.tag == "var":
        return {t.data}
    out: set[str] = set()
    for bound, k in t.kids:
        out |= named_free(k) - set(bound)
    return out


def _all_names(t: Named) -> set[str]:
    if t.tag == "var":
        return {t.data}
    out: set[str] = set()
    for bound, k in t.kids:
        out |= set(bound) | _all_names(k)
    return out


def _fresh_name(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("'")
    cand = stem + "'"
    while cand in avoid:
        cand += "'"
    return cand


def _rename(t: Named, old: str, new: str) -> Named:
    # new is fresh, so this plain renaming cannot capture
    if t.tag == "var":
        return nvar(new) if t.data == old else t
    kids = tuple((b, k if old in b else _rename(k, old, new)) for b, k in t.kids)
    return Named(t.tag, t.data, kids)


def named_subst(t: Named, x: str, u: Named) -> Named:
    """``t[x := u]``, renaming binders that would capture free names of ``u``."""
    if t.tag == "var":
        return u if t.data == x else t
    fu = named_free(u)
    kids = []
    for bound, k in t.kids:
        if x in bound:
            kids.append((bound, k))
            continue
        if x not in named_free(k):
            kids.append((bound, k))
            continue
        new_bound = list(bound)
        for i, b in enumerate(bound):
            if b in fu:
                fresh = _fresh_name(b, fu | _all_names(k) | set(new_bound) | {x})
                k = _rename(k, b, fresh)
                new_bound[i] = fresh
        kids.append((tuple(new_bound), named_subst(k, x, u)))
    return Named(t.tag, t.data, tuple(kids))


def from_named(t: Named, scope: list[str]) -> Term:
    """de Bruijn form; ``scope`` lists the names in scope, innermost last."""

    def go(t: Named, env: list[str]) -> Term:
        k = t.kids
        match t.tag:
            case "var":
                for i, name in enumerate(reversed(env)):
                    if name == t.data:
                        return Var(i)
                raise KeyError(f"free name {t.data!r} not in scope")
            case "sort":
                return SortT(t.data)
            case "unit-ty":
                return UnitTy()
            case "unit":
                return UnitVal()
            case "dummy":
                return Dummy()
            case "pi" | "lam" | "sigma":
                cls = {"pi": Pi, "lam": Lam, "sigma": SigmaW}[t.tag]
                (x,) = k[1][0]
                return cls(t.data, go(k[0][1], env), go(k[1][1], env + [x]), x)
            case "app":
                return App(t.data, go(k[0][1], env), go(k[1][1], env))
            case "pair":
                return PairW(t.data, go(k[0][1], env), go(k[1][1], env))
            case "split":
                x, y = k[1][0]
                return SplitW(go(k[0][1], env), go(k[1][1], env + [x, y]), (x, y))
            case "sq-ty":
                return SqTy(go(k[0][1], env))
            case "sq":
                return SqVal(go(k[0][1], env))
            case "sq-elim":
                (x,) = k[1][0]
                return SqElim(go(k[0][1], env), go(k[1][1], env + [x]), x)
        raise ValueError(t.tag)

    return go(t, list(scope))


def to_named(t: Term, scope: list[str]) -> Named:
    """Named form; binders get names that shadow nothing in scope."""

    def pick(env: list[str]) -> str:
        i = len(env)
        while f"v{i}" in env:
            i += 1
        return f"v{i}"

    def go(t: Term, env: list[str]) -> Named:
        match t:
            case Var(i):
                return nvar(env[-1 - i])
            case SortT(k):
                return Named("sort", k)
            case UnitTy():
                return Named("unit-ty")
            case UnitVal():
                return Named("unit")
            case Dummy():
                return Named("dummy")
            case Pi(ann, a, b) | Lam(ann, a, b) | SigmaW(ann, a, b):
                tag = {Pi: "pi", Lam: "lam", SigmaW: "sigma"}[type(t)]
                x = pick(env)
                return Named(tag, ann, (((), go(a, env)), ((x,), go(b, env + [x]))))
            case App(ann, f, u):
                return Named("app", ann, (((), go(f, env)), ((), go(u, env))))
            case PairW(ann, a, b):
                return Named("pair", ann, (((), go(a, env)), ((), go(b, env))))
            case SplitW(p, b):
                x = pick(env)
                y = pick(env + [x])
                return Named("split", None, (((), go(p, env)), ((x, y), go(b, env + [x, y]))))
            case SqTy(a):
                return Named("sq-ty", None, (((), go(a, env)),))
            case SqVal(a):
                return Named("sq", None, (((), go(a, env)),))
            case SqElim(p, b):
                x = pick(env)
                return Named("sq-elim", None, (((), go(p, env)), ((x,), go(b, env + [x]))))
        raise ValueError(t)

    return go(t, list(scope))


def named_terms(size: int, alphabet: tuple[str, ...] = ("x", "y")) -> Iterator[Named]:
    """Every named term of exactly ``size`` nodes over ``alphabet``.

    Variables and binders both draw from the alphabet, so shadowing and
    capture situations are all represented. Leaves are variables and ``()``;
    formers are relevant λ, irrelevant application, pairs, split, squash.
    """
    if size == 1:
        for x in alphabet:
            yield nvar(x)
        yield Named("unit")
        return
    for t in named_terms(size - 1, alphabet):
        yield Named("sq", None, (((), t),))
    for a in range(1, size - 1):
        b = size - 1 - a
        for l, r in itertools.product(list(named_terms(a, alphabet)), list(named_terms(b, alphabet))):
            yield Named("app", IRR, (((), l), ((), r)))
            yield Named("pair", REL, (((), l), ((), r)))
            for x in alphabet:
                yield Named("lam", REL, (((), l), ((x,), r)))
                yield Named("sq-elim", None, (((), l), ((x,), r)))
            for x, y in itertools.product(alphabet, repeat=2):
                if x != y:
                    yield Named("split", None, (((), l), ((x, y), r)))


# -- raw enumeration --------------------------------------------------------------


def raw_terms(
    size: int, depth: int, max_level: int, extensions: frozenset[str], anns: tuple[Ann, ...]
) -> list[Term]:
    """Every syntax tree of exactly ``size`` nodes with free indices below ``depth``.

    No typing knowledge is used; ``irr`` is excluded.
    """
    memo: dict[tuple[int, int], list[Term]] = {}

    def go(n: int, d: int) -> list[Term]:
        key = (n, d)
        if key in memo:
            return memo[key]
        out: list[Term] = []
        if n == 1:
            out += [Var(i) for i in range(d)]
            out += [SortT(k) for k in range(max_level + 1)]
            if "unit" in extensions:
                out += [UnitTy(), UnitVal()]
        else:
            if "squash" in extensions:
                out += [c(a) for c in (SqTy, SqVal) for a in go(n - 1, d)]
            for a in range(1, n - 1):
                b = n - 1 - a
                left = go(a, d)
                for ann in anns:
                    for x, y in itertools.product(left, go(b, d + 1)):
                        out.append(Pi(ann, x, y))
                        out.append(Lam(ann, x, y))
                        if "sigma" in extensions:
                            out.append(SigmaW(ann, x, y))
                    for x, y in itertools.product(left, go(b, d)):
                        out.append(App(ann, x, y))
                        if "sigma" in extensions:
                            out.append(PairW(ann, x, y))
                if "sigma" in extensions:
                    out += [SplitW(x, y) for x, y in itertools.product(left, go(b, d + 2))]
                if "squash" in extensions:
                    out += [SqElim(x, y) for x, y in itertools.product(left, go(b, d + 1))]
        memo[key] = out
        return out

    return go(size, depth)


# -- small-step reduction -----------------------------------------------------------


def _sh(t: UntypedTerm, d: int, c: int = 0) -> UntypedTerm:
    if isinstance(t, UVar):
        return UVar(t.index + d) if t.index >= c else t
    return rebuild(t, [_sh(k, d, c + n) for k, n in children(t)])


def _sub(t: UntypedTerm, j: int, s: UntypedTerm) -> UntypedTerm:
    # [j := s], s already valid at the depth of t
    if isinstance(t, UVar):
        return s if t.index == j else t
    return rebuild(t, [_sub(k, j + n, _sh(s, n)) for k, n in children(t)])


def _occurs(t: UntypedTerm, j: int) -> bool:
    if isinstance(t, UVar):
        return t.index == j
    return any(_occurs(k, j + n) for k, n in children(t))


def beta_step(t: UntypedTerm) -> UntypedTerm | None:
    """Contract the leftmost-outermost β or split redex, if any."""
    if isinstance(t, UApp) and isinstance(t.fn, ULam):
        return _sh(_sub(t.fn.body, 0, _sh(t.arg, 1)), -1)
    if isinstance(t, USplit) and isinstance(t.scrut, UPair):
        a, b = t.scrut.fst, t.scrut.snd
        body = _sub(t.body, 0, _sh(b, 2))
        body = _sub(body, 1, _sh(a, 2))
        return _sh(body, -2)
    kids = children(t)
    for i, (k, _) in enumerate(kids):
        r = beta_step(k)
        if r is not None:
            new = [c for c, _ in kids]
            new[i] = r
            return rebuild(t, new)
    return None


def eta_step(t: UntypedTerm) -> UntypedTerm | None:
    """Contract the leftmost-outermost η redex ``λ. f 0`` with 0 not free in f."""
    if (
        isinstance(t, ULam)
        and isinstance(t.body, UApp)
        and t.body.arg == UVar(0)
        and not _occurs(t.body.fn, 0)
    ):
        return _sh(t.body.fn, -1)
    kids = children(t)
    for i, (k, _) in enumerate(kids):
        r = eta_step(k)
        if r is not None:
            new = [c for c, _ in kids]
            new[i] = r
            return rebuild(t, new)
    return None


def small_step_normal_form(t: UntypedTerm, max_steps: int = 10_000) -> UntypedTerm:
    """β-normalize one redex at a time, then η-normalize the same way."""
    for step in (beta_step, eta_step):
        for _ in range(max_steps):
            r = step(t)
            if r is None:
                break
            t = r
        else:
            raise FuelExhausted(f"no normal form within {max_steps} steps")
    return t
