"""Well-typed term enumeration and the property suites built on it.

``Enumerator`` synthesizes terms by running the typing rules backwards, so it
only ever builds well-typed terms. ``raw_terms`` in ``iitt.oracles`` is the
slow check on it: every tree of a given size filtered through the checker
must give the same set.

``run_suite`` executes one named suite and returns a ``SuiteReport``. Each
suite has a default budget chosen to finish within a minute.
"""

from __future__ import annotations

import gc
import itertools
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from iitt import checker
from iitt.checker import TypeCheckError, _Checker
from iitt.core import (
    EMPTY,
    IRR,
    REL,
    Ann,
    App,
    Context,
    Lam,
    PairW,
    Pi,
    SigmaW,
    SortT,
    SplitW,
    SqElim,
    SqTy,
    SqVal,
    Substitution,
    Term,
    UnitTy,
    UnitVal,
    Var,
    resurrect,
    resurrect_if,
    shift,
    size,
    strengthen,
    subst,
    subst1,
)
from iitt.equality import EqStatus, Mismatch, _tm, _ty, ne_eq, tm_eq, ty_eq
from iitt.erasure import erase_annotations, erase_external, internal_erase
from iitt.evaluation import DEFAULT_FUEL, Fuel, FuelExhausted, IllShaped, default_fuel, is_neutral, nf_beta_eta, whnf
from iitt.oracles import from_named, named_subst, named_terms, raw_terms, small_step_normal_form
from iitt.surface import print_term

EXTENSIONS = frozenset({"unit", "sigma", "squash"})

X_SET0 = EMPTY.extend(REL, SortT(0), "X")

# The contexts the suites range over.
STANDARD_CONTEXTS: dict[str, Context] = {
    "·": EMPTY,
    "X:Set0": X_SET0,
    "X:Set0, x:X": X_SET0.extend(REL, Var(0), "x"),
    "U:Set0, u÷U": EMPTY.extend(REL, SortT(0), "U").extend(IRR, Var(0), "u"),
}


@dataclass(frozen=True)
class EnumBudget:
    """What to enumerate: term size, sort levels, context and constructs.

    ``extensions`` selects among Unit, weak Σ and squash. With
    ``irrelevance`` off, only relevant Π, λ and application are produced.
    """

    max_size: int = 4
    max_level: int = 1
    context: Context = EMPTY
    extensions: frozenset[str] = EXTENSIONS
    irrelevance: bool = True

    @property
    def anns(self) -> tuple[Ann, ...]:
        return (REL, IRR) if self.irrelevance else (REL,)


class Enumerator:
    """Rule-directed synthesis, memoized by context, size and type.

    ``infer_sized(ctx, n)`` lists every ``(t, T)`` with ``size(t) == n`` and
    ``infer(ctx, t) == T``; ``check_sized(ctx, n, T)`` lists every ``t`` of
    size ``n`` with ``check(ctx, t, T)``. Both follow the checker's rules
    exactly, including its treatment of irrelevant positions.
    """

    def __init__(self, budget: EnumBudget, fuel: int = DEFAULT_FUEL):
        self.budget = budget
        self.fuel = fuel
        self._infer: dict[tuple[Context, int], list[tuple[Term, Term]]] = {}
        self._check: dict[tuple[Context, int, Term], list[Term]] = {}
        self._whnf: dict[Term, Term] = {}

    def whnf(self, t: Term) -> Term:
        r = self._whnf.get(t)
        if r is None:
            r = self._whnf[t] = whnf(t, self.fuel)
        return r

    def convertible(self, ctx: Context, a: Term, b: Term) -> bool:
        if a == b:
            return True
        try:
            _ty(ctx, a, b, _fresh(self.fuel))
        except (Mismatch, IllShaped):
            return False
        return True

    def _splits(self, n: int) -> Iterator[tuple[int, int]]:
        # sizes of two children under one constructor node
        for a in range(1, n - 1):
            yield a, n - 1 - a

    def types_sized(self, ctx: Context, n: int) -> list[Term]:
        return [t for t, ty in self.infer_sized(ctx, n) if isinstance(self.whnf(ty), SortT)]

    def infer_sized(self, ctx: Context, n: int) -> list[tuple[Term, Term]]:
        key = (ctx, n)
        if key not in self._infer:
            self._infer[key] = list(self._gen_infer(ctx, n))
        return self._infer[key]

    def _gen_infer(self, ctx: Context, n: int) -> Iterator[tuple[Term, Term]]:
        b = self.budget
        ext = b.extensions
        if n < 1:
            return
        if n == 1:
            for i in range(len(ctx)):
                ann, ty = ctx.lookup(i)
                if ann is REL:
                    yield Var(i), ty
            for k in range(b.max_level + 1):
                yield SortT(k), SortT(k + 1)
            if "unit" in ext:
                yield UnitTy(), SortT(0)
                yield UnitVal(), UnitTy()
            return
        if "squash" in ext:
            for a in self.types_sized(ctx, n - 1):
                yield SqTy(a), self.sort_of(ctx, a)
            for a, ty in self.infer_sized(resurrect(ctx), n - 1):
                yield SqVal(a), SqTy(ty)
        for na, nb in self._splits(n):
            for ann in b.anns:
                formers = [Pi] + ([SigmaW] if "sigma" in ext else [])
                for dom in self.types_sized(ctx, na):
                    inner = ctx.extend(ann, dom)
                    s1 = self.sort_of(ctx, dom).level
                    for cod in self.types_sized(inner, nb):
                        s2 = self.sort_of(inner, cod).level
                        for former in formers:
                            yield former(ann, dom, cod), SortT(max(s1, s2))
                    for body, bty in self.infer_sized(inner, nb):
                        yield Lam(ann, dom, body), Pi(ann, dom, bty)
                for f, fty in self.infer_sized(ctx, na):
                    p = self.whnf(fty)
                    if isinstance(p, Pi) and p.ann is ann:
                        for u in self.check_sized(resurrect_if(ann, ctx), nb, p.dom):
                            yield App(ann, f, u), subst1(p.cod, u)
                if "sigma" in ext:
                    for x, xty in self.infer_sized(resurrect_if(ann, ctx), na):
                        for y, yty in self.infer_sized(ctx, nb):
                            yield PairW(ann, x, y), SigmaW(ann, xty, shift(yty), "_")
            if "sigma" in ext:
                for p, sty in self._scrutinees(ctx, na, SigmaW):
                    inner = ctx.extend(sty.ann, sty.dom).extend(REL, sty.cod)
                    for body, bty in self.infer_sized(inner, nb):
                        out = self._strengthen(bty, 2)
                        if out is not None:
                            yield SplitW(p, body), out
            if "squash" in ext:
                for p, sty in self._scrutinees(ctx, na, SqTy):
                    inner = ctx.extend(IRR, sty.inner)
                    for body, bty in self.infer_sized(inner, nb):
                        out = self._strengthen(bty, 1)
                        if out is not None:
                            yield SqElim(p, body), out

    def _scrutinees(self, ctx: Context, n: int, former: type) -> Iterator[tuple[Term, Term]]:
        for p, ty in self.infer_sized(ctx, n):
            w = self.whnf(ty)
            if isinstance(w, former):
                yield p, w

    def _strengthen(self, ty: Term, by: int) -> Term | None:
        out = strengthen(ty, by)
        if out is None:
            out = strengthen(self.whnf(ty), by)
        return out

    def sort_of(self, ctx: Context, ty: Term) -> SortT:
        return self.whnf(checker.infer(ctx, ty, self.fuel))

    def check_sized(self, ctx: Context, n: int, ty: Term) -> list[Term]:
        key = (ctx, n, ty)
        if key not in self._check:
            seen = dict.fromkeys(self._gen_check(ctx, n, ty))
            self._check[key] = list(seen)
        return self._check[key]

    def _gen_check(self, ctx: Context, n: int, ty: Term) -> Iterator[Term]:
        want = self.whnf(ty)
        ext = self.budget.extensions
        if isinstance(want, Pi) and n >= 3:
            for na, nb in self._splits(n):
                for dom in self.types_sized(ctx, na):
                    if self.convertible(ctx, dom, want.dom):
                        for body in self.check_sized(ctx.extend(want.ann, dom), nb, want.cod):
                            yield Lam(want.ann, dom, body)
        if isinstance(want, SigmaW):
            for na, nb in self._splits(n):
                for x in self.check_sized(resurrect_if(want.ann, ctx), na, want.dom):
                    for y in self.check_sized(ctx, nb, subst1(want.cod, x)):
                        yield PairW(want.ann, x, y)
        if isinstance(want, SqTy) and n >= 2:
            yield from (SqVal(a) for a in self.check_sized(resurrect(ctx), n - 1, want.inner))
        if "sigma" in ext:
            for na, nb in self._splits(n):
                for p, sty in self._scrutinees(ctx, na, SigmaW):
                    inner = ctx.extend(sty.ann, sty.dom).extend(REL, sty.cod)
                    yield from (SplitW(p, b) for b in self.check_sized(inner, nb, shift(ty, 2)))
        if "squash" in ext:
            for na, nb in self._splits(n):
                for p, sty in self._scrutinees(ctx, na, SqTy):
                    inner = ctx.extend(IRR, sty.inner)
                    yield from (SqElim(p, b) for b in self.check_sized(inner, nb, shift(ty, 1)))
        for t, tty in self.infer_sized(ctx, n):
            # these shapes are only ever checked by the structural rules above
            if isinstance(t, (Lam, PairW, SqVal, SplitW, SqElim)):
                continue
            if self.convertible(ctx, tty, ty):
                yield t

    def well_typed(self, ctx: Context | None = None, max_size: int | None = None) -> Iterator[tuple[Context, Term, Term]]:
        ctx = self.budget.context if ctx is None else ctx
        top = self.budget.max_size if max_size is None else max_size
        for n in range(1, top + 1):
            for t, ty in self.infer_sized(ctx, n):
                yield ctx, t, ty


def _fresh(fuel: int) -> Fuel:
    return Fuel(fuel)


def enum_well_typed(budget: EnumBudget, fuel: int = DEFAULT_FUEL) -> Iterator[tuple[Context, Term, Term]]:
    """Every ``(ctx, t, T)`` with ``infer(ctx, t) == T`` within ``budget``, by size."""
    return Enumerator(budget, fuel).well_typed()


def brute_force_well_typed(budget: EnumBudget, fuel: int = DEFAULT_FUEL) -> dict[Term, Term]:
    """The same set as ``enum_well_typed``, found by checking every raw tree."""
    out = {}
    ctx = budget.context
    for n in range(1, budget.max_size + 1):
        for t in raw_terms(n, len(ctx), budget.max_level, budget.extensions, budget.anns):
            try:
                out[t] = checker.infer(ctx, t, fuel)
            except (TypeCheckError, FuelExhausted):
                pass
    return out


# -- the first decision of the equality algorithm ----------------------------------


def _ne_key(n: Term) -> tuple:
    match n:
        case Var(i):
            return ("var", i)
        case App(ann, f, _):
            return ("app", ann.value, _ne_key(f))
        case SplitW(p, _):
            return ("split", _ne_key(p))
        case SqElim():
            # squash scrutinees are never compared
            return ("sq-elim",)
    return ("?", type(n).__name__)


def type_key(ty: Term, fuel: int = DEFAULT_FUEL) -> tuple:
    """Shape of a type as far as ``ty_eq`` compares it structurally.

    ``ty_eq`` recurses through sorts, Π, Σ and squash and hands neutrals to
    the structural comparison, so types with different keys are unequal.
    """
    w = whnf(ty, fuel)
    match w:
        case SortT(k):
            return ("sort", k)
        case Pi(ann, a, b) | SigmaW(ann, a, b):
            return (type(w).__name__, ann.value, type_key(a, fuel), type_key(b, fuel))
        case SqTy(a):
            return ("sq", type_key(a, fuel))
        case UnitTy():
            return ("unit",)
    return _ne_key(w)


def dispatch_key(ctx: Context, t: Term, ty: Term, fuel: int = DEFAULT_FUEL) -> tuple:
    """What ``tm_eq`` looks at before recursing into subterms.

    At a Π type both sides are applied to a fresh variable; at a sort, at Σ
    and at neutral types the weak head of each side is inspected and the
    comparison stops with a rejection unless the heads agree: same sort
    level, same former with the same annotation, or neutrals with the same
    spine shape. Terms with different keys are therefore never related. The
    suites use this to avoid comparing pairs that the algorithm rejects on
    its first step, and sample such pairs to confirm it.
    """
    w = whnf(ty, fuel)
    while isinstance(w, Pi):
        ctx = ctx.extend(w.ann, w.dom)
        t = App(w.ann, shift(t), Var(0))
        ty = w.cod
        w = whnf(ty, fuel)
    if isinstance(w, (UnitTy, SqTy)):
        return ("*",)
    a = whnf(t, fuel)
    if is_neutral(a):
        return _ne_key(a)
    match a:
        case SortT(k):
            return ("sort", k)
        case Pi(ann) | SigmaW(ann):
            return (type(a).__name__, ann.value)
    return (type(a).__name__,)


# -- reports -----------------------------------------------------------------------


@dataclass
class Failure:
    size: int
    case: str
    message: str

    def __str__(self) -> str:
        return f"[size {self.size}] {self.case}: {self.message}"


@dataclass
class SuiteReport:
    """Outcome of one suite. ``failures`` are sorted smallest first."""

    name: str
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)
    fuel_exhausted: int = 0
    elapsed: float = 0.0
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and self.fuel_exhausted == 0

    def fail(self, size_: int, case: str, message: str) -> None:
        self.failures.append(Failure(size_, case, message))

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.stats.items())
        return (
            f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures, "
            f"{self.fuel_exhausted} fuel-exhausted, {self.elapsed:.1f}s{extra}"
        )


def _show(ctx: Context, t: Term) -> str:
    return print_term(t, ctx.names())


def _case(ctx: Context, *parts: Term) -> str:
    where = ", ".join(f"{b.name}{b.ann.value}{print_term(b.ty, ctx.names()[:i])}" for i, b in enumerate(ctx))
    return f"{where or '·'} ⊢ " + " | ".join(_show(ctx, p) for p in parts)


def _outcome(report: SuiteReport, fn, *args):
    """Run an algorithm; True/False for accept/reject, None on fuel exhaustion."""
    try:
        fn(*args)
    except (Mismatch, IllShaped, TypeCheckError):
        return False
    except FuelExhausted:
        report.fuel_exhausted += 1
        return None
    return True


def _eq(report: SuiteReport, ctx: Context, a: Term, b: Term, ty: Term, fuel: int):
    try:
        _tm(ctx, a, b, ty, Fuel(fuel))
    except (Mismatch, IllShaped, TypeCheckError):
        return False
    except FuelExhausted:
        report.fuel_exhausted += 1
        return None
    return True


def _teq(report: SuiteReport, ctx: Context, a: Term, b: Term, fuel: int):
    return _outcome(report, _ty, ctx, a, b, _fresh(fuel))


class _Classes:
    """Types partitioned by ``ty_eq``; each type is compared only with the
    class representatives that share its ``type_key``."""

    def __init__(self, ctx: Context, types: Iterable[Term], report: SuiteReport, fuel: int):
        self.rep: dict[Term, Term] = {}
        buckets: dict[tuple, list[Term]] = defaultdict(list)
        for ty in dict.fromkeys(types):
            reps = buckets[type_key(ty, fuel)]
            for r in reps:
                if _teq(report, ctx, ty, r, fuel):
                    self.rep[ty] = r
                    break
            else:
                reps.append(ty)
                self.rep[ty] = ty

    def find(self, t: Term) -> Term:
        return self.rep[t]


def _relation(report, ctx, terms, fuel) -> list[list[bool]]:
    # terms: list of (t, T), all at one type class
    return [[_eq(report, ctx, a, b, ty, fuel) is True for b, _ in terms] for a, ty in terms]


def _check_per(report: SuiteReport, ctx: Context, terms: list[tuple[Term, Term]], fuel: int) -> int:
    """Symmetry and transitivity of tm_eq on one group; returns accepted pairs."""
    m = _relation(report, ctx, terms, fuel)
    n = len(terms)
    rows = [sum(1 << j for j in range(n) if m[i][j]) for i in range(n)]
    accepted = sum(bin(r).count("1") for r in rows)
    for i in range(n):
        for j in range(n):
            if m[i][j] and not m[j][i]:
                report.fail(size(terms[i][0]) + size(terms[j][0]), _case(ctx, terms[i][0], terms[j][0]),
                            "accepted one way only")
    for j in range(n):
        # every a ~ b and b ~ c must give a ~ c
        into = [i for i in range(n) if m[i][j]]
        for i in into:
            missing = rows[j] & ~rows[i]
            if missing:
                k = (missing & -missing).bit_length() - 1
                report.fail(size(terms[i][0]) + size(terms[j][0]) + size(terms[k][0]),
                            _case(ctx, terms[i][0], terms[j][0], terms[k][0]), "not transitive")
    return accepted


def _grouped(ctx, triples, report, fuel):
    """Well-typed terms grouped by (dispatch key, type class)."""
    classes = _Classes(ctx, (ty for _, _, ty in triples), report, fuel)
    groups: dict[tuple, list[tuple[Term, Term]]] = defaultdict(list)
    for _, t, ty in triples:
        groups[(dispatch_key(ctx, t, ty, fuel), classes.find(ty))].append((t, ty))
    return classes, groups


def _sample_cross(report, ctx, groups, fuel, samples, rng) -> int:
    """Confirm that pairs in different dispatch buckets are rejected."""
    by_class: dict[Term, list[list[tuple[Term, Term]]]] = defaultdict(list)
    for (_, cls), members in groups.items():
        by_class[cls].append(members)
    pools = [bs for bs in by_class.values() if len(bs) > 1]
    done = 0
    for _ in range(samples if pools else 0):
        bs = rng.choice(pools)
        g1, g2 = rng.sample(bs, 2)
        (a, ty), (b, _) = rng.choice(g1), rng.choice(g2)
        done += 1
        if _eq(report, ctx, a, b, ty, fuel):
            report.fail(size(a) + size(b), _case(ctx, a, b), "accepted across dispatch buckets")
    return done


# -- suites ---------------------------------------------------------------------------


def _suite_per(report: SuiteReport, size_: int, fuel: int) -> None:
    import random

    rng = random.Random(0)
    pairs = accepted = crossed = 0
    for ctx in STANDARD_CONTEXTS.values():
        triples = list(Enumerator(EnumBudget(size_, context=ctx), fuel).well_typed())
        for _, t, ty in triples:
            report.cases += 1
            if not _eq(report, ctx, t, t, ty, fuel):
                report.fail(size(t), _case(ctx, t), "not reflexive")
        _, groups = _grouped(ctx, triples, report, fuel)
        for members in groups.values():
            pairs += len(members) ** 2
            accepted += _check_per(report, ctx, members, fuel)
        crossed += _sample_cross(report, ctx, groups, fuel, 10_000, rng)
    report.stats.update(pairs=pairs, accepted=accepted, cross_samples=crossed)


def _suite_subject_reduction(report: SuiteReport, size_: int, fuel: int) -> None:
    for ctx in STANDARD_CONTEXTS.values():
        for _, t, ty in Enumerator(EnumBudget(size_, context=ctx), fuel).well_typed():
            report.cases += 1
            try:
                w = whnf(t, fuel)
            except FuelExhausted:
                report.fuel_exhausted += 1
                continue
            if not _outcome(report, checker.check, ctx, w, ty, REL, fuel):
                report.fail(size(t), _case(ctx, t, w), "whnf does not re-check")
            if not _outcome(report, checker.check_is_type, ctx, ty, fuel):
                report.fail(size(t), _case(ctx, t, ty), "inferred type is not a type")
            if not _eq(report, ctx, t, w, ty, fuel):
                report.fail(size(t), _case(ctx, t, w), "term and its whnf not equal")


RELEVANT_CONTEXTS = {k: v for k, v in STANDARD_CONTEXTS.items() if all(b.ann is REL for b in v)}


def _suite_oracle(report: SuiteReport, size_: int, fuel: int) -> None:
    agree = 0
    for ctx in RELEVANT_CONTEXTS.values():
        budget = EnumBudget(size_, context=ctx, extensions=frozenset(), irrelevance=False)
        triples = list(Enumerator(budget, fuel).well_typed())
        classes = _Classes(ctx, (ty for _, _, ty in triples), report, fuel)
        by_class: dict[Term, list[tuple[Term, Term]]] = defaultdict(list)
        nf: dict[Term, object] = {}
        for _, t, ty in triples:
            by_class[classes.find(ty)].append((t, ty))
            nf[t] = nf_beta_eta(erase_annotations(t), fuel)
        for members in by_class.values():
            for a, ty in members:
                for b, _ in members:
                    report.cases += 1
                    got = _eq(report, ctx, a, b, ty, fuel)
                    if got is None:
                        continue
                    if got != (nf[a] == nf[b]):
                        report.fail(size(a) + size(b), _case(ctx, a, b),
                                    f"tm_eq says {got}, βη normal forms say {not got}")
                    else:
                        agree += 1
    report.stats.update(agreements=agree)


def _irrelevant_heads(ctx: Context, e: Enumerator, size_: int):
    for _, f, fty in e.well_typed(ctx, size_):
        w = e.whnf(fty)
        if isinstance(w, Pi) and w.ann is IRR:
            yield f, w


IRRELEVANCE_CONTEXTS = dict(STANDARD_CONTEXTS)
IRRELEVANCE_CONTEXTS["U:Set0, f:[x:U]->U, u÷U, v:U"] = (
    EMPTY.extend(REL, SortT(0), "U")
    .extend(REL, Pi(IRR, Var(0), Var(1), "x"), "f")
    .extend(IRR, Var(1), "u")
    .extend(REL, Var(2), "v")
)


def _suite_irrelevance(report: SuiteReport, size_: int, fuel: int) -> None:
    heads = 0
    for ctx in IRRELEVANCE_CONTEXTS.values():
        e = Enumerator(EnumBudget(size_, context=ctx), fuel)
        rctx = resurrect(ctx)
        for f, w in _irrelevant_heads(ctx, e, size_):
            heads += 1
            args = [u for n in range(1, size_ + 1) for u in e.check_sized(rctx, n, w.dom)]
            for u in args:
                lhs = App(IRR, f, u)
                ty = subst1(w.cod, u)
                erased = erase_external(lhs)
                for u2 in args:
                    report.cases += 1
                    rhs = App(IRR, f, u2)
                    if not _eq(report, ctx, lhs, rhs, ty, fuel):
                        report.fail(size(lhs) + size(u2), _case(ctx, lhs, rhs), "irrelevant arguments compared")
                    if erase_external(rhs) != erased:
                        report.fail(size(lhs) + size(u2), _case(ctx, lhs, rhs), "external erasures differ")
    report.stats.update(functions=heads)


def _suite_termination(report: SuiteReport, size_: int, fuel: int) -> None:
    for ctx in STANDARD_CONTEXTS.values():
        for _, t, ty in Enumerator(EnumBudget(size_, context=ctx), fuel).well_typed():
            report.cases += 1
            for action in (lambda: whnf(t, fuel), lambda: whnf(ty, fuel)):
                _outcome(report, action)
            _eq(report, ctx, t, t, ty, fuel)
            _teq(report, ctx, ty, ty, fuel)


def _suite_consistency(report: SuiteReport, size_: int, fuel: int) -> None:
    ctx = X_SET0
    e = Enumerator(EnumBudget(size_, context=ctx), fuel)
    found = 0
    for n in range(1, size_ + 1):
        report.cases += len(e.infer_sized(ctx, n))
        for t in e.check_sized(ctx, n, Var(0)):
            found += 1
            report.fail(n, _case(ctx, t), "inhabits X")
    report.stats.update(inhabitants=found)


def _triples_with_corpus(size_: int, fuel: int):
    for ctx in STANDARD_CONTEXTS.values():
        yield from Enumerator(EnumBudget(size_, context=ctx), fuel).well_typed()
    yield from corpus_triples()


def corpus_triples() -> list[tuple[Context, Term, Term]]:
    """``(·, t, T)`` for every checked definition and ``#check`` in the bundled corpus."""
    from iitt import surface as S
    from iitt.corpus import corpus_items

    out = []
    for item in corpus_items():
        match item:
            case S.Def(_, ty, body):
                out.append((EMPTY, body, ty))
            case S.CmdCheck(t, ty):
                out.append((EMPTY, t, ty))
            case S.CmdEq(a, b, ty):
                out += [(EMPTY, a, ty), (EMPTY, b, ty)]
    return out


def _suite_internal_erasure(report: SuiteReport, size_: int, fuel: int) -> None:
    changed = 0
    for ctx, t, ty in _triples_with_corpus(size_, fuel):
        report.cases += 1
        try:
            e = internal_erase(ctx, t, ty, fuel)
            again = internal_erase(ctx, e, ty, fuel)
        except FuelExhausted:
            report.fuel_exhausted += 1
            continue
        changed += e != t
        if not _outcome(report, checker.check, ctx, e, ty, REL, fuel, True):
            report.fail(size(t), _case(ctx, t, e), "erased term does not re-check")
            continue
        if again != e:
            report.fail(size(t), _case(ctx, t, e, again), "not idempotent")
        if not _eq(report, ctx, t, e, ty, fuel):
            report.fail(size(t), _case(ctx, t, e), "erased term not equal to the original")
        if erase_external(e) != erase_external(t):
            report.fail(size(t), _case(ctx, t, e), "external erasures differ")
    report.stats.update(changed=changed)


def substitutions(
    target: Context, source: Context, e: Enumerator, max_size: int
) -> Iterator[Substitution]:
    """Every ``σ`` with ``target ⊢ σ : source`` whose components have size ≤ ``max_size``."""

    def go(j: int, comps: list[Term]) -> Iterator[Substitution]:
        sigma = Substitution(tuple(reversed(comps)), len(target))
        if j == len(source):
            yield sigma
            return
        b = source.bindings[j]
        want = subst(b.ty, sigma)
        goal = resurrect_if(b.ann, target)
        for n in range(1, max_size + 1):
            for u in e.check_sized(goal, n, want):
                yield from go(j + 1, comps + [u])

    yield from go(0, [])


def _suite_substitution(report: SuiteReport, size_: int, fuel: int) -> None:
    sigmas = 0
    contexts = list(STANDARD_CONTEXTS.values())
    enums = {ctx: Enumerator(EnumBudget(size_, context=ctx), fuel) for ctx in contexts}
    for source in contexts:
        triples = list(enums[source].well_typed())
        for target in contexts:
            for sigma in substitutions(target, source, enums[target], size_):
                sigmas += 1
                types: dict[Term, Term] = {}
                for _, t, ty in triples:
                    report.cases += 1
                    st = subst(t, sigma)
                    sty = types.get(ty)
                    if sty is None:
                        sty = types[ty] = subst(ty, sigma)
                    if not _outcome(report, checker.check, target, st, sty, REL, fuel):
                        report.fail(size(t), _case(target, st, sty) + f" from {_case(source, t)}",
                                    "substitution instance does not check")
    report.stats.update(substitutions=sigmas)


def _suite_enum_completeness(report: SuiteReport, size_: int, fuel: int) -> None:
    for ctx in STANDARD_CONTEXTS.values():
        budget = EnumBudget(size_, context=ctx)
        e = Enumerator(budget, fuel)
        fast = {t: ty for _, t, ty in e.well_typed()}
        slow = brute_force_well_typed(budget, fuel)
        report.cases += len(slow)
        for t in slow.keys() - fast.keys():
            report.fail(size(t), _case(ctx, t), "well-typed but not enumerated")
        for t in fast.keys() - slow.keys():
            report.fail(size(t), _case(ctx, t), "enumerated but rejected by the checker")
        for t in fast.keys() & slow.keys():
            if fast[t] != slow[t]:
                report.fail(size(t), _case(ctx, t, fast[t], slow[t]), "enumerated with the wrong type")
        # checking mode, against every small type
        targets = [ty for n in (1, 2) for ty in e.types_sized(ctx, n)]
        raws = [t for n in range(1, size_) for t in raw_terms(n, len(ctx), budget.max_level, budget.extensions, budget.anns)]
        for want in targets:
            expected = {t for t in raws if _outcome(report, checker.check, ctx, t, want, REL, fuel)}
            got = {t for n in range(1, size_) for t in e.check_sized(ctx, n, want)}
            report.cases += len(raws)
            for t in expected ^ got:
                report.fail(size(t), _case(ctx, t, want), "check enumeration disagrees with the checker")


def _has_pair(t: Term) -> bool:
    if isinstance(t, PairW):
        return True
    return any(_has_pair(getattr(t, f)) for f in ("dom", "cod", "body", "fn", "arg", "fst", "snd", "scrut", "inner")
               if isinstance(getattr(t, f, None), Term))


def _suite_uniqueness(report: SuiteReport, size_: int, fuel: int) -> None:
    for ctx in STANDARD_CONTEXTS.values():
        e = Enumerator(EnumBudget(size_, context=ctx), fuel)
        triples = list(e.well_typed())
        # inference is a function
        for _, t, ty in triples:
            report.cases += 1
            if checker.infer(ctx, t, fuel) != checker.infer(ctx, t, fuel) or checker.infer(ctx, t, fuel) != ty:
                report.fail(size(t), _case(ctx, t), "inference not deterministic")
        # structural equality returns one type per left-hand neutral
        neutrals: dict[tuple, list[Term]] = defaultdict(list)
        for _, t, _ in triples:
            w = whnf(t, fuel)
            if is_neutral(w):
                neutrals[_ne_key(w)].append(w)
        for group in neutrals.values():
            group = list(dict.fromkeys(group))
            for n in group:
                types = set()
                for n2 in group:
                    r = ne_eq(ctx, n, n2, fuel)
                    report.cases += 1
                    if r.status is EqStatus.FUEL_EXHAUSTED:
                        report.fuel_exhausted += 1
                    elif r.accepted:
                        types.add(r.type)
                if len(types) > 1:
                    report.fail(size(n), _case(ctx, n, *types), "structural equality returned different types")
        # a term checks only against equal types (pairs excepted, see docs)
        candidates = list(dict.fromkeys(ty for _, t, ty in triples if size(ty) <= 3))
        for _, t, ty in triples:
            if _has_pair(t):
                continue
            for cand in candidates:
                report.cases += 1
                if _outcome(report, checker.check, ctx, t, cand, REL, fuel) and not _teq(report, ctx, ty, cand, fuel):
                    report.fail(size(t), _case(ctx, t, ty, cand), "checks against two unequal types")


def _suite_injectivity(report: SuiteReport, size_: int, fuel: int) -> None:
    for ctx in STANDARD_CONTEXTS.values():
        e = Enumerator(EnumBudget(size_, context=ctx), fuel)
        pis = list(dict.fromkeys(w for n in range(1, size_ + 1) for a in e.types_sized(ctx, n)
                                 if isinstance(w := e.whnf(a), Pi)))
        buckets: dict[tuple, list[Pi]] = defaultdict(list)
        for p in pis:
            buckets[(p.ann, dispatch_key(ctx, p.dom, checker.infer(ctx, p.dom, fuel), fuel))].append(p)
        for group in buckets.values():
            for a in group:
                for b in group:
                    report.cases += 1
                    if _teq(report, ctx, a, b, fuel):
                        if not _teq(report, ctx, a.dom, b.dom, fuel):
                            report.fail(size(a) + size(b), _case(ctx, a, b), "domains not equal")
                        elif not _teq(report, ctx.extend(a.ann, a.dom), a.cod, b.cod, fuel):
                            report.fail(size(a) + size(b), _case(ctx, a, b), "codomains not equal")


def _suite_named_subst(report: SuiteReport, size_: int, fuel: int) -> None:
    scope = ["x", "y"]
    args = [u for n in (1, 2) for u in named_terms(n)]
    for n in range(1, size_ + 1):
        for t in named_terms(n):
            for u in args:
                du = from_named(u, scope)
                for j, name in enumerate(reversed(scope)):
                    report.cases += 1
                    sigma = Substitution(tuple(du if i == j else Var(i) for i in range(len(scope))), len(scope))
                    want = subst(from_named(t, scope), sigma)
                    got = from_named(named_subst(t, name, u), scope)
                    if got != want:
                        report.fail(n, f"{t} [{name} := {u}]", f"de Bruijn {want!r}, named {got!r}")
                # instantiating a binder: t over [y, x], u over [y]
                report.cases += 1
                if "x" not in _free_named(u):
                    want = subst1(from_named(t, ["y", "x"]), from_named(u, ["y"]))
                    got = from_named(named_subst(t, "x", u), ["y"])
                    if got != want:
                        report.fail(n, f"{t} [x := {u}]", f"subst1 {want!r}, named {got!r}")


def _free_named(u):
    from iitt.oracles import named_free

    return named_free(u)


def _suite_normalizer(report: SuiteReport, size_: int, fuel: int) -> None:
    seen = set()
    for ctx, t, _ in _triples_with_corpus(size_, fuel):
        for u in (erase_annotations(t), erase_external(t)):
            if u in seen:
                continue
            seen.add(u)
            report.cases += 1
            try:
                fast = nf_beta_eta(u, fuel)
                slow = small_step_normal_form(u)
            except FuelExhausted:
                report.fuel_exhausted += 1
                continue
            if fast != slow:
                report.fail(size(t), f"{u}", f"nf_beta_eta gives {fast}, small steps give {slow}")


@dataclass(frozen=True)
class Suite:
    run: Callable[[SuiteReport, int, int], None]
    default_size: int
    description: str


SUITES: dict[str, Suite] = {
    "per": Suite(_suite_per, 5, "tm_eq is reflexive, symmetric and transitive on enumerated terms"),
    "subject-reduction": Suite(_suite_subject_reduction, 5, "whnf preserves types; inferred types are types"),
    "oracle": Suite(_suite_oracle, 7, "tm_eq agrees with βη normal forms on the relevant, extension-free fragment"),
    "irrelevance": Suite(_suite_irrelevance, 4, "f [u] and f [u'] are equal and erase identically"),
    "termination": Suite(_suite_termination, 5, "no fuel exhaustion on well-typed input"),
    "consistency-smoke": Suite(_suite_consistency, 7, "nothing inhabits X in X : Set0"),
    "internal-erasure": Suite(_suite_internal_erasure, 5, "internal erasure re-checks, is idempotent and equal"),
    "substitution": Suite(_suite_substitution, 4, "well-typed substitutions preserve typing"),
    "enum-completeness": Suite(_suite_enum_completeness, 4, "rule-directed enumeration equals brute force"),
    "uniqueness": Suite(_suite_uniqueness, 4, "inferred types are unique"),
    "injectivity": Suite(_suite_injectivity, 4, "equal Π types have equal domains and codomains"),
    "named-subst": Suite(_suite_named_subst, 6, "de Bruijn substitution agrees with named substitution"),
    "normalizer": Suite(_suite_normalizer, 5, "nf_beta_eta agrees with a one-step reducer"),
}


def run_suite(name: str, size: int | None = None, fuel: int | None = None) -> SuiteReport:
    """Run one suite; raises ``KeyError`` for an unknown name."""
    suite = SUITES[name]
    fuel = default_fuel() if fuel is None else fuel
    report = SuiteReport(name)
    # suites allocate millions of acyclic terms; stop the collector rescanning them
    gc.collect()
    gc.freeze()
    threshold = gc.get_threshold()
    gc.set_threshold(200_000, 50, 1000)
    start = time.perf_counter()
    try:
        suite.run(report, suite.default_size if size is None else size, fuel)
    finally:
        report.elapsed = time.perf_counter() - start
        gc.set_threshold(*threshold)
        gc.unfreeze()
    report.failures.sort(key=lambda f: f.size)
    return report


named_subst_oracle = named_subst
