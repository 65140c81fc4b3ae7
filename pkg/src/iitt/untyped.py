"""Untyped λ-terms: the target of erasure and the domain of the βη oracle.

Types are relevant in IITT and may be passed as ordinary arguments, so type
formers survive erasure as opaque codes (``USort``, ``UPi``, ...). They carry
no annotations beyond the Π/Σ relevance flag.
"""

from __future__ import annotations

from dataclasses import dataclass


class UntypedTerm:
    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class UVar(UntypedTerm):
    index: int


@dataclass(frozen=True, slots=True)
class ULam(UntypedTerm):
    body: UntypedTerm


@dataclass(frozen=True, slots=True)
class UApp(UntypedTerm):
    fn: UntypedTerm
    arg: UntypedTerm


@dataclass(frozen=True, slots=True)
class UUnit(UntypedTerm):
    pass


@dataclass(frozen=True, slots=True)
class UPair(UntypedTerm):
    fst: UntypedTerm
    snd: UntypedTerm


@dataclass(frozen=True, slots=True)
class USplit(UntypedTerm):
    scrut: UntypedTerm
    body: UntypedTerm  # binds two variables


@dataclass(frozen=True, slots=True)
class UDummy(UntypedTerm):
    pass


@dataclass(frozen=True, slots=True)
class USort(UntypedTerm):
    level: int


@dataclass(frozen=True, slots=True)
class UPi(UntypedTerm):
    irrelevant: bool
    dom: UntypedTerm
    cod: UntypedTerm  # binds one variable


@dataclass(frozen=True, slots=True)
class USigma(UntypedTerm):
    irrelevant: bool
    dom: UntypedTerm
    cod: UntypedTerm  # binds one variable


@dataclass(frozen=True, slots=True)
class UUnitTy(UntypedTerm):
    pass


@dataclass(frozen=True, slots=True)
class USq(UntypedTerm):
    inner: UntypedTerm


def children(t: UntypedTerm) -> tuple[tuple[UntypedTerm, int], ...]:
    """Children of ``t`` paired with the number of variables each one binds."""
    match t:
        case ULam(b):
            return ((b, 1),)
        case UApp(f, a):
            return ((f, 0), (a, 0))
        case UPair(a, b):
            return ((a, 0), (b, 0))
        case USplit(p, b):
            return ((p, 0), (b, 2))
        case UPi(_, a, b) | USigma(_, a, b):
            return ((a, 0), (b, 1))
        case USq(a):
            return ((a, 0),)
        case _:
            return ()


def rebuild(t: UntypedTerm, kids: list[UntypedTerm]) -> UntypedTerm:
    match t:
        case ULam():
            return ULam(*kids)
        case UApp():
            return UApp(*kids)
        case UPair():
            return UPair(*kids)
        case USplit():
            return USplit(*kids)
        case UPi(irr):
            return UPi(irr, *kids)
        case USigma(irr):
            return USigma(irr, *kids)
        case USq():
            return USq(*kids)
    return t


def umap(t: UntypedTerm, on_var, depth: int = 0) -> UntypedTerm:
    """Rebuild ``t`` replacing each variable via ``on_var(index, depth)``."""
    if isinstance(t, UVar):
        return on_var(t.index, depth)
    kids = children(t)
    if not kids:
        return t
    return rebuild(t, [umap(k, on_var, depth + n) for k, n in kids])


def ushift(t: UntypedTerm, by: int, cutoff: int = 0) -> UntypedTerm:
    if by == 0:
        return t
    return umap(t, lambda i, d: UVar(i + by) if i >= cutoff + d else UVar(i), 0)


def usubst(t: UntypedTerm, args: tuple[UntypedTerm, ...]) -> UntypedTerm:
    """Instantiate indices ``0..len(args)-1`` with ``args`` (index 0 is ``args[0]``)."""
    n = len(args)

    def on_var(i: int, d: int) -> UntypedTerm:
        if i < d:
            return UVar(i)
        if i - d < n:
            return ushift(args[i - d], d)
        return UVar(i - n)

    return umap(t, on_var)


def ufree(t: UntypedTerm, depth: int = 0) -> set[int]:
    out: set[int] = set()

    def on_var(i: int, d: int) -> UntypedTerm:
        if i >= d + depth:
            out.add(i - d - depth)
        return UVar(i)

    umap(t, on_var)
    return out


def usize(t: UntypedTerm) -> int:
    return 1 + sum(usize(k) for k, _ in children(t))


_LETTERS = "xyzwvuabcdefghijklmnopqrst"


def show(t: UntypedTerm, style: str = "named", names: list[str] | None = None) -> str:
    """Standard λ-notation. ``style`` is ``"named"`` or ``"debruijn"``."""
    if style not in ("named", "debruijn"):
        raise ValueError(f"unknown style {style!r}")
    return _show(t, style, list(names or []), 0)


def _fresh(names: list[str]) -> str:
    k = 0
    while True:
        for c in _LETTERS:
            cand = c if k == 0 else f"{c}{k}"
            if cand not in names:
                return cand
        k += 1


def _var(i: int, style: str, names: list[str]) -> str:
    if style == "debruijn":
        return str(i)
    if i < len(names):
        return names[-1 - i]
    return f"#{i - len(names)}"


def _show(t: UntypedTerm, style: str, names: list[str], prec: int) -> str:
    # prec: 0 = binder body, 1 = application head, 2 = argument
    def paren(s: str, needed: int) -> str:
        return f"({s})" if prec > needed else s

    match t:
        case UVar(i):
            return _var(i, style, names)
        case UUnit():
            return "()"
        case UDummy():
            return "*"
        case UUnitTy():
            return "Unit"
        case USort(k):
            return f"Set{k}"
        case ULam(b):
            if style == "debruijn":
                return paren(f"λ {_show(b, style, names, 0)}", 0)
            x = _fresh(names)
            return paren(f"λ{x}. {_show(b, style, names + [x], 0)}", 0)
        case UApp(f, a):
            return paren(f"{_show(f, style, names, 1)} {_show(a, style, names, 2)}", 1)
        case UPair(a, b):
            return f"({_show(a, style, names, 0)}, {_show(b, style, names, 0)})"
        case USq(a):
            return paren(f"Sq {_show(a, style, names, 2)}", 1)
        case USplit(p, b):
            if style == "debruijn":
                return paren(f"split {_show(p, style, names, 0)} in {_show(b, style, names, 0)}", 0)
            x = _fresh(names)
            y = _fresh(names + [x])
            return paren(f"let ({x}, {y}) = {_show(p, style, names, 0)} in {_show(b, style, names + [x, y], 0)}", 0)
        case UPi(irr, a, b) | USigma(irr, a, b):
            kw = "Π" if isinstance(t, UPi) else "Σ"
            sep = "÷" if irr else ":"
            if style == "debruijn":
                return paren(f"{kw}{sep}{_show(a, style, names, 2)}. {_show(b, style, names, 0)}", 0)
            x = _fresh(names)
            return paren(f"{kw}({x} {sep} {_show(a, style, names, 0)}). {_show(b, style, names + [x], 0)}", 0)
    raise TypeError(f"not an untyped term: {t!r}")
