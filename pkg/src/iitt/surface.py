"""Concrete syntax: lexer, parser, elaborator and pretty-printer.

Square brackets mark irrelevance throughout::

    (x : A) -> B      [x : A] -> B      A -> B
    fun (x : A) => t  fun [x : A] => t  fun (x : A) [y : B] => t
    f u               f [u]
    Sig (x : A). B    Sig [x : A]. B    (u, t)    ([u], t)
    let (x, y) = p in v
    Sq A    sq t    let sq x = t in v
    Set0 Set1 ...   Unit   ()   irr

Items end with ``;``::

    def n : T := t;   #check t : T;   #infer t;   #eq t = u : T;
    #whnf t;          #erase t;       #fail <item>
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

from iitt.core import (
    DUMMY,
    IRR,
    REL,
    UNIT_TY,
    UNIT_VAL,
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
    free_vars,
)
from iitt.diagnostics import Code, Diagnostic, IITTError, Span

KEYWORDS = frozenset({"def", "fun", "let", "in", "Sig", "Sq", "sq", "irr", "Unit"})
COMMANDS = frozenset({"check", "infer", "eq", "whnf", "erase", "fail"})


class ParseError(IITTError):
    pass


class ScopeError(IITTError):
    pass


# -- surface AST ---------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceTerm:
    span: Span = field(compare=False)


@dataclass(frozen=True)
class SVar(SurfaceTerm):
    name: str


@dataclass(frozen=True)
class SSort(SurfaceTerm):
    level: int


@dataclass(frozen=True)
class SPi(SurfaceTerm):
    ann: Ann
    name: str
    dom: SurfaceTerm
    cod: SurfaceTerm


@dataclass(frozen=True)
class SLam(SurfaceTerm):
    ann: Ann
    name: str
    dom: SurfaceTerm
    body: SurfaceTerm


@dataclass(frozen=True)
class SApp(SurfaceTerm):
    ann: Ann
    fn: SurfaceTerm
    arg: SurfaceTerm


@dataclass(frozen=True)
class SUnitTy(SurfaceTerm):
    pass


@dataclass(frozen=True)
class SUnitVal(SurfaceTerm):
    pass


@dataclass(frozen=True)
class SSigma(SurfaceTerm):
    ann: Ann
    name: str
    dom: SurfaceTerm
    cod: SurfaceTerm


@dataclass(frozen=True)
class SPair(SurfaceTerm):
    ann: Ann
    fst: SurfaceTerm
    snd: SurfaceTerm


@dataclass(frozen=True)
class SSplit(SurfaceTerm):
    x: str
    y: str
    scrut: SurfaceTerm
    body: SurfaceTerm


@dataclass(frozen=True)
class SSqTy(SurfaceTerm):
    inner: SurfaceTerm


@dataclass(frozen=True)
class SSqVal(SurfaceTerm):
    inner: SurfaceTerm


@dataclass(frozen=True)
class SSqElim(SurfaceTerm):
    x: str
    scrut: SurfaceTerm
    body: SurfaceTerm


@dataclass(frozen=True)
class SDummy(SurfaceTerm):
    pass


# -- items -------------------------------------------------------------------
# The same item classes hold surface terms after parsing and core terms after
# elaboration.

AnyTerm = Union[SurfaceTerm, Term]


@dataclass(frozen=True)
class Def:
    name: str
    type: AnyTerm
    body: AnyTerm
    span: Span = field(compare=False)
    kind = "def"


@dataclass(frozen=True)
class CmdCheck:
    term: AnyTerm
    type: AnyTerm
    span: Span = field(compare=False)
    kind = "check"


@dataclass(frozen=True)
class CmdInfer:
    term: AnyTerm
    span: Span = field(compare=False)
    kind = "infer"


@dataclass(frozen=True)
class CmdEq:
    lhs: AnyTerm
    rhs: AnyTerm
    type: AnyTerm
    span: Span = field(compare=False)
    kind = "eq"


@dataclass(frozen=True)
class CmdWhnf:
    term: AnyTerm
    span: Span = field(compare=False)
    kind = "whnf"


@dataclass(frozen=True)
class CmdErase:
    term: AnyTerm
    span: Span = field(compare=False)
    kind = "erase"


@dataclass(frozen=True)
class ElabFailure:
    """An item whose elaboration failed; kept so ``#fail`` can consume it."""

    diagnostic: Diagnostic
    inner_kind: str
    span: Span = field(compare=False)
    kind = "error"


@dataclass(frozen=True)
class Fail:
    inner: "Item"
    span: Span = field(compare=False)
    kind = "fail"

    def __post_init__(self):
        if isinstance(self.inner, Fail):
            raise ValueError("#fail cannot wrap another #fail")


Item = Union[Def, CmdCheck, CmdInfer, CmdEq, CmdWhnf, CmdErase, Fail, ElabFailure]


# -- lexer -------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT SORT KW CMD SYM EOF
    text: str
    span: Span


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<cmd>\#[A-Za-z]+)
  | (?P<sym>->|=>|:=|→|[()\[\]:,.=;])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)
_SORT_RE = re.compile(r"Set(0|[1-9][0-9]*)\Z")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        span = Span(line, pos - line_start + 1)
        if m is None:
            raise ParseError(Diagnostic(Code.PARSE, f"unexpected character {source[pos]!r}", span))
        text = m.group()
        kind = m.lastgroup
        if kind == "cmd":
            if text[1:] not in COMMANDS:
                raise ParseError(Diagnostic(Code.PARSE, f"unknown command {text}", span))
            tokens.append(Token("CMD", text[1:], span))
        elif kind == "sym":
            tokens.append(Token("SYM", "->" if text == "→" else text, span))
        elif kind == "ident":
            if _SORT_RE.match(text):
                tokens.append(Token("SORT", text, span))
            elif text in KEYWORDS:
                tokens.append(Token("KW", text, span))
            else:
                tokens.append(Token("IDENT", text, span))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", Span(line, pos - line_start + 1)))
    return tokens


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    # token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, kind: str, text: str | None = None, k: int = 0) -> bool:
        t = self.peek(k) if k else self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_sym(self, text: str, k: int = 0) -> bool:
        return self.at("SYM", text, k)

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, what: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        return ParseError(Diagnostic(Code.PARSE, f"expected {what}, found {found}", t.span))

    def expect_sym(self, text: str) -> Token:
        if not self.at_sym(text):
            raise self.error(repr(text))
        return self.advance()

    def expect_kw(self, text: str) -> Token:
        if not self.at("KW", text):
            raise self.error(repr(text))
        return self.advance()

    def expect_ident(self) -> str:
        if not self.at("IDENT"):
            raise self.error("an identifier")
        return self.advance().text

    # items

    def items(self) -> list[Item]:
        out = []
        while not self.at("EOF"):
            out.append(self.item())
        return out

    def item(self) -> Item:
        t = self.tok
        if self.at("KW", "def"):
            self.advance()
            name = self.expect_ident()
            self.expect_sym(":")
            ty = self.term()
            self.expect_sym(":=")
            body = self.term()
            self.expect_sym(";")
            return Def(name, ty, body, t.span)
        if not self.at("CMD"):
            raise self.error("an item (def or #command)")
        cmd = self.advance().text
        if cmd == "fail":
            if self.at("CMD", "fail"):
                raise self.error("an item other than #fail")
            return Fail(self.item(), t.span)
        tm = self.term()
        if cmd == "check":
            self.expect_sym(":")
            item: Item = CmdCheck(tm, self.term(), t.span)
        elif cmd == "eq":
            self.expect_sym("=")
            rhs = self.term()
            self.expect_sym(":")
            item = CmdEq(tm, rhs, self.term(), t.span)
        elif cmd == "infer":
            item = CmdInfer(tm, t.span)
        elif cmd == "whnf":
            item = CmdWhnf(tm, t.span)
        else:
            item = CmdErase(tm, t.span)
        self.expect_sym(";")
        return item

    # terms

    def at_binder(self, k: int = 0) -> bool:
        return (self.at_sym("(", k) or self.at_sym("[", k)) and self.at("IDENT", k=k + 1) and self.at_sym(":", k + 2)

    def binder(self) -> tuple[Ann, str, SurfaceTerm, Span]:
        open_ = self.advance()
        ann = REL if open_.text == "(" else IRR
        name = self.expect_ident()
        self.expect_sym(":")
        dom = self.term()
        self.expect_sym(")" if ann is REL else "]")
        return ann, name, dom, open_.span

    def binders(self) -> list[tuple[Ann, str, SurfaceTerm, Span]]:
        if not self.at_binder():
            raise self.error("a binder '(x : A)' or '[x : A]'")
        out = []
        while self.at_binder():
            out.append(self.binder())
        return out

    def term(self) -> SurfaceTerm:
        t = self.tok
        if self.at("KW", "fun"):
            self.advance()
            bs = self.binders()
            self.expect_sym("=>")
            body = self.term()
            for k in range(len(bs) - 1, -1, -1):
                ann, name, dom, span = bs[k]
                body = SLam(t.span if k == 0 else span, ann, name, dom, body)
            return body
        if self.at("KW", "let"):
            self.advance()
            if self.at("KW", "sq"):
                self.advance()
                x = self.expect_ident()
                self.expect_sym("=")
                scrut = self.term()
                self.expect_kw("in")
                return SSqElim(t.span, x, scrut, self.term())
            self.expect_sym("(")
            x = self.expect_ident()
            self.expect_sym(",")
            y = self.expect_ident()
            self.expect_sym(")")
            self.expect_sym("=")
            scrut = self.term()
            self.expect_kw("in")
            return SSplit(t.span, x, y, scrut, self.term())
        if self.at("KW", "Sig"):
            self.advance()
            if not self.at_binder():
                raise self.error("a binder '(x : A)' or '[x : A]'")
            ann, name, dom, _ = self.binder()
            self.expect_sym(".")
            return SSigma(t.span, ann, name, dom, self.term())
        if self.at_binder():
            bs = self.binders()
            self.expect_sym("->")
            cod = self.term()
            for ann, name, dom, span in reversed(bs):
                cod = SPi(span, ann, name, dom, cod)
            return cod
        lhs = self.app()
        if self.at_sym("->"):
            self.advance()
            return SPi(lhs.span, REL, "_", lhs, self.term())
        return lhs

    def app(self) -> SurfaceTerm:
        head = self.prefix()
        while True:
            if self.at_sym("[") and not self.at_binder():
                self.advance()
                arg = self.term()
                self.expect_sym("]")
                head = SApp(head.span, IRR, head, arg)
            elif self.starts_atom() and not self.at_binder():
                head = SApp(head.span, REL, head, self.atom())
            else:
                return head

    def prefix(self) -> SurfaceTerm:
        t = self.tok
        if self.at("KW", "Sq"):
            self.advance()
            return SSqTy(t.span, self.atom())
        if self.at("KW", "sq"):
            self.advance()
            return SSqVal(t.span, self.atom())
        return self.atom()

    def starts_atom(self) -> bool:
        t = self.tok
        return (
            t.kind in ("IDENT", "SORT")
            or (t.kind == "KW" and t.text in ("Unit", "irr"))
            or (t.kind == "SYM" and t.text == "(")
        )

    def atom(self) -> SurfaceTerm:
        t = self.tok
        if t.kind == "IDENT":
            self.advance()
            return SVar(t.span, t.text)
        if t.kind == "SORT":
            self.advance()
            return SSort(t.span, int(t.text[3:]))
        if self.at("KW", "Unit"):
            self.advance()
            return SUnitTy(t.span)
        if self.at("KW", "irr"):
            self.advance()
            return SDummy(t.span)
        if self.at_sym("("):
            self.advance()
            if self.at_sym(")"):
                self.advance()
                return SUnitVal(t.span)
            if self.at_sym("[") and not self.at_binder():
                self.advance()
                fst = self.term()
                self.expect_sym("]")
                self.expect_sym(",")
                snd = self.term()
                self.expect_sym(")")
                return SPair(t.span, IRR, fst, snd)
            inner = self.term()
            if self.at_sym(","):
                self.advance()
                snd = self.term()
                self.expect_sym(")")
                return SPair(t.span, REL, inner, snd)
            self.expect_sym(")")
            return inner
        raise self.error("a term")


def parse(source: str) -> list[Item]:
    """Parse a whole file. Raises ``ParseError`` at the first offending token."""
    try:
        return _Parser(source).items()
    except RecursionError:
        raise ParseError(Diagnostic(Code.PARSE, "input nested too deeply", Span(1, 1))) from None


def parse_term(source: str) -> SurfaceTerm:
    p = _Parser(source)
    t = p.term()
    if not p.at("EOF"):
        raise p.error("end of input")
    return t


# -- elaboration -------------------------------------------------------------


def elaborate_term(
    t: SurfaceTerm, scope: Sequence[str] = (), defs: Mapping[str, Term] | None = None
) -> Term:
    """Resolve names to de Bruijn indices; defined names are inlined.

    ``scope`` lists local names outermost first. ``defs`` maps global names to
    closed core terms.
    """
    return _elab(t, list(scope), defs or {})


def _elab(t: SurfaceTerm, scope: list[str], defs: Mapping[str, Term]) -> Term:
    match t:
        case SVar(span, name):
            for i in range(len(scope) - 1, -1, -1):
                if scope[i] == name and name != "_":
                    return Var(len(scope) - 1 - i)
            if name in defs:
                return defs[name]
            raise ScopeError(Diagnostic(Code.SCOPE, f"unknown identifier {name!r}", span))
        case SSort(_, k):
            return SortT(k)
        case SPi(_, ann, name, dom, cod):
            return Pi(ann, _elab(dom, scope, defs), _elab(cod, scope + [name], defs), name)
        case SLam(_, ann, name, dom, body):
            return Lam(ann, _elab(dom, scope, defs), _elab(body, scope + [name], defs), name)
        case SSigma(_, ann, name, dom, cod):
            return SigmaW(ann, _elab(dom, scope, defs), _elab(cod, scope + [name], defs), name)
        case SApp(_, ann, f, u):
            return App(ann, _elab(f, scope, defs), _elab(u, scope, defs))
        case SUnitTy():
            return UNIT_TY
        case SUnitVal():
            return UNIT_VAL
        case SDummy():
            return DUMMY
        case SPair(_, ann, a, b):
            return PairW(ann, _elab(a, scope, defs), _elab(b, scope, defs))
        case SSplit(_, x, y, p, body):
            return SplitW(_elab(p, scope, defs), _elab(body, scope + [x, y], defs), (x, y))
        case SSqTy(_, a):
            return SqTy(_elab(a, scope, defs))
        case SSqVal(_, a):
            return SqVal(_elab(a, scope, defs))
        case SSqElim(_, x, p, body):
            return SqElim(_elab(p, scope, defs), _elab(body, scope + [x], defs), x)
    raise TypeError(f"not a surface term: {t!r}")


def elaborate(
    items: Sequence[Item], defs: Mapping[str, Term] | None = None, scope: Sequence[str] = ()
) -> tuple[list[Item], dict[str, Term]]:
    """Elaborate parsed items to core items.

    Returns the core items (failed ones become ``ElabFailure``) and the
    definition environment after the last item. A ``def`` under ``#fail`` does
    not extend the environment.
    """
    env = dict(defs or {})
    out: list[Item] = []
    for item in items:
        out.append(_elab_item(item, env, list(scope), top=True))
    return out, env


def _elab_item(item: Item, env: dict[str, Term], scope: list[str], top: bool) -> Item:
    def e(t: SurfaceTerm) -> Term:
        return _elab(t, scope, env)

    try:
        match item:
            case Def(name, ty, body, span):
                core = Def(name, e(ty), e(body), span)
                if top:
                    env[name] = core.body
                return core
            case CmdCheck(t, ty, span):
                return CmdCheck(e(t), e(ty), span)
            case CmdInfer(t, span):
                return CmdInfer(e(t), span)
            case CmdEq(a, b, ty, span):
                return CmdEq(e(a), e(b), e(ty), span)
            case CmdWhnf(t, span):
                return CmdWhnf(e(t), span)
            case CmdErase(t, span):
                return CmdErase(e(t), span)
            case Fail(inner, span):
                return Fail(_elab_item(inner, env, scope, top=False), span)
    except ScopeError as err:
        return ElabFailure(err.diagnostic, item.kind, item.span)
    raise TypeError(f"not an item: {item!r}")


def read_term(source: str, scope: Sequence[str] = (), defs: Mapping[str, Term] | None = None) -> Term:
    """Parse and elaborate a single term; convenient for tests and demos."""
    return elaborate_term(parse_term(source), scope, defs)


# -- printing ----------------------------------------------------------------

_ATOM, _APP, _TERM = 2, 1, 0


def print_term(t: Term, names: Sequence[str] = ()) -> str:
    """Render a core term; ``names`` are the context's names, outermost first.

    Binder names are taken from the hints and freshened so that no binder
    shadows a name in scope; this guarantees the output re-elaborates to ``t``.
    Context names that are unusable or shadowed are freshened the same way.
    """
    scope: list[str] = []
    for i, name in enumerate(names):
        # a later binding of the same name would hide this one
        hidden = name in names[i + 1:]
        scope.append(_fresh(name, scope + list(names[i + 1:])) if hidden or not _usable(name) else name)
    return _pr(t, scope, _TERM)


def _usable(name: str) -> bool:
    return (
        re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name) is not None
        and name != "_"
        and name not in KEYWORDS
        and not _SORT_RE.match(name)
    )


def _fresh(hint: str, scope: list[str]) -> str:
    base = hint if _usable(hint) else "x"
    if base not in scope:
        return base
    stem = base.rstrip("0123456789") or "x"
    k = 1
    while f"{stem}{k}" in scope or not _usable(f"{stem}{k}"):
        k += 1
    return f"{stem}{k}"


def _var_name(i: int, scope: list[str]) -> str:
    if 0 <= i < len(scope):
        return scope[-1 - i]
    return f"#{i - len(scope)}"  # ill-scoped; not re-parsable by design


def _pr(t: Term, scope: list[str], prec: int) -> str:
    def paren(s: str, level: int) -> str:
        return f"({s})" if prec > level else s

    match t:
        case Var(i):
            return _var_name(i, scope)
        case SortT(k):
            return f"Set{k}"
        case UnitTy():
            return "Unit"
        case UnitVal():
            return "()"
        case Dummy():
            return "irr"
        case Pi(ann, dom, cod, name):
            if ann is REL and 0 not in free_vars(cod):
                x = _fresh(name, scope)
                return paren(f"{_pr(dom, scope, _APP)} -> {_pr(cod, scope + [x], _TERM)}", _TERM)
            parts = []
            while True:
                x = _fresh(name, scope)
                o, c = ("(", ")") if ann is REL else ("[", "]")
                parts.append(f"{o}{x} : {_pr(dom, scope, _TERM)}{c}")
                scope = scope + [x]
                # keep the telescope going while the next Π is dependent or irrelevant
                if isinstance(cod, Pi) and (cod.ann is IRR or 0 in free_vars(cod.cod)):
                    ann, dom, name, cod = cod.ann, cod.dom, cod.name, cod.cod
                    continue
                break
            return paren(f"{' '.join(parts)} -> {_pr(cod, scope, _TERM)}", _TERM)
        case Lam():
            parts = []
            while isinstance(t, Lam):
                x = _fresh(t.name, scope)
                o, c = ("(", ")") if t.ann is REL else ("[", "]")
                parts.append(f"{o}{x} : {_pr(t.dom, scope, _TERM)}{c}")
                scope = scope + [x]
                t = t.body
            return paren(f"fun {' '.join(parts)} => {_pr(t, scope, _TERM)}", _TERM)
        case App(ann, f, u):
            arg = _pr(u, scope, _ATOM) if ann is REL else f"[{_pr(u, scope, _TERM)}]"
            return paren(f"{_pr(f, scope, _APP)} {arg}", _APP)
        case SigmaW(ann, dom, cod, name):
            x = _fresh(name, scope)
            o, c = ("(", ")") if ann is REL else ("[", "]")
            return paren(f"Sig {o}{x} : {_pr(dom, scope, _TERM)}{c}. {_pr(cod, scope + [x], _TERM)}", _TERM)
        case PairW(ann, a, b):
            fst = _pr(a, scope, _TERM)
            if ann is IRR:
                fst = f"[{fst}]"
            return f"({fst}, {_pr(b, scope, _TERM)})"
        case SplitW(p, body, (hx, hy)):
            x = _fresh(hx, scope)
            y = _fresh(hy, scope + [x])
            return paren(
                f"let ({x}, {y}) = {_pr(p, scope, _TERM)} in {_pr(body, scope + [x, y], _TERM)}", _TERM
            )
        case SqTy(a):
            return paren(f"Sq {_pr(a, scope, _ATOM)}", _APP)
        case SqVal(a):
            return paren(f"sq {_pr(a, scope, _ATOM)}", _APP)
        case SqElim(p, body, hx):
            x = _fresh(hx, scope)
            return paren(f"let sq {x} = {_pr(p, scope, _TERM)} in {_pr(body, scope + [x], _TERM)}", _TERM)
    raise TypeError(f"not a core term: {t!r}")


def iter_terms(item: Item) -> Iterator[Term]:
    """Core terms mentioned by an elaborated item."""
    match item:
        case Def(_, ty, body):
            yield ty
            yield body
        case CmdCheck(t, ty):
            yield t
            yield ty
        case CmdEq(a, b, ty):
            yield a
            yield b
            yield ty
        case CmdInfer(t) | CmdWhnf(t) | CmdErase(t):
            yield t
        case Fail(inner):
            yield from iter_terms(inner)
