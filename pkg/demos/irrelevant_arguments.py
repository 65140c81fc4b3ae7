"""Irrelevant arguments: the checker ignores them, conversion ignores them,
and extraction deletes them.

Run with ``python demos/irrelevant_arguments.py``.
"""

from iitt import IRR, REL, Context, check, erase_external, infer, print_term, read_term, tm_eq
from iitt.checker import TypeCheckError
from iitt.untyped import show

# U : Set0, u v : U, f : [x : U] -> U, g : (x : U) -> U
names = ["U", "u", "v", "f", "g"]
ctx = Context()
for name, ann, ty in [
    ("U", REL, "Set0"),
    ("u", REL, "U"),
    ("v", REL, "U"),
    ("f", REL, "[x : U] -> U"),
    ("g", REL, "(x : U) -> U"),
]:
    ctx = ctx.extend(ann, read_term(ty, ctx.names()), name)


def t(src):
    return read_term(src, ctx.names())


U = t("U")

print("== conversion")
for lhs, rhs in [("f [u]", "f [v]"), ("g u", "g v"), ("g (f [u])", "g (f [v])")]:
    r = tm_eq(ctx, t(lhs), t(rhs), U)
    print(f"{lhs:12} = {rhs:12} : U   {r.status.value}")

print("\n== an irrelevant variable may only be used irrelevantly")
for src in ["fun [x : U] => f [x]", "fun [x : U] => g x", "fun [x : U] => x"]:
    try:
        ty = infer(ctx, t(src))
        print(f"{src:24} : {print_term(ty, ctx.names())}")
    except TypeCheckError as e:
        print(f"{src:24} rejected: {e.diagnostic.message}")

# an irrelevant binding w ÷ U is usable inside f [_] only
irr_ctx = ctx.extend(IRR, t("U"), "w")
check(irr_ctx, read_term("f [w]", irr_ctx.names()), read_term("U", irr_ctx.names()))
print("with w ÷ U:  f [w] : U")

print("\n== extraction")
prog = read_term("fun (A : Set0) [a : A] (k : [y : A] -> A) => k [a]")
print("source  :", print_term(prog))
print("program :", show(erase_external(prog)))
