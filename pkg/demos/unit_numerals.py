"""Church numerals at two different types.

Over ``Unit`` every numeral is equal to every other one, because any two
values of ``Unit`` are equal and conversion is type-directed. Over ``Set0``
they are distinct. The extracted programs are distinct in both cases, which
is why extraction must not be fed to conversion.
"""

from iitt import erase_external, read_term, tm_eq
from iitt.core import EMPTY
from iitt.evaluation import nf_beta_eta
from iitt.untyped import show


def numeral(n, base):
    body = "x"
    for _ in range(n):
        body = f"f ({body})"
    return read_term(f"fun (f : {base} -> {base}) (x : {base}) => {body}")


for base in ["Unit", "Set0"]:
    ty = read_term(f"({base} -> {base}) -> {base} -> {base}")
    nums = [numeral(n, base) for n in range(4)]
    print(f"numerals over {base}")
    for i, a in enumerate(nums):
        row = ["=" if tm_eq(EMPTY, a, b, ty) else "." for b in nums]
        print(f"  {i}: {' '.join(row)}")

print("\nextracted, βη-normal:")
for n in range(3):
    print(f"  {n}: {show(nf_beta_eta(erase_external(numeral(n, 'Unit'))))}")
