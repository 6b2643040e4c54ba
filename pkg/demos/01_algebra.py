"""The Lie algebra <x> ⋉ L(V) and its structure constants.

Run: python demos/01_algebra.py
"""
from urlab.lie_core import bracket, build_g, derived_ideal

g = build_g(3, 1)
print("basis:", g.names)

# x acts on V by a lower Jordan block with eigenvalue lambda
x, v0, v1 = (g.basis_vector(g.index(name)) for name in ("x", "v0", "v1"))


def show(vec):
    return " + ".join(f"{c}*{name}" for c, name in zip(vec, g.names) if c) or "0"


print("[x, v0] =", show(bracket(g, x, v0)))
print("[v0, v1] =", show(bracket(g, v0, v1)))

# brackets of V land in the wedge part, which is central
ds = derived_ideal(g)
print("dim g =", g.dim, " dims of the derived series:", ds.dims)

# with lambda = 0 the action is nilpotent and [g, g] shrinks
print("lambda = 0:", derived_ideal(build_g(3, 0)).dims)
