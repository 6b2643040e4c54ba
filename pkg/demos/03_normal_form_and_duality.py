"""Normal form, conjugation and duality.

Run: python demos/03_normal_form_and_duality.py
"""
from urlab import Matrix, RepParams, build_R, dualize, isomorphism_search, normalize
from urlab.classify_sweep import to_standard_form
from urlab.rep_builder import conjugate

rep = build_R(RepParams(3, 2, "1/2", 2, 2, 1, [[1, 3], [2, 0]], [[4], [-1]]))
normed, T = normalize(rep)
print("normalized M and N:")
print(normed.params.M)
print(normed.params.N)
print("T intertwines:", all(T @ y == z @ T for y, z in zip(rep.images, normed.images)))

# hide the block structure under a unimodular change of basis, then recover it
d = rep.dim
S = Matrix.from_sparse(d, d, {**{(i, i): 1 for i in range(d)}, (0, 4): 2, (3, 1): -1, (4, 2): 1})
hidden = conjugate(rep, S)
std, _ = to_standard_form(hidden)
print("recovered partition", tuple(std.partition), " same normal form:",
      normalize(std)[0].params == normed.params)

# the dual reverses the blocks and moves alpha to 2*lambda - alpha
dual = dualize(rep)
print("dual partition", tuple(dual.partition), " dual alpha", dual.params.alpha)
print("double dual isomorphic:", isomorphism_search(rep, dualize(dual)).isomorphic)

# shifting alpha changes the isomorphism class, and the search says so with a certificate
other = build_R(RepParams(3, 2, "3/2", 2, 2, 1, [[1, 3], [2, 0]], [[4], [-1]]))
res = isomorphism_search(rep, other)
print("alpha shift isomorphic:", res.isomorphic, " certified:", res.negative_certified)
