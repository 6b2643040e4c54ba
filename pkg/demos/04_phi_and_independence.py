"""The operator Phi and linear independence of the T-family.

Run: python demos/04_phi_and_independence.py
"""
from urlab import Matrix
from urlab.phi_toolkit import (
    lidep_bruteforce, lidep_predict, phi, phi_family, phi_kernel_basis, reduccion_scan,
)

Y = Matrix([[1, 2], [3, 4], [5, 6]])
print("Phi_{3,2}(Y) =", phi(3, 2, Y))
print("kernel dimensions for a, b in 1..4:")
for a in range(1, 5):
    print("  ", [len(phi_kernel_basis(a, b)) for b in range(1, 5)])

fam = phi_family(2, 1, 2, Matrix([[1], [3]]), Matrix([[2, 1]]))
print("T-family of", (fam.a, fam.b, fam.c), "up to index", fam.n, ":", [str(T) for T in fam.t_list()])
print("predicted independent:", lidep_predict(2, 1, 2, fam.P, fam.Q),
      " rank test:", lidep_bruteforce(2, 1, 2, fam.P, fam.Q))

P, Q = Matrix([[1], [2], [3]]), Matrix([[5]])
print("(3,1,1): predicted", lidep_predict(3, 1, 1, P, Q), " rank test", lidep_bruteforce(3, 1, 1, P, Q))

# four blocks of size one: the Lie closure of R(x) and R(v0) never reaches the corner block
res = reduccion_scan((1, 1, 1, 1), 1, 0)
print("sizes (1,1,1,1): corner always zero", res.all_14_blocks_zero, " closure dim", res.closure_dim)
res = reduccion_scan((2, 1, 1, 1), 1, 0)
print("sizes (2,1,1,1): corner always zero", res.all_14_blocks_zero)
