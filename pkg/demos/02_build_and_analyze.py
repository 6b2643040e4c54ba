"""Build a uniserial representation from its parameters and inspect it.

Run: python demos/02_build_and_analyze.py
"""
from urlab import RepParams, build_R, kernel_and_flags
from urlab.module_analysis import length_filtration, socle_series

# n = 2, lambda = 1, alpha = 0, blocks of sizes (2, 1, 1)
params = RepParams(2, 1, 0, 2, 1, 1, [[0], [1]], [[1]])
rep = build_R(params)
print("dimension", rep.dim, "verified", rep.verified)
for name in ("x", "v0", "v1", "v0^v1"):
    print(name)
    print(rep.image(name))

report = kernel_and_flags(rep)
print("socle layers ", socle_series(rep).layer_dims)
print("length layers", length_filtration(rep).layer_dims)
print("uniserial", report.uniserial, " faithful", report.faithful, " length", report.length)

# the triple (3,1,1) at n = 3 loses part of the wedge space but none of V
r311 = kernel_and_flags(build_R(RepParams(3, 1, 0, 3, 1, 1, [[0], [2], [1]], [[5]])))
print("(3,1,1): faithful", r311.faithful, " relatively faithful", r311.relatively_faithful,
      " kernel inside the wedges", r311.kernel_L2_dim)
