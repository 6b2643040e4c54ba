"""Seeded sweeps over the parameter space, rendered as tables.

Run: python demos/05_sweeps.py
"""
from urlab.classify_sweep import SweepConfig, classification_roundtrip, faithful_sweep, sl2_crosscheck
from urlab.reporting import render_report

cfg = SweepConfig(n_range=(2, 3), alpha_set=(0,), lambda_set=(1,), samples_per_cell=2, seed=7)
report = faithful_sweep(cfg)
print(render_report(report, "md"))
print("all cells agree with the faithful list:", report.passed)

# conjugate by random block-Toeplitz or unimodular matrices and recover the parameters
rt = classification_roundtrip(SweepConfig(n_range=(2, 3), seed=7), trials=6, dense_trials=2)
print("roundtrip recovered", sum(r.flags["block_recovered"] for r in rt.records), "of", len(rt.records))

check = sl2_crosscheck()
print("sl2 tensor module lands in the family:", check.passed)
