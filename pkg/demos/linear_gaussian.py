"""Linear-Gaussian study: one dataset, every estimator, known answers.

Y = A X with correlated Gaussian inputs is the rare case where the
sensitivity indices have closed forms, so it makes a good first contact
with the estimators: run all of them on the same sample and compare
against the analytical values.

Usage: python demos/linear_gaussian.py [out-dir]
"""
import sys
from pathlib import Path

import numpy as np

from otsense import (
    SolverConfig,
    gen_linear_gaussian,
    ot_indices,
    ot_indices_smap,
    ot_indices_wb,
)
from otsense.io import write_results
from otsense.svgplot import render_indices_svg

ANALYTICAL = {"total": (0.492, 0.507, 0.117),
              "advective": (0.294, 0.318, 0.107),
              "diffusive": (0.198, 0.189, 0.010)}

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out/linear-gaussian")
ds = gen_linear_gaussian(2000, seed=32)
print(f"dataset: n={ds.n}, inputs={ds.x.names}, outputs={ds.y.names}")

print("\n-- moment decomposition (closed-form Gaussian transport) --")
wb = ot_indices_wb(ds, 20)
for i, name in enumerate(wb.input_names):
    print(f"  {name}: total {wb.indices[i]:.3f} "
          f"(analytical {ANALYTICAL['total'][i]:.3f}), "
          f"advective {wb.components['advective'][i]:.3f}, "
          f"diffusive {wb.components['diffusive'][i]:.3f}")

print("\n-- exact transport vs entropic regularization --")
exact = ot_indices(ds, 20, config=SolverConfig("exact"))
tight = ot_indices(ds, 20, config=SolverConfig("sinkhorn-stable",
                                               epsilon=0.001,
                                               num_iterations=20000,
                                               max_err=1e-6))
rough = ot_indices(ds, 20, config=SolverConfig("sinkhorn", epsilon=0.05,
                                               num_iterations=20000,
                                               max_err=1e-6))
print(f"  {'input':6} {'exact':>8} {'eps=0.001':>10} {'eps=0.05':>9}")
for i, name in enumerate(exact.input_names):
    print(f"  {name:6} {exact.indices[i]:8.3f} {tight.indices[i]:10.3f} "
          f"{rough.indices[i]:9.3f}")
print("  note: heavy regularization inflates every index but keeps the "
      "ranking")

print("\n-- per-output sensitivity map (scalar transport per column) --")
smap = ot_indices_smap(ds, 20)
print(f"  {'':6} " + " ".join(f"{n:>8}" for n in ds.y.names))
for i, name in enumerate(ds.x.names):
    row = " ".join(f"{v:8.3f}" for v in smap[i])
    print(f"  {name:6} {row}")
print("  X2 barely touches Y1 (coefficient -2 vs X1's 4) but dominates Y2")

paths = write_results(exact, out_dir)
(out_dir / "indices.svg").write_text(render_indices_svg(exact))
print(f"\nwrote {paths['json']}, {paths['csv']}, indices.svg")
