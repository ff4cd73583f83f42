"""Climate recursion: custom ground cost, entropic solver, bootstrap CIs.

The temperature-anomaly recursion produces an 18-dimensional output, and
the question of interest weights large anomalies heavily — so the study
uses a cubed Minkowski-3 ground cost instead of squared Euclidean.  At
this output dimension the exact solver is slow; the log-stabilized
entropic solver with a small regularizer reproduces its ranking in
seconds.  Bootstrap intervals separate the signal from estimation noise.

Usage: python demos/climate_bootstrap.py [out-dir]
"""
import sys
from dataclasses import replace
from pathlib import Path

from otsense import GroundCost, SolverConfig, gen_climate, irrelevance_threshold, ot_indices
from otsense.bootstrap import bootstrap_indices
from otsense.io import write_results
from otsense.svgplot import render_indices_svg

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out/climate")

ds = gen_climate(800, seed=1)
print(f"dataset: n={ds.n}, d={ds.d} parameters, k={ds.k} periods "
      f"({ds.y.names[0]} .. {ds.y.names[-1]})")

cost = GroundCost.minkowski_power(3.0, 3.0)  # cubed L3 distance
cfg = SolverConfig("sinkhorn-stable", epsilon=0.001,
                   num_iterations=100000, max_err=1e-3)

est = ot_indices(ds, 15, cost=cost, config=cfg)
thr = float(irrelevance_threshold(ds, 15, dummy="standard-normal",
                                  cost=cost, config=cfg, seed=0).indices[0])

# resampling duplicates rows, which biases entropic costs upward; the
# normal CI recenters on the bias-corrected estimate
print("\nbootstrapping (bias-corrected normal CIs, 60 replicates)...")
boot = bootstrap_indices(ds, 15, config=cfg, cost=cost, replicates=60,
                         ci_type="normal", seed=0)
est = replace(est, bootstrap=boot)
tab = boot.stats["index"]

print(f"\nirrelevance threshold (normal dummy): {thr:.4f}")
print(f"  {'input':7} {'index':>7}   95% CI")
order = sorted(range(ds.d), key=lambda i: -est.indices[i])
for i in order:
    flag = " *" if tab.ci_low[i] > thr else ""
    print(f"  {est.input_names[i]:7} {est.indices[i]:7.4f}   "
          f"[{tab.ci_low[i]:.4f}, {tab.ci_high[i]:.4f}]{flag}")
print("  * entire interval above the dummy threshold")
print("\nthe carbon-transfer coefficient phi11 dominates; equilibrium "
      "climate sensitivity S is a clear but distant second")

paths = write_results(est, out_dir, threshold=thr)
(out_dir / "indices.svg").write_text(render_indices_svg(est))
print(f"\nwrote {paths['json']}, {paths['csv']}, indices.svg")
