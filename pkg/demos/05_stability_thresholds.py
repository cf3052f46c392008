"""Stability thresholds in parameter space, scanned two ways.

First, the distancing cost c_d is swept across the no-distancing line's
closed-form stability boundary c_d = 2 * level * max(r1, r2): the
eigenvalue-based verdict flips in the same grid cell as the closed-form
one.  Second, a harness sweep over the isolation factor q reproduces the
disease-free threshold q = delta/beta as a ready-to-plot CSV.
"""

from pathlib import Path

import numpy as np

from bivirusgame import (ScenarioConfig, SimConfig, State, SweepAxis,
                         SweepConfig, classify_line, coexistence_lines,
                         run_sweep)
from bivirusgame.scenarios import coexistence_no_distancing, virus_extinction

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# --- sweep 1: distancing cost across the line-stability boundary --------
base = coexistence_no_distancing().params
level = 1.0 - 1.0 / (base.q * (base.beta1 / base.delta1))
threshold = 2.0 * level * max(base.r1, base.r2)
print(f"no-distancing line level = {level:.4f}, closed-form stability "
      f"threshold c_d = {threshold:.4f}")
print(f"{'c_d':>6s} {'closed form':>12s} {'eigenvalues':>12s}")
for cd in np.linspace(0.45, 0.75, 13):
    p = base.replace(c_d=float(cd))
    line = {l.kind: l for l in coexistence_lines(p)}["L0"]
    rep = classify_line(p, line)
    print(f"{cd:6.3f} {rep.closed_form_verdict:>12s} {rep.numeric_verdict:>12s}")

# --- sweep 2: isolation factor across the disease-free threshold --------
ext = virus_extinction()
cfg = SweepConfig(
    base=ScenarioConfig(params=ext.params, sim=SimConfig(),
                        initial_states=(State(0.6, 0.4, 0.1, 0.9, 0.7),),
                        outputs=str(OUT / "05_q_sweep")),
    axes=(SweepAxis("q", 0.05, 0.95, 19),),
    classification_targets=("DFE0",))
files = run_sweep(cfg)
print()
print(f"disease-free threshold sits at q = delta/beta = "
      f"{ext.params.delta1 / ext.params.beta1:.2f}")
print(f"wrote {files['sweep.csv']}")
for row in files["__csv__"].splitlines()[:6]:
    print("  " + ",".join(row.split(",")[:1] + row.split(",")[-3:-1]))
