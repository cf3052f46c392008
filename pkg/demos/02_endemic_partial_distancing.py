"""One strain endemic with partial social distancing.

Strain 1 spreads aggressively (beta1/delta1 = 8.3) while strain 2 cannot
keep up (beta2/delta2 = 1.3) and dies out.  The surviving infection level
settles exactly where the susceptibles' payoffs balance, y1 = c_d/(2 r1),
and two thirds of the susceptibles end up distancing.  The closed-form
coordinates come straight out of the fixed-point enumeration; the run is
matched against them.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bivirusgame import (SimConfig, classify_point, enumerate_isolated,
                         distance_to_point, integrate)
from bivirusgame.scenarios import partial_distancing_endemic

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

scenario = partial_distancing_endemic()
p = scenario.params
x0 = scenario.initial_states[0]

eqs = {e.kind: e for e in enumerate_isolated(p)}
target = eqs["U1S"]
print(f"scenario: {scenario.name}")
print(f"  closed-form target: y1 = c_d/(2 r1) = {target.point.y1:.4f}, "
      f"z_s = {target.point.z_s:.4f}")
for cond in target.existence_conditions:
    print(f"    {cond.label:45s} margin {cond.margin:+.3f}")

traj = integrate(p, x0, SimConfig())
dist = distance_to_point(target, traj.final_state)
print(f"  terminal after t = {traj.final_time:.0f}: distance to target "
      f"{dist:.2e}")

report = classify_point(p, target)
print(f"  stability: numeric {report.numeric_verdict}, closed form "
      f"{report.closed_form_verdict} (agreement: {report.agreement})")
print(f"  reproduction ratios: {p.beta1 / p.delta1:.2f} vs "
      f"{p.beta2 / p.delta2:.2f} (larger ratio wins)")

fig, ax = plt.subplots(figsize=(7, 4))
for k, label in enumerate(("y1", "y2", "z_s", "z1", "z2")):
    ax.plot(traj.times, traj.states[:, k], label=label)
ax.axhline(target.point.y1, color="gray", lw=0.8, ls="--")
ax.axhline(target.point.z_s, color="gray", lw=0.8, ls=":")
ax.set_xlabel("time")
ax.set_title("Strain 1 endemic with two thirds of susceptibles distancing")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "02_endemic_partial_distancing.png", dpi=120)
print(f"  wrote {OUT / '02_endemic_partial_distancing.png'}")
