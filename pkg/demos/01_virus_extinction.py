"""Both strains die out under strong isolation.

With q = 0.1 the effective spreading rates q*beta_i = 0.08 sit far below
the healing rates delta_i = 0.2, so neither strain can sustain itself even
though everyone starts infected (y1 + y2 = 1).  The run converges to the
disease-free point with nobody distancing: once the infections fade, the
perceived risk no longer justifies the distancing cost and z_s collapses
to 0, while the infected groups' distancing shares climb to 1 on the way.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bivirusgame import SimConfig, classify_point, enumerate_isolated, integrate
from bivirusgame.scenarios import virus_extinction

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

scenario = virus_extinction()
p = scenario.params
x0 = scenario.initial_states[0]

print(f"scenario: {scenario.name}")
print(f"  q*beta = {p.q * p.beta1:.3f} vs delta = {p.delta1:.3f} "
      "(healing dominates)")

traj = integrate(p, x0, SimConfig(t_max=200.0))
print(f"  converged at t = {traj.converged_at:.1f}")
print(f"  terminal state: {traj.final_state}")

eqs = {e.kind: e for e in enumerate_isolated(p)}
report = classify_point(p, eqs["DFE0"])
print(f"  disease-free point is {report.numeric_verdict}; eigenvalues "
      f"{[round(v.real, 3) for v in report.eigenvalues]}")

fig, ax = plt.subplots(figsize=(7, 4))
labels = ("y1", "y2", "z_s", "z1", "z2")
for k, label in enumerate(labels):
    ax.plot(traj.times, traj.states[:, k], label=label)
ax.set_xlabel("time")
ax.set_ylabel("mass fraction / distancing share")
ax.set_title("Extinction of both strains under strong isolation")
ax.legend()
fig.tight_layout()
fig.savefig(OUT / "01_virus_extinction.png", dpi=120)
print(f"  wrote {OUT / '01_virus_extinction.png'}")
