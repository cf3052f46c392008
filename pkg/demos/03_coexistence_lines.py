"""Coexistence on lines of fixed points, and initial-condition dependence.

When both strains share the same reproduction ratio, isolated coexistence
points are impossible: the system instead carries whole segments of fixed
points.  Four starts converge to four different points on the segment --
the long-run split between the strains remembers where the run began
(their infection ratio y1/y2 is conserved on these faces).

Two parameterizations of the same infection rates are run: expensive
distancing (z_s pinned at 0, segment y1 + y2 = 1 - 1/(q R0)) and cheap
distancing (z_s pinned at 1, lower segment y1 + y2 = 1 - 1/(q^2 R0)).
Phase portraits are exported through the harness as CSV + SVG.
"""

from pathlib import Path

from bivirusgame import (ScenarioConfig, SimConfig, classify_line,
                         coexistence_lines, run_scenario)
from bivirusgame.scenarios import (coexistence_full_distancing,
                                   coexistence_no_distancing)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

for scenario, tag in ((coexistence_no_distancing(), "no_distancing"),
                      (coexistence_full_distancing(), "full_distancing")):
    p = scenario.params
    line_kind = "L0" if tag == "no_distancing" else "L1"
    line = {l.kind: l for l in coexistence_lines(p)}[line_kind]
    level = line.param_range[1]
    print(f"scenario: {scenario.name}")
    print(f"  coexistence segment: y1 + y2 = {level:.5f}")
    report = classify_line(p, line)
    print(f"  line verdict: numeric {report.numeric_verdict}, closed form "
          f"{report.closed_form_verdict}, zero modes {report.zero_modes}")

    outdir = OUT / f"03_{tag}"
    cfg = ScenarioConfig(params=p, sim=SimConfig(),
                         initial_states=scenario.initial_states,
                         outputs=str(outdir), formats=("csv", "svg", "json"))
    result = run_scenario(cfg)
    for tr in result.trajectories:
        t = tr.terminal
        print(f"    start (y1, y2) = ({tr.initial.y1:.1f}, {tr.initial.y2:.1f})"
              f"  ->  ({t.y1:.4f}, {t.y2:.4f}); sum {t.y1 + t.y2:.5f}; "
              f"matched {tr.matched_kind}")
    print(f"  wrote {sorted(result.files)} under {outdir}")
    print()
