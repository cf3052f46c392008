"""Atlas of every fixed point and line across the four scenarios.

For each parameter set, the full enumeration is printed with existence
verdicts, condition margins, and both stability classifications.  The
condition margins make near-threshold parameter choices visible at a
glance (a margin near zero means the equilibrium is about to appear or
vanish).
"""

from bivirusgame import (classify_line, classify_point, coexistence_lines,
                         enumerate_isolated, reproduction_numbers)
from bivirusgame.scenarios import all_scenarios

for scenario in all_scenarios():
    p = scenario.params
    rn = reproduction_numbers(p)
    print("=" * 72)
    print(f"{scenario.name}: beta/delta = ({rn.rho1:.3g}, {rn.rho2:.3g})"
          f"{' [matching]' if rn.equal else ''}")
    print(f"{'kind':5s} {'exists':7s} {'numeric':10s} {'closed':13s} detail")

    for eq in enumerate_isolated(p):
        if eq.exists:
            rep = classify_point(p, eq)
            pt = eq.point
            detail = f"({pt.y1:.4g}, {pt.y2:.4g}, {pt.z_s:.4g}, 1, 1)"
            if rep.notes:
                detail += f"  note: {rep.notes}"
            print(f"{eq.kind:5s} {'yes':7s} {rep.numeric_verdict:10s} "
                  f"{rep.closed_form_verdict:13s} {detail}")
        else:
            worst = min(eq.existence_conditions, key=lambda c: c.margin)
            print(f"{eq.kind:5s} {'no':7s} {'':10s} {'':13s} "
                  f"blocked by {worst.label} (margin {worst.margin:+.3g})")

    for line in coexistence_lines(p):
        if line.exists:
            rep = classify_line(p, line)
            lo, hi = line.param_range
            print(f"{line.kind:5s} {'yes':7s} {rep.numeric_verdict:10s} "
                  f"{rep.closed_form_verdict:13s} y1 in [{lo:.4g}, {hi:.4g}]")
        else:
            worst = min(line.existence_conditions, key=lambda c: c.margin)
            print(f"{line.kind:5s} {'no':7s} {'':10s} {'':13s} "
                  f"blocked by {worst.label} (margin {worst.margin:+.3g})")
    print()
