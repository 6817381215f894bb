"""Deciding unitarity from the rule table alone.

The periodic decision checks three weight conditions on the analysis
graphs; the infinite-lattice decision adds deterministic-sector conditions
and a surjectivity test.  Verdicts come with re-checkable witnesses.
"""

import numpy as np

from qca1d import (
    RuleTable,
    check_infinite,
    check_periodic,
    config_str,
    deterministic_sector,
    make_family,
)
from qca1d.unitarity import witness_str

rule = make_family("f21", {"alpha": 0.3, "beta": 1.1, "theta": 0.7,
                           "phi1": 0.2, "phi2": 2.0, "rho": 1.5})
verdict = check_periodic(rule)
print(f"f21 instance, periodic decision: unitary = {verdict.unitary}")

# Nudge one amplitude off the unitarity manifold and watch the conditions
# fire with explicit witnesses.
amps = rule.amplitudes.copy()
amps[0, 0] += 1e-3
bent = RuleTable(2, 2, amps)
verdict = check_periodic(bent)
print(f"\nsame table with f(0|00) shifted by 1e-3: unitary = {verdict.unitary}")
for report in verdict.reports[:4]:
    print(f"  {report.condition}: value {report.value:.6f}, margin {report.margin:.2e}, "
          f"witness {witness_str(report.witness)}")

# Infinite lattices need a deterministic sector: ends of admissible
# configurations must evolve deterministically.
quiescent = make_family("f21_00", {"alpha": 0.4, "beta": 0.9, "theta": np.pi / 3,
                                   "phi1": 0.1, "phi3": 1.7, "rho": 2.0})
sector = deterministic_sector(quiescent)
print(f"\nf21_00 instance: deterministic sector {{{', '.join(map(config_str, sorted(sector)))}}}")
print(f"infinite decision: unitary = {check_infinite(quiescent).unitary}")
print(f"periodic decision: unitary = {check_periodic(quiescent).unitary} "
      "(two-frame rules fail on rings: the all-0/all-1 overlap never cancels)")

# At theta = pi/2 the amplitude f(0|10) vanishes and the evolution stops
# being onto; the verdict pinpoints exactly that scalar.
stuck = make_family("f21_00", {"alpha": 0.4, "beta": 0.9, "theta": np.pi / 2,
                               "phi1": 0.1, "phi3": 1.7, "rho": 2.0})
verdict = check_infinite(stuck)
print(f"\nf21_00 at theta = pi/2: unitary = {verdict.unitary}")
for report in verdict.reports:
    print(f"  {report.condition}: {witness_str(report.witness)} -> value {report.value:.2e}")
