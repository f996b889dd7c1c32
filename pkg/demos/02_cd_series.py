"""
The cd-series matrix of a family
================================

Summing the ab-indices of all intervals [(i, 0), (j, k)] over k gives a
matrix of series.  For both families it has a closed form in c and d,
built around phi = 1 / (1 - (c + r d)).
"""

from levelposets import (
    FamilySpec,
    closed_form_psi,
    crosscheck_family,
    family_matrix,
    psi_automaton,
    psi_truncated,
    verify_theorem31,
)
from levelposets.ncalg import ab_to_cd

r, D = 2, 5
spec = FamilySpec("M", r)
m = family_matrix("M", r)

closed = closed_form_psi(spec, D)
print("closed form, entry (3, 0):")
print(" ", closed[3, 0])

# the same entry from chain counts, one homogeneous part at a time
counted = psi_truncated(m, D)
print("from chains:")
print(" ", " + ".join(str(ab_to_cd(counted[3, 0].homogeneous_part(k))) for k in range(D + 1)))

# a third route: path sums in a two-layer weighted automaton
print("automaton agrees:", psi_automaton(m, D) == counted)

# the closed form satisfies the two equations that pin the series down
print(verify_theorem31(m, closed, D))

# entry by entry comparison over every index pair
report = crosscheck_family(spec, D)
print("compared", report.compared, "parts; passed:", report.passed)

# the second family needs r >= 2
spec = FamilySpec("N", 2)
print(verify_theorem31(family_matrix("N", 2), closed_form_psi(spec, 6), 6).passed)
