"""
Reduced powers in the algebra of walks
======================================

A walk keeps its place in the quotient when every middle vertex is the
smallest common neighbour of its two neighbours.  If each entry of each
power is zero or a single walk, the natural vertex order shells every
interval.
"""

from levelposets import family_matrix, reduced_powers, shellability_certificate
from levelposets.walkshell import prop63_oracle

m = family_matrix("M", 3)
table = reduced_powers(m, 4)

# the reduced square, one monomial (or 0) per entry
for i in range(8):
    print("  ".join(str(table.single(i, j, 2) or 0).ljust(10) for j in range(8)))

# the DP agrees with the closed form
same = all(
    table.entry(i, j, p) == ((prop63_oracle(3, p, i, j),) if prop63_oracle(3, p, i, j) else ())
    for p in range(2, 5) for i in range(8) for j in range(8)
)
print("closed form matches:", same)
print(shellability_certificate(m, 8))

# the second family breaks the criterion at the third power
cert = shellability_certificate(family_matrix("N", 3), 3)
print(cert)
print("entry (1, 7):", cert.failure_at(1, 7, 3))
