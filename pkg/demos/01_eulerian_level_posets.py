"""
Eulerian level posets from a 0,1-matrix
=======================================

A square 0,1-matrix M defines a poset on vertices times integer ranks:
(i, s) is covered by (j, s+1) when M[i, j] = 1.
"""

import numpy as np

from levelposets import LevelPoset, ab_index, cd_index, eulerian_check_prop21, family_matrix, flag_vector

# the smallest member of the first family, a 4x4 matrix
M = family_matrix("M", 1)
print(M)

# powers saturate at the all-ones matrix after three steps
poset = LevelPoset(M)
for k in range(4):
    print(k, poset.bin_power(k).sum(), "ones")
print("exponent:", poset.exponent)

# rank-2 intervals are diamonds: M^2 is twice its binarization
print(np.array_equal(M @ M, 2 * poset.bin_power(2)))

# the exponent gives a finite certificate for every even rank
report = eulerian_check_prop21(M)
print("W row sums:", report.row_sums, "target:", report.target_sum)
print("certified:", report.certified)

# one interval of length 3, from (2, 0) up to (0, 3)
iv = poset.interval(2, 0, 3)
print("elements per rank:", iv.rank_counts())
for S, f in sorted(flag_vector(iv).items()):
    print("f", S, "=", f)

# the flag counts packed into a non-commutative polynomial, then rewritten in c, d
print("ab-index:", ab_index(iv))
print("cd-index:", cd_index(iv))

# a matrix that fails: the 1x1 matrix (1) gives chains, not Eulerian intervals
print("1x1 certified:", eulerian_check_prop21(np.ones((1, 1), dtype=int)).certified)
