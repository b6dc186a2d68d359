"""
Feature visit-density
=====================

A product of per-feature KT estimators scores how familiar a set of active
binary features is, and generalizes to vectors never seen as a whole.
"""

import math

from phieb import FactorTable, FeatureVector, kt_estimate
from phieb.oracles import oracle_density

##############################################################################
# Three features, observed three times in the pattern (0, 1, 0)
# -------------------------------------------------------------
#
# Feature ids are arbitrary non-negative integers. Here ids 1, 2, 3 stand for
# the three positions; only id 2 was ever on. ``declare`` tells the table the
# other two exist without observing them.

table = FactorTable(features=(1, 2, 3))
for _ in range(3):
    table.update(FeatureVector((2,)))

for fid, p in table.items():
    print(f"feature {fid}: p(active) = {p:.4f}")

##############################################################################
# Each factor equals the closed-form KT estimate (n + 1/2) / (t + 1).

print(kt_estimate(3, 3), kt_estimate(0, 3))

##############################################################################
# Scoring two unseen vectors
# --------------------------
#
# (1, 1, 0) agrees with the history on two positions, (1, 0, 1) on none.
# Densities come back as natural logs so long products never underflow.

phi_1 = FeatureVector((1, 2))
phi_2 = FeatureVector((1, 3))
for name, v in (("(1,1,0)", phi_1), ("(1,0,1)", phi_2)):
    print(name, math.exp(table.log_visit_density(v)))

# the same numbers as a direct product over raw counts
print(oracle_density({1: 0, 2: 3, 3: 0}, 3, [1, 2]) * 512, "/ 512")
print(oracle_density({1: 0, 2: 3, 3: 0}, 3, [1, 3]) * 512, "/ 512")

##############################################################################
# Features that were never stored
# -------------------------------
#
# An id the table has not seen gets the prototype probability 0.5 / (t + 1),
# which is what a KT estimator would say after ``t`` zeros. Scoring does not
# insert it; only ``update`` does.

print(table.prototype(), table.factor(42), 42 in table)
table.log_visit_density(FeatureVector((2, 42)))
print(42 in table)
table.update(FeatureVector((2, 42)))
print(42 in table, table.factor(42), kt_estimate(1, 4))
