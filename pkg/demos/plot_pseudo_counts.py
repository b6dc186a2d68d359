"""
Pseudo-counts and exploration bonuses
=====================================

How much a density rises after recording an observation turns into a
pseudo-count, and the bonus beta / sqrt(N) shrinks as a state grows familiar.
"""

from phieb import BonusConfig, FactorTable, FeatureVector, exploration_bonus

##############################################################################
# One feature that is always on
# -----------------------------
#
# The exact form rho (1 - rho') / (rho' - rho) gives t + 1/2 here. The
# ratio form 1 / (rho'/rho - 1) drops the (1 - rho') term and grows
# quadratically instead.

v = FeatureVector((0,))
exact, ratio = FactorTable(), FactorTable()
exact.update(v)
ratio.update(v)
print(" t   exact     ratio    bonus")
for t in range(1, 11):
    e = exploration_bonus(v, exact, BonusConfig(beta=0.05, variant="exact"))
    r = exploration_bonus(v, ratio, BonusConfig(beta=0.05, variant="ratio"))
    print(f"{t:2d} {e.n_hat:7.3f} {r.n_hat:9.3f}  {e.bonus:.4f}")

##############################################################################
# Generalization through shared features
# --------------------------------------
#
# A vector that shares features with frequently seen ones starts with a
# larger pseudo-count, so it earns a smaller bonus than a wholly new one.

table = FactorTable()
for _ in range(100):
    table.update(FeatureVector((0, 1, 2)))

cfg = BonusConfig(beta=0.05)
for name, ids in (("shares 2 of 3", (0, 1, 7)), ("shares 0 of 3", (7, 8, 9))):
    probe = FactorTable.from_dict(table.to_dict())  # score without touching the original
    res = exploration_bonus(FeatureVector(ids), probe, cfg)
    print(f"{name}: N = {res.n_hat:.3f}, bonus = {res.bonus:.4f}")

##############################################################################
# The table always learns: recording ``v`` raises its density, so the count
# is finite and positive on every call.

res = exploration_bonus(FeatureVector((3, 4)), table, cfg)
print(res.log_rho_prime > res.log_rho, res.n_hat)
