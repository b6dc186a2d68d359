"""
Linear action-values with replacing traces
==========================================

``LinearQ`` keeps one sparse weight row and one trace row per action. With
binary features a Q-value is just the sum of the active weights.
"""

from phieb import FeatureVector, LinearQ, TdStep, td_error

q = LinearQ(num_actions=2)
q.set_weight(0, 3, 0.5)
q.set_weight(0, 7, -0.25)
print(q.q_value(FeatureVector((3, 7)), 0), q.q_values(FeatureVector((3, 7))))

##############################################################################
# One SARSA(lambda) step by hand
# ------------------------------
#
# Mark the visited features, move every traced weight by alpha * delta, then
# decay the traces by gamma * lambda.

s, a = FeatureVector((3, 7)), 0
s_next, a_next = FeatureVector((7, 9)), 1
delta = td_error(TdStep(reward=1.0, gamma=0.99, q_current=q.q_value(s, a),
                        q_next=q.q_value(s_next, a_next)))
q.mark_visit(s, a)
q.apply_update(delta, alpha=0.1)
q.decay_traces(gamma=0.99, lam=0.9)
print(f"delta = {delta:.3f}")
print(q.weights_dict())
print(q.live_traces())

##############################################################################
# Traces keep shrinking until they fall under 1e-8 and are dropped.

for _ in range(200):
    q.decay_traces(0.99, 0.9)
print(q.live_traces())
