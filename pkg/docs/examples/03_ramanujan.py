"""Sample Ramanujan networks and weigh efficiency against communication."""
from collabest import budget_analysis, penalized_sweep, recommend, sample_ramanujan, select_d_star

s = sample_ramanujan(16, 3, seed=7)
print("attempts:", s.attempts, " mu2 =", round(s.verdict.mu2, 4), " bound =", round(s.verdict.threshold, 4))
print("edges:", s.graph.edge_list()[:6], "...")
print("S(A) =", s.spectrum.s_coefficient)

# Denser graphs shrink S(A) but cost d messages per round.
records = penalized_sweep(60, betas=(0.5, 1, 2, 4), seed=0)
print("d* per beta:", select_d_star(records))

# With a fixed data budget, the smallest degree reaching tau >= 0.99.
budget = budget_analysis(10**6, range(40, 101, 10), threshold=0.99, seed=0)
for r in budget:
    print(r.n, r.t_per_node, r.d_star, r.cost_ratio)
print("cheapest:", recommend(budget))
