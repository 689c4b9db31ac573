"""Monte Carlo runs of the synchronous and delayed recursions."""
import numpy as np

from collabest import (
    DelaySchedule,
    SourceDistribution,
    build_named,
    loglog_slope,
    run_asynchronous,
    run_synchronous,
    sym_eigenvalues,
    tau_closed_form,
)

a = build_named("tridiag_a2", 5)
dist = SourceDistribution.uniform01()

# One trajectory: every agent drifts to the common mean 0.5.
one = run_synchronous(a, dist, t_max=1000, trials=1, seed=0)
print("final estimates:", np.round(one.node_mean[-1], 3))

# Many trials: the empirical ratio matches the spectral formula.
many = run_synchronous(a, dist, t_max=1000, trials=5000, seed=0, t_grid=[10, 100, 1000])
rep = sym_eigenvalues(a)
for t, emp, se in zip(many.t_grid, many.empirical_tau, many.tau_stderr):
    print(t, f"{emp:.4f} +- {se:.4f}", f"theory {tau_closed_form(rep, int(t)):.4f}")

# Delays: with a common delay the rescaled error still decays like 1/t.
a1 = build_named("tridiag_a1", 10)
trace = run_asynchronous(a1, dist, DelaySchedule.constant(a1, 3), t_max=20000, trials=500, seed=1)
print("constant delay slope:", round(loglog_slope(trace.t_grid, trace.network_mse, 2000, 20000), 3))

# Mixed delays leave a bias in (t / kappa) * theta, so the error levels off.
mixed = DelaySchedule.random(a1, 3, seed=1)
trace = run_asynchronous(a1, dist, mixed, t_max=20000, trials=500, seed=1)
print("mixed delay slope:", round(loglog_slope(trace.t_grid, trace.network_mse, 2000, 20000), 3))
print("rescaled mean:", round(float(np.mean(trace.scale[-1] * trace.node_mean[-1])), 3))
