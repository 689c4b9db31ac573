"""How fast does a network approach the centralised estimator?"""
from collabest import (
    build_h_alpha,
    build_named,
    sym_eigenvalues,
    tau_bounds,
    tau_closed_form,
    tau_exact,
    tau_limit,
)

n = 20
for kind in ("identity", "full", "tridiag_a1", "tridiag_a2"):
    a = build_named(kind, n)
    print(kind, [round(tau_exact(a, t), 4) for t in (1, 10, 100, 1000, 10000)])

# For symmetric matrices the spectrum gives the same numbers in closed form,
# and S(A) controls the gap: t * (1 - tau_t) -> S(A).
a1 = build_named("tridiag_a1", n)
rep = sym_eigenvalues(a1)
print("S(A1) =", rep.s_coefficient, " Gamma(A1) =", rep.gamma_max)
for t in (1000, 10000, 100000):
    lo, hi = tau_bounds(rep, t)
    print(t, lo, tau_closed_form(rep, t), hi, t * (1 - tau_closed_form(rep, t)))

# Without bistochasticity the ratio stalls below one.
for alpha in (1.5, 2.0, 3.0, 10.0):
    print(f"alpha={alpha}: tau_limit={tau_limit(build_h_alpha(alpha)):.4f}")
