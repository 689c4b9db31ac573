"""Turn a support pattern into a bistochastic matrix."""
import numpy as np

from collabest import build_named, diagnostics, has_total_support, sinkhorn_knopp

support = np.array([[1, 1, 0, 0], [1, 1, 1, 0], [0, 1, 1, 1], [0, 0, 1, 1]], dtype=float)
print("total support:", has_total_support(support))
res = sinkhorn_knopp(support)
print(np.round(res.balanced.entries, 4))
print("iterations:", res.iterations, " residual:", res.residual)
print(diagnostics(res.balanced))

# A triangular pattern cannot be balanced.
print(has_total_support([[1, 1], [0, 1]]))

# The star matrix is already bistochastic, so it is a fixed point.
print(sinkhorn_knopp(build_named("star_a3", 5).entries).iterations)
