"""Build communication matrices and inspect their support graphs."""
import numpy as np

from collabest import CommGraph, build_equal_neighbor, build_h_alpha, build_named, diagnostics

# The named families used throughout: complete averaging, two tridiagonal
# chains and a star with a busy hub.
for kind in ("full", "tridiag_a1", "tridiag_a2", "star_a3"):
    a = build_named(kind, 6)
    d = diagnostics(a)
    print(f"{kind:11s} irreducible={d.irreducible} period={d.period} "
          f"bistochastic={d.bistochastic} C(A)={d.complexity_index}")

np.set_printoptions(precision=3, suppress=True)
print(build_named("tridiag_a1", 5).entries)

# Equal-neighbour weights on a path where every agent also listens to itself.
path = CommGraph.undirected(4, [(0, 1), (1, 2), (2, 3)], self_loops=True)
print(build_equal_neighbor(path).entries)

# H_alpha is ergodic but not bistochastic.
print(diagnostics(build_h_alpha(3.0)))
