"""SAT-to-graph-problem reductions with path-decomposition certificates and exact solvers."""

__version__ = "0.1.0"
