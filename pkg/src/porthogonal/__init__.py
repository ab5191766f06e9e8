"""Numerical checks of moment inequalities for p-orthogonal sums of matrices.

The combinatorial layer (partition lattice, Möbius expansion, non-crossing
pairings, group products) is exact; the analytic layer works in ``M_N`` with
the normalized trace.
"""
__version__ = "0.1.0"

from .errors import NumericalError, OrderError, SizeError
from .lattice import SetPartition, enumerate_partitions, mobius, mobius_closed_form
from .tracial import TracialFamily, is_p_orthogonal, check_main_inequality

__all__ = [
    "__version__",
    "NumericalError",
    "OrderError",
    "SizeError",
    "SetPartition",
    "TracialFamily",
    "check_main_inequality",
    "enumerate_partitions",
    "is_p_orthogonal",
    "mobius",
    "mobius_closed_form",
]
