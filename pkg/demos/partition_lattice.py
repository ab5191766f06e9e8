"""Walk through the partition lattice and the moment expansion built on it.

    python demos/partition_lattice.py
"""
import math

from porthogonal.expansion import build_identity, commutative_coefficients
from porthogonal.lattice import SetPartition, enumerate_partitions, mobius_closed_form, mobius_recursive, sum_abs_mobius

# Partitions of {1..4}, listed by restricted growth string, with mu(0, pi).
finest = SetPartition.finest(4)
for pi in enumerate_partitions(4):
    print(f"{pi!r:>36}  mu = {mobius_closed_form(pi):3d}  (recursion: {mobius_recursive(finest, pi)})")

# The absolute values always add up to n!.
for n in range(1, 9):
    print(f"n={n}: sum |mu| = {sum_abs_mobius(n):6d} = {math.factorial(n)}")

# Collapsing the expansion by block type gives the commutative coefficients.
print("p=4 coefficients by type:", commutative_coefficients(4))

# The identity is exact: check it on a few integers.
values = [3, -1, 4, 1, -5]
identity = build_identity(4)
by_partitions = identity.evaluate(lambda g: math.prod(values[i] for i in g), len(values))
print(f"(sum x)^4 = {sum(values) ** 4}, expansion gives {by_partitions}")
