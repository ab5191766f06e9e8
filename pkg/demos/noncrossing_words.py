"""Non-crossing permutations and the word bound they control.

    python demos/noncrossing_words.py
"""
import numpy as np

from porthogonal.noncrossing import catalan, constants, enumerate_Snc, pair_partition_of_permutation
from porthogonal.tracial import TracialFamily, noncrossing_word_check

for q in range(2, 7):
    print(f"q={q}: {len(enumerate_Snc(q))} non-crossing permutations, Catalan {catalan(q)}")

for perm in enumerate_Snc(3):
    print(perm, "->", pair_partition_of_permutation(perm))

for p in (2, 4, 6, 8):
    print(f"p={p}: alpha_p = {constants(p).alpha_p}")

# Four random families, one per letter of the word, bounded through the pairing.
rng = np.random.default_rng(0)
families = [TracialFamily(rng.standard_normal((3, 4, 4)) + 1j * rng.standard_normal((3, 4, 4))) for _ in range(4)]
for t in (1, 2):
    rec = noncrossing_word_check(families, (2, 1), t)
    print(f"t={t}: lhs {rec.quantities['lhs']:.4f} <= rhs {rec.quantities['rhs']:.4f}")
