"""Dissociate frequency sets and Fourier families on Z_N.

    python demos/lacunary_fourier.py
"""
from porthogonal.groups import Integer, IntegerModN, count_Nq, is_p_dissociate
from porthogonal.harness import cyclic_lacunary_check
from porthogonal.suite import littlewood_paley_family
from porthogonal.tracial import check_main_inequality

# Powers of two are dissociate; {1,2,3,4} is not, since 1 - 2 + 4 - 3 = 0.
print(is_p_dissociate([Integer(2**k) for k in range(6)], 4).flag)
bad = is_p_dissociate([Integer(v) for v in (1, 2, 3, 4)], 4)
print(bad.flag, [t.value for t in bad.witness])

# For a lacunary set every nonzero difference t - s is hit at most once.
lam = [1, 2, 4, 8, 16]
print("N_2 =", count_Nq([IntegerModN(t, 256) for t in lam], 2).count)

# Counting bound with the shift modes of Z_256 as orthogonal projections.
rec = cyclic_lacunary_check(256, lam, None, 4)
print(f"N(d) = {rec.quantities['N_d']}, ratio {rec.ratio:.4f}, passed {rec.passed}")

# Random frequencies inside the even dyadic blocks of Z_1024.
d, blocks = littlewood_paley_family(seed=7)
rec = check_main_inequality(d, 4)
print(f"block sizes {[len(b) for b in blocks]}: ratio {rec.ratio:.4f}")
