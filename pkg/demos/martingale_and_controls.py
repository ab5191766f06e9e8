"""Compare a p-orthogonal family with a random one that is not.

    python demos/martingale_and_controls.py
"""
from porthogonal.families import dyadic_martingale, random_control, spin_system
from porthogonal.tracial import check_main_inequality, is_p_orthogonal

p = 4

# Martingale differences on 2^depth points are diagonal, hence commuting,
# so the record also reports the sharper commutative ratio.
for depth in (2, 4, 6):
    d = dyadic_martingale(depth, seed=depth)
    rec = check_main_inequality(d, p)
    print(
        f"martingale depth {depth}: ratio {rec.ratio:.4f}, commutative ratio "
        f"{rec.quantities['commutative_ratio']:.4f}, passed {rec.passed}"
    )

# Anticommuting spins are p-orthogonal but far from commuting.
for n in (2, 4, 6):
    rec = check_main_inequality(spin_system(n), p)
    print(f"{n} spins: ||f||_p = {rec.quantities['lhs']:.4f}, bound {rec.quantities['rhs']:.4f}")

# A generic random family fails orthogonality, and the witness says where.
result = is_p_orthogonal(random_control(4, 3, seed=1), p)
print(f"random family p-orthogonal: {result.flag}, witness word {result.witness}")
