"""
Is the fused system really better?
==================================

With five cross-validation folds each configuration gives five numbers.
A paired t-test over the per-fold differences asks whether the gap is
larger than fold-to-fold noise.
"""

from rankfuse import aggregate_folds, paired_t_test

fused = [0.521, 0.498, 0.533, 0.507, 0.516]
dense = [0.470, 0.462, 0.489, 0.455, 0.481]

for name, folds in (("fused", fused), ("dense", dense)):
    mean, std, cell = aggregate_folds(folds)
    print(f"{name:>5}  mean={mean:.4f}  std={std:.4f}  cell={cell}")

# %%
result = paired_t_test(fused, dense)
print(f"t={result.t_statistic:.3f}  df={result.degrees_of_freedom}  p={result.p_value:.5f}",
      "*" if result.significant_at_05 else "")

# %%
# Swapping the arguments flips the sign of t and leaves p alone.
swapped = paired_t_test(dense, fused)
assert swapped.t_statistic == -result.t_statistic and swapped.p_value == result.p_value

# %%
# A gain that is large on one fold and negative on others is not enough.
noisy = [0.60, 0.45, 0.47, 0.44, 0.47]
print("noisy vs dense p =", round(paired_t_test(noisy, dense).p_value, 3))
