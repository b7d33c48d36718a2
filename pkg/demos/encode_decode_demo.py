"""Encode a sample with each of the four encoders and reconstruct it.

Shows the central robustness fact: a fat quantizer dead band (here nu = 0.3,
resolved adversarially) costs almost nothing because the redundancy of
non-integer bases absorbs the flaky decisions, while the error still decays
geometrically in the bit budget.
"""

import numpy as np

from betacodec import (
    LeakParams,
    beta_encode,
    beta_encode_leaky,
    error_bound,
    gre_encode,
    gre_encode_leaky,
    partial_sum,
)
from betacodec.quantizers import FlakyPolicy, PolicyKind, QuantizerSpec

X = 0.427
N = 32

print(f"sample x = {X}, {N} bits per encode\n")

print("ideal beta encoder, beta = 1.8, exact quantizer:")
r = beta_encode(X, 1.8, N, QuantizerSpec(nu=0.0))
err = abs(X - partial_sum(r.bits, 1.0 / 1.8))
print(f"  |error| = {err:.3e}   guarantee {1.8 ** -N:.3e}\n")

print("same encoder, dead band nu = 0.1 resolved adversarially (always +1):")
q = QuantizerSpec(nu=0.1, policy=FlakyPolicy(PolicyKind.ALWAYS_PLUS))
beta = 1.85  # under the robustness ceiling (2 + eps)/(1 + eps) for eps = 0.1
r = beta_encode(X, beta, N, q)
err = abs(X - partial_sum(r.bits, 1.0 / beta))
print(f"  |error| = {err:.3e}   guarantee {(1 + 0.1) * beta ** -N:.3e}\n")

print("golden-ratio encoder (no multiplier needed), nu = 0.3, toggle policy:")
q = QuantizerSpec(nu=0.3, alpha=2.0, policy=FlakyPolicy(PolicyKind.TOGGLE))
r = gre_encode(X, N, q)
err = abs(X - partial_sum(r.bits, r.effective_gamma))
print(f"  |error| = {err:.3e}   guarantee {error_bound(r.effective_gamma, N):.3e}\n")

print("leaky golden-ratio encoder: 5% leak shifts the base, not the accuracy")
leak = LeakParams(0.95, 0.95)
q = QuantizerSpec(nu=0.3, alpha=2.0, policy=FlakyPolicy(PolicyKind.SEEDED_RANDOM, 7))
r = gre_encode_leaky(X, leak, N, q)
g = r.effective_gamma
err = abs(X - partial_sum(r.bits, g))
print(f"  effective base gamma = {g:.6f} (vs phi^-1 = 0.618034)")
print(f"  |error| = {err:.3e}   guarantee {error_bound(g, N):.3e}\n")

print("leaky beta encoder, indexing from gamma^0:")
r = beta_encode_leaky(X, 1.7, 0.95, N, QuantizerSpec(nu=0.0))
g = r.effective_gamma
err = abs(X - partial_sum(r.bits, g) / g)
print(f"  effective base gamma = {g:.6f}")
print(f"  |error| = {err:.3e}\n")

print("error decay of the leaky golden-ratio run, by prefix length:")
for n in (4, 8, 16, 24, 32):
    r = gre_encode_leaky(X, leak, n, q)
    err = abs(X - partial_sum(r.bits, r.effective_gamma))
    bar = "#" * max(1, int(-np.log10(max(err, 1e-17)) * 3))
    print(f"  n={n:3d}  |error| = {err:.3e}  {bar}")
