#!/usr/bin/env python3
"""A tour of the reliability bounds on three channels.

Prints anchor values, then sweeps each bound over rate to show the standing
order: random coding <= sphere packing <= Haroutunian, with the fixed-delay
focusing bound above them all, the two-stream achievable curve between, and
Burnashev's variable-length bound off on its own scale.
"""

import math

import numpy as np

from delaylab import dmc, exponents as ex

bsc = dmc.bsc(0.02)
bec = dmc.bec(0.4)
z = dmc.z_channel(0.5)

print("=== capacities ===")
for ch in (bsc, bec, z):
    c, q = dmc.capacity(ch)
    print(f"{ch.name:>10}: C = {c:.6f} nats, achieving q = {np.round(q, 4)}")

print("\n=== anchors on BSC(0.02) ===")
print(f"E0(1)            = {ex.e0_max(bsc, 1.0)[0]:.6f}  (cutoff-rate exponent)")
print(f"C1               = {dmc.c1(bsc):.6f}")
print(f"burnashev(0.3)   = {ex.burnashev_bound(bsc, 0.3):.6f}")
print(f"esp(0.3)         = {ex.sphere_packing(bsc, 0.3):.6f}")
print(f"focusing(0.3)    = {ex.focusing_bound(bsc, 0.3):.6f}")
print(f"C_0f             = {ex.zero_error_feedback_capacity(bsc):.6f} (no zero-error capacity)")

print("\n=== rate sweep on BSC(0.02), nats ===")
cap = dmc.capacity(bsc)[0]
print(f"{'rate':>6} {'er':>8} {'esp':>8} {'E+':>8} {'E_ts':>8} {'focusing':>9}")
for r in np.linspace(0.1, 0.55, 8):
    r = float(r)
    row = [ex.random_coding_list(bsc, r, 1), ex.sphere_packing(bsc, r),
           ex.haroutunian(bsc, r), ex.bound_at_rate(bsc, "timesharing", r),
           ex.focusing_bound(bsc, r)]
    print(f"{r:>6.2f} " + " ".join(f"{v:>8.4f}" for v in row[:4]) + f" {row[4]:>9.4f}")

print("\n=== the Z-channel gap (feedback helps block codes here) ===")
print(f"{'rate':>6} {'esp':>9} {'E+':>9} {'gap':>8}")
for r in (0.05, 0.10, 0.15, 0.20):
    esp = ex.sphere_packing(z, r)
    har = ex.haroutunian(z, r)
    print(f"{r:>6.2f} {esp:>9.5f} {har:>9.5f} {har - esp:>8.5f}")

print("\n=== parametric fixed-delay curve on BEC(0.4) ===")
print("eta -> (rate bits, exponent nats, lambda*):")
for eta in (0.2, 1.1699250014423124, 4.0, 20.0):
    pt = ex.focusing_parametric_curve(bec, [eta])[0]
    print(f"  eta={eta:>7.3f}: R' = {pt.rate / math.log(2):.4f}, "
          f"E = {pt.exponent:.4f}, lambda* = {pt.lambda_star:.3f}")
print(f"ultimate limit as eta -> inf: -ln(0.4) = {-math.log(0.4):.4f}")
