"""Tour of the density algebra: the two convolutions, their identities,
and the entropy duality that the whole toolkit leans on.

Run:  python3 demos/01_measure_algebra.py
"""

import numpy as np

from bmsde import (
    GridSpec,
    boxast,
    delta_inf,
    delta_zero,
    entropy,
    is_degraded,
    mix,
    varoast,
)
from bmsde.channels import ChannelFamily, density_of

grid = GridSpec()
print(f"grid: spacing {grid.spacing}, half range {grid.half_range}")

dz = delta_zero(grid)   # total erasure, entropy 1
di = delta_inf(grid)    # perfect knowledge, entropy 0
bsc = density_of(ChannelFamily("bsc", grid), 0.11)
bawgn = density_of(ChannelFamily("bawgnc", grid), 0.8)

print("\nbuilding blocks")
for name, x in [("delta_zero", dz), ("delta_inf", di),
                ("bsc(0.11)", bsc), ("bawgnc(0.8)", bawgn)]:
    print(f"  H({name}) = {entropy(x):.6f}")

print("\nidentities and absorbers")
print(f"  H(bsc varoast delta_zero) = {entropy(varoast(bsc, dz)):.6f}"
      "   (delta_zero is the varoast identity)")
print(f"  H(bsc varoast delta_inf)  = {entropy(varoast(bsc, di)):.6f}"
      "   (delta_inf absorbs)")
print(f"  H(bsc boxast delta_inf)   = {entropy(boxast(bsc, di)):.6f}"
      "   (delta_inf is the boxast identity)")
print(f"  H(bsc boxast delta_zero)  = {entropy(boxast(bsc, dz)):.6f}"
      "   (delta_zero absorbs)")

print("\nthe two convolutions move entropy in opposite directions")
print(f"  H(bsc)                 = {entropy(bsc):.6f}")
print(f"  H(bsc varoast bawgn)   = {entropy(varoast(bsc, bawgn)):.6f}  (combining observations helps)")
print(f"  H(bsc boxast bawgn)    = {entropy(boxast(bsc, bawgn)):.6f}  (a parity constraint costs)")

print("\nduality: the two losses balance exactly")
x, y = bsc, bawgn
lhs = entropy(varoast(x, y)) + entropy(boxast(x, y))
rhs = entropy(x) + entropy(y)
print(f"  H(x varoast y) + H(x boxast y) = {lhs:.10f}")
print(f"  H(x) + H(y)                    = {rhs:.10f}")
print(f"  residual = {abs(lhs - rhs):.2e}")

print("\ndegradation order")
half = mix([bsc, dz], [0.5, 0.5])
print("  mix(bsc, delta_zero) is degraded w.r.t. bsc:",
      is_degraded(half, bsc))
print("  bsc is degraded w.r.t. mix(bsc, delta_zero):",
      is_degraded(bsc, half))
print("  degradation never increases under either convolution:")
for op, nm in [(varoast, "varoast"), (boxast, "boxast")]:
    a = op(half, bawgn)
    b = op(bsc, bawgn)
    print(f"    is_degraded({nm}(worse, z), {nm}(better, z)) =",
          is_degraded(a, b))

print("\nsigned arithmetic: differences of densities")
d = half - bsc
print(f"  |mix - bsc|_1 = {d.l1_norm():.6f}")
print(f"  H(mix - bsc)  = {entropy(d):.6f}  (entropy is linear, so this is"
      f" H(mix) - H(bsc) = {entropy(half) - entropy(bsc):.6f})")
sq = boxast(d, d)
print(f"  H((mix - bsc) boxast (mix - bsc)) = {entropy(sq):.2e}"
      "  (squares under boxast never have positive entropy)")
