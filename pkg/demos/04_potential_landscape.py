"""The single-system potential as a landscape over decoder states, and
the energy gap that decides whether coupling can rescue the decoder.

Run:  python3 demos/04_potential_landscape.py
"""

from bmsde import GridSpec, energy_gap, entropy, mix, potential
from bmsde.channels import ChannelFamily, density_for_entropy
from bmsde.ensembles import from_edge_perspective
from bmsde.measures import delta_zero, delta_inf
from bmsde.single_system import de_fixed_point

grid = GridSpec()
dd = from_edge_perspective([0, 0, 1], [0, 0, 0, 0, 0, 1])
fam = ChannelFamily("bsc", grid)

BAR = 46


def strip(vals):
    lo, hi = min(vals.values()), max(vals.values())
    span = hi - lo or 1.0
    for t, u in vals.items():
        n = int(round((u - lo) / span * BAR))
        marker = "0" if abs(u) < 5e-4 else ("-" if u < 0 else "+")
        print(f"    t={t:4.2f} {marker} {'#' * n}{'.' * (BAR - n)} {u:+.5f}")


print("potential along the segment from the decoded state to the stalled")
print("fixed point: x(t) = mix(delta_inf, DE fixed point), weights (1-t, t)\n")
for h in (0.42, 0.45, 0.469, 0.48):
    c = density_for_entropy(fam, h)
    fp = de_fixed_point(c, dd).fixed_point
    if entropy(fp) < 1e-7:
        fp = delta_zero(grid)  # below bp: aim the segment at the erasure state
    vals = {}
    for k in range(11):
        t = k / 10
        x = mix([delta_inf(grid), fp], [1.0 - t, t])
        vals[t] = potential(x, c, dd)
    print(f"  BSC h = {h}")
    strip(vals)
    print()

print("energy gap: worst potential over every decoder-reachable state")
print(f"  {'h':>6} | {'gap':>10}  verdict")
for h in (0.40, 0.43, 0.45, 0.469, 0.48, 0.50):
    g = energy_gap(density_for_entropy(fam, h), dd)
    if g == float("inf"):
        verdict = "below bp threshold, nothing to rescue"
    elif g > 0:
        verdict = "positive: coupling with a wide enough window decodes"
    else:
        verdict = "negative: past the potential threshold, coupling cannot help"
    gs = "inf" if g == float("inf") else f"{g:+.6f}"
    print(f"  {h:>6.3f} | {gs:>10}  {verdict}")
