"""Entropy-parameterized BMS channel families as LLR densities.

Three classical families are provided: erasure (bec), bit-flip (bsc) and
binary-input AWGN (bawgnc).  Within each family the channel densities
are ordered by degradation, which makes the channel entropy a monotone
reparameterization; param_for_entropy inverts it by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import InvalidArgument
from .grid import GridSpec
from .measures import Density, QuantizedDensity, delta_inf, entropy, make_density

KINDS = ("bec", "bsc", "bawgnc")

_AWGN_SIGMA_LO = 1e-2
_AWGN_SIGMA_HI = 1e3
_AWGN_SUBSAMPLES = 8


@dataclass(frozen=True)
class ChannelFamily:
    kind: str
    grid: GridSpec

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown channel kind {self.kind!r}; expected one of {KINDS}")


def _bawgnc_density(grid, sigma):
    mean = 2.0 / sigma**2
    std = 2.0 / sigma
    n = grid.n_pair_slots
    delta = grid.spacing
    centers = grid.bin_values()
    offsets = (np.arange(_AWGN_SUBSAMPLES) + 0.5) / _AWGN_SUBSAMPLES - 0.5
    samples = centers[:, None] + offsets[None, :] * delta
    weights = norm.pdf(samples, loc=mean, scale=std).mean(axis=1) * delta
    hi_edge = centers[-1] + delta / 2.0
    lo_edge = centers[0] - delta / 2.0
    weights[-1] += norm.sf(hi_edge, loc=mean, scale=std)
    weights[0] += norm.cdf(lo_edge, loc=mean, scale=std)
    total = weights.sum()
    if not total > 0.0:
        raise InvalidArgument(f"sigma {sigma!r} is outside the representable range")
    weights /= total
    return QuantizedDensity(grid, weights, 0.0)


def density_of(family, param):
    """LLR density of one channel in the family, at its native parameter.

    bec: erasure probability in [0, 1].  bsc: crossover in [0, 1/2].
    bawgnc: noise standard deviation sigma > 0.
    """
    param = float(param)
    if family.kind == "bec":
        if not 0.0 <= param <= 1.0:
            raise InvalidArgument(f"erasure probability {param!r} not in [0, 1]")
        return make_density(family.grid, [(0.0, param), (math.inf, 1.0 - param)])
    if family.kind == "bsc":
        if not 0.0 <= param <= 0.5:
            raise InvalidArgument(f"crossover probability {param!r} not in [0, 1/2]")
        if param == 0.0:
            return delta_inf(family.grid)
        llr = math.log((1.0 - param) / param) if param < 0.5 else 0.0
        return make_density(family.grid, [(llr, 1.0 - param), (-llr, param)])
    if not (param > 0.0 and math.isfinite(param)):
        raise InvalidArgument(f"sigma must be positive and finite, got {param!r}")
    return _bawgnc_density(family.grid, param)


def entropy_of(family, param):
    """Channel entropy at the native parameter; the erasure case is exact."""
    if family.kind == "bec":
        if not 0.0 <= param <= 1.0:
            raise InvalidArgument(f"erasure probability {param!r} not in [0, 1]")
        return float(param)
    return entropy(density_of(family, param))


def param_for_entropy(family, h, tol=1e-9):
    """Native parameter whose channel entropy is h, by bisection.

    Entropy is strictly increasing in the native parameter for all three
    families, so the root is unique.
    """
    h = float(h)
    if not 0.0 <= h <= 1.0:
        raise InvalidArgument(f"channel entropy {h!r} not in [0, 1]")
    if family.kind == "bec":
        return h
    if family.kind == "bsc":
        lo, hi = 0.0, 0.5
    else:
        lo, hi = _AWGN_SIGMA_LO, _AWGN_SIGMA_HI
    h_lo = entropy_of(family, lo)
    h_hi = entropy_of(family, hi)
    if h < h_lo - tol or h > h_hi + tol:
        raise InvalidArgument(
            f"entropy {h!r} is outside the achievable range [{h_lo:.3g}, {h_hi:.3g}]"
        )
    if h <= h_lo:
        return lo
    if h >= h_hi:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h_mid = entropy_of(family, mid)
        if abs(h_mid - h) <= tol:
            return mid
        if h_mid < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def density_for_entropy(family, h, tol=1e-9):
    """Channel density at entropy h; the form every threshold API consumes."""
    return density_of(family, param_for_entropy(family, h, tol))
