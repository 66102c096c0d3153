"""Uniform LLR grid and cached per-grid lookup tables.

Densities live on a symmetric uniform grid of log-likelihood-ratio values
plus one atom at +infinity.  Internally every symmetric density is handled
in its folded form: a vector of pair masses p_k, where slot k stands for
the symmetric atom pair at ±k·spacing carrying total mass p_k split in the
ratio 1 : e^{-alpha} between +alpha and -alpha.  Slot 0 is the origin bin
and the infinity atom is kept separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import entr, expit

from .errors import InvalidArgument

LN2 = math.log(2.0)

DEFAULT_SPACING = 1.0 / 16.0
DEFAULT_HALF_RANGE = 32.0


def entropy_kernel(alpha):
    """log2(1 + e^{-alpha}), stable over the whole real line."""
    a = np.asarray(alpha, dtype=np.float64)
    # log1p(exp(-a)) overflows for very negative a; split on sign.
    neg = np.minimum(a, 0.0)
    pos = np.maximum(a, 0.0)
    return (np.log1p(np.exp(-pos)) - neg) / LN2


def pair_entropy(alpha):
    """Entropy carried by a unit-mass symmetric pair at ±alpha, alpha >= 0.

    The pair holds mass 1/(1+e^{-a}) at +a and e^{-a}/(1+e^{-a}) at -a,
    which integrates the entropy kernel to h2(1/(1+e^a)): the binary
    entropy of the crossover probability of the equivalent BSC.
    Decreases strictly from 1 at alpha=0 to 0 as alpha -> inf.
    """
    p = expit(-np.asarray(alpha, dtype=np.float64))
    return (entr(p) + entr(1.0 - p)) / LN2


def check_combine(a, b):
    """Check-node LLR combination 2 atanh(tanh(a/2) tanh(b/2)) for a, b >= 0.

    Evaluated in the overflow-safe form
    min(a,b) + log1p(e^{-(a+b)}) - log1p(e^{-|a-b|}).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return (
        np.minimum(a, b)
        + np.log1p(np.exp(-(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


@dataclass(frozen=True)
class GridSpec:
    """Uniform symmetric LLR grid: bins at k*spacing for |k*spacing| <= half_range."""

    spacing: float = DEFAULT_SPACING
    half_range: float = DEFAULT_HALF_RANGE

    def __post_init__(self):
        if not (self.spacing > 0.0) or not np.isfinite(self.spacing):
            raise InvalidArgument("grid spacing must be positive and finite")
        if not (self.half_range > 0.0) or not np.isfinite(self.half_range):
            raise InvalidArgument("grid half_range must be positive and finite")
        ratio = self.half_range / self.spacing
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise InvalidArgument("half_range must be a positive integer multiple of spacing")

    @property
    def n_pair_slots(self):
        """Number of folded slots (origin included, infinity excluded)."""
        return int(round(self.half_range / self.spacing)) + 1

    @property
    def n_bins(self):
        """Number of finite two-sided bins."""
        return 2 * self.n_pair_slots - 1

    def slot_values(self):
        """Nonnegative LLR value of each folded slot."""
        return np.arange(self.n_pair_slots) * self.spacing

    def bin_values(self):
        """Two-sided bin LLR values from -half_range to +half_range."""
        k = self.n_pair_slots - 1
        return np.arange(-k, k + 1) * self.spacing


class _GridVectors:
    """Per-grid O(n) vectors shared by all densities on that grid."""

    def __init__(self, grid):
        g = grid.slot_values()
        self.slot_eta = pair_entropy(g)
        self.slot_u2 = np.tanh(g / 2.0) ** 2
        # Fraction of a pair's mass that sits on the +alpha side.
        self.plus_share = 1.0 / (1.0 + np.exp(-g))


class _BoxastTables:
    """Dense slot-pair tables for the check-node operator on one grid.

    idx[i, j] is the lower slot receiving the combined pair of slots i and j
    and hi_frac[i, j] the fraction of its mass handed to idx+1, chosen so the
    deposit preserves the pair-entropy contribution exactly.
    """

    def __init__(self, grid, vectors):
        g = grid.slot_values()
        n = grid.n_pair_slots
        c = check_combine(g[:, None], g[None, :])
        pos = c / grid.spacing
        idx = np.clip(np.floor(pos).astype(np.int64), 0, n - 2)
        eta = vectors.slot_eta
        eta_c = pair_entropy(c)
        eta_lo = eta[idx]
        eta_hi = eta[idx + 1]
        den = eta_lo - eta_hi
        # Entropy-preserving split; fall back to linear interpolation where
        # the pair-entropy difference has underflowed (far tail slots).
        with np.errstate(divide="ignore", invalid="ignore"):
            lo_frac = np.where(den > 1e-280, (eta_c - eta_hi) / den, idx + 1 - pos)
        lo_frac = np.clip(lo_frac, 0.0, 1.0)
        self.idx = idx.astype(np.int32)
        self.hi_frac = 1.0 - lo_frac


_VECTOR_CACHE: dict[GridSpec, _GridVectors] = {}
_TABLE_CACHE: dict[GridSpec, _BoxastTables] = {}


def grid_vectors(grid):
    vec = _VECTOR_CACHE.get(grid)
    if vec is None:
        vec = _VECTOR_CACHE[grid] = _GridVectors(grid)
    return vec


def boxast_tables(grid):
    tab = _TABLE_CACHE.get(grid)
    if tab is None:
        tab = _TABLE_CACHE[grid] = _BoxastTables(grid, grid_vectors(grid))
    return tab


def deposit_pairs(grid, locations, masses):
    """Scatter atom masses at nonnegative LLR locations onto folded slots.

    Off-slot locations are split over the two neighbouring slots with the
    entropy-preserving fractions; the split is therefore exact for the
    entropy functional and second-order accurate for everything else.
    Locations beyond half_range are clamped onto the outermost slot.
    """
    loc = np.asarray(locations, dtype=np.float64)
    m = np.asarray(masses, dtype=np.float64)
    n = grid.n_pair_slots
    pairs = np.zeros(n)
    if loc.size == 0:
        return pairs
    loc = np.clip(loc, 0.0, grid.half_range)
    pos = loc / grid.spacing
    idx = np.clip(np.floor(pos).astype(np.int64), 0, n - 2)
    vec = grid_vectors(grid)
    eta = vec.slot_eta
    eta_lo = eta[idx]
    eta_hi = eta[idx + 1]
    den = eta_lo - eta_hi
    with np.errstate(divide="ignore", invalid="ignore"):
        lo_frac = np.where(den > 1e-280, (pair_entropy(loc) - eta_hi) / den, idx + 1 - pos)
    lo_frac = np.clip(lo_frac, 0.0, 1.0)
    np.add.at(pairs, idx, m * lo_frac)
    np.add.at(pairs, idx + 1, m * (1.0 - lo_frac))
    return pairs
