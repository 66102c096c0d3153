"""Quantized symmetric LLR densities and their measure algebra.

Two operators act on densities: the variable-node convolution (ordinary
convolution of LLR densities, identity at the zero atom) and the
check-node convolution (atoms combine via 2 atanh(tanh(a/2) tanh(b/2)),
identity at the infinity atom).  Entropy, the tanh-moment family, the
moment series expansion of entropy, and the degradation partial order
complete the toolkit.

Every density is kept exactly symmetric: x(-a) = e^{-a} x(a) holds bin
per bin because construction always goes through the folded pair
representation (see grid.py).  The check-node operator never leaves the
grid (combined reliability never exceeds its weakest input) and the
variable-node operator saturates out-of-range mass onto the outermost
bins.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import GridMismatch, InvalidArgument, InvalidMeasure, NotNormalized
from .grid import LN2, GridSpec, boxast_tables, deposit_pairs, grid_vectors

MASS_TOL = 1e-9
NEG_DUST = -1e-12


def _pairs_to_weights(grid, pairs):
    share = grid_vectors(grid).plus_share
    wpos = pairs[1:] * share[1:]
    wneg = pairs[1:] - wpos
    return np.concatenate([wneg[::-1], pairs[:1], wpos])


def _weights_to_pairs(grid, weights):
    center = grid.n_pair_slots - 1
    head = weights[center : center + 1]
    return np.concatenate([head, weights[center + 1 :] + weights[center - 1 :: -1]])


class Density:
    """Symmetric measure on a quantized LLR grid (arbitrary total mass).

    weights covers the two-sided grid from -half_range to +half_range and
    inf_mass is the atom at +infinity.  Instances behave as values: the
    arrays are read-only and all operations return new objects.  Scalar
    multiples and sums of densities are supported for building signed
    directions and mixtures.
    """

    def __init__(self, grid, weights, inf_mass=0.0):
        if not isinstance(grid, GridSpec):
            raise InvalidArgument("grid must be a GridSpec")
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] != grid.n_bins:
            raise InvalidMeasure(
                f"expected {grid.n_bins} weights for this grid, got {w.shape}"
            )
        if not np.all(np.isfinite(w)) or not math.isfinite(inf_mass):
            raise InvalidMeasure("weights and inf_mass must be finite")
        self._init_from_pairs(grid, _weights_to_pairs(grid, w), float(inf_mass))

    @classmethod
    def _from_pairs(cls, grid, pairs, inf_mass):
        obj = object.__new__(cls)
        obj._init_from_pairs(grid, np.asarray(pairs, dtype=np.float64), float(inf_mass))
        return obj

    def _init_from_pairs(self, grid, pairs, inf_mass):
        pairs, inf_mass = self._clean(pairs, inf_mass)
        weights = _pairs_to_weights(grid, pairs)
        pairs.setflags(write=False)
        weights.setflags(write=False)
        self.grid = grid
        self.pair_masses = pairs
        self.inf_mass = inf_mass
        self.weights = weights

    def _clean(self, pairs, inf_mass):
        return pairs, inf_mass

    @property
    def total_mass(self):
        return float(self.pair_masses.sum() + self.inf_mass)

    def l1_norm(self):
        return float(np.abs(self.weights).sum() + abs(self.inf_mass))

    def symmetry_residual(self):
        """Total absolute violation of x(-a) = e^{-a} x(a) over the bins."""
        k = self.grid.n_pair_slots - 1
        alpha = self.grid.bin_values()[k + 1 :]
        pos = self.weights[k + 1 :]
        neg = self.weights[k - 1 :: -1]
        return float(np.abs(neg - np.exp(-alpha) * pos).sum())

    def _binary_op(self, other, pair_fn, inf_fn, cls):
        if not isinstance(other, Density):
            return NotImplemented
        if other.grid != self.grid:
            raise GridMismatch("densities live on different grids")
        return cls._from_pairs(
            self.grid,
            pair_fn(self.pair_masses, other.pair_masses),
            inf_fn(self.inf_mass, other.inf_mass),
        )

    def __add__(self, other):
        return self._binary_op(other, np.add, lambda a, b: a + b, Density)

    def __sub__(self, other):
        cls = (
            SignedDensity
            if isinstance(self, QuantizedDensity) and isinstance(other, QuantizedDensity)
            else Density
        )
        return self._binary_op(other, np.subtract, lambda a, b: a - b, cls)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return Density._from_pairs(
            self.grid, self.pair_masses * scalar, self.inf_mass * scalar
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def to_json(self, indent=None):
        payload = {
            "spacing": self.grid.spacing,
            "half_range": self.grid.half_range,
            "weights": self.weights.tolist(),
            "inf_mass": self.inf_mass,
        }
        return json.dumps(payload, indent=indent)

    @classmethod
    def from_json(cls, text):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidMeasure(f"not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise InvalidMeasure("density JSON must be an object")
        try:
            spacing = float(payload["spacing"])
            half_range = float(payload["half_range"])
            weights = payload["weights"]
            inf_mass = float(payload["inf_mass"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidMeasure(f"malformed density JSON: {exc}") from exc
        if not isinstance(weights, list):
            raise InvalidMeasure("weights must be a list")
        return cls(GridSpec(spacing, half_range), np.asarray(weights, dtype=np.float64), inf_mass)

    def __repr__(self):
        return (
            f"<{type(self).__name__} spacing={self.grid.spacing} "
            f"half_range={self.grid.half_range} mass={self.total_mass:.6g}>"
        )


class QuantizedDensity(Density):
    """Probability density: nonnegative weights with total mass 1."""

    def _clean(self, pairs, inf_mass):
        if pairs.min(initial=0.0) < NEG_DUST or inf_mass < NEG_DUST:
            raise InvalidMeasure("probability density has a negative weight")
        pairs = np.maximum(pairs, 0.0)
        inf_mass = max(inf_mass, 0.0)
        total = pairs.sum() + inf_mass
        if abs(total - 1.0) > MASS_TOL:
            raise NotNormalized(f"total mass {total!r} is not 1")
        return pairs, inf_mass


class SignedDensity(Density):
    """Difference of two probability densities: total mass 0."""

    def _clean(self, pairs, inf_mass):
        total = pairs.sum() + inf_mass
        if abs(total) > MASS_TOL:
            raise InvalidMeasure(f"signed density must have zero total mass, got {total!r}")
        return pairs, inf_mass


def delta_zero(grid):
    """Unit atom at LLR 0: the completely unknown message."""
    pairs = np.zeros(grid.n_pair_slots)
    pairs[0] = 1.0
    return QuantizedDensity._from_pairs(grid, pairs, 0.0)


def delta_inf(grid):
    """Unit atom at +infinity: the perfectly known message."""
    return QuantizedDensity._from_pairs(grid, np.zeros(grid.n_pair_slots), 1.0)


def make_density(grid, atoms):
    """Build a probability density from (llr_location, mass) atoms.

    Masses must be nonnegative and sum to 1 (within 1e-9).  Locations may
    be +-inf; finite locations beyond half_range are clamped onto the
    outermost bin.  Masses given at +a and -a are pooled and redistributed
    in the unique symmetric proportion, and off-grid locations are split
    over the two neighbouring bins preserving the entropy contribution
    exactly.
    """
    atoms = list(atoms)
    loc = np.array([a[0] for a in atoms], dtype=np.float64)
    mass = np.array([a[1] for a in atoms], dtype=np.float64)
    if np.any(np.isnan(loc)) or np.any(np.isnan(mass)):
        raise InvalidArgument("atom locations and masses must not be NaN")
    if np.any(mass < NEG_DUST):
        raise InvalidMeasure("negative atom mass")
    mass = np.maximum(mass, 0.0)
    total = mass.sum()
    if abs(total - 1.0) > MASS_TOL:
        raise NotNormalized(f"atom masses sum to {total!r}, expected 1")
    finite = np.isfinite(loc)
    inf_mass = mass[~finite].sum()
    pairs = deposit_pairs(grid, np.abs(loc[finite]), mass[finite])
    return QuantizedDensity._from_pairs(grid, pairs / total, inf_mass / total)


def mix(components, weights):
    """Weighted sum of densities on one grid.

    A convex combination of probability densities yields a
    QuantizedDensity; any other combination yields a plain Density.
    """
    components = list(components)
    weights = np.asarray(weights, dtype=np.float64)
    if len(components) == 0 or weights.shape != (len(components),):
        raise InvalidArgument("mix needs one weight per component")
    grid = components[0].grid
    pairs = np.zeros(grid.n_pair_slots)
    inf_mass = 0.0
    for c, w in zip(components, weights):
        if c.grid != grid:
            raise GridMismatch("mixture components live on different grids")
        pairs += w * c.pair_masses
        inf_mass += w * c.inf_mass
    convex = (
        np.all(weights >= 0.0)
        and abs(weights.sum() - 1.0) <= MASS_TOL
        and all(isinstance(c, QuantizedDensity) for c in components)
    )
    if convex:
        total = pairs.sum() + inf_mass
        return QuantizedDensity._from_pairs(grid, pairs / total, inf_mass / total)
    return Density._from_pairs(grid, pairs, inf_mass)


def _same_grid(x1, x2):
    if x1.grid != x2.grid:
        raise GridMismatch("operands live on different grids")
    return x1.grid


def _result_class(x1, x2):
    prob1 = isinstance(x1, QuantizedDensity)
    prob2 = isinstance(x2, QuantizedDensity)
    if prob1 and prob2:
        return QuantizedDensity
    ok1 = prob1 or isinstance(x1, SignedDensity)
    ok2 = prob2 or isinstance(x2, SignedDensity)
    if ok1 and ok2:
        return SignedDensity
    return Density


def _finalize(cls, grid, pairs, inf_mass):
    if cls is QuantizedDensity:
        pairs = np.maximum(pairs, 0.0)
        inf_mass = max(inf_mass, 0.0)
        total = pairs.sum() + inf_mass
        if not total > 0.0:
            raise InvalidMeasure("operator result lost all mass")
        pairs = pairs / total
        inf_mass = inf_mass / total
    return cls._from_pairs(grid, pairs, inf_mass)


def varoast(x1, x2):
    """Variable-node convolution of two densities.

    Ordinary convolution of the LLR weight vectors; the zero atom is the
    identity and the infinity atom absorbs.  Mass convolved past
    +-half_range saturates onto the outermost bins.
    """
    grid = _same_grid(x1, x2)
    k = grid.n_pair_slots - 1
    full = np.convolve(x1.weights, x2.weights)
    central = full[k : 3 * k + 1].copy()
    central[0] += full[:k].sum()
    central[-1] += full[3 * k + 1 :].sum()
    finite1 = float(x1.pair_masses.sum())
    finite2 = float(x2.pair_masses.sum())
    inf_mass = x1.inf_mass * (finite2 + x2.inf_mass) + x2.inf_mass * finite1
    return _finalize(
        _result_class(x1, x2), grid, _weights_to_pairs(grid, central), inf_mass
    )


def boxast(x1, x2):
    """Check-node convolution of two densities.

    Atom pairs at reliabilities a and b combine to
    2 atanh(tanh(a/2) tanh(b/2)); the infinity atom is the identity and
    the zero atom absorbs.  Combined reliability never exceeds the weaker
    input, so the result stays on the grid.
    """
    grid = _same_grid(x1, x2)
    tab = boxast_tables(grid)
    p, q = x1.pair_masses, x2.pair_masses
    acc = x1.inf_mass * q + x2.inf_mass * p
    ip = np.flatnonzero(p)
    iq = np.flatnonzero(q)
    if ip.size and iq.size:
        sub = (p[ip][:, None] * q[iq][None, :]).ravel()
        idx = tab.idx[np.ix_(ip, iq)].ravel()
        hi = tab.hi_frac[np.ix_(ip, iq)].ravel()
        n = grid.n_pair_slots
        acc = acc + np.bincount(idx, weights=sub * (1.0 - hi), minlength=n)
        acc = acc + np.bincount(idx + 1, weights=sub * hi, minlength=n)
    return _finalize(
        _result_class(x1, x2), grid, acc, x1.inf_mass * x2.inf_mass
    )


def entropy(x):
    """Entropy functional: integral of log2(1 + e^{-a}) against x.

    1 for the zero atom, 0 for the infinity atom; linear in x, so signed
    densities are welcome.
    """
    return float(x.pair_masses @ grid_vectors(x.grid).slot_eta)


def moment_mk(x, k):
    """k-th tanh moment: integral of tanh(a/2)^{2k} against x, k >= 1."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidArgument("moment order k must be an integer >= 1")
    u2 = grid_vectors(x.grid).slot_u2
    return float(x.pair_masses @ (u2**k) + x.inf_mass)


def entropy_series(x, num_terms):
    """Truncated moment expansion of the entropy functional.

    total_mass - sum_{k=1..num_terms} M_k(x) / (ln 2 · 2k(2k-1)); converges
    to entropy(x) from above as num_terms grows (for nonnegative x).
    """
    if not isinstance(num_terms, (int, np.integer)) or num_terms < 1:
        raise InvalidArgument("num_terms must be an integer >= 1")
    u2 = grid_vectors(x.grid).slot_u2
    p = x.pair_masses
    acc = x.total_mass
    power = np.ones_like(u2)
    for k in range(1, num_terms + 1):
        power = power * u2
        mk = float(p @ power + x.inf_mass)
        acc -= mk / (LN2 * 2 * k * (2 * k - 1))
    return acc


def is_degraded(x1, x2, tol=1e-7, t_points=256):
    """True when x1 is degraded with respect to x2 (x1 is the noisier one).

    Computational test over the extreme rays of concave nonincreasing
    functions of |tanh(a/2)|: for every threshold t on a uniform grid,
    E_{x1}[max(|tanh(a/2)| - t, 0)] <= E_{x2}[...] + tol.
    """
    grid = _same_grid(x1, x2)
    u = np.tanh(grid.slot_values() / 2.0)
    u = np.concatenate([u, [1.0]])
    t = np.linspace(0.0, 1.0, t_points)
    j = np.searchsorted(u, t, side="right")

    def excess(x):
        p = np.concatenate([x.pair_masses, [x.inf_mass]])
        s1 = np.concatenate([np.cumsum(p[::-1])[::-1], [0.0]])
        su = np.concatenate([np.cumsum((p * u)[::-1])[::-1], [0.0]])
        return su[j] - t * s1[j]

    return bool(np.all(excess(x1) <= excess(x2) + tol))
