"""Uncoupled density evolution, the potential functional, and thresholds.

The DE map is x -> c varoast lambda^var(rho^box(x)).  The potential
functional U(x; c) has the DE fixed points as stationary points; its
directional derivative has a closed form, and the energy gap (the
smallest potential value outside the basin of attraction of the
perfect-decoding point) classifies channels for the potential threshold.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .channels import density_for_entropy
from .ensembles import (
    DegreeTwoVariableNodesWarning,
    derivative_coeffs,
    poly_apply,
)
from .errors import GridMismatch, InvalidArgument, NoChannelSolution, Unsupported
from .measures import (
    QuantizedDensity,
    boxast,
    delta_inf,
    delta_zero,
    entropy,
    make_density,
    mix,
    varoast,
)

DELTA_INF_THRESHOLD = 1e-7
DE_TOL = 1e-9
DE_MAX_ITER = 2000
BISECT_MAX_ITER = 40


@dataclass(frozen=True)
class DeResult:
    fixed_point: QuantizedDensity
    iterations: int
    converged: bool
    entropy_trace: list


@dataclass(frozen=True)
class ThresholdResult:
    h_threshold: float
    bracket: tuple
    iterations: int


def is_delta_inf(x):
    """Whether x is indistinguishable from the perfect-decoding point."""
    return entropy(x) < DELTA_INF_THRESHOLD


def de_step(x, c, dd):
    """One DE update: c varoast lambda^var(rho^box(x))."""
    if x.grid != c.grid:
        raise GridMismatch("message and channel densities live on different grids")
    return varoast(c, poly_apply(dd.lambda_coeffs, poly_apply(dd.rho_coeffs, x, "box"), "var"))


def de_fixed_point(c, dd, init=None, tol=DE_TOL, max_iter=DE_MAX_ITER):
    """Iterate de_step until successive entropies differ by less than tol.

    converged reports whether the stopping criterion fired before the
    iteration cap; whether the result is the perfect-decoding point is a
    separate question answered by is_delta_inf.
    """
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    x = delta_zero(c.grid) if init is None else init
    h = entropy(x)
    trace = [h]
    for it in range(1, max_iter + 1):
        x = de_step(x, c, dd)
        h_new = entropy(x)
        trace.append(h_new)
        if abs(h_new - h) < tol:
            return DeResult(x, it, True, trace)
        h = h_new
    return DeResult(x, max_iter, False, trace)


def _bisect(classify, lo, hi, tol):
    """Largest parameter with classify true, assuming classify(lo) is true
    and classify(hi) is false."""
    it = 0
    while hi - lo > tol and it < BISECT_MAX_ITER:
        mid = 0.5 * (lo + hi)
        if classify(mid):
            lo = mid
        else:
            hi = mid
        it += 1
    return ThresholdResult(0.5 * (lo + hi), (lo, hi), it)


def bp_threshold(family, dd, tol=1e-4):
    """Largest channel entropy from which DE (started at the zero atom)
    still decays to the perfect-decoding point."""
    if not tol > 0:
        raise InvalidArgument("tol must be positive")

    def decays(h):
        c = density_for_entropy(family, h)
        return is_delta_inf(de_fixed_point(c, dd).fixed_point)

    if decays(1.0):
        return ThresholdResult(1.0, (1.0, 1.0), 0)
    return _bisect(decays, 0.0, 1.0, tol)


def potential(x, c, dd):
    """Potential functional U(x; c) of the ensemble.

    (L'(1)/R'(1)) H(R^box(x)) + L'(1) H(rho^box(x))
    - L'(1) H(x box rho^box(x)) - H(c var L^var(rho^box(x))).
    """
    if x.grid != c.grid:
        raise GridMismatch("x and c live on different grids")
    rho_img = poly_apply(dd.rho_coeffs, x, "box")
    return (
        dd.lp1 / dd.rp1 * entropy(poly_apply(dd.R_coeffs, x, "box"))
        + dd.lp1 * entropy(rho_img)
        - dd.lp1 * entropy(boxast(x, rho_img))
        - entropy(varoast(c, poly_apply(dd.L_coeffs, rho_img, "var")))
    )


def potential_derivative(x, c, dd, y):
    """Directional derivative of U at x in the direction y.

    Closed form L'(1) H([x - de_step(x)] var [rho'^box(x) box y]); y must
    be a zero-mass signed density.
    """
    if y.grid != x.grid:
        raise GridMismatch("direction lives on a different grid")
    residual = x - de_step(x, c, dd)
    rho_prime_img = poly_apply(derivative_coeffs(dd, "rho_prime"), x, "box")
    return dd.lp1 * entropy(varoast(residual, boxast(rho_prime_img, y)))


def in_basin_of_delta_inf(x, c, dd, tol=DE_TOL, max_iter=DE_MAX_ITER):
    """Approximate basin test: DE from x reaches the perfect-decoding
    point with monotonically non-increasing entropy."""
    res = de_fixed_point(c, dd, init=x, tol=tol, max_iter=max_iter)
    trace = np.asarray(res.entropy_trace)
    monotone = bool(np.all(np.diff(trace) <= 1e-12))
    return monotone and is_delta_inf(res.fixed_point)


def _gap_candidates(c, dd):
    """Candidate minimizers outside the basin: converged non-trivial DE
    limits from the zero atom and from a ladder of partially informed
    starts (and their channel-convolved variants)."""
    grid = c.grid
    starts = [delta_zero(grid)]
    for t in np.linspace(0.1, 1.0, 10):
        m = mix([delta_zero(grid), delta_inf(grid)], [t, 1.0 - t])
        starts.append(m)
        starts.append(varoast(c, m))
    out = []
    for s in starts:
        res = de_fixed_point(c, dd, init=s)
        if res.converged and not is_delta_inf(res.fixed_point):
            out.append(res.fixed_point)
    return out


def energy_gap(c, dd, family_hint=None):
    """Smallest potential over found non-trivial DE limits; +inf when
    every start decays (no obstruction to decoding was found).

    family_hint optionally widens the start set with degraded channel
    inputs from the named family; the default ladder suffices for the
    classical families.
    """
    candidates = _gap_candidates(c, dd)
    if family_hint is not None:
        from .channels import density_of, param_for_entropy  # noqa: PLC0415

        for h in np.linspace(0.2, 1.0, 5):
            s = varoast(c, density_of(family_hint, param_for_entropy(family_hint, h)))
            res = de_fixed_point(c, dd, init=s)
            if res.converged and not is_delta_inf(res.fixed_point):
                candidates.append(res.fixed_point)
    if not candidates:
        return math.inf
    return min(potential(x, c, dd) for x in candidates)


def potential_threshold(family, dd, tol=1e-3):
    """Largest channel entropy in [bp threshold, 1] with positive energy
    gap."""
    if not tol > 0:
        raise InvalidArgument("tol must be positive")
    if dd.has_degree_two_variables:
        warnings.warn(
            "degree-2 variable nodes present: threshold monotonicity is an "
            "unverified regime, the bisection result may not be the sup",
            DegreeTwoVariableNodesWarning,
            stacklevel=2,
        )
    h_bp = bp_threshold(family, dd, tol).h_threshold

    def positive_gap(h):
        return energy_gap(density_for_entropy(family, h), dd) > 0.0

    if positive_gap(1.0):
        return ThresholdResult(1.0, (h_bp, 1.0), 0)
    return _bisect(positive_gap, h_bp, 1.0, tol)


def _bec_erasure_fraction(x):
    """The erasure mass of a zero/infinity mixture; Unsupported otherwise."""
    if float(np.abs(x.pair_masses[1:]).sum()) > 1e-12:
        raise Unsupported("fixed-point potential needs an erasure-type density")
    return float(x.pair_masses[0])


def fixed_point_potential(x, dd):
    """Potential of an erasure-type DE fixed point against the unique
    erasure channel that fixes it.

    Solves eps * lambda(1 - rho(1 - a)) = a for the channel erasure rate
    eps, where a is the erasure mass of x, then evaluates potential(x,
    BEC(eps)).
    """
    from numpy.polynomial import polynomial as npoly

    a = _bec_erasure_fraction(x)
    if a < 1e-12:
        return 0.0
    s = float(npoly.polyval(1.0 - npoly.polyval(1.0 - a, dd.rho_coeffs), dd.lambda_coeffs))
    if s <= 0.0:
        raise NoChannelSolution("no erasure channel fixes this density")
    eps = a / s
    if eps > 1.0 + 1e-9:
        raise NoChannelSolution(f"required erasure rate {eps!r} exceeds 1")
    eps = min(eps, 1.0)
    c = make_density(x.grid, [(0.0, eps), (math.inf, 1.0 - eps)])
    return potential(x, c, dd)
