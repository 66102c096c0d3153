"""Degree-distribution polynomials and their action on densities.

Edge-perspective polynomials lambda and rho are stored as dense
coefficient lists indexed by exponent, so coeffs[k] multiplies alpha^k
and belongs to nodes of degree k+1.  Node-perspective L and R are
derived by term-wise integration.  poly_apply evaluates a polynomial at
a density under either convolution operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InvalidArgument
from .measures import boxast, delta_inf, delta_zero, mix, varoast

COEFF_TOL = 1e-9


class DegreeTwoVariableNodesWarning(UserWarning):
    """Degree-2 variable nodes put the ensemble outside the regime where
    the potential-threshold monotonicity guarantees are verified."""


def _validate_edge(coeffs, name):
    c = np.asarray(coeffs, dtype=np.float64)
    if c.ndim != 1 or c.size == 0:
        raise InvalidArgument(f"{name} must be a non-empty coefficient list")
    if not np.all(np.isfinite(c)):
        raise InvalidArgument(f"{name} coefficients must be finite")
    if np.any(c < -COEFF_TOL):
        raise InvalidArgument(f"{name} coefficients must be nonnegative")
    c = np.maximum(c, 0.0)
    total = c.sum()
    if abs(total - 1.0) > COEFF_TOL:
        raise InvalidArgument(f"{name} coefficients sum to {total!r}, expected 1")
    return c / total


def _integrate_to_node(edge):
    # edge[k] is the alpha^k coefficient; node degree k+1 gets edge[k]/(k+1).
    node = np.zeros(edge.size + 1)
    node[1:] = edge / np.arange(1, edge.size + 1)
    return node / node.sum()


@dataclass(frozen=True)
class DegreeDistribution:
    lambda_coeffs: np.ndarray
    rho_coeffs: np.ndarray
    L_coeffs: np.ndarray = field(compare=False)
    R_coeffs: np.ndarray = field(compare=False)

    @property
    def has_degree_two_variables(self):
        return self.lambda_coeffs.size > 1 and self.lambda_coeffs[1] > 0.0

    @property
    def lp1(self):
        """L'(1), the average variable-node degree."""
        return float(npoly.polyval(1.0, npoly.polyder(self.L_coeffs)))

    @property
    def rp1(self):
        """R'(1), the average check-node degree."""
        return float(npoly.polyval(1.0, npoly.polyder(self.R_coeffs)))


def from_edge_perspective(lambda_coeffs, rho_coeffs):
    """Build a degree distribution from edge-perspective coefficients.

    Coefficients must be nonnegative and sum to 1.  A nonzero alpha^0
    term (degree-1 nodes) is rejected for lambda; a nonzero alpha^1 term
    (degree-2 variable nodes) is allowed but triggers a warning.
    """
    lam = _validate_edge(lambda_coeffs, "lambda")
    rho = _validate_edge(rho_coeffs, "rho")
    if lam[0] > 0.0:
        raise InvalidArgument("degree-1 variable nodes are not a valid ensemble")
    if lam.size > 1 and lam[1] > 0.0:
        warnings.warn(
            "degree-2 variable nodes present: potential-threshold monotonicity "
            "is an unverified regime for this ensemble",
            DegreeTwoVariableNodesWarning,
            stacklevel=2,
        )
    lam.setflags(write=False)
    rho.setflags(write=False)
    L = _integrate_to_node(lam)
    R = _integrate_to_node(rho)
    L.setflags(write=False)
    R.setflags(write=False)
    return DegreeDistribution(lam, rho, L, R)


def regular(var_degree, check_degree):
    """The (var_degree, check_degree)-regular ensemble."""
    if var_degree < 2 or check_degree < 2:
        raise InvalidArgument("regular ensembles need degrees >= 2")
    lam = np.zeros(var_degree)
    lam[-1] = 1.0
    rho = np.zeros(check_degree)
    rho[-1] = 1.0
    return from_edge_perspective(lam, rho)


_WHICH = {
    "lambda": lambda dd: dd.lambda_coeffs,
    "rho": lambda dd: dd.rho_coeffs,
    "L": lambda dd: dd.L_coeffs,
    "R": lambda dd: dd.R_coeffs,
    "lambda_prime": lambda dd: npoly.polyder(dd.lambda_coeffs),
    "rho_prime": lambda dd: npoly.polyder(dd.rho_coeffs),
    "rho_second": lambda dd: npoly.polyder(dd.rho_coeffs, 2),
}


def derivative_coeffs(dd, which, at_one=False):
    """Coefficient list of the named polynomial, or its value at 1."""
    try:
        coeffs = np.asarray(_WHICH[which](dd), dtype=np.float64)
    except KeyError:
        raise InvalidArgument(
            f"unknown polynomial {which!r}; expected one of {sorted(_WHICH)}"
        ) from None
    if at_one:
        return float(coeffs.sum())
    return coeffs


def poly_apply(coeffs, x, op):
    """Evaluate sum_k coeffs[k] x^{*k} under the chosen operator.

    op is "var" (variable-node convolution, zeroth power is the zero
    atom) or "box" (check-node convolution, zeroth power is the infinity
    atom).  A probability coefficient vector applied to a probability
    density yields a probability density; general coefficients yield a
    plain weighted combination.
    """
    if op == "var":
        star, identity = varoast, delta_zero
    elif op == "box":
        star, identity = boxast, delta_inf
    else:
        raise InvalidArgument(f'op must be "var" or "box", got {op!r}')
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 1 or coeffs.size == 0:
        raise InvalidArgument("coeffs must be a non-empty 1-d list")
    if not np.all(np.isfinite(coeffs)):
        raise InvalidArgument("coeffs must be finite")
    terms = []
    used = []
    power = identity(x.grid)
    top = int(np.max(np.nonzero(coeffs)[0], initial=0))
    for k in range(top + 1):
        if coeffs[k] != 0.0:
            terms.append(power)
            used.append(coeffs[k])
        if k < top:
            power = star(power, x)
    if not terms:
        raise InvalidArgument("coeffs must have at least one nonzero entry")
    return mix(terms, used)
