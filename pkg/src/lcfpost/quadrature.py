"""Gauss quadrature rules on intervals, squares, and triangles.

Interval rules are Gauss-Legendre with ``l_q`` points, exact for
polynomials up to degree ``2*l_q - 1``.  Rules on the unit square are
tensor products of interval rules.  Triangle rules combine the classic
symmetric rules (orders 1, 2, 5) with conical-product Gauss-Jacobi rules
(orders 3, 7, 9, 11); every rule has strictly positive weights and all
points inside the closed domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

__all__ = ["QuadratureRule", "gauss_interval", "tensor_square", "triangle_rule",
           "TRIANGLE_ORDERS", "MAX_INTERVAL_POINTS"]

MAX_INTERVAL_POINTS = 6

# Supported exactness orders for triangle rules.
TRIANGLE_ORDERS = (1, 2, 3, 5, 7, 9, 11)


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable point/weight rule on a fixed integration domain.

    Attributes
    ----------
    points : ndarray, shape (l, d)
        Integration points inside the closed domain.
    weights : ndarray, shape (l,)
        Strictly positive weights; they sum to the domain measure.
    order : int
        Largest polynomial total degree integrated exactly.
    domain : str
        One of ``"interval"``, ``"square"``, ``"triangle"``.
    """

    points: np.ndarray
    weights: np.ndarray
    order: int
    domain: str

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        wts = np.asarray(self.weights, dtype=float)
        pts.flags.writeable = False
        wts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    def integrate(self, values):
        """Weighted sum of integrand values sampled at ``self.points``."""
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def _legendre_nodes(n):
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].

    Nodes are roots of the Legendre polynomial P_n, polished by Newton
    iteration on the three-term recurrence until machine precision.
    """
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (4 * k - 1) / (4 * n + 2))
    for _ in range(100):
        p_prev = np.ones_like(x)
        p = x.copy()
        for j in range(2, n + 1):
            p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x -= dx
        if np.all(np.abs(dx) < 1e-15):
            break
    # recompute derivative at the converged nodes for the weights
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    return x[order], w[order]


def _interval_reference(l_q):
    """Points/weights on [-1, 1] in units of the midpoint/length form."""
    if l_q == 1:
        return np.array([0.0]), np.array([1.0])
    if l_q == 2:
        d = 1.0 / (2.0 * np.sqrt(3.0))
        return np.array([-d, d]), np.array([0.5, 0.5])
    if l_q == 3:
        d = 0.5 * np.sqrt(3.0 / 5.0)
        return np.array([-d, 0.0, d]), np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])
    if l_q == 4:
        r30 = np.sqrt(30.0)
        d_out = 0.5 * np.sqrt((15.0 + 2.0 * r30) / 35.0)
        d_in = 0.5 * np.sqrt((15.0 - 2.0 * r30) / 35.0)
        w_out = 0.25 - np.sqrt(5.0 / 6.0) / 12.0
        w_in = 0.25 + np.sqrt(5.0 / 6.0) / 12.0
        return (np.array([-d_out, -d_in, d_in, d_out]),
                np.array([w_out, w_in, w_in, w_out]))
    # higher point counts: computed Gauss-Legendre nodes
    x, w = _legendre_nodes(l_q)
    return x / 2.0, w / 2.0


@lru_cache(maxsize=None)
def _interval_unit(l_q):
    offs, wts = _interval_reference(l_q)
    return 0.5 + offs, wts


def gauss_interval(l_q, a=0.0, b=1.0):
    """Gauss rule with ``l_q`` points on the interval [a, b].

    Point counts 1 through 4 use the closed-form node/weight expressions
    in terms of the midpoint (a+b)/2 and length b-a; 5 and 6 use computed
    Gauss-Legendre nodes.  The rule is exact for degree ``2*l_q - 1``.

    Raises
    ------
    ValueError
        If ``l_q`` is outside [1, 6] or the interval is empty.
    """
    if not 1 <= l_q <= MAX_INTERVAL_POINTS:
        raise ValueError(f"interval rule needs 1 <= l_q <= {MAX_INTERVAL_POINTS}, got {l_q}")
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    mid = 0.5 * (a + b)
    length = b - a
    offs, wts = _interval_reference(l_q)
    return QuadratureRule(points=(mid + length * offs)[:, None],
                          weights=length * wts,
                          order=2 * l_q - 1,
                          domain="interval")


@lru_cache(maxsize=None)
def tensor_square(l_q):
    """Tensor-product Gauss rule with ``l_q**2`` points on the unit square.

    Exact for every monomial ``x**i * y**j`` with ``i, j <= 2*l_q - 1``;
    the declared total-degree order is ``2*l_q - 1``.
    """
    if not 1 <= l_q <= MAX_INTERVAL_POINTS:
        raise ValueError(f"square rule needs 1 <= l_q <= {MAX_INTERVAL_POINTS}, got {l_q}")
    x, w = _interval_unit(l_q)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    ww = np.outer(w, w)
    return QuadratureRule(points=np.column_stack([xx.ravel(), yy.ravel()]),
                          weights=ww.ravel(),
                          order=2 * l_q - 1,
                          domain="square")


def _conical_product(n):
    """Conical-product rule on the unit triangle, exact for degree 2n - 1.

    Collapses the square via (xi, eta) -> (xi, eta*(1-xi)), which turns
    the triangle integral into a Gauss-Jacobi (weight 1-xi) integral in
    xi times a plain Gauss integral in eta.  All weights positive.
    """
    xj, wj = roots_jacobi(n, 1.0, 0.0)       # weight (1-x) on [-1, 1]
    xi = 0.5 * (xj + 1.0)
    wi = wj / 4.0
    eta, weta = _interval_unit(n)
    px = np.repeat(xi, n)
    py = np.tile(eta, n) * (1.0 - px)
    w = np.outer(wi, weta).ravel()
    return np.column_stack([px, py]), w


def _triangle_points_weights(order):
    if order == 1:
        return np.array([[1.0 / 3.0, 1.0 / 3.0]]), np.array([0.5])
    if order == 2:
        pts = np.array([[1.0 / 6.0, 1.0 / 6.0],
                        [2.0 / 3.0, 1.0 / 6.0],
                        [1.0 / 6.0, 2.0 / 3.0]])
        return pts, np.full(3, 1.0 / 6.0)
    if order == 5:
        # centroid plus two symmetric three-point orbits
        r15 = np.sqrt(15.0)
        a1 = (6.0 - r15) / 21.0
        a2 = (6.0 + r15) / 21.0
        w1 = (155.0 - r15) / 1200.0
        w2 = (155.0 + r15) / 1200.0
        pts = [(1.0 / 3.0, 1.0 / 3.0)]
        wts = [9.0 / 40.0]
        for a, w in ((a1, w1), (a2, w2)):
            b = 1.0 - 2.0 * a
            pts += [(a, a), (b, a), (a, b)]
            wts += [w, w, w]
        return np.array(pts), 0.5 * np.array(wts)
    # remaining supported orders via conical product (positive weights)
    return _conical_product((order + 1) // 2)


@lru_cache(maxsize=None)
def triangle_rule(order):
    """Quadrature rule on the unit triangle {x, y >= 0, x + y <= 1}.

    Exact for all bivariate polynomials of total degree <= ``order``.
    Weights sum to 1/2, the triangle area.

    Raises
    ------
    ValueError
        If ``order`` is not one of ``TRIANGLE_ORDERS``.
    """
    if order not in TRIANGLE_ORDERS:
        raise ValueError(
            f"unsupported triangle order {order}; supported orders: {TRIANGLE_ORDERS}")
    pts, wts = _triangle_points_weights(order)
    return QuadratureRule(points=pts, weights=wts, order=order, domain="triangle")
