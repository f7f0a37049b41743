"""
Exact integration of products of piecewise polynomial basis functions.

Products of basis functions are polynomials on every span between the union of both bases' breakpoints, so a
Gauss-Legendre rule with enough nodes per span integrates them exactly (up to rounding).
"""
import logging
from math import ceil
from typing import Tuple

import numpy as np

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import DomainError
from privex.folr.base.objects import GramMatrix

log = logging.getLogger(__name__)


def node_count(d1: int, d2: int) -> int:
    """Gauss-Legendre nodes per span for the product of two pieces of degree ``d1`` and ``d2``"""
    return int(ceil((d1 + d2 + 1) / 2)) + 1


def quadrature_rule(breakpoints: np.ndarray, n_nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule with ``n_nodes`` nodes on each span between consecutive ``breakpoints``.

    :return tuple: ``(points, weights)`` as flat arrays
    """
    ip, w = np.polynomial.legendre.leggauss(int(n_nodes))
    lo, hi = np.asarray(breakpoints[:-1]), np.asarray(breakpoints[1:])
    half = (hi - lo) / 2.0
    # Affine map of [-1, 1] onto every span at once.
    points = (lo + half)[:, None] + half[:, None] * ip[None, :]
    weights = half[:, None] * w[None, :]
    return points.reshape(-1), weights.reshape(-1)


def _check_domains(row: BaseBasis, col: BaseBasis):
    if not row.same_domain(col):
        raise DomainError(f'Basis domains differ: [0, {row.domain_end!r}] vs [0, {col.domain_end!r}]')


def inner_products(row: BaseBasis, col: BaseBasis, nu_row: int = 0, nu_col: int = 0) -> np.ndarray:
    """
    Matrix of L2 inner products ``int_0^T psi_i^(nu_row)(s) phi_j^(nu_col)(s) ds``.

    :raises DomainError: When the two bases live on different domains
    """
    _check_domains(row, col)
    d1, d2 = max(row.degree - nu_row, 0), max(col.degree - nu_col, 0)
    brk = np.union1d(row.breakpoints, col.breakpoints)
    x, w = quadrature_rule(brk, node_count(d1, d2))
    psi = row.evaluate(x, nu=nu_row)
    phi = psi if (col is row and nu_col == nu_row) else col.evaluate(x, nu=nu_col)
    m = (psi * w[:, None]).T @ phi
    if row.same_as(col) and nu_row == nu_col:
        m = (m + m.T) / 2.0
    return m


def gram(row: BaseBasis, col: BaseBasis) -> GramMatrix:
    """
    Gram matrix ``R[i, j] = <psi_i, phi_j>`` between two bases on the same domain.

        >>> from privex.folr.basis import MonomialBasis
        >>> gram(MonomialBasis([1, 2]), MonomialBasis([1, 2])).entries
        array([[0.33333333, 0.25      ],
               [0.25      , 0.2       ]])

    :raises DomainError: When the two bases live on different domains
    """
    log.debug('Computing %dx%d Gram matrix between %r and %r', row.size, col.size, row, col)
    return GramMatrix(entries=inner_products(row, col), row_basis=row, col_basis=col)


def penalty_matrix(spec: BaseBasis) -> np.ndarray:
    """Roughness penalty ``P[i, j] = int phi_i''(s) phi_j''(s) ds``"""
    return inner_products(spec, spec, nu_row=2, nu_col=2)
