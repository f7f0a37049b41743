"""
Reduction of the functional design to an ordinary one: ``<X_i, beta> = a_i' R b``, so the reduced covariates are the
rows ``x_i = a_i' R`` with ``R`` the Gram matrix between the curve basis and the beta basis.
"""
import logging
from typing import Optional, Sequence

import numpy as np

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import DimensionError
from privex.folr.base.objects import FunctionalSample, ReducedDesign
from privex.folr.basis.quadrature import gram

log = logging.getLogger(__name__)


def coefficient_matrix(samples: Sequence[FunctionalSample], curve_basis: BaseBasis = None) -> np.ndarray:
    """
    Stack the coefficient vectors of ``samples`` into an ``N x R`` matrix.

    :raises DimensionError: When the samples do not all share ``curve_basis`` (default: the first sample's basis)
    """
    if not samples:
        raise DimensionError('At least one functional sample is required')
    curve_basis = samples[0].basis if curve_basis is None else curve_basis
    mixed = [s.curve_id if s.curve_id is not None else i for i, s in enumerate(samples)
             if not s.basis.same_as(curve_basis)]
    if mixed:
        raise DimensionError(f'Samples are expanded in different bases than {curve_basis!r}: {mixed[:10]}')
    return np.vstack([s.coefficients for s in samples])


def reduce(samples: Sequence[FunctionalSample], beta_basis: Optional[BaseBasis]) -> ReducedDesign:
    """
    Build the reduced design ``xt = A R`` for ``samples`` (rows of ``A``) and the coefficient basis ``beta_basis``.

    ``beta_basis=None`` gives a thresholds-only design with zero columns.

        >>> from privex.folr.basis import MonomialBasis
        >>> mono = MonomialBasis([1, 2])
        >>> reduce([FunctionalSample([1, 0], mono)], mono).xt
        array([[0.33333333, 0.25      ]])

    :raises DimensionError: Samples expanded in different bases
    :raises DomainError:    The curve basis and beta basis domains differ
    """
    a = coefficient_matrix(samples)
    curve_basis = samples[0].basis
    if beta_basis is None:
        return ReducedDesign(xt=np.zeros((a.shape[0], 0)), curve_basis=curve_basis)
    r = gram(curve_basis, beta_basis)
    log.debug('Reduced %d samples from %d to %d covariates', a.shape[0], curve_basis.size, beta_basis.size)
    return ReducedDesign(xt=a @ r.entries, curve_basis=curve_basis, beta_basis=beta_basis, gram=r)
