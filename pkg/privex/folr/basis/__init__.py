"""
Function bases on ``[0, T]``: evaluation, Gram matrices between bases, and smoothing of raw curves.

Bases are looked up by their ``kind`` through :py:attr:`.BASIS_HANDLERS`:

    >>> from privex.folr.basis import get_basis
    >>> splines = get_basis('bspline', size=16, order=4, domain_end=480.0)
    >>> monos = get_basis('monomial', size=2, domain_end=480.0)

"""
import logging
from typing import Any, Dict, Type

import numpy as np

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import ComponentNotFound, ParseError, ValidationError
from privex.folr.basis.BSplineBasis import BSplineBasis
from privex.folr.basis.MonomialBasis import MonomialBasis
from privex.folr.basis.quadrature import gram, inner_products, node_count, penalty_matrix, quadrature_rule
from privex.folr.basis.smoothing import evaluate_sample, smooth, smooth_curve, smooth_many, solve_spd

log = logging.getLogger(__name__)

BASIS_HANDLERS = {
    BSplineBasis.kind: BSplineBasis,
    MonomialBasis.kind: MonomialBasis,
}   # type: Dict[str, Type[BaseBasis]]
"""Maps a basis ``kind`` to its class"""


def get_basis(kind: str, size: int = None, order: int = 4, domain_end: float = 1.0, **kwargs) -> BaseBasis:
    """
    Build a basis by name.

    - ``bspline``: ``size`` uniformly placed cubic (``order=4``) B-splines, or explicit ``knots=[...]``
    - ``monomial``: degrees ``1..size``, or explicit ``degrees=[...]``

    :raises ComponentNotFound: Unknown ``kind``
    :raises ValidationError:   Invalid size / order / domain
    """
    kind = str(kind).lower()
    if kind not in BASIS_HANDLERS:
        raise ComponentNotFound(f"The basis kind '{kind}' does not exist. Known kinds: {sorted(BASIS_HANDLERS)}")
    if kind == BSplineBasis.kind:
        if 'knots' in kwargs:
            return BSplineBasis(order=order, knots=kwargs['knots'], domain_end=domain_end)
        if size is None:
            raise ValidationError('A B-spline basis needs a size or explicit knots')
        return BSplineBasis.uniform(size=size, order=order, domain_end=domain_end)
    if 'degrees' in kwargs:
        return MonomialBasis(degrees=kwargs['degrees'], domain_end=domain_end)
    if size is None or int(size) < 1:
        raise ValidationError(f'A monomial basis needs size >= 1, got {size!r}')
    return MonomialBasis.of_size(size, domain_end=domain_end)


def basis_from_dict(data: Dict[str, Any]) -> BaseBasis:
    """
    Rebuild a basis from :meth:`.BaseBasis.to_dict` output.

    :raises ParseError: When the ``kind`` or a required field is missing
    """
    try:
        kind = data['kind']
    except (KeyError, TypeError):
        raise ParseError('Basis description has no kind', field='kind')
    if kind not in BASIS_HANDLERS:
        raise ParseError(f"Unknown basis kind '{kind}'", field='kind')
    try:
        if kind == BSplineBasis.kind:
            return BSplineBasis(order=data['order'], knots=data['knots'], domain_end=data['domain_end'])
        return MonomialBasis(degrees=data['degrees'], domain_end=data['domain_end'])
    except KeyError as e:
        raise ParseError(f'Basis description of kind {kind} is incomplete', field=str(e.args[0]))


def eval_basis(spec: BaseBasis, t) -> np.ndarray:
    """
    Value of every basis function at ``t``. A scalar ``t`` gives a vector of length ``spec.size``, an array of points
    gives a ``(len(t), spec.size)`` matrix.

    :raises DomainError: When ``t`` lies outside of ``[0, T]``
    """
    values = spec.evaluate(t)
    return values[0] if np.ndim(t) == 0 else values
