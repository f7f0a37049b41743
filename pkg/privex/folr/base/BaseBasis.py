import json
import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple, Union

import numpy as np

from privex.folr.base.exceptions import DomainError, ValidationError

log = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray, list, tuple]


class BaseBasis(ABC):
    """
    BaseBasis - Base class for finite families of real functions on ``[0, T]``

    A basis houses both the covariate curves ``X(t) = sum_r a_r psi_r(t)`` and the coefficient function
    ``beta(t) = sum_m b_m phi_m(t)``. Every basis is a piecewise polynomial, which lets :py:func:`.gram` integrate
    products of basis functions exactly with Gauss-Legendre quadrature on each span between :attr:`.breakpoints`.

    Bases must be immutable once constructed. They must implement:

    - :attr:`.size` - the number of basis functions
    - :attr:`.degree` - the polynomial degree of each piece
    - :attr:`.breakpoints` - the span boundaries (including ``0`` and ``T``)
    - :meth:`._evaluate` - the basis functions (or their derivatives) at points known to lie in the domain
    - :meth:`.to_dict` - a JSON friendly description, read back by :py:func:`privex.folr.basis_from_dict`

    Example::

        >>> from privex.folr import get_basis
        >>> b = get_basis('monomial', degrees=[1, 2], domain_end=1.0)
        >>> b.evaluate([0.5])
        array([[0.5 , 0.25]])

    """

    kind: str = ''
    """Short name of the basis family, used in registries and files, e.g. ``bspline``"""

    domain_end: float

    def __init__(self, domain_end: float = 1.0, **kwargs):
        domain_end = float(domain_end)
        if not np.isfinite(domain_end) or domain_end <= 0:
            raise ValidationError(f'Basis domain end T must be finite and > 0, got {domain_end!r}')
        self.domain_end = domain_end

    @property
    def domain(self) -> Tuple[float, float]:
        return 0.0, self.domain_end

    @property
    @abstractmethod
    def size(self) -> int:
        raise NotImplementedError(f"{type(self).__name__}.size must be implemented!")

    @property
    @abstractmethod
    def degree(self) -> int:
        """Polynomial degree of every piece of every basis function"""
        raise NotImplementedError(f"{type(self).__name__}.degree must be implemented!")

    @property
    @abstractmethod
    def breakpoints(self) -> np.ndarray:
        """Sorted unique span boundaries, starting at 0 and ending at T"""
        raise NotImplementedError(f"{type(self).__name__}.breakpoints must be implemented!")

    @abstractmethod
    def _evaluate(self, t: np.ndarray, nu: int = 0) -> np.ndarray:
        """
        Evaluate the ``nu``-th derivative of every basis function at the points ``t``, which have already been
        validated to lie inside of :attr:`.domain`.

        :param np.ndarray t: 1-D array of points
        :param int nu:       Derivative order
        :return np.ndarray: Matrix of shape ``(len(t), size)``
        """
        raise NotImplementedError(f"{type(self).__name__}._evaluate must be implemented!")

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError(f"{type(self).__name__}.to_dict must be implemented!")

    def check_points(self, t: ArrayLike) -> np.ndarray:
        """
        Return ``t`` as a 1-D float array, raising :class:`.DomainError` if any point falls outside ``[0, T]``.

        Points within a relative ``1e-12`` of the boundaries are clipped onto them, so grids built with
        ``np.linspace(0, T, n)`` never trip the check through rounding.
        """
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.ndim != 1:
            t = t.reshape(-1)
        slack = 1e-12 * self.domain_end
        bad = ~np.isfinite(t) | (t < -slack) | (t > self.domain_end + slack)
        if np.any(bad):
            raise DomainError(
                f'{int(np.sum(bad))} point(s) outside of the basis domain [0, {self.domain_end!r}], '
                f'first offender: {t[bad][0]!r}'
            )
        return np.clip(t, 0.0, self.domain_end)

    def evaluate(self, t: ArrayLike, nu: int = 0) -> np.ndarray:
        """
        Evaluate all basis functions (or their ``nu``-th derivatives) at each point of ``t``.

        :param t:       A point or 1-D array of points inside ``[0, T]``
        :param int nu:  Derivative order (default 0)
        :raises DomainError: When a point lies outside of ``[0, T]``
        :return np.ndarray: Matrix of shape ``(len(t), size)``
        """
        return self._evaluate(self.check_points(t), nu=int(nu))

    def same_as(self, other: 'BaseBasis') -> bool:
        """True if ``other`` describes exactly the same family of functions"""
        return isinstance(other, BaseBasis) and self.to_dict() == other.to_dict()

    def same_domain(self, other: 'BaseBasis') -> bool:
        return bool(np.isclose(self.domain_end, other.domain_end, rtol=1e-12, atol=0.0))

    def __eq__(self, other):
        return self.same_as(other)

    def __hash__(self):
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def __repr__(self):
        return f'<{type(self).__name__} size={self.size} degree={self.degree} T={self.domain_end!r}>'
