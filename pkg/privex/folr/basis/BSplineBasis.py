import logging
from typing import Any, Dict, Sequence

import numpy as np
from scipy.interpolate import BSpline

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import ValidationError

log = logging.getLogger(__name__)


class BSplineBasis(BaseBasis):
    """
    Clamped B-spline basis of a given ``order`` (degree ``order - 1``) on ``[0, T]``.

    ``knots`` lists the breakpoints from ``0`` to ``T`` (interior knots may repeat, up to ``order`` times). The boundary
    knots are repeated ``order`` times internally, which gives ``len(knots) - 2 + order`` basis functions forming a
    partition of unity on ``[0, T]``.

    Uniformly spaced knots are the usual choice::

        >>> basis = BSplineBasis.uniform(size=16, order=4, domain_end=480.0)
        >>> basis.size
        16

    """

    kind = 'bspline'

    def __init__(self, order: int, knots: Sequence[float], domain_end: float = None, **kwargs):
        knots = np.array(knots, dtype=float).reshape(-1)
        if len(knots) < 2:
            raise ValidationError('A B-spline basis needs at least the two boundary knots 0 and T')
        domain_end = knots[-1] if domain_end is None else float(domain_end)
        super().__init__(domain_end=domain_end, **kwargs)
        order = int(order)
        if order < 1:
            raise ValidationError(f'B-spline order must be >= 1, got {order}')
        if knots[0] != 0.0 or knots[-1] != self.domain_end:
            raise ValidationError(
                f'Knots must start at 0 and end at T={self.domain_end!r}, got {knots[0]!r}..{knots[-1]!r}'
            )
        if np.any(np.diff(knots) < 0):
            raise ValidationError('Knots must be nondecreasing')
        if not np.all(np.isfinite(knots)):
            raise ValidationError('Knots must be finite')
        interior = knots[1:-1]
        if len(interior) and (np.any(interior <= 0) or np.any(interior >= self.domain_end)):
            raise ValidationError('Repeated boundary knots are implied, interior knots must lie strictly inside (0, T)')
        _, mult = np.unique(interior, return_counts=True)
        if len(mult) and mult.max() > order:
            raise ValidationError(f'Interior knot multiplicity {mult.max()} exceeds the order {order}')

        self.order = order
        self.knots = knots
        self.knots.setflags(write=False)
        self._full_knots = np.concatenate([np.zeros(order), interior, np.full(order, self.domain_end)])
        self._size = len(interior) + order
        # Vector valued spline with identity coefficients: component m is the m-th basis function.
        self._spline = BSpline(self._full_knots, np.eye(self._size), order - 1, extrapolate=False)

    @classmethod
    def uniform(cls, size: int, order: int = 4, domain_end: float = 1.0) -> 'BSplineBasis':
        """
        Build a basis of ``size`` functions with uniformly spaced breakpoints over ``[0, domain_end]``.

        :raises ValidationError: When ``size < order`` (at least one knot span is needed)
        """
        size, order = int(size), int(order)
        if order < 1:
            raise ValidationError(f'B-spline order must be >= 1, got {order}')
        spans = size - order + 1
        if spans < 1:
            raise ValidationError(f'A B-spline basis of order {order} needs size >= {order}, got {size}')
        return cls(order=order, knots=np.linspace(0.0, float(domain_end), spans + 1), domain_end=domain_end)

    @property
    def size(self) -> int:
        return self._size

    @property
    def degree(self) -> int:
        return self.order - 1

    @property
    def breakpoints(self) -> np.ndarray:
        return np.unique(self.knots)

    @property
    def full_knots(self) -> np.ndarray:
        """The clamped knot vector, boundary knots repeated ``order`` times"""
        return self._full_knots.copy()

    def support(self, m: int) -> tuple:
        """The interval ``[start, end]`` outside of which basis function ``m`` (0-based) vanishes"""
        return float(self._full_knots[m]), float(self._full_knots[m + self.order])

    def _evaluate(self, t: np.ndarray, nu: int = 0) -> np.ndarray:
        if nu > self.degree:
            return np.zeros((len(t), self.size))
        return np.asarray(self._spline(t, nu=nu)).reshape(len(t), self.size)

    def to_dict(self) -> Dict[str, Any]:
        return dict(
            kind=self.kind, order=self.order, knots=[float(k) for k in self.knots], domain_end=self.domain_end,
        )
