import logging
from typing import Any, Dict, Sequence

import numpy as np
from scipy.special import poch

from privex.folr.base.BaseBasis import BaseBasis
from privex.folr.base.exceptions import ValidationError

log = logging.getLogger(__name__)


class MonomialBasis(BaseBasis):
    """
    Monomials ``t^d`` for a strictly increasing list of positive degrees.

    There is no constant term: a constant in the coefficient function would be absorbed by the thresholds, making
    the model unidentifiable. ``MonomialBasis([1, 2])`` gives ``beta(t) = b_1 t + b_2 t^2``.
    """

    kind = 'monomial'

    def __init__(self, degrees: Sequence[int], domain_end: float = 1.0, **kwargs):
        super().__init__(domain_end=domain_end, **kwargs)
        degrees = [int(d) for d in degrees]
        if len(degrees) < 1:
            raise ValidationError('A monomial basis needs at least one degree')
        if degrees[0] < 1:
            raise ValidationError(f'Monomial degrees must be >= 1 (no constant term), got {degrees[0]}')
        if any(b <= a for a, b in zip(degrees, degrees[1:])):
            raise ValidationError(f'Monomial degrees must be strictly increasing, got {degrees}')
        self.degrees = tuple(degrees)

    @classmethod
    def of_size(cls, size: int, domain_end: float = 1.0) -> 'MonomialBasis':
        """``t, t^2, ..., t^size``"""
        return cls(degrees=range(1, int(size) + 1), domain_end=domain_end)

    @property
    def size(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return self.degrees[-1]

    @property
    def breakpoints(self) -> np.ndarray:
        return np.array([0.0, self.domain_end])

    def _evaluate(self, t: np.ndarray, nu: int = 0) -> np.ndarray:
        d = np.array(self.degrees)
        live = d >= nu
        out = np.zeros((len(t), len(d)))
        # d!/(d-nu)! t^(d-nu)
        out[:, live] = poch(d[live] - nu + 1, nu) * t[:, None] ** (d[live] - nu)
        return out

    def to_dict(self) -> Dict[str, Any]:
        return dict(kind=self.kind, degrees=list(self.degrees), domain_end=self.domain_end)
