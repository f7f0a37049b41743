import functools
import logging

import numpy as np
from numpy.linalg import LinAlgError

DEF_RETRY_MSG = "Factorization failed in '%s', retrying with diagonal jitter %.3g (%d attempts left)."
DEF_FAIL_MSG = "Giving up on '%s' after adding diagonal jitter %d times."

log = logging.getLogger(__name__)


def retry_with_jitter(max_retries: int = 6, jitter: float = 1e-10, growth: float = 100.0, relative: bool = True,
                      **retry_conf):
    """
    Decorates a function whose first argument is a square matrix, wraps it in a try/catch block, and when the
    function raises :class:`numpy.linalg.LinAlgError` (e.g. a Cholesky factorization of a numerically singular
    matrix), re-runs it with ``jitter * I`` added to the matrix. The jitter is multiplied by ``growth`` after every
    failed attempt, up to ``max_retries`` times. With ``relative`` the jitter is scaled by the mean absolute diagonal
    entry of the matrix.

    The wrapped function returns a tuple ``(result, jitter_used)`` so callers can report whether the matrix had to be
    regularised. ``jitter_used`` is ``0.0`` when the first attempt succeeded.

    Usage:

        >>> @retry_with_jitter(3, 1e-10)
        ... def solve_spd(matrix, rhs):
        ...     return cho_solve(cho_factor(matrix), rhs)
        >>> x, jitter = solve_spd(A, b)

    If it still fails after ``max_retries`` retries, the failure is logged with ``fail_msg`` and re-raised.

    :param int max_retries:  Maximum jittered attempts before giving up
    :param float jitter:     Diagonal jitter used on the first retry
    :param float growth:     Factor the jitter grows by between retries
    :param bool relative:    Scale the jitter by the mean absolute diagonal of the matrix
    :param retry_conf:       Less frequently used arguments, pass in as keyword args:

    - (str) retry_msg: Override the log message used for retry attempts.
    - (str) fail_msg:  Override the log message used once all retry attempts are exhausted.

    """
    retry_msg = retry_conf.get('retry_msg', DEF_RETRY_MSG)
    fail_msg = retry_conf.get('fail_msg', DEF_FAIL_MSG)

    def _decorator(f):
        @functools.wraps(f)
        def wrapper(matrix, *args, **kwargs):
            matrix = np.asarray(matrix, dtype=float)
            try:
                return f(matrix, *args, **kwargs), 0.0
            except LinAlgError:
                pass
            eye = np.eye(matrix.shape[0])
            scale = float(np.mean(np.abs(np.diag(matrix)))) if relative and matrix.size else 0.0
            j = float(jitter) * (scale if scale > 0 and np.isfinite(scale) else 1.0)
            for attempt in range(max_retries):
                log.warning(retry_msg, f.__name__, j, max_retries - attempt - 1)
                try:
                    return f(matrix + j * eye, *args, **kwargs), j
                except LinAlgError as e:
                    if attempt == max_retries - 1:
                        log.error(fail_msg, f.__name__, max_retries)
                        raise e
                    j *= growth
        return wrapper
    return _decorator
