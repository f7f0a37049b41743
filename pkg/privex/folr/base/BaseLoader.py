"""

Copyright::

    +===================================================+
    |                 © 2019 Privex Inc.                |
    |               https://www.privex.io               |
    +===================================================+
    |                                                   |
    |        Python Functional Ordinal Regression       |
    |                                                   |
    +===================================================+

"""
import logging
from abc import ABC, abstractmethod
from typing import Generator, List, Optional

import pandas as pd

from privex.folr.base.exceptions import FormatError, ParseError

log = logging.getLogger(__name__)


class BaseLoader(ABC):
    """
    BaseLoader - Base class for the CSV readers of :py:mod:`privex.folr.persist`

    A loader reads one UTF-8, comma separated file with a header row. Loaders must:

    - list the header they expect in :attr:`.columns`
    - implement :meth:`.clean_rows`, a generator turning the raw frame loaded by :meth:`.load` into domain objects

    Usage::

        >>> with CurveLoader('curves.csv') as loader:
        ...     curves = list(loader.clean_rows())

    Line numbers in errors are 1-based file lines, the header being line 1.
    """

    columns: List[str] = []
    """Expected header, in order"""

    frame: Optional[pd.DataFrame]

    def __init__(self, path, *args, **kwargs):
        self.path = str(path)
        self.frame = None

    def load(self) -> pd.DataFrame:
        """
        Read and check the header of :attr:`.path`. Values are kept as text until :meth:`.clean_rows` converts them,
        so the conversion errors can name their line and column.

        :raises ParseError:  The file cannot be read as CSV
        :raises FormatError: The header does not match :attr:`.columns`
        """
        try:
            frame = pd.read_csv(self.path, dtype=str, keep_default_na=False, encoding='utf-8')
        except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
            raise ParseError(f'{self.path}: not a valid CSV file ({e})')
        header = [str(c).strip() for c in frame.columns]
        self.check_header(header)
        frame.columns = header
        self.frame = frame
        log.debug('Loaded %d rows from %s', len(frame), self.path)
        return frame

    def check_header(self, header: List[str]):
        if header != list(self.columns):
            raise FormatError(f'{self.path}: expected header {",".join(self.columns)}, got {",".join(header)}', line=1)

    def cell(self, row: int, column: str, cast=float):
        """Convert one cell, raising :class:`.ParseError` with line / field context"""
        raw = self.frame[column].iat[row]
        try:
            return cast(raw)
        except (TypeError, ValueError):
            raise ParseError(f'{self.path}: invalid {column} {raw!r}', line=row + 2, field=column)

    def column(self, column: str, cast=float) -> list:
        return [self.cell(i, column, cast) for i in range(len(self.frame))]

    @abstractmethod
    def clean_rows(self) -> Generator:
        """
        Generator over the domain objects held in the file. Must call :meth:`.load` first if :attr:`.frame` is
        ``None``.
        """
        raise NotImplementedError(f"{type(self).__name__}.clean_rows must be implemented!")

    def __enter__(self):
        self.load()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.frame = None
