"""Binary response data in CSV files."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from factormix.apps.artifacts.exceptions import DataParseError
from factormix.apps.modeling.models import PatternTable

_HEADER_LINES = 1

logger = logging.getLogger(__name__)


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(
            path,
            header=None,
            dtype=str,
            keep_default_na=False,
            skipinitialspace=True,
            encoding='utf-8',
        )
    except FileNotFoundError as error:
        raise DataParseError(f'file {path} does not exist') from error
    except pd.errors.EmptyDataError as error:
        raise DataParseError('the file is empty') from error
    except pd.errors.ParserError as error:
        raise DataParseError(f'ragged row ({error})') from error
    except (OSError, UnicodeDecodeError) as error:
        raise DataParseError(str(error)) from error


def _check_cells(frame: pd.DataFrame) -> None:
    for position, column in enumerate(frame.columns):
        values = frame.iloc[:, position]
        missing = values.isna() | (values.astype(str).str.strip() == '')
        invalid = ~values.astype(str).str.strip().isin(('0', '1'))
        for mask, reason in (
            (missing, 'missing value'),
            (invalid, 'cell is not 0 or 1'),
        ):
            if mask.any():
                row = int(np.flatnonzero(mask.to_numpy())[0])
                raise DataParseError(
                    reason, row=row + _HEADER_LINES + 1, column=str(column),
                )


def load_csv(path: Path | str) -> PatternTable:
    """Read a header-labelled 0/1 CSV file into a pattern table.

    Items answered identically by every observation are logged as a
    warning; they stay in the table and show in
    :meth:`PatternTable.constant_items`.

    Args:
        path: CSV file with a header row of item names.

    Returns:
        Rows collapsed to distinct patterns.

    Raises:
        DataParseError: On a missing, empty, ragged or non-binary file.
    """
    raw = _read_frame(Path(path))
    if raw.shape[1] == 0:
        raise DataParseError('no item columns')
    # The header is read as a row so longer data rows are rejected.
    frame = raw.iloc[_HEADER_LINES:].reset_index(drop=True)
    frame.columns = [str(name).strip() for name in raw.iloc[0]]
    if frame.empty:
        raise DataParseError('no data rows')
    _check_cells(frame)
    rows = frame.apply(lambda column: column.str.strip()).astype(np.int64)
    table = PatternTable.from_rows(
        rows.to_numpy(), tuple(str(name) for name in frame.columns),
    )
    for item in table.constant_items():
        logger.warning(
            'Item %s has the same answer in every row',
            table.item_names[item],
        )
    return table


def write_csv(data: PatternTable, path: Path | str) -> None:
    """Write the observations of ``data`` as a 0/1 CSV file."""
    frame = pd.DataFrame(data.expand_rows(), columns=list(data.item_names))
    frame.to_csv(path, index=False, lineterminator='\n')
