"""Sample-record input and CSV output."""
import csv
import io
import math
from typing import Iterable, List, Sequence

import numpy as np

from .errors import DataError

CAMPAIGN_HEADER = ['estimator', 'K', 'N', 'trials', 'mean', 'variance', 'failures']


def sig6(value: float) -> str:
    """Six significant digits, the precision of every CSV column."""
    return format(value, '.6g')


def parse_samples(text: str, source: str = '<inline>') -> np.ndarray:
    """One real per line; blank lines and '#' comments are ignored."""
    values = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError:
            raise DataError(f"{source}:{lineno}: not a number: {raw.strip()!r}") from None
        if not math.isfinite(value):
            raise DataError(f"{source}:{lineno}: non-finite value {raw.strip()!r}")
        values.append(value)
    if not values:
        raise DataError(f"{source}: no samples found")
    return np.array(values, dtype=float)


def parse_inline(record: str) -> np.ndarray:
    """Comma- or whitespace-separated samples given on the command line."""
    return parse_samples('\n'.join(record.replace(',', ' ').split()), source='--record')


def read_samples(path: str) -> np.ndarray:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"Cannot read sample file {path}: {e}") from None
    return parse_samples(text, source=path)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([sig6(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]):
    content = render_csv(header, rows)
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(content)
    except OSError as e:
        raise DataError(f"Cannot write {path}: {e}") from None


def campaign_rows(stats) -> List[list]:
    return [
        [s.label, s.record_size, s.n_bins, s.trials, float(s.mean), float(s.variance), s.failures]
        for s in stats
    ]


def trace_rows(result) -> List[list]:
    return [[entry.iteration, *(float(v) for v in entry.xi), float(entry.value)] for entry in result.trace]
