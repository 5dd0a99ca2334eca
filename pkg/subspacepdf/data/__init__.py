import json
import os


def load_reference_tables():
    """Load the published reference statistics from reference_tables.json."""
    path = os.path.join(os.path.dirname(__file__), 'reference_tables.json')
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def reference_cell(tables, estimator, record_size):
    """(variance, mean) for an estimator and record size, or None when not tabulated."""
    cell = tables.get('estimators', {}).get(estimator, {}).get(str(record_size))
    if cell is None:
        return None
    variance, mean = cell
    return float(variance), float(mean)
