"""CSV/JSON serialization. All file writes are atomic (temp file + rename)."""

import csv
import json
import os
import tempfile

import numpy as np


def _atomic_write(path, write_fn):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    _atomic_write(path, lambda fh: fh.write(json.dumps(obj, indent=2) + "\n"))


def write_csv(path, header, rows):
    def _write(fh):
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)

    _atomic_write(path, _write)


def read_regression_csv(path):
    """Load (X, y) from a CSV with required header y,x1,...,xp."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:1]] != ["y"]:
            raise ValueError(f"{path}: expected header 'y,x1,...,xp'")
        data = np.array([[float(v) for v in row] for row in reader if row])
    if data.ndim != 2 or data.shape[1] < 2:
        raise ValueError(f"{path}: need at least one predictor column")
    return data[:, 1:], data[:, 0]


def read_labeled_csv(path):
    """Load (X, y) from a CSV with required header label,f1,...,fp; integer labels."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[0].strip() != "label":
            raise ValueError(f"{path}: expected header 'label,f1,...,fp'")
        rows = [row for row in reader if row]
    y = np.array([int(row[0]) for row in rows], dtype=np.int64)
    X = np.array([[float(v) for v in row[1:]] for row in rows])
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError(f"{path}: need at least one feature column")
    return X, y
