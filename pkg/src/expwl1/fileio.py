"""Plain-text vector and index-set files (one value per line)."""

from __future__ import annotations

import numpy as np


def read_vector(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([float(line) for line in fh if line.strip()])


def write_vector(x, path):
    with open(path, "w") as fh:
        for v in np.asarray(x, dtype=np.float64):
            fh.write(repr(float(v)) + "\n")


def read_index_set(path):
    with open(path) as fh:
        return sorted(int(line) for line in fh if line.strip())
