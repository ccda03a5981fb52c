"""Reweighing: per-(label, group) weights making Y independent of Z in the
weighted empirical distribution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class ReweighTable:
    """W[y][z] = P(y) * P(z) / P(y, z), from empirical counts."""

    weights: tuple[tuple[float, float], tuple[float, float]]

    def weight(self, y: int, z: int) -> float:
        return self.weights[y][z]


def reweigh(labels: np.ndarray, group: np.ndarray) -> tuple[ReweighTable, np.ndarray]:
    labels = np.asarray(labels, dtype=np.int64)
    group = np.asarray(group, dtype=np.int64)
    if labels.shape != group.shape:
        raise DataError("labels and group must have equal length")
    n = len(labels)
    table = [[0.0, 0.0], [0.0, 0.0]]
    for y in (0, 1):
        for z in (0, 1):
            n_yz = int(np.sum((labels == y) & (group == z)))
            if n_yz == 0:
                raise DataError(f"reweighing undefined: empty cell (y={y}, z={z})")
            n_y = int(np.sum(labels == y))
            n_z = int(np.sum(group == z))
            table[y][z] = (n_y * n_z) / (n * n_yz)
    rw = ReweighTable((tuple(table[0]), tuple(table[1])))
    w = np.array([rw.weight(int(y), int(z)) for y, z in zip(labels, group)])
    return rw, w
