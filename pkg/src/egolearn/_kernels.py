"""Hot-path helpers shared by the tree learners.

Both growers spend their time building per-node (level x class) count
tables and routing rows through fitted trees; these are batched into a
handful of numpy calls.
"""

from __future__ import annotations

import numpy as np


def node_tables(
    x_matrix: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    predictor_idx: np.ndarray,
    max_levels: int,
    n_classes: int,
) -> np.ndarray:
    """Count tables for several predictors at one node in one pass.

    Returns an array of shape (len(predictor_idx), max_levels, n_classes)
    where entry (k, l, j) counts rows with predictor k at level l and
    response class j.
    """
    sub = x_matrix[np.ix_(predictor_idx, rows)]  # (k, m)
    span = max_levels * n_classes
    flat = sub * n_classes + y[rows]
    flat += (np.arange(len(predictor_idx)) * span)[:, None]
    counts = np.bincount(flat.ravel(), minlength=len(predictor_idx) * span)
    return counts.reshape(len(predictor_idx), max_levels, n_classes)


class CompiledTree:
    """Flat-array form of a fitted tree, for vectorized row routing.

    ``preds[i]`` is the predictor (registry index) tested at node i, or -1
    for leaves. ``lookup[i]`` maps a level code to the child node id;
    unseen levels already point at the recorded fallback child.
    """

    def __init__(self, n_classes: int):
        self.preds: list[int] = []
        self.lookups: list[np.ndarray | None] = []
        self.counts: list[np.ndarray] = []
        self.n_classes = n_classes
        self._preds_arr: np.ndarray | None = None
        self._lookup_arr: np.ndarray | None = None
        self._props: np.ndarray | None = None
        self._majority: np.ndarray | None = None

    def add_node(self, class_counts: np.ndarray) -> int:
        """Reserve the next node id (preorder); split data is set later."""
        node_id = len(self.preds)
        self.preds.append(-1)
        self.lookups.append(None)
        self.counts.append(np.asarray(class_counts, dtype=np.float64))
        return node_id

    def set_split(self, node_id: int, predictor_idx: int, lookup: np.ndarray) -> None:
        self.preds[node_id] = predictor_idx
        self.lookups[node_id] = lookup.astype(np.int32)

    def _finalize(self) -> None:
        if self._preds_arr is not None:
            return
        n = len(self.preds)
        max_levels = max((len(l) for l in self.lookups if l is not None), default=1)
        self._preds_arr = np.array(self.preds, dtype=np.int32)
        self._lookup_arr = np.zeros((n, max_levels), dtype=np.int32)
        for i, lut in enumerate(self.lookups):
            if lut is not None:
                self._lookup_arr[i, : len(lut)] = lut
        counts = np.vstack(self.counts)
        totals = counts.sum(axis=1, keepdims=True)
        safe = np.where(totals > 0, totals, 1.0)
        self._props = counts / safe
        self._majority = np.argmax(counts, axis=1).astype(np.int32)

    def route(self, x_matrix: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Leaf node id reached by each of ``rows``."""
        self._finalize()
        pos = np.zeros(rows.size, dtype=np.int32)
        preds = self._preds_arr
        lookup = self._lookup_arr
        pending = np.flatnonzero(preds[pos] >= 0)
        while pending.size:
            at = pos[pending]
            codes = x_matrix[preds[at], rows[pending]]
            pos[pending] = lookup[at, codes]
            pending = pending[preds[pos[pending]] >= 0]
        return pos

    def proportions(self, leaf_ids: np.ndarray) -> np.ndarray:
        self._finalize()
        return self._props[leaf_ids]

    def majority(self, leaf_ids: np.ndarray) -> np.ndarray:
        self._finalize()
        return self._majority[leaf_ids]
