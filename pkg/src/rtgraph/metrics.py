"""Small shared evaluation helpers."""

from __future__ import annotations

import numpy as np


def f1_binary(y_true, y_pred) -> float:
    """F1 of the positive class; 0.0 when precision + recall is degenerate."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0
