"""Frozen 10-class reference confusion matrix and its expected metrics.

The expected per-class and overall values below act as a regression table:
each was cross-checked by hand from the counts (TP/FP/FN/TN per class) at
3-decimal precision.
"""

import numpy as np

REFERENCE_CLASSES = list(range(10))

REFERENCE_COUNTS = np.array([
    [591, 1, 0, 0, 0, 1, 2, 1, 2, 2],
    [0, 584, 4, 1, 2, 1, 4, 3, 0, 1],
    [2, 7, 568, 4, 3, 0, 1, 6, 6, 3],
    [0, 1, 8, 560, 0, 16, 2, 4, 7, 2],
    [0, 1, 2, 0, 584, 0, 4, 2, 0, 7],
    [1, 3, 0, 17, 0, 563, 7, 0, 4, 5],
    [2, 5, 3, 2, 3, 4, 578, 0, 3, 0],
    [0, 6, 6, 3, 7, 0, 0, 564, 2, 12],
    [2, 2, 5, 7, 3, 4, 2, 4, 559, 12],
    [1, 4, 1, 5, 16, 8, 1, 8, 6, 550],
], dtype=np.int64)

# class: (TPR, FPR, precision, recall, F, MCC, AUC)
EXPECTED_PER_CLASS = {
    0: (0.985, 0.001, 0.987, 0.985, 0.986, 0.984, 0.992),
    1: (0.973, 0.006, 0.951, 0.973, 0.962, 0.958, 0.984),
    2: (0.947, 0.005, 0.951, 0.947, 0.949, 0.943, 0.971),
    3: (0.933, 0.007, 0.935, 0.933, 0.934, 0.927, 0.963),
    4: (0.973, 0.006, 0.945, 0.973, 0.959, 0.954, 0.984),
    5: (0.938, 0.006, 0.943, 0.938, 0.941, 0.934, 0.966),
    6: (0.963, 0.004, 0.962, 0.963, 0.963, 0.958, 0.980),
    7: (0.940, 0.005, 0.953, 0.940, 0.946, 0.940, 0.967),
    8: (0.932, 0.006, 0.949, 0.932, 0.940, 0.934, 0.963),
    9: (0.917, 0.008, 0.926, 0.917, 0.921, 0.913, 0.954),
}

EXPECTED_OVERALL = {
    "accuracy": 0.9502,
    "kappa": 0.9446,
    "mae": 0.01,
    "rmse": 0.0998,
}
