"""DTW alignment between feature sequences and 1-NN template classification."""

from dataclasses import dataclass

import numpy as np


@dataclass
class FeatureSequence:
    """Time-ordered projected feature vectors for one clip or probe window."""

    frames: np.ndarray  # (T, d)
    label: str | None = None
    source_id: str = ""

    def __post_init__(self):
        self.frames = np.atleast_2d(np.asarray(self.frames, dtype=np.float64))
        if self.frames.shape[0] < 1:
            raise ValueError("feature sequence must have at least one frame")

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def d(self) -> int:
        return self.frames.shape[1]


@dataclass
class MatchResult:
    predicted: str
    best_distance: float
    per_template: list[tuple[str, str, float]]  # (source_id, label, distance)


def euclidean_distance(y1: np.ndarray, y2: np.ndarray) -> float:
    y1 = np.asarray(y1, dtype=np.float64).ravel()
    y2 = np.asarray(y2, dtype=np.float64).ravel()
    if y1.shape != y2.shape:
        raise ValueError(f"dimension mismatch: {y1.shape} vs {y2.shape}")
    return float(np.sqrt(np.sum((y1 - y2) ** 2)))


def dtw_distance(a: FeatureSequence, b: FeatureSequence) -> float:
    """Accumulated warping cost over the full DP table, normalized by |a|+|b|.

    Step pattern is the symmetric {(1,0),(0,1),(1,1)} set with Euclidean
    frame cost; the normalizer makes sequences of different lengths comparable.
    """
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")
    ta, tb = len(a), len(b)
    # pairwise Euclidean cost matrix
    diff = a.frames[:, None, :] - b.frames[None, :, :]
    cost = np.sqrt(np.sum(diff * diff, axis=2))

    acc = np.full((ta + 1, tb + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, ta + 1):
        acc[i, 1:] = cost[i - 1]
        for j in range(1, tb + 1):
            acc[i, j] += min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1])
    return float(acc[ta, tb] / (ta + tb))


def classify_1nn(probe: FeatureSequence, gallery: list[FeatureSequence]) -> MatchResult:
    """Assign the class of the DTW-nearest gallery template, first wins ties."""
    if not gallery:
        raise ValueError("gallery is empty")
    per_template = []
    best_idx = 0
    best = np.inf
    for idx, template in enumerate(gallery):
        dist = dtw_distance(probe, template)
        per_template.append((template.source_id, template.label, dist))
        if dist < best:
            best = dist
            best_idx = idx
    return MatchResult(predicted=gallery[best_idx].label,
                       best_distance=float(best),
                       per_template=per_template)
