"""Appearance-based activity recognition: silhouette segmentation,
subspace features, and DTW nearest-neighbor sequence classification."""

__version__ = "0.1.0"
