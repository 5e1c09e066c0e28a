"""Total-scatter PCA: scatter assembly, eigendecomposition, basis truncation, projection.

The image vectors are huge (n = 18200 for the 140x130 crop) while the sample
count l is small, so training normally goes through the l-by-l Gram matrix of
the weighted, centered samples; the direct n-by-n route is kept for small
problems and cross-checks.
"""

from dataclasses import dataclass, field

import numpy as np

RANK_CUTOFF = 1e-10  # eigenvalues below this fraction of the largest count as zero rank


@dataclass
class ClipData:
    """One recorded clip: ordered normalized image vectors plus identity."""

    actor: str
    activity: str
    source_id: str
    vectors: np.ndarray  # (frames, n)

    def __post_init__(self):
        self.vectors = np.atleast_2d(np.asarray(self.vectors, dtype=np.float64))


@dataclass
class TrainingSet:
    """Labeled sample matrix with per-class priors."""

    class_names: list[str]
    labels: np.ndarray   # (l,) int class indices
    samples: np.ndarray  # (l, n)
    priors: np.ndarray | None = None
    clips: list[ClipData] = field(default_factory=list)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.samples.ndim != 2:
            raise ValueError("samples must be a 2-D (l, n) array")
        if self.labels.shape[0] != self.samples.shape[0]:
            raise ValueError("labels/samples length mismatch")
        p = len(self.class_names)
        if self.priors is None:
            self.priors = np.full(p, 1.0 / p)
        else:
            self.priors = np.asarray(self.priors, dtype=np.float64)
            if abs(self.priors.sum() - 1.0) > 1e-9:
                raise ValueError(f"priors sum to {self.priors.sum()}, expected 1")

    @property
    def l(self) -> int:
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    @property
    def p(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        counts = np.bincount(self.labels, minlength=self.p)
        if (counts == 0).any():
            missing = [self.class_names[i] for i in np.nonzero(counts == 0)[0]]
            raise ValueError(f"classes with no samples: {missing}")
        return counts

    def sample_weights(self) -> np.ndarray:
        """Per-sample weight c_i / q_i."""
        counts = self.class_counts()
        return self.priors[self.labels] / counts[self.labels]

    @classmethod
    def from_clips(cls, clips: list[ClipData], priors=None) -> "TrainingSet":
        class_names = sorted({c.activity for c in clips})
        index = {name: i for i, name in enumerate(class_names)}
        samples = np.concatenate([c.vectors for c in clips], axis=0)
        labels = np.concatenate(
            [np.full(len(c.vectors), index[c.activity], dtype=np.int64) for c in clips]
        )
        return cls(class_names=class_names, labels=labels, samples=samples,
                   priors=priors, clips=list(clips))


@dataclass
class ScatterMatrix:
    matrix: np.ndarray  # (n, n)
    mean: np.ndarray    # (n,) weighted global mean


@dataclass
class EigenSystem:
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # (n, k), orthonormal columns


@dataclass
class SubspaceModel:
    d: int
    mean: np.ndarray           # (n,)
    basis: np.ndarray          # (n, d)
    eigenvalues: np.ndarray    # (d,)
    class_names: list[str]
    gallery: list = field(default_factory=list)  # FeatureSequence templates

    @property
    def n(self) -> int:
        return self.mean.shape[0]


def weighted_mean(ts: TrainingSet) -> np.ndarray:
    return ts.sample_weights() @ ts.samples


def compute_scatter(ts: TrainingSet) -> ScatterMatrix:
    """Prior-weighted total scatter about the weighted global mean."""
    if ts.l < 2:
        raise ValueError("need at least 2 samples")
    mean = weighted_mean(ts)
    centered = ts.samples - mean
    weighted = centered * ts.sample_weights()[:, None]
    s = centered.T @ weighted
    s = (s + s.T) / 2.0  # kill accumulation asymmetry
    return ScatterMatrix(matrix=s, mean=mean)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude component positive (first on ties)."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        if out[idx, k] < 0:
            out[:, k] = -out[:, k]
    return out


def eigendecompose(s: ScatterMatrix) -> EigenSystem:
    m = s.matrix
    scale = np.abs(m).max()
    if scale > 0 and np.abs(m - m.T).max() > 1e-10 * scale:
        raise ValueError("scatter matrix is not symmetric within tolerance")
    vals, vecs = np.linalg.eigh((m + m.T) / 2.0)
    order = np.argsort(vals)[::-1]
    return EigenSystem(eigenvalues=vals[order], eigenvectors=_fix_signs(vecs[:, order]))


def snapshot_eigensystem(ts: TrainingSet) -> EigenSystem:
    """Eigenpairs of the scatter via the l-by-l Gram matrix of weighted samples."""
    mean = weighted_mean(ts)
    a = ((ts.samples - mean) * np.sqrt(ts.sample_weights())[:, None]).T  # (n, l)
    gram = a.T @ a
    gram = (gram + gram.T) / 2.0
    vals, vecs = np.linalg.eigh(gram)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    cutoff = RANK_CUTOFF * max(vals[0], 0.0) if vals.size else 0.0
    keep = vals > cutoff
    mapped = a @ vecs[:, keep] / np.sqrt(vals[keep])
    return EigenSystem(eigenvalues=vals, eigenvectors=_fix_signs(mapped))


def select_basis(es: EigenSystem, d: int) -> np.ndarray:
    available = es.eigenvectors.shape[1]
    if d < 1 or d > available:
        raise ValueError(f"d={d} out of range 1..{available}")
    cutoff = RANK_CUTOFF * max(es.eigenvalues[0], 0.0)
    rank = int(np.sum(es.eigenvalues[:available] > cutoff))
    if d > rank:
        raise ValueError(
            f"d={d} exceeds the scatter rank {rank}; add training samples or lower d"
        )
    return es.eigenvectors[:, :d]


def project(x: np.ndarray, model: SubspaceModel) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.n:
        raise ValueError(f"vector length {x.shape[0]} does not match model n={model.n}")
    return model.basis.T @ (x - model.mean)


def project_many(xs: np.ndarray, model: SubspaceModel) -> np.ndarray:
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if xs.shape[1] != model.n:
        raise ValueError(f"vector length {xs.shape[1]} does not match model n={model.n}")
    return (xs - model.mean) @ model.basis


def train(ts: TrainingSet, d: int, route: str = "auto") -> SubspaceModel:
    """Fit the subspace and project every training clip into gallery templates."""
    from .matching import FeatureSequence

    if route == "auto":
        route = "gram" if ts.n > ts.l else "direct"
    if route == "gram":
        es = snapshot_eigensystem(ts)
        mean = weighted_mean(ts)
    elif route == "direct":
        scatter = compute_scatter(ts)
        es = eigendecompose(scatter)
        mean = scatter.mean
    else:
        raise ValueError(f"unknown route {route!r}")
    basis = select_basis(es, d)
    model = SubspaceModel(d=d, mean=mean, basis=basis,
                          eigenvalues=es.eigenvalues[:d].copy(),
                          class_names=list(ts.class_names))
    for clip in ts.clips:
        model.gallery.append(FeatureSequence(
            frames=project_many(clip.vectors, model),
            label=clip.activity,
            source_id=clip.source_id,
        ))
    return model
