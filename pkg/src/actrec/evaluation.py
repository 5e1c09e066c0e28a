"""Probe windowing, actor-disjoint partitioning, and confusion-matrix reporting."""

from dataclasses import dataclass, field

import numpy as np

from .matching import FeatureSequence, classify_1nn
from .subspace import ClipData, SubspaceModel, TrainingSet, project_many, train

# longest tolerated run of empty-silhouette frames inside a window
MAX_EMPTY_RUN = 10


def window_spans(n_frames: int, fps: float, window_sec: float) -> list[tuple[int, int]]:
    """Non-overlapping [start, stop) spans; trailing partial kept if >= half length."""
    if n_frames < 1:
        raise ValueError("empty frame stream")
    if fps <= 0 or window_sec <= 0:
        raise ValueError("fps and window_sec must be positive")
    m = int(round(fps * window_sec))
    if m < 1:
        raise ValueError("window shorter than one frame")
    spans = [(s, s + m) for s in range(0, n_frames - m + 1, m)]
    rem = n_frames - len(spans) * m
    if rem * 2 >= m and rem > 0:
        spans.append((len(spans) * m, n_frames))
    return spans


def majority_label(labels: list[str]) -> str:
    """Most frequent label; ties go to the one appearing first."""
    order: list[str] = []
    counts: dict[str, int] = {}
    for lab in labels:
        if lab not in counts:
            counts[lab] = 0
            order.append(lab)
        counts[lab] += 1
    return max(order, key=lambda lab: (counts[lab], -order.index(lab)))


def window_probes(features: list, fps: float, window_sec: float,
                  labels: list[str] | None = None) -> list[FeatureSequence | None]:
    """Cut a per-frame feature stream into probe windows.

    A feature entry of None marks a frame with no detected subject.  A window
    collapses to None ("no subject") when it has no usable frames at all or
    contains a run of more than MAX_EMPTY_RUN consecutive empty frames.
    """
    probes: list[FeatureSequence | None] = []
    for start, stop in window_spans(len(features), fps, window_sec):
        chunk = features[start:stop]
        present = [f for f in chunk if f is not None]
        run = longest = 0
        for f in chunk:
            run = run + 1 if f is None else 0
            longest = max(longest, run)
        if not present or longest > MAX_EMPTY_RUN:
            probes.append(None)
            continue
        label = majority_label(labels[start:stop]) if labels is not None else None
        probes.append(FeatureSequence(frames=np.stack(present), label=label,
                                      source_id=f"window[{start}:{stop}]"))
    return probes


@dataclass
class ConfusionMatrix:
    class_names: list[str]
    counts: np.ndarray  # (p, p) int, rows = true class, cols = predicted

    def rates(self) -> np.ndarray:
        """Row-normalized percentages; all-zero rows stay zero."""
        totals = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(totals > 0, 100.0 * self.counts / totals, 0.0)
        return r

    def overall_rate(self) -> float:
        total = self.counts.sum()
        if total == 0:
            return 0.0
        return float(100.0 * np.trace(self.counts) / total)

    def per_class_rates(self) -> np.ndarray:
        return np.diagonal(self.rates()).copy()


@dataclass
class EvaluationReport:
    confusion: ConfusionMatrix
    overall_rate: float
    per_class_rates: np.ndarray
    config: dict = field(default_factory=dict)


def evaluate(probes: list[FeatureSequence], model: SubspaceModel,
             config: dict | None = None) -> EvaluationReport:
    """Classify every labeled probe window and accumulate the confusion matrix."""
    if not probes:
        raise ValueError("no probes to evaluate")
    index = {name: i for i, name in enumerate(model.class_names)}
    p = len(model.class_names)
    counts = np.zeros((p, p), dtype=np.int64)
    for probe in probes:
        if probe.label not in index:
            raise ValueError(f"unknown ground-truth label {probe.label!r}")
        result = classify_1nn(probe, model.gallery)
        counts[index[probe.label], index[result.predicted]] += 1
    cm = ConfusionMatrix(class_names=list(model.class_names), counts=counts)
    return EvaluationReport(confusion=cm, overall_rate=cm.overall_rate(),
                            per_class_rates=cm.per_class_rates(),
                            config=dict(config or {}))


def partition_by_actor(clips: list[ClipData], train_actors: set[str]) -> tuple[list[ClipData], list[ClipData]]:
    """Actor-disjoint split: clips of train_actors train, everything else tests."""
    actors = {c.actor for c in clips}
    train_actors = set(train_actors)
    unknown = train_actors - actors
    if unknown:
        raise ValueError(f"train actors not in dataset: {sorted(unknown)}")
    if not train_actors:
        raise ValueError("train_actors must be non-empty")
    if train_actors == actors:
        raise ValueError("train_actors covers every actor, leaving no test data")
    train = [c for c in clips if c.actor in train_actors]
    test = [c for c in clips if c.actor not in train_actors]
    return train, test


def feature_sweep(train_clips: list[ClipData], test_clips: list[ClipData],
                  d_values: list[int], fps: float, window_sec: float) -> list[EvaluationReport]:
    """One full train + evaluate cycle per feature count, ordered by input."""
    reports = []
    ts = TrainingSet.from_clips(train_clips)
    for d in d_values:
        model = train(ts, d)
        probes: list[FeatureSequence] = []
        for clip in test_clips:
            feats = list(project_many(clip.vectors, model))
            wins = window_probes(feats, fps, window_sec,
                                 labels=[clip.activity] * len(clip.vectors))
            probes.extend(w for w in wins if w is not None)
        reports.append(evaluate(probes, model, config={"d": d, "fps": fps,
                                                       "window_sec": window_sec}))
    return reports


def format_report(report: EvaluationReport) -> str:
    """Human-readable confusion table mirroring the row/column convention."""
    names = report.confusion.class_names
    rates = report.confusion.rates()
    width = max(12, max(len(n) for n in names) + 2)
    lines = ["".ljust(width) + "".join(n.ljust(width) for n in names)]
    for i, name in enumerate(names):
        lines.append(name.ljust(width) + "".join(f"{rates[i, j]:.2f}".ljust(width)
                                                 for j in range(len(names))))
    lines.append("")
    lines.append(f"overall recognition rate: {report.overall_rate:.2f}%")
    for key, value in sorted(report.config.items()):
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def serialize_report(report: EvaluationReport) -> str:
    """Line-oriented, tab-separated structured encoding of a report."""
    lines = [f"overall\t{report.overall_rate!r}"]
    for key, value in sorted(report.config.items()):
        lines.append(f"config\t{key}\t{value}")
    names = report.confusion.class_names
    lines.append("classes\t" + "\t".join(names))
    for i, name in enumerate(names):
        row = "\t".join(str(int(v)) for v in report.confusion.counts[i])
        lines.append(f"counts\t{name}\t{row}")
    rates = report.confusion.rates()
    for i, name in enumerate(names):
        row = "\t".join(repr(float(v)) for v in rates[i])
        lines.append(f"rates\t{name}\t{row}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> EvaluationReport:
    overall = 0.0
    config: dict = {}
    names: list[str] = []
    counts_rows: dict[str, list[int]] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if parts[0] == "overall":
            overall = float(parts[1])
        elif parts[0] == "config":
            config[parts[1]] = parts[2]
        elif parts[0] == "classes":
            names = parts[1:]
        elif parts[0] == "counts":
            counts_rows[parts[1]] = [int(v) for v in parts[2:]]
    counts = np.array([counts_rows[n] for n in names], dtype=np.int64)
    cm = ConfusionMatrix(class_names=names, counts=counts)
    return EvaluationReport(confusion=cm, overall_rate=overall,
                            per_class_rates=cm.per_class_rates(), config=config)
