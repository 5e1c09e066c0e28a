"""High-level orchestration: train, classify, and evaluate over datasets on disk."""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluation, segmentation, synth
from .dataset import ClipEntry, DatasetManifest, ingest, load_color, load_gray
from .evaluation import EvaluationReport, evaluate, window_probes, window_spans
from .matching import FeatureSequence, classify_1nn
from .model_io import ModelFile, load_model, save_model
from .segmentation import (CROP_HEIGHT, CROP_WIDTH, DEFAULT_K, BackgroundModel,
                           NoForegroundError, build_background_model,
                           extract_silhouette, normalize_frame)
from .subspace import ClipData, TrainingSet, project_many, train


def clip_vectors(clip: ClipEntry, background: BackgroundModel, k: float) -> list[np.ndarray | None]:
    """Normalized image vectors per frame; None where the silhouette is empty."""
    from .images import to_grayscale

    out: list[np.ndarray | None] = []
    for path in clip.frames:
        frame = load_color(path)
        sil = extract_silhouette(to_grayscale(frame), background, k)
        try:
            out.append(normalize_frame(frame, sil).values)
        except NoForegroundError:
            out.append(None)
    return out


def run_train(dataset_root: "str | Path", model_path: "str | Path", d: int,
              train_actors: list[str], k: float = DEFAULT_K, fps: float = 10.0) -> dict:
    manifest = ingest(dataset_root, fps=fps)
    background = build_background_model([load_gray(p) for p in manifest.background_frames])

    train_entries = [c for c in manifest.clips if c.actor in set(train_actors)]
    unknown = set(train_actors) - set(manifest.actors())
    if unknown:
        raise ValueError(f"train actors not in dataset: {sorted(unknown)}")
    if not train_entries:
        raise ValueError("no clips match the requested train actors")

    clips = []
    for entry in train_entries:
        vectors = [v for v in clip_vectors(entry, background, k) if v is not None]
        if not vectors:
            raise ValueError(f"clip {entry.source_id} has no usable frames")
        clips.append(ClipData(actor=entry.actor, activity=entry.activity,
                              source_id=entry.source_id, vectors=np.stack(vectors)))

    ts = TrainingSet.from_clips(clips)
    model = train(ts, d)
    mf = ModelFile(model=model, background=background,
                   crop_height=CROP_HEIGHT, crop_width=CROP_WIDTH,
                   k=k, fps=fps, train_actors=sorted(set(train_actors)),
                   config={"d": str(d), "samples": str(ts.l)})
    save_model(mf, model_path)
    return {"model_path": str(model_path), "classes": model.class_names,
            "d": model.d, "n": model.n, "samples": ts.l,
            "templates": len(model.gallery)}


@dataclass
class WindowResult:
    start: int
    end: int  # exclusive
    label: str | None  # None = no subject
    distance: float | None


def classify_frames(mf: ModelFile, frame_paths: list[Path],
                    window_sec: float = 1.0) -> list[WindowResult]:
    model = mf.model
    features: list[np.ndarray | None] = []
    for path in frame_paths:
        frame = load_color(path)
        from .images import to_grayscale

        sil = extract_silhouette(to_grayscale(frame), mf.background, mf.k)
        try:
            vec = normalize_frame(frame, sil).values
        except NoForegroundError:
            features.append(None)
            continue
        if vec.shape[0] != model.n:
            raise ValueError(f"frame vector length {vec.shape[0]} != model n={model.n}")
        features.append(model.basis.T @ (vec - model.mean))

    spans = window_spans(len(features), mf.fps, window_sec)
    probes = window_probes(features, mf.fps, window_sec)
    results = []
    for (start, stop), probe in zip(spans, probes):
        if probe is None:
            results.append(WindowResult(start=start, end=stop, label=None, distance=None))
        else:
            match = classify_1nn(probe, model.gallery)
            results.append(WindowResult(start=start, end=stop,
                                        label=match.predicted,
                                        distance=match.best_distance))
    return results


def run_classify(model_path: "str | Path", frames_dir: "str | Path",
                 window_sec: float = 1.0) -> list[WindowResult]:
    mf = load_model(model_path)
    frames = sorted(Path(frames_dir).glob("*.ppm"))
    if not frames:
        raise ValueError(f"no .ppm frames in {frames_dir}")
    return classify_frames(mf, frames, window_sec)


def run_evaluate(model_path: "str | Path", dataset_root: "str | Path",
                 actors: list[str] | None, window_sec: float,
                 report_path: "str | Path") -> EvaluationReport:
    mf = load_model(model_path)
    manifest = ingest(dataset_root, fps=mf.fps)
    if actors is None:
        actors = [a for a in manifest.actors() if a not in set(mf.train_actors)]
    overlap = set(actors) & set(mf.train_actors)
    if overlap:
        raise ValueError(f"test actors overlap training actors: {sorted(overlap)}")
    entries = [c for c in manifest.clips if c.actor in set(actors)]
    if not entries:
        raise ValueError("no test clips for the requested actors")

    probes: list[FeatureSequence] = []
    for entry in entries:
        vectors = clip_vectors(entry, mf.background, mf.k)
        feats = [None if v is None else mf.model.basis.T @ (v - mf.model.mean)
                 for v in vectors]
        wins = window_probes(feats, mf.fps, window_sec,
                             labels=[entry.activity] * len(feats))
        probes.extend(w for w in wins if w is not None)

    report = evaluate(probes, mf.model,
                      config={"d": mf.model.d, "window_sec": window_sec,
                              "fps": mf.fps, "test_actors": ",".join(sorted(actors))})
    report_path = Path(report_path)
    report_path.write_text(evaluation.format_report(report))
    report_path.with_suffix(report_path.suffix + ".tsv").write_text(
        evaluation.serialize_report(report))
    return report


def run_synth(root: "str | Path", seed: int = 0, classes: int = 4,
              actors: list[str] | None = None, frames_per_clip: int = 50) -> dict:
    return synth.generate_dataset(root, seed=seed, classes=classes, actors=actors,
                                  frames_per_clip=frames_per_clip)
