"""FastAPI service exposing the pipeline over HTTP.

The service and its clients share a filesystem: requests carry dataset,
model, and report paths rather than image payloads.
"""

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import pipeline
from .dataset import IngestError
from .images import DecodeError
from .model_io import ModelFormatError

app = FastAPI(title="activity recognition service", version="0.1.0")


class SynthRequest(BaseModel):
    root: str
    seed: int = 0
    classes: int = Field(default=4, ge=1, le=4)
    actors: list[str] | None = None
    frames_per_clip: int = Field(default=50, ge=1)


class SynthResponse(BaseModel):
    root: str
    actors: list[str]
    activities: list[str]
    clips: int
    frames_per_clip: int
    background_frames: int
    seed: int


class TrainRequest(BaseModel):
    dataset_root: str
    model_path: str
    d: int = Field(ge=1)
    train_actors: list[str]
    k: float = 3.0
    fps: float = 10.0


class TrainResponse(BaseModel):
    model_path: str
    classes: list[str]
    d: int
    n: int
    samples: int
    templates: int


class ClassifyRequest(BaseModel):
    model_path: str
    frames_dir: str
    window_sec: float = 1.0


class WindowLabel(BaseModel):
    start: int
    end: int
    label: str | None  # None when no subject was visible
    distance: float | None


class ClassifyResponse(BaseModel):
    windows: list[WindowLabel]


class EvaluateRequest(BaseModel):
    model_path: str
    dataset_root: str
    actors: list[str] | None = None
    window_sec: float = 1.0
    report_path: str


class EvaluateResponse(BaseModel):
    overall_rate: float
    class_names: list[str]
    counts: list[list[int]]
    rates: list[list[float]]
    per_class_rates: list[float]
    report_path: str


_CLIENT_ERRORS = (ValueError, IngestError, DecodeError, ModelFormatError,
                  FileNotFoundError, NotADirectoryError)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _CLIENT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/synth", response_model=SynthResponse)
def synth(req: SynthRequest):
    return _guard(pipeline.run_synth, req.root, seed=req.seed, classes=req.classes,
                  actors=req.actors, frames_per_clip=req.frames_per_clip)


@app.post("/train", response_model=TrainResponse)
def train(req: TrainRequest):
    return _guard(pipeline.run_train, req.dataset_root, req.model_path, req.d,
                  req.train_actors, k=req.k, fps=req.fps)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest):
    results = _guard(pipeline.run_classify, req.model_path, req.frames_dir,
                     req.window_sec)
    return ClassifyResponse(windows=[
        WindowLabel(start=r.start, end=r.end, label=r.label, distance=r.distance)
        for r in results
    ])


@app.post("/evaluate", response_model=EvaluateResponse)
def evaluate(req: EvaluateRequest):
    report = _guard(pipeline.run_evaluate, req.model_path, req.dataset_root,
                    req.actors, req.window_sec, req.report_path)
    cm = report.confusion
    return EvaluateResponse(
        overall_rate=report.overall_rate,
        class_names=cm.class_names,
        counts=cm.counts.tolist(),
        rates=cm.rates().tolist(),
        per_class_rates=report.per_class_rates.tolist(),
        report_path=req.report_path,
    )
