"""Versioned binary persistence for trained models.

Layout: magic + u32 version, then little-endian explicit-width integers and
64-bit floats throughout, so that save -> load -> save is byte-identical.
The background model rides along because online classification needs it.
"""

import io
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .matching import FeatureSequence
from .segmentation import BackgroundModel
from .subspace import SubspaceModel

MAGIC = b"ACTRECM1"
VERSION = 1


class ModelFormatError(ValueError):
    pass


@dataclass
class ModelFile:
    """A trained subspace model plus everything classification needs."""

    model: SubspaceModel
    background: BackgroundModel
    crop_height: int
    crop_width: int
    k: float
    fps: float
    train_actors: list[str]
    config: dict = field(default_factory=dict)  # extra training echo, str -> str


def _write_str(buf: io.BytesIO, s: str) -> None:
    raw = s.encode("utf-8")
    buf.write(struct.pack("<I", len(raw)))
    buf.write(raw)


def _write_array(buf: io.BytesIO, arr: np.ndarray) -> None:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    buf.write(struct.pack("<I", arr.ndim))
    for dim in arr.shape:
        buf.write(struct.pack("<Q", dim))
    buf.write(arr.tobytes())


def _read_exact(buf: io.BytesIO, count: int) -> bytes:
    data = buf.read(count)
    if len(data) != count:
        raise ModelFormatError("truncated model file")
    return data


def _read_str(buf: io.BytesIO) -> str:
    (length,) = struct.unpack("<I", _read_exact(buf, 4))
    return _read_exact(buf, length).decode("utf-8")


def _read_array(buf: io.BytesIO) -> np.ndarray:
    (ndim,) = struct.unpack("<I", _read_exact(buf, 4))
    shape = tuple(struct.unpack("<Q", _read_exact(buf, 8))[0] for _ in range(ndim))
    count = int(np.prod(shape)) if shape else 1
    data = _read_exact(buf, count * 8)
    return np.frombuffer(data, dtype="<f8").reshape(shape).copy()


def dumps(mf: ModelFile) -> bytes:
    m = mf.model
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<I", VERSION))
    buf.write(struct.pack("<IQII", m.d, m.n, mf.crop_height, mf.crop_width))
    buf.write(struct.pack("<dd", mf.k, mf.fps))

    buf.write(struct.pack("<I", len(m.class_names)))
    for name in m.class_names:
        _write_str(buf, name)
    buf.write(struct.pack("<I", len(mf.train_actors)))
    for actor in mf.train_actors:
        _write_str(buf, actor)
    buf.write(struct.pack("<I", len(mf.config)))
    for key in sorted(mf.config):
        _write_str(buf, key)
        _write_str(buf, str(mf.config[key]))

    _write_array(buf, m.mean)
    _write_array(buf, m.basis)
    _write_array(buf, m.eigenvalues)
    _write_array(buf, mf.background.reference)
    _write_array(buf, mf.background.scale)

    buf.write(struct.pack("<I", len(m.gallery)))
    class_index = {name: i for i, name in enumerate(m.class_names)}
    for seq in m.gallery:
        buf.write(struct.pack("<I", class_index[seq.label]))
        _write_str(buf, seq.source_id)
        _write_array(buf, seq.frames)
    return buf.getvalue()


def loads(data: bytes) -> ModelFile:
    buf = io.BytesIO(data)
    if _read_exact(buf, len(MAGIC)) != MAGIC:
        raise ModelFormatError("bad magic string, not a model file")
    (version,) = struct.unpack("<I", _read_exact(buf, 4))
    if version != VERSION:
        raise ModelFormatError(f"unsupported model version {version}")
    d, n, crop_h, crop_w = struct.unpack("<IQII", _read_exact(buf, 20))
    k, fps = struct.unpack("<dd", _read_exact(buf, 16))

    (n_classes,) = struct.unpack("<I", _read_exact(buf, 4))
    class_names = [_read_str(buf) for _ in range(n_classes)]
    (n_actors,) = struct.unpack("<I", _read_exact(buf, 4))
    train_actors = [_read_str(buf) for _ in range(n_actors)]
    (n_config,) = struct.unpack("<I", _read_exact(buf, 4))
    config = {}
    for _ in range(n_config):
        key = _read_str(buf)
        config[key] = _read_str(buf)

    mean = _read_array(buf)
    basis = _read_array(buf)
    eigenvalues = _read_array(buf)
    reference = _read_array(buf)
    scale = _read_array(buf)

    (n_templates,) = struct.unpack("<I", _read_exact(buf, 4))
    gallery = []
    for _ in range(n_templates):
        (class_idx,) = struct.unpack("<I", _read_exact(buf, 4))
        source_id = _read_str(buf)
        frames = _read_array(buf)
        gallery.append(FeatureSequence(frames=frames, label=class_names[class_idx],
                                       source_id=source_id))

    model = SubspaceModel(d=int(d), mean=mean, basis=basis, eigenvalues=eigenvalues,
                          class_names=class_names, gallery=gallery)
    if model.n != n:
        raise ModelFormatError(f"mean length {model.n} disagrees with header n={n}")
    return ModelFile(model=model,
                     background=BackgroundModel(reference=reference, scale=scale),
                     crop_height=int(crop_h), crop_width=int(crop_w),
                     k=float(k), fps=float(fps), train_actors=train_actors,
                     config=config)


def save_model(mf: ModelFile, path: "str | Path") -> None:
    Path(path).write_bytes(dumps(mf))


def load_model(path: "str | Path") -> ModelFile:
    return loads(Path(path).read_bytes())
