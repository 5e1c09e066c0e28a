"""Dataset directory ingestion.

Layout convention:
    root/background/*.pgm           gray reference frames for background modeling
    root/<actor>/<activity>/*.ppm   ordered color frames, one clip per directory
"""

from dataclasses import dataclass, field
from pathlib import Path

from .images import ColorImage, GrayImage, DecodeError, decode_image


class IngestError(ValueError):
    pass


@dataclass
class ClipEntry:
    actor: str
    activity: str
    frames: list[Path]

    @property
    def source_id(self) -> str:
        return f"{self.actor}/{self.activity}"


@dataclass
class DatasetManifest:
    root: Path
    background_frames: list[Path]
    clips: list[ClipEntry]
    fps: float = 10.0

    def actors(self) -> list[str]:
        return sorted({c.actor for c in self.clips})

    def activities(self) -> list[str]:
        return sorted({c.activity for c in self.clips})


def _decode_file(path: Path):
    try:
        return decode_image(path.read_bytes())
    except DecodeError as exc:
        raise IngestError(f"{path}: {exc}") from exc


def load_gray(path: Path) -> GrayImage:
    img = _decode_file(path)
    if not isinstance(img, GrayImage):
        raise IngestError(f"{path}: expected a P5 (gray) image")
    return img


def load_color(path: Path) -> ColorImage:
    img = _decode_file(path)
    if not isinstance(img, ColorImage):
        raise IngestError(f"{path}: expected a P6 (color) image")
    return img


def ingest(root: "str | Path", fps: float = 10.0) -> DatasetManifest:
    """Enumerate a dataset directory into a deterministic manifest."""
    root = Path(root)
    background_dir = root / "background"
    if not background_dir.is_dir():
        raise IngestError(f"missing background directory: {background_dir}")
    background = sorted(background_dir.glob("*.pgm"))
    if not background:
        raise IngestError(f"no .pgm frames in {background_dir}")

    clips: list[ClipEntry] = []
    for actor_dir in sorted(p for p in root.iterdir() if p.is_dir() and p.name != "background"):
        for activity_dir in sorted(p for p in actor_dir.iterdir() if p.is_dir()):
            frames = sorted(activity_dir.glob("*.ppm"))
            if not frames:
                raise IngestError(f"empty activity directory: {activity_dir}")
            clips.append(ClipEntry(actor=actor_dir.name, activity=activity_dir.name,
                                   frames=frames))
    if not clips:
        raise IngestError(f"no actor/activity clips found under {root}")
    return DatasetManifest(root=root, background_frames=background, clips=clips, fps=fps)
