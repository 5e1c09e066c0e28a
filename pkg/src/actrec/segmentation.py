"""Background modeling, silhouette extraction, and centroid-anchored cropping."""

from dataclasses import dataclass

import numpy as np

from .images import ColorImage, GrayImage, ImageVector, equalize_histogram, standardize, to_grayscale

CROP_HEIGHT = 140
CROP_WIDTH = 130

DEFAULT_K = 3.0
DEVIATION_FLOOR = 2.0
MAD_SCALE = 1.4826  # MAD -> sigma for Gaussian noise


class NoForegroundError(ValueError):
    """Raised when a silhouette contains no foreground pixels."""


@dataclass
class BackgroundModel:
    """Per-pixel temporal median plus a robust deviation scale."""

    reference: np.ndarray  # (h, w) float64
    scale: np.ndarray      # (h, w) float64, >= DEVIATION_FLOOR

    @property
    def height(self) -> int:
        return self.reference.shape[0]

    @property
    def width(self) -> int:
        return self.reference.shape[1]


@dataclass
class SilhouetteMap:
    mask: np.ndarray  # (h, w) bool, True = foreground

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    def has_foreground(self) -> bool:
        return bool(self.mask.any())


@dataclass
class BoundingExtremes:
    a1: int  # min foreground x
    a2: int  # max foreground x
    b1: int  # min foreground y
    b2: int  # max foreground y


@dataclass
class Centroid:
    a: float  # x
    b: float  # y


def build_background_model(frames: list[GrayImage], floor: float = DEVIATION_FLOOR) -> BackgroundModel:
    if not frames:
        raise ValueError("background model needs at least one frame")
    shape = frames[0].pixels.shape
    for f in frames:
        if f.pixels.shape != shape:
            raise ValueError(f"frame dimensions differ: {f.pixels.shape} vs {shape}")
    stack = np.stack([np.asarray(f.pixels, dtype=np.float64) for f in frames])
    reference = np.median(stack, axis=0)
    mad = np.median(np.abs(stack - reference), axis=0)
    scale = np.maximum(mad * MAD_SCALE, floor)
    return BackgroundModel(reference=reference, scale=scale)


def threshold_mask(frame: GrayImage, model: BackgroundModel, k: float = DEFAULT_K) -> np.ndarray:
    """Raw per-pixel foreground test, before smoothing."""
    if frame.pixels.shape != model.reference.shape:
        raise ValueError(
            f"frame {frame.pixels.shape} does not match model {model.reference.shape}"
        )
    diff = np.abs(np.asarray(frame.pixels, dtype=np.float64) - model.reference)
    return diff > k * model.scale


def _neighbor_sums(arr: np.ndarray) -> np.ndarray:
    """Sum of the 8 in-bounds neighbors at every pixel."""
    padded = np.pad(arr, 1, mode="constant")
    total = np.zeros_like(arr, dtype=np.int64)
    h, w = arr.shape
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            total += padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return total


def smooth_mask(mask: np.ndarray) -> np.ndarray:
    """One 3x3 majority-vote pass: flip where >=5 in-bounds neighbors disagree."""
    fg = mask.astype(np.int64)
    nb_fg = _neighbor_sums(fg)
    nb_count = _neighbor_sums(np.ones_like(fg))
    disagree = np.where(mask, nb_count - nb_fg, nb_fg)
    return np.where(disagree >= 5, ~mask, mask)


def extract_silhouette(frame: GrayImage, model: BackgroundModel, k: float = DEFAULT_K) -> SilhouetteMap:
    return SilhouetteMap(smooth_mask(threshold_mask(frame, model, k)))


def bounding_extremes(s: SilhouetteMap) -> BoundingExtremes:
    ys, xs = np.nonzero(s.mask)
    if xs.size == 0:
        raise NoForegroundError("silhouette has no foreground pixels")
    return BoundingExtremes(a1=int(xs.min()), a2=int(xs.max()), b1=int(ys.min()), b2=int(ys.max()))


def centroid(e: BoundingExtremes) -> Centroid:
    return Centroid(a=(e.a1 + e.a2) / 2.0, b=(e.b1 + e.b2) / 2.0)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def _window_1d(center: int, size: int, extent: int) -> tuple[int, int, int]:
    """Start index, pad-before, pad-after for one axis of the crop."""
    if extent >= size:
        start = center - size // 2
        start = min(max(start, 0), extent - size)  # clamp inward
        return start, 0, 0
    pad_before = (size - extent) // 2
    return 0, pad_before, size - extent - pad_before


def crop_window(frame, c: Centroid, crop_h: int = CROP_HEIGHT, crop_w: int = CROP_WIDTH):
    """Fixed-size window centered on the centroid, clamped or zero-padded."""
    pixels = frame.pixels
    h, w = pixels.shape[0], pixels.shape[1]
    row0, pad_top, pad_bottom = _window_1d(_round_half_up(c.b), crop_h, h)
    col0, pad_left, pad_right = _window_1d(_round_half_up(c.a), crop_w, w)
    take_h = min(crop_h, h)
    take_w = min(crop_w, w)
    window = pixels[row0 : row0 + take_h, col0 : col0 + take_w]
    if pad_top or pad_bottom or pad_left or pad_right:
        pad = ((pad_top, pad_bottom), (pad_left, pad_right))
        if pixels.ndim == 3:
            pad = pad + ((0, 0),)
        window = np.pad(window, pad, mode="constant")
    if isinstance(frame, ColorImage):
        return ColorImage(window.copy())
    return GrayImage(window.copy())


def normalize_frame(frame: ColorImage, s: SilhouetteMap) -> ImageVector:
    """Full per-frame normalization: crop at centroid, gray, equalize, standardize."""
    c = centroid(bounding_extremes(s))
    crop = crop_window(frame, c)
    gray = to_grayscale(crop) if isinstance(crop, ColorImage) else crop
    return standardize(equalize_histogram(gray))
