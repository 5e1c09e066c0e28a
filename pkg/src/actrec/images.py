"""Image containers, binary PGM/PPM codecs, and per-image normalization."""

import logging
import re
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


class DecodeError(ValueError):
    """Raised when a PGM/PPM payload cannot be parsed."""


@dataclass
class GrayImage:
    """Single-channel raster, pixels shaped (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 2:
            raise ValueError(f"gray pixels must be 2-D, got shape {self.pixels.shape}")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("image dimensions must be positive")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass
class ColorImage:
    """RGB raster, pixels shaped (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels)
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3:
            raise ValueError(f"color pixels must be (h, w, 3), got {self.pixels.shape}")
        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError("image dimensions must be positive")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass
class ImageVector:
    """Row-major flattening of a normalized crop, optionally labeled."""

    values: np.ndarray
    label: str | None = None
    sample_index: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).ravel()


_TOKEN_RE = re.compile(rb"^\S+")


def _read_header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Pull `count` whitespace-separated tokens, honoring # comments."""
    tokens: list[bytes] = []
    pos = 0
    while len(tokens) < count:
        if pos >= len(data):
            raise DecodeError("truncated header: ran out of bytes before pixel data")
        c = data[pos : pos + 1]
        if c in b" \t\r\n":
            pos += 1
        elif c == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise DecodeError("unterminated comment in header")
            pos = nl + 1
        else:
            m = _TOKEN_RE.match(data[pos:])
            tokens.append(m.group(0))
            pos += len(m.group(0))
    # exactly one whitespace byte separates the maxval token from the payload
    if pos >= len(data) or data[pos : pos + 1] not in b" \t\r\n":
        raise DecodeError("missing whitespace between header and pixel data")
    return tokens, pos + 1


def decode_image(data: bytes) -> "GrayImage | ColorImage":
    """Decode binary PGM (P5) or PPM (P6) bytes, maxval 255 only."""
    tokens, payload_start = _read_header_tokens(data, 4)
    magic, w_tok, h_tok, maxval_tok = tokens
    if magic not in (b"P5", b"P6"):
        raise DecodeError(f"unsupported magic number {magic!r}, expected P5 or P6")
    try:
        width, height, maxval = int(w_tok), int(h_tok), int(maxval_tok)
    except ValueError as exc:
        raise DecodeError(f"non-numeric header field: {exc}") from exc
    if width <= 0 or height <= 0:
        raise DecodeError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise DecodeError(f"unsupported maxval {maxval}, only 255 is handled")

    channels = 1 if magic == b"P5" else 3
    expected = width * height * channels
    payload = data[payload_start : payload_start + expected]
    if len(payload) < expected:
        raise DecodeError(
            f"truncated pixel payload: expected {expected} bytes, got {len(payload)}"
        )
    arr = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return GrayImage(arr.reshape(height, width).copy())
    return ColorImage(arr.reshape(height, width, 3).copy())


def encode_gray(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode()
    return header + np.asarray(img.pixels, dtype=np.uint8).tobytes()


def encode_color(img: ColorImage) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode()
    return header + np.asarray(img.pixels, dtype=np.uint8).tobytes()


def encode_image(img: "GrayImage | ColorImage") -> bytes:
    if isinstance(img, GrayImage):
        return encode_gray(img)
    return encode_color(img)


def to_grayscale(img: ColorImage) -> GrayImage:
    """BT.601 luma conversion, rounded half-up and clamped to [0, 255]."""
    rgb = img.pixels.astype(np.float64)
    luma = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    out = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(out)


def equalize_histogram(img: GrayImage) -> GrayImage:
    """Classic cumulative-histogram remap over 256 levels."""
    pixels = np.asarray(img.pixels, dtype=np.int64)
    hist = np.bincount(pixels.ravel(), minlength=256)
    cdf = np.cumsum(hist)
    cdf_min = cdf[np.nonzero(hist)[0][0]]
    n = pixels.size
    if n == cdf_min:
        # single occupied bin: nothing to spread
        return GrayImage(img.pixels.astype(np.uint8).copy())
    lut = np.floor(255.0 * (cdf - cdf_min) / (n - cdf_min) + 0.5).astype(np.uint8)
    return GrayImage(lut[pixels])


def standardize(img: GrayImage) -> ImageVector:
    """Flatten row-major, then shift/scale to zero mean, unit population std."""
    flat = np.asarray(img.pixels, dtype=np.float64).ravel()
    mean = flat.mean()
    std = flat.std()
    if std == 0.0:
        log.warning("standardize: constant image, emitting all-zero vector")
        return ImageVector(np.zeros_like(flat))
    return ImageVector((flat - mean) / std)
