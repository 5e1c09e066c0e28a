import numpy as np
import pytest

from actrec.images import ColorImage, GrayImage
from actrec.segmentation import SilhouetteMap


def make_scene(rng, blob_x, blob_y, blob_w=40, blob_h=60,
               frame_w=320, frame_h=240, bg_level=60, blob_level=200):
    """Color frame with a textured rectangle blob plus its exact silhouette."""
    gray = np.full((frame_h, frame_w), bg_level, dtype=np.uint8)
    gray += rng.integers(0, 20, size=gray.shape, dtype=np.uint8)
    mask = np.zeros((frame_h, frame_w), dtype=bool)
    mask[blob_y : blob_y + blob_h, blob_x : blob_x + blob_w] = True
    texture = blob_level + rng.integers(0, 40, size=(blob_h, blob_w), dtype=np.uint8) // 2
    gray[blob_y : blob_y + blob_h, blob_x : blob_x + blob_w] = texture
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    return ColorImage(rgb), SilhouetteMap(mask)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def gray_checker():
    px = np.array([[0, 255], [255, 0]], dtype=np.uint8)
    return GrayImage(px)
