"""IDX (MNIST) file loading.

Binary layout, big endian: i32 magic (0x00000803 images / 0x00000801
labels), i32 item count, then for images i32 rows, i32 cols and the
row-major uint8 pixels.
"""

from __future__ import annotations

import struct

import numpy as np

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


class IdxFormatError(ValueError):
    pass


def _read_be32(f, what):
    data = f.read(4)
    if len(data) != 4:
        raise IdxFormatError(f"truncated file while reading {what}")
    return struct.unpack(">i", data)[0]


def _load_labels(path) -> np.ndarray:
    with open(path, "rb") as f:
        magic = _read_be32(f, "label magic")
        if magic != LABEL_MAGIC:
            raise IdxFormatError(
                f"bad label magic 0x{magic:08x}, expected 0x{LABEL_MAGIC:08x}")
        count = _read_be32(f, "label count")
        raw = f.read(count)
        if len(raw) != count:
            raise IdxFormatError(f"truncated label file: {len(raw)}/{count}")
        return np.frombuffer(raw, dtype=np.uint8)


def resize_nearest(images: np.ndarray, out_side: int) -> np.ndarray:
    """Nearest-neighbor resize of (count, h, w) square images."""
    _, h, w = images.shape
    ri = np.minimum((np.arange(out_side) * h / out_side).astype(int), h - 1)
    ci = np.minimum((np.arange(out_side) * w / out_side).astype(int), w - 1)
    return images[:, ri[:, None], ci[None, :]]


def load_mnist_idx(images_path, labels_path=None, resize_to=None) -> np.ndarray:
    """Load IDX images as (count, h*w) float64 vectors scaled to [0, 1].

    If a labels path is given, its item count must match the image count.
    `resize_to` applies a nearest-neighbor square resize (e.g. 28 -> 32).
    """
    with open(images_path, "rb") as f:
        magic = _read_be32(f, "image magic")
        if magic != IMAGE_MAGIC:
            raise IdxFormatError(
                f"bad image magic 0x{magic:08x}, expected 0x{IMAGE_MAGIC:08x}")
        count = _read_be32(f, "image count")
        rows = _read_be32(f, "row count")
        cols = _read_be32(f, "column count")
        raw = f.read(count * rows * cols)
        if len(raw) != count * rows * cols:
            raise IdxFormatError(
                f"truncated image file: {len(raw)}/{count * rows * cols} bytes")
    images = np.frombuffer(raw, dtype=np.uint8).reshape(count, rows, cols)
    if labels_path is not None:
        labels = _load_labels(labels_path)
        if labels.shape[0] != count:
            raise IdxFormatError(
                f"{count} images but {labels.shape[0]} labels")
    if resize_to is not None:
        images = resize_nearest(images, resize_to)
    return images.reshape(count, -1).astype(np.float64) / 255.0
