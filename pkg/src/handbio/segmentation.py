"""Hand/background separation: per-sub-image Otsu thresholding combined with
a histogram-based Bayesian skin classifier, followed by mask cleanup."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import raster
from .errors import CorruptLibrary, NoBimodality, NoHandFound
from .kernels import label_components
from .raster import BinaryMask, RasterImage

_SKIN_MAGIC = b"HSKM"
_SKIN_VERSION = 1


@dataclass(frozen=True)
class SkinModel:
    """Quantized-RGB histogram pair with a skin prior."""

    bins_per_channel: int
    skin_hist: np.ndarray
    nonskin_hist: np.ndarray
    prior_skin: float

    def __post_init__(self):
        b = self.bins_per_channel
        if self.skin_hist.shape != (b, b, b) or self.nonskin_hist.shape != (b, b, b):
            raise ValueError("histogram shapes must be (bins, bins, bins)")
        if (self.skin_hist < 0).any() or (self.nonskin_hist < 0).any():
            raise ValueError("histogram counts must be non-negative")
        if not (0.0 < self.prior_skin < 1.0):
            raise ValueError("prior must be in (0, 1)")
        if self.skin_hist.sum() == 0 or self.nonskin_hist.sum() == 0:
            raise ValueError("untrained model: a histogram is all zero")


@dataclass(frozen=True)
class SegmentationResult:
    hand_mask: BinaryMask
    otsu_mask: BinaryMask
    skin_mask: BinaryMask
    sub_image_grid: tuple  # ((row_split, col_split)) boundaries of the 2x2 grid
    over_segmentation_warning: bool = False
    warnings: tuple = field(default_factory=tuple)


def otsu_threshold(img: RasterImage) -> int:
    """Threshold maximizing between-class variance of the 256-bin histogram."""
    if img.channels != 1:
        raise ValueError("otsu_threshold expects a grayscale image")
    hist = np.bincount(img.pixels.ravel(), minlength=256)[:256]
    t = raster._otsu_from_histogram(hist)
    if t < 0:
        raise NoBimodality("image has a single gray value")
    return t


def train_skin_model(
    skin_rgb: np.ndarray, nonskin_rgb: np.ndarray, bins: int = 32, prior_skin: float = 0.5
) -> SkinModel:
    """Build histograms from (n, 3) uint8 sample arrays."""

    def hist_of(samples):
        q = np.asarray(samples, dtype=np.int64) * bins // 256
        flat = (q[:, 0] * bins + q[:, 1]) * bins + q[:, 2]
        return np.bincount(flat, minlength=bins**3).reshape(bins, bins, bins).astype(np.float64)

    return SkinModel(bins, hist_of(skin_rgb), hist_of(nonskin_rgb), prior_skin)


def _skin_samples(rng: np.random.Generator, n: int) -> np.ndarray:
    """Synthetic skin-tone draws: warm hues with R >= G >= B ordering, plus
    multiplicative shading and mild background blending so that soft edges
    and crease shading still classify as skin."""
    r = rng.uniform(120, 255, n)
    g = r * rng.uniform(0.55, 0.92, n)
    b = g * rng.uniform(0.55, 0.95, n)
    rgb = np.stack([r, g, b], axis=1)
    rgb *= rng.uniform(0.62, 1.05, (n, 1))
    blend = rng.uniform(0.62, 1.0, (n, 1))
    bg = rng.uniform(20, 110, (n, 3))
    rgb = blend * rgb + (1 - blend) * bg
    return np.clip(rgb, 0, 255).astype(np.uint8)


def _nonskin_samples(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform colours plus cloth-like clusters (greens, blues, grays)."""
    u = rng.uniform(0, 256, (n // 2, 3))
    greens = np.stack(
        [rng.uniform(0, 120, n // 6), rng.uniform(80, 230, n // 6), rng.uniform(0, 120, n // 6)],
        axis=1,
    )
    blues = np.stack(
        [rng.uniform(0, 130, n // 6), rng.uniform(0, 150, n // 6), rng.uniform(90, 255, n // 6)],
        axis=1,
    )
    m = n - n // 2 - 2 * (n // 6)
    gray = rng.uniform(0, 120, (m, 1)) * np.ones((1, 3)) + rng.normal(0, 6, (m, 3))
    return np.clip(np.concatenate([u, greens, blues, gray]), 0, 255).astype(np.uint8)


_default_model_cache: list = []


def default_skin_model() -> SkinModel:
    """Deterministic bundled model trained on generated samples."""
    if not _default_model_cache:
        rng = np.random.default_rng(1812)
        _default_model_cache.append(
            train_skin_model(_skin_samples(rng, 60000), _nonskin_samples(rng, 60000))
        )
    return _default_model_cache[0]


def classify_skin(model: SkinModel, img: RasterImage) -> BinaryMask:
    """Pixel is skin iff P(rgb|skin) * prior > P(rgb|nonskin) * (1 - prior),
    with Laplace smoothing (+1 per cell)."""
    if img.channels != 3:
        raise ValueError("classify_skin expects an RGB image")
    b = model.bins_per_channel
    ncells = b**3
    p_skin = (model.skin_hist + 1.0) / (model.skin_hist.sum() + ncells)
    p_non = (model.nonskin_hist + 1.0) / (model.nonskin_hist.sum() + ncells)
    q = img.pixels.astype(np.int64) * b // 256
    ps = p_skin[q[:, :, 0], q[:, :, 1], q[:, :, 2]]
    pn = p_non[q[:, :, 0], q[:, :, 1], q[:, :, 2]]
    return BinaryMask(ps * model.prior_skin > pn * (1.0 - model.prior_skin))


def fill_holes(mask: BinaryMask) -> BinaryMask:
    """Background components not 4-connected to the image border turn
    foreground."""
    bg = (~mask.bits).astype(np.uint8)
    labels = label_components(bg, False)
    border = np.unique(
        np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])
    )
    border = border[border > 0]
    hole = (labels > 0) & ~np.isin(labels, border)
    return BinaryMask(mask.bits | hole)


def save_skin_model(model: SkinModel, path) -> None:
    with open(path, "wb") as f:
        f.write(_SKIN_MAGIC)
        f.write(struct.pack("<B", _SKIN_VERSION))
        f.write(struct.pack("<B", model.bins_per_channel))
        f.write(struct.pack("<d", model.prior_skin))
        f.write(model.skin_hist.astype("<f8").tobytes(order="C"))
        f.write(model.nonskin_hist.astype("<f8").tobytes(order="C"))


def load_skin_model(path) -> SkinModel:
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 14 or data[:4] != _SKIN_MAGIC:
        raise CorruptLibrary("bad skin model magic")
    version, bins = data[4], data[5]
    if version != _SKIN_VERSION:
        raise CorruptLibrary(f"unsupported skin model version {version}")
    (prior,) = struct.unpack_from("<d", data, 6)
    need = 14 + 2 * bins**3 * 8
    if len(data) != need:
        raise CorruptLibrary("truncated skin model")
    skin = np.frombuffer(data, dtype="<f8", count=bins**3, offset=14).reshape(bins, bins, bins)
    non = np.frombuffer(data, dtype="<f8", count=bins**3, offset=14 + bins**3 * 8).reshape(
        bins, bins, bins
    )
    try:
        return SkinModel(bins, skin.copy(), non.copy(), prior)
    except ValueError as exc:
        raise CorruptLibrary(str(exc)) from exc


def segment_hand(img: RasterImage, model: SkinModel | None = None) -> SegmentationResult:
    """Full background segmentation: blur, 2x2 per-sub-image Otsu, global
    skin mask, channel combination, morphology cleanup, largest blob."""
    if model is None:
        model = default_skin_model()
    if img.channels != 3:
        raise ValueError("segment_hand expects an RGB image")
    h, w = img.height, img.width
    if h < 64 or w < 64:
        raise ValueError("segment_hand needs at least a 64x64 image")
    blurred = raster.gaussian_blur(img, sigma=1.5, size=9)
    gray = raster.to_grayscale(blurred)
    row_split, col_split = h // 2, w // 2
    otsu_bits = np.zeros((h, w), dtype=bool)
    skin = classify_skin(model, blurred)
    majority_bits = np.zeros((h, w), dtype=bool)
    for ys, ye in ((0, row_split), (row_split, h)):
        for xs, xe in ((0, col_split), (col_split, w)):
            sub = RasterImage(gray.pixels[ys:ye, xs:xe])
            try:
                t = otsu_threshold(sub)
                otsu_bits[ys:ye, xs:xe] = sub.pixels > t
            except NoBimodality:
                pass  # sub-image contributes all-background to the Otsu channel
            if skin.bits[ys:ye, xs:xe].mean() > 0.5:
                majority_bits[ys:ye, xs:xe] = True
    combined = (otsu_bits & skin.bits) | (skin.bits & majority_bits)

    scale = min(w, h) / 383.0
    r_open = max(1, round(2 * scale))
    r_close = max(1, round(5 * scale))
    mask = BinaryMask(combined)
    mask = raster.morph(mask, "open", r_open)
    mask = raster.morph(mask, "close", r_close)
    mask = fill_holes(mask)
    mask = raster.select_largest(mask)
    if mask.count == 0:
        raise NoHandFound("segmentation produced an empty mask")
    touched = sum(
        int(side.any())
        for side in (mask.bits[0], mask.bits[-1], mask.bits[:, 0], mask.bits[:, -1])
    )
    warn = touched >= 3
    warnings = ("blob touches >=3 image borders: likely over-segmentation",) if warn else ()
    return SegmentationResult(
        hand_mask=mask,
        otsu_mask=BinaryMask(otsu_bits),
        skin_mask=skin,
        sub_image_grid=(row_split, col_split),
        over_segmentation_warning=warn,
        warnings=warnings,
    )
