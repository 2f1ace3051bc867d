"""Pixel-level page-image corruption (salt & pepper noise, skew, opacity
fade) and style-descriptor emission for external document renderers.

Images are uint8 numpy buffers, grayscale (H, W) or RGB (H, W, 3). All
operations are pure: they return a new PageImage and never write into
the input buffer. Text shaping and rasterization are out of scope; the
HTML descriptor is meant for a headless browser or similar renderer.
"""

from __future__ import annotations

import html
import warnings
from dataclasses import dataclass, field

import numpy as np
from PIL import Image
from scipy import ndimage

GRAY8 = "gray8"
RGB8 = "rgb8"

#: per-script default fonts; multi-font scripts keep their full stack
SCRIPT_FONTS: dict[str, tuple[str, ...]] = {
    "latin": ("Times New Roman",),
    "arabic": ("Times New Roman", "Arial"),
    "cyrillic": ("Arial", "Verdana"),
    "devanagari": ("Noto Sans Devanagari",),
    "pashto": ("Calibri",),
    "urdu": ("Jameel Noori Nastaleeq",),
    "thai": ("Browalia New",),
    "korean": ("Korean",),
    "traditional-chinese": ("PMingLiu",),
}


@dataclass(frozen=True)
class PageImage:
    pixels: np.ndarray  # uint8, (H, W) for gray8 or (H, W, 3) for rgb8

    def __post_init__(self):
        p = self.pixels
        if p.dtype != np.uint8:
            raise ValueError(f"pixel buffer must be uint8, got {p.dtype}")
        if p.ndim == 2:
            return
        if p.ndim == 3 and p.shape[2] == 3:
            return
        raise ValueError(f"pixel buffer must be (H, W) or (H, W, 3), got shape {p.shape}")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> str:
        return GRAY8 if self.pixels.ndim == 2 else RGB8

    @classmethod
    def blank(cls, width: int, height: int, channels: str = GRAY8, value: int = 255) -> "PageImage":
        shape = (height, width) if channels == GRAY8 else (height, width, 3)
        return cls(np.full(shape, value, dtype=np.uint8))


def read_image(path: str) -> PageImage:
    with Image.open(path) as im:
        if im.mode == "L":
            return PageImage(np.asarray(im, dtype=np.uint8))
        return PageImage(np.asarray(im.convert("RGB"), dtype=np.uint8))


def write_image(img: PageImage, path: str) -> None:
    Image.fromarray(img.pixels).save(path)


def salt_pepper_draws(
    height: int, width: int, density: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Replay the per-pixel corruption draws for a given seed.

    Returns (corrupt, white): corrupt marks pixels hit with probability
    density, white picks the replacement color for every pixel. Exposed
    so tests can count draws rather than pixel diffs (a pixel that was
    already black or white changes nothing when hit)."""
    rng = np.random.default_rng(seed)
    corrupt = rng.random((height, width)) < density
    white = rng.random((height, width)) < 0.5
    return corrupt, white


def salt_pepper(img: PageImage, density: float, seed: int) -> PageImage:
    """Corrupt each pixel independently with the given probability,
    setting it to pure black or pure white with equal chance."""
    if not 0 <= density <= 1:
        raise ValueError(f"density must be in [0, 1], got {density}")
    corrupt, white = salt_pepper_draws(img.height, img.width, density, seed)
    out = img.pixels.copy()
    values = np.where(white, np.uint8(255), np.uint8(0))
    if img.channels == GRAY8:
        out[corrupt] = values[corrupt]
    else:
        out[corrupt] = values[corrupt, None]
    return PageImage(out)


def skew(img: PageImage, angle_deg: float, fill: int = 255) -> PageImage:
    """Rotate about the image center with bilinear resampling, enlarging
    the canvas so no source pixel is cropped. Out-of-source area takes
    the fill value. Multiples of 90 degrees use an exact lossless path;
    other angles must satisfy |angle| <= 45."""
    angle = angle_deg % 360.0
    if angle == 0.0:
        return PageImage(img.pixels.copy())
    if angle in (90.0, 180.0, 270.0):
        k = int(angle // 90)
        return PageImage(np.ascontiguousarray(np.rot90(img.pixels, k=k)))
    if not abs(angle_deg) <= 45:
        raise ValueError(f"|angle_deg| must be <= 45 (or a multiple of 90), got {angle_deg}")
    rotated = ndimage.rotate(
        img.pixels,
        angle_deg,
        axes=(1, 0),
        reshape=True,
        order=1,
        mode="constant",
        cval=fill,
    )
    return PageImage(np.clip(np.rint(rotated), 0, 255).astype(np.uint8))


def opacity(img: PageImage, alpha: float) -> PageImage:
    """Blend toward white: out = alpha*in + (1-alpha)*255, rounded half
    up. alpha 1 is the identity; white is a fixed point."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    blended = np.floor(alpha * img.pixels.astype(np.float64) + (1.0 - alpha) * 255.0 + 0.5)
    return PageImage(blended.astype(np.uint8))


@dataclass(frozen=True)
class StyleSpec:
    font_family: str = "Times New Roman"
    font_size: float = 12.0  # points
    bold: bool = False
    italic: bool = False
    letter_spacing: float = 0.0  # em units
    opacity: float = 1.0
    color: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if not self.font_size > 0:
            raise ValueError(f"font_size must be > 0, got {self.font_size}")
        if not 0 < self.opacity <= 1:
            raise ValueError(f"opacity must be in (0, 1], got {self.opacity}")
        if len(self.color) != 3 or any(not 0 <= c <= 255 for c in self.color):
            raise ValueError(f"color must be an RGB triple in 0..255, got {self.color}")


def emit_styled_document(text: str, style: StyleSpec, script: str | None = None) -> str:
    """Build a self-contained HTML page encoding every style field as
    inline CSS. When a known script tag is given, its default font stack
    replaces style.font_family; unknown tags fall back to the given
    family with a warning."""
    if script is None:
        fonts = (style.font_family,)
    else:
        fonts = SCRIPT_FONTS.get(script)
        if fonts is None:
            warnings.warn(f"unknown script tag {script!r}; using font_family as given")
            fonts = (style.font_family,)
    family = ", ".join(f'"{name}"' for name in fonts)
    r, g, b = style.color
    css = "; ".join(
        [
            f"font-family: {family}",
            f"font-size: {style.font_size:g}pt",
            f"font-weight: {'bold' if style.bold else 'normal'}",
            f"font-style: {'italic' if style.italic else 'normal'}",
            f"letter-spacing: {style.letter_spacing:g}em",
            f"opacity: {style.opacity:g}",
            f"color: rgb({r}, {g}, {b})",
        ]
    )
    paragraphs = "\n".join(f"<p>{html.escape(line)}</p>" for line in text.split("\n"))
    return (
        "<!DOCTYPE html>\n"
        '<html><head><meta charset="utf-8"></head>\n'
        f'<body><div style="{css}">\n{paragraphs}\n</div></body></html>\n'
    )
