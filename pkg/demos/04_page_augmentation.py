"""Degrade a synthetic page image the way bad scans do, and emit a styled page."""

import argparse
import os
import tempfile

import numpy as np

from ocrkit.augment import (
    PageImage,
    StyleSpec,
    emit_styled_document,
    opacity,
    salt_pepper,
    skew,
    write_image,
)


def synthetic_page(height=240, width=320):
    # white page with a few black text-like bars so the degradations
    # have something to chew on
    pixels = np.full((height, width), 255, dtype=np.uint8)
    for row in range(30, height - 30, 24):
        pixels[row : row + 8, 20 : width - 20] = 0
        pixels[row : row + 8, width // 2 - 6 : width // 2 + 6] = 255
    return PageImage(pixels=pixels)


def ink_fraction(img):
    return float((img.pixels < 128).mean())


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default=None)
    args = parser.parse_args()

    out_dir = args.out_dir or tempfile.mkdtemp(prefix="augment_demo_")
    os.makedirs(out_dir, exist_ok=True)

    page = synthetic_page()
    write_image(page, os.path.join(out_dir, "page_clean.png"))
    print(f"clean page: {page.pixels.shape}, ink fraction {ink_fraction(page):.3f}")

    # salt and pepper flips roughly density*pixels of them to pure black
    # or pure white, half and half
    noisy = salt_pepper(page, density=0.08, seed=7)
    write_image(noisy, os.path.join(out_dir, "page_saltpepper.png"))
    changed = float((noisy.pixels != page.pixels).mean())
    print(f"salt and pepper at 0.08: {changed:.3f} of pixels touched")

    # rotation keeps every ink pixel, growing the canvas as needed
    tilted = skew(page, angle_deg=4.5)
    write_image(tilted, os.path.join(out_dir, "page_skew.png"))
    print(f"skew 4.5 degrees: canvas {page.pixels.shape} -> {tilted.pixels.shape}")

    faded = opacity(page, alpha=0.35)
    write_image(faded, os.path.join(out_dir, "page_faded.png"))
    print(f"opacity 0.35: darkest pixel now {int(faded.pixels.min())}")

    # stacking them gives one plausible worst-case scan
    battered = salt_pepper(skew(opacity(page, 0.6), -3.0), density=0.05, seed=11)
    write_image(battered, os.path.join(out_dir, "page_battered.png"))
    print(f"stacked degradations written, ink fraction {ink_fraction(battered):.3f}")

    # the styled-document path renders text for synthetic training pages;
    # scripts without a dedicated font stack fall back with a warning
    style = StyleSpec(font_size=14.0, bold=True, letter_spacing=0.08, opacity=0.9)
    html = emit_styled_document("ऋग्वेद is the Rigveda", style, script="devanagari")
    html_path = os.path.join(out_dir, "styled_page.html")
    with open(html_path, "w", encoding="utf-8") as fh:
        fh.write(html)
    print(f"\nstyled page written to {html_path}")
    for line in html.splitlines():
        if "font-family" in line or "letter-spacing" in line:
            print(f"  {line.strip()}")


if __name__ == "__main__":
    main()
