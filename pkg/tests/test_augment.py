import numpy as np
import pytest

from ocrkit.augment import (
    GRAY8,
    RGB8,
    PageImage,
    StyleSpec,
    emit_styled_document,
    opacity,
    read_image,
    salt_pepper,
    salt_pepper_draws,
    skew,
    write_image,
)


def checker(h=24, w=32):
    """Asymmetric gray test pattern."""
    y, x = np.indices((h, w))
    return PageImage((((x + 2 * y) * 13) % 251).astype(np.uint8))


# -- container ---------------------------------------------------------------


def test_page_image_validation():
    PageImage(np.zeros((4, 5), dtype=np.uint8))
    PageImage(np.zeros((4, 5, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        PageImage(np.zeros((4, 5), dtype=np.uint16))
    with pytest.raises(ValueError):
        PageImage(np.zeros((4, 5, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        PageImage(np.zeros(12, dtype=np.uint8))


def test_blank_and_properties():
    img = PageImage.blank(10, 6)
    assert (img.width, img.height, img.channels) == (10, 6, GRAY8)
    assert img.pixels.min() == img.pixels.max() == 255
    rgb = PageImage.blank(3, 2, channels=RGB8, value=9)
    assert rgb.channels == RGB8 and rgb.pixels.shape == (2, 3, 3)


# -- salt and pepper -----------------------------------------------------------


def test_salt_pepper_zero_density_is_identity():
    img = checker()
    out = salt_pepper(img, 0.0, seed=1)
    assert np.array_equal(out.pixels, img.pixels)
    assert out.pixels is not img.pixels


def test_salt_pepper_full_density_binarizes():
    out = salt_pepper(checker(64, 64), 1.0, seed=2)
    values = np.unique(out.pixels)
    assert set(values.tolist()) <= {0, 255}
    white_fraction = (out.pixels == 255).mean()
    assert 0.45 < white_fraction < 0.55


def test_salt_pepper_matches_replayed_draws():
    img = checker()
    out = salt_pepper(img, 0.3, seed=9)
    corrupt, white = salt_pepper_draws(img.height, img.width, 0.3, 9)
    expected = img.pixels.copy()
    expected[corrupt & white] = 255
    expected[corrupt & ~white] = 0
    assert np.array_equal(out.pixels, expected)
    assert np.array_equal(out.pixels[~corrupt], img.pixels[~corrupt])


def test_salt_pepper_rgb_corrupts_whole_pixels():
    img = PageImage(np.full((20, 20, 3), 100, dtype=np.uint8))
    out = salt_pepper(img, 0.5, seed=3)
    corrupt, _ = salt_pepper_draws(20, 20, 0.5, 3)
    hit = out.pixels[corrupt]
    assert hit.size > 0
    assert np.array_equal(hit[:, 0], hit[:, 1]) and np.array_equal(hit[:, 1], hit[:, 2])
    assert set(np.unique(hit).tolist()) <= {0, 255}
    assert (out.pixels[~corrupt] == 100).all()


def test_salt_pepper_seed_sensitivity():
    img = checker(40, 40)
    a = salt_pepper(img, 0.2, seed=1)
    b = salt_pepper(img, 0.2, seed=2)
    again = salt_pepper(img, 0.2, seed=1)
    assert np.array_equal(a.pixels, again.pixels)
    assert not np.array_equal(a.pixels, b.pixels)


def test_salt_pepper_rejects_bad_density():
    with pytest.raises(ValueError):
        salt_pepper(checker(), -0.1, seed=1)
    with pytest.raises(ValueError):
        salt_pepper(checker(), 1.5, seed=1)


# -- skew -----------------------------------------------------------------------


def test_skew_zero_copies():
    img = checker()
    out = skew(img, 0)
    assert np.array_equal(out.pixels, img.pixels)
    assert out.pixels is not img.pixels


def test_skew_right_angles_are_exact():
    img = checker()
    for angle, k in [(90, 1), (180, 2), (270, 3), (-90, 3), (360, 0)]:
        out = skew(img, angle)
        assert np.array_equal(out.pixels, np.rot90(img.pixels, k=k))


def test_skew_small_angle_enlarges_and_fills_corners():
    img = PageImage(np.zeros((40, 40), dtype=np.uint8))
    out = skew(img, 5)
    assert out.height > 40 and out.width > 40
    for corner in (out.pixels[0, 0], out.pixels[0, -1], out.pixels[-1, 0], out.pixels[-1, -1]):
        assert corner == 255
    dark = skew(img, 5, fill=7)
    assert dark.pixels[0, 0] == 7


def test_skew_rgb_keeps_channels():
    img = PageImage(np.random.default_rng(0).integers(0, 256, (20, 30, 3), dtype=np.uint8))
    out = skew(img, 10)
    assert out.channels == RGB8
    assert out.height > 20 and out.width > 30


def test_skew_rejects_large_oblique_angles():
    with pytest.raises(ValueError):
        skew(checker(), 50)
    with pytest.raises(ValueError):
        skew(checker(), -46)


# -- opacity ----------------------------------------------------------------------


def test_opacity_identity_and_fixed_point():
    img = checker()
    assert np.array_equal(opacity(img, 1.0).pixels, img.pixels)
    white = PageImage.blank(8, 8)
    assert (opacity(white, 0.3).pixels == 255).all()


def test_opacity_half_fades_black_to_midgray():
    black = PageImage(np.zeros((5, 5), dtype=np.uint8))
    assert (opacity(black, 0.5).pixels == 128).all()


def test_opacity_monotone_in_alpha():
    img = checker()
    fainter = opacity(img, 0.3).pixels.astype(int)
    faint = opacity(img, 0.7).pixels.astype(int)
    assert (fainter >= faint).all()
    assert (faint >= img.pixels).all()


def test_opacity_rejects_bad_alpha():
    for alpha in (0.0, -0.5, 1.01):
        with pytest.raises(ValueError):
            opacity(checker(), alpha)


# -- style emission ----------------------------------------------------------------


def test_style_spec_validation():
    StyleSpec()
    with pytest.raises(ValueError):
        StyleSpec(font_size=0)
    with pytest.raises(ValueError):
        StyleSpec(opacity=0)
    with pytest.raises(ValueError):
        StyleSpec(color=(0, 0, 300))


def test_styled_document_always_states_weight_and_spacing():
    doc = emit_styled_document("hello", StyleSpec())
    assert "font-weight: normal" in doc
    assert "letter-spacing: 0em" in doc
    assert "font-style: normal" in doc
    assert '"Times New Roman"' in doc
    assert "<p>hello</p>" in doc


def test_styled_document_script_font_stacks():
    doc = emit_styled_document("नमस्ते", StyleSpec(), script="devanagari")
    assert '"Noto Sans Devanagari"' in doc
    stacked = emit_styled_document("text", StyleSpec(), script="cyrillic")
    assert 'font-family: "Arial", "Verdana"' in stacked


def test_styled_document_unknown_script_warns_and_falls_back():
    with pytest.warns(UserWarning):
        doc = emit_styled_document("x", StyleSpec(font_family="Georgia"), script="tengwar")
    assert '"Georgia"' in doc


def test_styled_document_encodes_all_fields():
    spec = StyleSpec(font_size=9.5, bold=True, italic=True, letter_spacing=0.12,
                     opacity=0.8, color=(10, 20, 30))
    doc = emit_styled_document("a\nb", spec)
    for fragment in ("font-size: 9.5pt", "font-weight: bold", "font-style: italic",
                     "letter-spacing: 0.12em", "opacity: 0.8", "color: rgb(10, 20, 30)"):
        assert fragment in doc
    assert doc.count("<p>") == 2


def test_styled_document_escapes_markup():
    doc = emit_styled_document("<b> & stuff", StyleSpec())
    assert "<p>&lt;b&gt; &amp; stuff</p>" in doc


# -- file io ------------------------------------------------------------------------


def test_png_round_trip_gray_and_rgb(tmp_path):
    gray = checker()
    write_image(gray, str(tmp_path / "g.png"))
    assert np.array_equal(read_image(str(tmp_path / "g.png")).pixels, gray.pixels)

    rgb = PageImage(np.random.default_rng(1).integers(0, 256, (12, 9, 3), dtype=np.uint8))
    write_image(rgb, str(tmp_path / "c.png"))
    assert np.array_equal(read_image(str(tmp_path / "c.png")).pixels, rgb.pixels)


def test_pgm_round_trip(tmp_path):
    gray = checker(16, 16)
    write_image(gray, str(tmp_path / "page.pgm"))
    back = read_image(str(tmp_path / "page.pgm"))
    assert back.channels == GRAY8
    assert np.array_equal(back.pixels, gray.pixels)
