"""Embedded language table: script, script group, and engine code mappings.

Covers the 60 benchmark languages (plus English, kept as an identity row
for engine code mapping). Group names are the eight script/region
clusters used throughout: Latin, Cyrillic, Perso-Arabic, North Indic,
South Indic, SEA, CJK, Other.

Engine code columns are a curated fixture: languages without a dedicated
command-line model are mapped to that engine's script-level model id.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

from .errors import UnknownMapping

GROUPS = (
    "Latin",
    "Cyrillic",
    "Perso-Arabic",
    "North Indic",
    "South Indic",
    "SEA",
    "CJK",
    "Other",
)

UNKNOWN_GROUP = "unknown-group"


@dataclass(frozen=True)
class LanguageInfo:
    code: str  # ISO 639-3
    name: str
    script: str
    group: str
    tesseract: str  # command-line engine model id
    bcp47: str  # HTTP engine language hint


def _li(code, name, script, group, tesseract, bcp47):
    return LanguageInfo(code, name, script, group, tesseract, bcp47)


LANGUAGES: dict[str, LanguageInfo] = {
    li.code: li
    for li in [
        # Latin
        _li("ast", "Asturian", "Latin", "Latin", "script/Latin", "ast"),
        _li("ceb", "Cebuano", "Latin", "Latin", "ceb", "ceb"),
        _li("ful", "Fula", "Latin", "Latin", "script/Latin", "ff"),
        _li("lug", "Ganda", "Latin", "Latin", "script/Latin", "lg"),
        _li("isl", "Icelandic", "Latin", "Latin", "isl", "is"),
        _li("lin", "Lingala", "Latin", "Latin", "script/Latin", "ln"),
        _li("mri", "Maori", "Latin", "Latin", "mri", "mi"),
        _li("nya", "Nyanja", "Latin", "Latin", "script/Latin", "ny"),
        _li("orm", "Oromo", "Latin", "Latin", "script/Latin", "om"),
        _li("pol", "Polish", "Latin", "Latin", "pol", "pl"),
        _li("por", "Portuguese (Por.)", "Latin", "Latin", "por", "pt"),
        _li("ron", "Romanian", "Latin", "Latin", "ron", "ro"),
        _li("sna", "Shona", "Latin", "Latin", "script/Latin", "sn"),
        _li("slk", "Slovak", "Latin", "Latin", "slk", "sk"),
        _li("slv", "Slovenian", "Latin", "Latin", "slv", "sl"),
        _li("som", "Somali", "Latin", "Latin", "script/Latin", "so"),
        _li("swh", "Swahili", "Latin", "Latin", "swa", "sw"),
        _li("swe", "Swedish", "Latin", "Latin", "swe", "sv"),
        _li("tur", "Turkish", "Latin", "Latin", "tur", "tr"),
        _li("umb", "Umbundu", "Latin", "Latin", "script/Latin", "umb"),
        _li("uzb", "Uzbek", "Latin", "Latin", "uzb", "uz"),
        _li("vie", "Vietnamese", "Latin", "Latin", "vie", "vi"),
        _li("wol", "Wolof", "Latin", "Latin", "script/Latin", "wo"),
        _li("zul", "Zulu", "Latin", "Latin", "script/Latin", "zu"),
        # Cyrillic
        _li("bel", "Belarusian", "Cyrillic", "Cyrillic", "bel", "be"),
        _li("bul", "Bulgarian", "Cyrillic", "Cyrillic", "bul", "bg"),
        _li("kaz", "Kazakh", "Cyrillic", "Cyrillic", "kaz", "kk"),
        _li("kir", "Kyrgyz", "Cyrillic", "Cyrillic", "kir", "ky"),
        _li("mkd", "Macedonian", "Cyrillic", "Cyrillic", "mkd", "mk"),
        _li("mon", "Mongolian", "Cyrillic", "Cyrillic", "mon", "mn"),
        _li("rus", "Russian", "Cyrillic", "Cyrillic", "rus", "ru"),
        _li("srp", "Serbian", "Cyrillic", "Cyrillic", "srp", "sr"),
        _li("tgk", "Tajik", "Cyrillic", "Cyrillic", "tgk", "tg"),
        _li("ukr", "Ukrainian", "Cyrillic", "Cyrillic", "ukr", "uk"),
        # Perso-Arabic
        _li("ara", "Arabic", "Arabic", "Perso-Arabic", "ara", "ar"),
        _li("ckb", "Sorani Kurdish", "Arabic", "Perso-Arabic", "script/Arabic", "ckb"),
        _li("pus", "Pashto", "Perso-Arabic", "Perso-Arabic", "pus", "ps"),
        _li("urd", "Urdu", "Perso-Arabic", "Perso-Arabic", "urd", "ur"),
        # North Indic
        _li("ben", "Bengali", "Bengali", "North Indic", "ben", "bn"),
        _li("hin", "Hindi", "Devanagari", "North Indic", "hin", "hi"),
        _li("mar", "Marathi", "Devanagari", "North Indic", "mar", "mr"),
        _li("npi", "Nepali", "Devanagari", "North Indic", "nep", "ne"),
        _li("guj", "Gujarati", "Gujarati", "North Indic", "guj", "gu"),
        _li("pan", "Punjabi", "Gurmukhi", "North Indic", "pan", "pa"),
        # South Indic
        _li("mal", "Malayalam", "Malayalam", "South Indic", "mal", "ml"),
        _li("tam", "Tamil", "Tamil", "South Indic", "tam", "ta"),
        _li("kan", "Kannada", "Telugu-Kannada", "South Indic", "kan", "kn"),
        _li("tel", "Telugu", "Telugu-Kannada", "South Indic", "tel", "te"),
        # SEA
        _li("khm", "Khmer", "Khmer", "SEA", "khm", "km"),
        _li("lao", "Lao", "Lao", "SEA", "lao", "lo"),
        _li("mya", "Burmese", "Myanmar", "SEA", "mya", "my"),
        _li("tha", "Thai", "Thai", "SEA", "tha", "th"),
        # CJK
        _li("jpn", "Japanese", "Han, Hiragana, Katakana", "CJK", "jpn", "ja"),
        _li("kor", "Korean", "Hangul", "CJK", "kor", "ko"),
        _li("zho", "Chinese Simpl", "Hant", "CJK", "chi_sim", "zh"),
        # Other
        _li("hye", "Armenian", "Armenian", "Other", "hye", "hy"),
        _li("amh", "Amharic", "Ge'ez", "Other", "amh", "am"),
        _li("kat", "Georgian", "Georgian", "Other", "kat", "ka"),
        _li("ell", "Greek", "Greek", "Other", "ell", "el"),
        _li("heb", "Hebrew", "Hebrew", "Other", "heb", "he"),
        # identity row; not part of the 60-language benchmark
        _li("eng", "English", "Latin", "Latin", "eng", "en"),
    ]
}

_ENGINE_COLUMNS = {
    "tesseract": "tesseract",
    "google-vision": "bcp47",
}


def lookup(code: str) -> LanguageInfo | None:
    return LANGUAGES.get(code)


def group_of(code: str) -> str:
    """Script group for a language code, or the unknown-group marker."""
    info = LANGUAGES.get(code)
    return info.group if info is not None else UNKNOWN_GROUP


def map_language_code(iso: str, engine: str) -> str:
    """Translate an ISO 639 code into an engine-specific model/language id.

    Raises UnknownMapping for codes outside the shipped table, listing the
    closest known codes, and for engine families the table does not cover.
    """
    column = _ENGINE_COLUMNS.get(engine)
    if column is None:
        raise UnknownMapping(iso, engine, sorted(_ENGINE_COLUMNS))
    info = LANGUAGES.get(iso)
    if info is None:
        near = difflib.get_close_matches(iso, LANGUAGES.keys(), n=3, cutoff=0.4)
        raise UnknownMapping(iso, engine, near)
    return getattr(info, column)
