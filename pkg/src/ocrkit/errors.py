"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: plain I/O problems exit 1, domain
errors (subclasses of ToolkitError) exit 2, engine failures exit 3.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all domain errors raised by this package."""


# -- corpus ------------------------------------------------------------


class ManifestError(ToolkitError):
    pass


class MalformedLine(ManifestError):
    def __init__(self, path: str, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: malformed manifest line: {reason}")
        self.path = path
        self.line_no = line_no


class DuplicateId(ManifestError):
    def __init__(self, article_id: str, path: str | None = None, line_no: int | None = None):
        where = f" ({path}:{line_no})" if path else ""
        super().__init__(f"duplicate article id {article_id!r} in manifest{where}")
        self.article_id = article_id
        self.path = path
        self.line_no = line_no


class MissingFile(ManifestError, FileNotFoundError):
    """A file referenced by a manifest entry does not exist.

    Also a FileNotFoundError so callers treating it as I/O keep working.
    """

    def __init__(self, path: str, article_id: str | None = None):
        owner = f" (article {article_id!r})" if article_id else ""
        ManifestError.__init__(self, f"referenced file not found: {path}{owner}")
        self.path = path
        self.article_id = article_id


# -- textmetrics -------------------------------------------------------


class EmptyReference(ToolkitError):
    """CER is undefined for a reference that normalizes to zero units."""

    def __init__(self, article_id: str | None = None):
        where = f" (article {article_id!r})" if article_id else ""
        super().__init__(f"reference text is empty after normalization{where}")
        self.article_id = article_id


class EmptyCorpus(ToolkitError):
    def __init__(self, what: str = "corpus"):
        super().__init__(f"{what} contains no entries")


# -- validation --------------------------------------------------------


class GroupTooSmall(ToolkitError):
    def __init__(self, group: str, size: int):
        super().__init__(
            f"group {group!r} has {size} article(s); need at least 2 for anomaly statistics"
        )
        self.group = group
        self.size = size


# -- errormodel --------------------------------------------------------


class EmptyModel(ToolkitError):
    def __init__(self, detail: str = "error model has no entries"):
        super().__init__(detail)


# -- inject ------------------------------------------------------------


class Unreachable(ToolkitError):
    """The requested edit count exceeds the eligible sites in the text."""

    def __init__(self, requested: int, max_achievable: int):
        super().__init__(
            f"cannot place {requested} edits: only {max_achievable} eligible sites"
        )
        self.requested = requested
        self.max_achievable = max_achievable


class PlanMismatch(ToolkitError):
    """An edit plan does not fit the text it is being applied to."""


# -- report ------------------------------------------------------------


class UnknownGroup(ToolkitError):
    def __init__(self, language: str):
        super().__init__(f"language {language!r} is not mapped to any script group")
        self.language = language


class UnknownMapping(ToolkitError):
    def __init__(self, code: str, engine: str, suggestions: list[str] | None = None):
        hint = f"; closest known codes: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"no {engine!r} code mapping for language {code!r}{hint}")
        self.code = code
        self.engine = engine
        self.suggestions = suggestions or []


# -- engines -----------------------------------------------------------


class EngineError(ToolkitError):
    """Base class for OCR engine invocation failures (CLI exit code 3)."""


class EngineUnavailable(EngineError):
    pass


class UnsupportedLanguage(EngineError):
    def __init__(self, engine: str, language: str):
        super().__init__(f"engine {engine!r} does not support language {language!r}")
        self.engine = engine
        self.language = language


class EngineTimeout(EngineError):
    def __init__(self, engine: str, seconds: float):
        super().__init__(f"engine {engine!r} timed out after {seconds:g}s")
        self.engine = engine
        self.seconds = seconds
