"""Adapters for invoking OCR systems on page images.

Three adapter kinds share one contract: recognize(image_ref, language)
returns an OcrResult whose hypothesis text is captured verbatim (no
normalization happens at this layer). A record/replay cache keyed by
(engine, image content hash, language) makes every downstream pipeline
runnable with no engine installed and no network access.

The HTTP adapter reads its credential from an environment variable,
never from configuration files or arguments.
"""

from __future__ import annotations

import hashlib
import json
import os
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .corpus import Manifest
from .errormodel import ErrorModel
from .errors import (
    EngineTimeout,
    EngineUnavailable,
    ManifestError,
    MissingFile,
    UnsupportedLanguage,
)
from .inject import InjectionConfig, inject
from .languages import map_language_code
from .textmetrics import DEFAULT_POLICY, EDIT_KINDS, NormalizationPolicy

EXTERNAL_COMMAND = "external_command"
HTTP_SERVICE = "http_service"
MOCK = "mock"


@dataclass(frozen=True)
class OcrResult:
    engine: str
    language: str
    article_id: str
    hypothesis_text: str  # may be empty, never absent
    latency_ms: int


class EngineAdapter:
    """Base contract. Subclasses set name, kind, supported_languages
    (None means unrestricted) and implement _recognize."""

    name: str = "engine"
    kind: str = MOCK
    supported_languages: frozenset[str] | None = None

    def recognize(self, image_ref: str, language: str, article_id: str = "") -> OcrResult:
        if self.supported_languages is not None and language not in self.supported_languages:
            raise UnsupportedLanguage(self.name, language)
        start = time.monotonic()
        text = self._recognize(image_ref, language)
        latency_ms = int(round((time.monotonic() - start) * 1000))
        return OcrResult(
            engine=self.name,
            language=language,
            article_id=article_id,
            hypothesis_text=text,
            latency_ms=latency_ms,
        )

    def _recognize(self, image_ref: str, language: str) -> str:
        raise NotImplementedError


def recognize(adapter: EngineAdapter, image_ref: str, language: str, article_id: str = "") -> OcrResult:
    return adapter.recognize(image_ref, language, article_id)


class MockAdapter(EngineAdapter):
    """Reads the 'recognized' text from a sidecar transcript file at
    image_ref. With a noise model attached it corrupts the transcript to
    the configured target CER, seeding from the text content so results
    do not depend on call order.

    Tracks in-flight recognitions so tests can assert concurrency
    bounds; delay_s widens the observation window."""

    kind = MOCK

    def __init__(
        self,
        name: str = "mock",
        languages: Iterable[str] | None = None,
        noise_model: ErrorModel | None = None,
        noise_target_cer: float = 0.0,
        noise_kinds: Sequence[str] = EDIT_KINDS,
        noise_seed: int = 0,
        policy: NormalizationPolicy = DEFAULT_POLICY,
        delay_s: float = 0.0,
    ):
        self.name = name
        self.supported_languages = frozenset(languages) if languages is not None else None
        self.noise_model = noise_model
        self.noise_target_cer = noise_target_cer
        self.noise_kinds = tuple(noise_kinds)
        self.noise_seed = noise_seed
        self.policy = policy
        self.delay_s = delay_s
        self._lock = threading.Lock()
        self._in_flight = 0
        self.max_in_flight = 0

    def _recognize(self, image_ref: str, language: str) -> str:
        with self._lock:
            self._in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self._in_flight)
        try:
            if self.delay_s:
                time.sleep(self.delay_s)
            try:
                with open(image_ref, encoding="utf-8") as fh:
                    text = fh.read()
            except FileNotFoundError:
                raise EngineUnavailable(f"mock transcript not found: {image_ref}") from None
            if self.noise_model is None or self.noise_target_cer == 0:
                return text
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            seed = (self.noise_seed ^ int.from_bytes(digest[:8], "big")) & 0xFFFFFFFFFFFFFFFF
            config = InjectionConfig(
                target_cer=self.noise_target_cer,
                kinds=self.noise_kinds,
                seed=seed,
            )
            return inject(text, self.noise_model, config, self.policy).noisy_text
        finally:
            with self._lock:
                self._in_flight -= 1


class ExternalCommandAdapter(EngineAdapter):
    """Spawns a binary per page and reads its stdout as UTF-8.

    argv_template entries may use {image}, {lang}, and any key from the
    options map, e.g. ["tesseract", "{image}", "stdout", "-l", "{lang}",
    "--psm", "{psm}"]. When code_table names a known engine column, ISO
    codes are mapped to that engine's model identifiers first."""

    kind = EXTERNAL_COMMAND

    def __init__(
        self,
        name: str,
        argv_template: Sequence[str],
        languages: Iterable[str] | None = None,
        timeout_s: float = 120.0,
        options: dict[str, str] | None = None,
        code_table: str | None = None,
    ):
        self.name = name
        self.argv_template = list(argv_template)
        self.supported_languages = frozenset(languages) if languages is not None else None
        self.timeout_s = timeout_s
        self.options = dict(options or {})
        self.code_table = code_table

    def _recognize(self, image_ref: str, language: str) -> str:
        if self.code_table is not None:
            language = map_language_code(language, self.code_table)
        fields = {"image": image_ref, "lang": language, **self.options}
        try:
            argv = [part.format(**fields) for part in self.argv_template]
        except KeyError as exc:
            raise ValueError(f"argv template references unknown option {exc}") from None
        try:
            proc = subprocess.run(
                argv,
                capture_output=True,
                timeout=self.timeout_s,
            )
        except FileNotFoundError:
            raise EngineUnavailable(f"engine binary not found: {argv[0]}") from None
        except subprocess.TimeoutExpired:
            raise EngineTimeout(self.name, self.timeout_s) from None
        if proc.returncode != 0:
            stderr = proc.stderr.decode("utf-8", errors="replace").strip()
            raise EngineUnavailable(
                f"engine {self.name!r} exited with code {proc.returncode}: {stderr}"
            )
        return proc.stdout.decode("utf-8")


class HttpAdapter(EngineAdapter):
    """POSTs image bytes to an OCR service and extracts the hypothesis
    from the JSON response via a dotted path (list indices as integers,
    e.g. "responses.0.fullTextAnnotation.text").

    The API key is read from the api_key_env environment variable at
    call time. Transient failures (connection errors, HTTP 429/5xx) are
    retried with exponential backoff, at most 3 attempts total; calls
    are spaced at least min_interval_s apart."""

    kind = HTTP_SERVICE
    max_attempts = 3

    def __init__(
        self,
        name: str,
        url: str,
        api_key_env: str,
        languages: Iterable[str] | None = None,
        json_path: str = "text",
        language_param: str = "language",
        timeout_s: float = 30.0,
        min_interval_s: float = 0.0,
        backoff_s: float = 0.5,
        options: dict[str, str] | None = None,
        code_table: str | None = None,
    ):
        self.name = name
        self.url = url
        self.api_key_env = api_key_env
        self.supported_languages = frozenset(languages) if languages is not None else None
        self.json_path = json_path
        self.language_param = language_param
        self.timeout_s = timeout_s
        self.min_interval_s = min_interval_s
        self.backoff_s = backoff_s
        self.options = dict(options or {})
        self.code_table = code_table
        self._lock = threading.Lock()
        self._last_call = 0.0

    def _throttle(self) -> None:
        if self.min_interval_s <= 0:
            return
        with self._lock:
            wait = self._last_call + self.min_interval_s - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            self._last_call = time.monotonic()

    def _extract(self, payload, path: str):
        node = payload
        for part in path.split("."):
            try:
                node = node[int(part)] if isinstance(node, list) else node[part]
            except (KeyError, IndexError, TypeError, ValueError):
                raise EngineUnavailable(
                    f"engine {self.name!r} response has no field at {path!r}"
                ) from None
        if not isinstance(node, str):
            raise EngineUnavailable(f"engine {self.name!r} field {path!r} is not text")
        return node

    def _recognize(self, image_ref: str, language: str) -> str:
        import requests

        key = os.environ.get(self.api_key_env)
        if not key:
            raise EngineUnavailable(
                f"engine {self.name!r} needs credential in ${self.api_key_env}"
            )
        if self.code_table is not None:
            language = map_language_code(language, self.code_table)
        try:
            with open(image_ref, "rb") as fh:
                image_bytes = fh.read()
        except FileNotFoundError:
            raise MissingFile(image_ref) from None

        params = {self.language_param: language, **self.options}
        headers = {
            "Authorization": f"Bearer {key}",
            "Content-Type": "application/octet-stream",
        }
        last_error = "no attempts made"
        for attempt in range(self.max_attempts):
            if attempt:
                time.sleep(self.backoff_s * 2 ** (attempt - 1))
            self._throttle()
            try:
                resp = requests.post(
                    self.url,
                    params=params,
                    headers=headers,
                    data=image_bytes,
                    timeout=self.timeout_s,
                )
            except requests.Timeout:
                raise EngineTimeout(self.name, self.timeout_s) from None
            except requests.ConnectionError as exc:
                last_error = f"connection error: {exc}"
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = f"HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise EngineUnavailable(
                    f"engine {self.name!r} returned HTTP {resp.status_code}: {resp.text[:200]}"
                )
            try:
                payload = resp.json()
            except ValueError:
                raise EngineUnavailable(f"engine {self.name!r} returned non-JSON body") from None
            return self._extract(payload, self.json_path)
        raise EngineUnavailable(
            f"engine {self.name!r} failed after {self.max_attempts} attempts: {last_error}"
        )


def _image_hash(image_ref: str) -> str:
    try:
        with open(image_ref, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except FileNotFoundError:
        raise MissingFile(image_ref) from None


class ReplayCache:
    """Content-addressed store of OCR results under a directory.

    Keys are (engine, sha256 of image bytes, language); values are JSON
    files written atomically, safe for concurrent readers and writers.
    """

    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)

    def _path(self, engine: str, image_hash: str, language: str) -> str:
        return os.path.join(self.root, f"{engine}_{image_hash}_{language}.json")

    def get(self, engine: str, image_hash: str, language: str) -> dict | None:
        try:
            with open(self._path(engine, image_hash, language), encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None

    def put(self, engine: str, image_hash: str, language: str, payload: dict) -> None:
        path = self._path(engine, image_hash, language)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, ensure_ascii=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class CachedAdapter(EngineAdapter):
    """Record/replay wrapper around another adapter.

    mode "record": always call the engine and store the result.
    mode "replay": never call the engine; a cache miss is an error.
    mode "auto": use the cache when possible, call and record otherwise.

    In replay mode inner may be a bare engine name string, so cached
    evaluations run with no engine configured at all."""

    def __init__(self, inner: EngineAdapter | str, cache: ReplayCache, mode: str = "auto"):
        if mode not in ("record", "replay", "auto"):
            raise ValueError(f"mode must be record/replay/auto, got {mode!r}")
        self._inner = None if isinstance(inner, str) else inner
        self.name = inner if isinstance(inner, str) else inner.name
        self.kind = MOCK if self._inner is None else self._inner.kind
        self.supported_languages = None if self._inner is None else self._inner.supported_languages
        self.cache = cache
        self.mode = mode

    def recognize(self, image_ref: str, language: str, article_id: str = "") -> OcrResult:
        image_hash = _image_hash(image_ref)
        if self.mode != "record":
            hit = self.cache.get(self.name, image_hash, language)
            if hit is not None:
                return OcrResult(
                    engine=self.name,
                    language=language,
                    article_id=article_id,
                    hypothesis_text=hit["hypothesis_text"],
                    latency_ms=int(hit["latency_ms"]),
                )
            if self.mode == "replay":
                raise EngineUnavailable(
                    f"no cached result for ({self.name}, {image_hash[:12]}…, {language}) "
                    "and replay mode forbids engine calls"
                )
        if self._inner is None:
            raise EngineUnavailable(f"engine {self.name!r} is not configured")
        result = self._inner.recognize(image_ref, language, article_id)
        self.cache.put(
            self.name,
            image_hash,
            language,
            {"hypothesis_text": result.hypothesis_text, "latency_ms": result.latency_ms},
        )
        return result


def run_evaluation(
    manifest: Manifest,
    adapter: EngineAdapter,
    parallelism: int = 1,
) -> list[OcrResult]:
    """Recognize every manifest article, in manifest order. With
    parallelism > 1 recognitions run concurrently up to that limit;
    result order is still deterministic."""
    entries = list(manifest)
    for entry in entries:
        if entry.image_path is None:
            raise ManifestError(f"article {entry.article_id!r} has no image_path")

    def work(entry) -> OcrResult:
        return adapter.recognize(
            manifest.resolve(entry.image_path), entry.language, entry.article_id
        )

    if parallelism > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(work, entries))
    return [work(entry) for entry in entries]
