"""Per-sentence entity annotations from sidecar files, gazetteers, or a
remote annotation service.

Entity recognition itself is out of scope: this module only attaches
externally produced (surface, class-set) mentions to sentences. Entities
whose class set is empty are kept in the data model but ignored by the
similarity computations downstream.
"""

from __future__ import annotations

import json
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError, RemoteServiceError


@dataclass(frozen=True)
class Entity:
    """A mention with its taxonomy classes (deduplicated, order kept)."""

    surface: str
    classes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(dict.fromkeys(self.classes)))

    @property
    def has_classes(self) -> bool:
        return bool(self.classes)


@dataclass(frozen=True)
class Sentence:
    text: str
    entities: tuple[Entity, ...] = ()


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    sentences: tuple[Sentence, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.sentences:
            raise FormatError(f"document {self.doc_id!r} has no sentences")

    def __len__(self) -> int:
        return len(self.sentences)


def read_sentences(path: str | Path) -> list[str]:
    """One sentence per line; blank lines dropped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip()]


# ---------------------------------------------------------------------------
# Sidecar files: one JSON record per line
# ---------------------------------------------------------------------------


def load_annotations(sentences: list[str], sidecar: str | Path, doc_id: str = "doc") -> AnnotatedDocument:
    """Attach sidecar records {"sentence", "surface", "classes"} to sentences.

    Records may arrive in any order; entity order within a sentence follows
    record order. Sentences without records get empty entity lists.
    """
    per_sentence: dict[int, list[Entity]] = {}
    text = Path(sidecar).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            idx = record["sentence"]
            surface = record["surface"]
            classes = record["classes"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"malformed sidecar record at line {lineno}: {raw!r}") from exc
        if not isinstance(idx, int) or isinstance(idx, bool):
            raise FormatError(f"malformed sidecar record at line {lineno}: sentence index {idx!r}")
        if not 0 <= idx < len(sentences):
            raise FormatError(
                f"sidecar line {lineno}: sentence index {idx} out of range for {len(sentences)} sentences"
            )
        if not isinstance(surface, str) or not isinstance(classes, list):
            raise FormatError(f"malformed sidecar record at line {lineno}: {raw!r}")
        per_sentence.setdefault(idx, []).append(Entity(surface, tuple(classes)))
    return AnnotatedDocument(
        doc_id=doc_id,
        sentences=tuple(
            Sentence(text=s, entities=tuple(per_sentence.get(i, ())))
            for i, s in enumerate(sentences)
        ),
    )


def save_annotations(doc: AnnotatedDocument, sidecar: str | Path) -> None:
    """Write the sidecar for a document; inverse of load_annotations."""
    lines = []
    for i, sentence in enumerate(doc.sentences):
        for ent in sentence.entities:
            lines.append(
                json.dumps(
                    {"sentence": i, "surface": ent.surface, "classes": list(ent.classes)},
                    ensure_ascii=False,
                )
            )
    Path(sidecar).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


# ---------------------------------------------------------------------------
# Gazetteer: deterministic offline annotator
# ---------------------------------------------------------------------------


def load_gazetteer(path: str | Path) -> dict[str, list[str]]:
    """Gazetteer file: {"surface string": ["ClassId", ...], ...}."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"gazetteer file {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not all(
        isinstance(k, str) and k and isinstance(v, list) for k, v in payload.items()
    ):
        raise FormatError(f"gazetteer file {path} must map surface strings to class lists")
    return payload


def _is_word_char(ch: str) -> bool:
    return ch.isalnum()


def gazetteer_annotate(
    sentences: list[str], gazetteer: dict[str, list[str]], doc_id: str = "doc"
) -> AnnotatedDocument:
    """Longest-match, case-insensitive scan of each sentence.

    Matches must start and end on word boundaries; once a surface matches,
    the scan resumes after it, so shorter overlapping surfaces are
    suppressed. The recorded surface is the sentence text as written.
    """
    if any(not key for key in gazetteer):
        raise FormatError("gazetteer keys must be non-empty")
    lowered = sorted(
        ((key.lower(), key) for key in gazetteer), key=lambda kv: -len(kv[0])
    )
    annotated = []
    for text in sentences:
        low = text.lower()
        entities = []
        pos = 0
        n = len(low)
        while pos < n:
            if not _is_word_char(low[pos]) or (pos > 0 and _is_word_char(low[pos - 1])):
                pos += 1
                continue
            for key_low, key in lowered:
                end = pos + len(key_low)
                if low.startswith(key_low, pos) and (end == n or not _is_word_char(low[end])):
                    entities.append(Entity(text[pos:end], tuple(gazetteer[key])))
                    pos = end
                    break
            else:
                pos += 1
        annotated.append(Sentence(text=text, entities=tuple(entities)))
    return AnnotatedDocument(doc_id=doc_id, sentences=tuple(annotated))


# ---------------------------------------------------------------------------
# Remote annotation service client
# ---------------------------------------------------------------------------

SENTENCE_JOINER = "\n"
DEFAULT_CONFIDENCE = 0.5  # service default; not calibrated against any corpus


def remote_annotate(
    sentences: list[str],
    endpoint: str,
    confidence: float = DEFAULT_CONFIDENCE,
    doc_id: str = "doc",
    *,
    timeout: float = 30.0,
    attempts: int = 3,
    backoff: float = 0.5,
) -> AnnotatedDocument:
    """Annotate a whole document with one request to a REST service.

    Request body: {"text": ..., "confidence": ...}; expected response:
    {"mentions": [{"offset": int, "surface": str, "types": [str, ...]}]}.
    Sentences are joined with a newline and mentions are mapped back to
    sentences by character offset. Transient network failures are retried
    ``attempts`` times with exponential backoff before giving up.
    """
    if not 0.0 <= confidence <= 1.0:
        raise ValueError(f"confidence must be in [0, 1], got {confidence}")
    document = SENTENCE_JOINER.join(sentences)
    payload = json.dumps({"text": document, "confidence": confidence}).encode("utf-8")

    response_body = None
    last_error: Exception | None = None
    for attempt in range(attempts):
        if attempt:
            time.sleep(backoff * (2 ** (attempt - 1)))
        request = urllib.request.Request(
            endpoint, data=payload, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(request, timeout=timeout) as resp:
                response_body = resp.read()
            break
        except (urllib.error.URLError, OSError) as exc:
            last_error = exc
    if response_body is None:
        raise RemoteServiceError(
            f"annotation service {endpoint} unreachable after {attempts} attempts: {last_error}"
        )

    try:
        parsed = json.loads(response_body.decode("utf-8"))
        mentions = parsed["mentions"]
        assert isinstance(mentions, list)
    except (ValueError, KeyError, AssertionError) as exc:
        raise RemoteServiceError(f"annotation service returned a non-parseable response: {exc}") from exc

    # Sentence start offsets within the joined document.
    starts = []
    cursor = 0
    for s in sentences:
        starts.append(cursor)
        cursor += len(s) + len(SENTENCE_JOINER)

    per_sentence: dict[int, list[Entity]] = {}
    for m in mentions:
        try:
            offset = m["offset"]
            surface = m["surface"]
            types = m["types"]
        except (KeyError, TypeError) as exc:
            raise RemoteServiceError(f"malformed mention in service response: {m!r}") from exc
        if not isinstance(offset, int) or not 0 <= offset < len(document):
            raise RemoteServiceError(f"mention offset {offset!r} outside document")
        if document[offset : offset + len(surface)] != surface:
            raise RemoteServiceError(
                f"mention surface {surface!r} does not match document text at offset {offset}"
            )
        sent_idx = 0
        for i, start in enumerate(starts):
            if offset >= start:
                sent_idx = i
            else:
                break
        per_sentence.setdefault(sent_idx, []).append(Entity(surface, tuple(types)))

    return AnnotatedDocument(
        doc_id=doc_id,
        sentences=tuple(
            Sentence(text=s, entities=tuple(per_sentence.get(i, ())))
            for i, s in enumerate(sentences)
        ),
    )
