"""Bucle de traduccion: fragmenta por oraciones, respeta el limite de caracteres
y espera entre peticiones. El backend es intercambiable (mock, identidad o un
comando externo)."""
import json
import os
import shlex
import subprocess
import time
from dataclasses import dataclass, replace
from typing import Protocol

from .corpus import Corpus
from .errors import BackendFailure, CheckpointError, ConfigError, MissingFile, OversizeSentence
from .textkit import WORD_RE, split_sentences

MAX_RETRIES = 3


@dataclass(frozen=True)
class TranslateConfig:
    source_lang: str = "en"
    target_lang: str = "pt"
    max_chars: int = 5000
    delay: float = 1.0
    per_sentence: bool = False

    def __post_init__(self):
        if self.max_chars < 1:
            raise ConfigError("max_chars debe ser >= 1")
        if self.delay < 0:
            raise ConfigError("delay debe ser >= 0")


class TransientBackendError(Exception):
    """Fallo recuperable del backend; el bucle reintenta."""


class TranslationBackend(Protocol):
    def translate(self, chunk: str, source: str, target: str) -> str: ...


class IdentityBackend:
    def __init__(self):
        self.calls = []

    def translate(self, chunk, source, target):
        self.calls.append((time.monotonic(), chunk))
        return chunk


class MockBackend:
    """Sustitucion palabra a palabra; las palabras desconocidas pasan sin cambios."""

    def __init__(self, mapping):
        self.mapping = {k.lower(): v for k, v in mapping.items()}
        self.calls = []

    @classmethod
    def from_file(cls, path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                mapping = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ConfigError(f"mapa de traduccion ilegible '{path}': {e}")
        if not isinstance(mapping, dict) or not all(isinstance(v, str) for v in mapping.values()):
            raise ConfigError(f"'{path}' debe ser un objeto palabra -> traduccion")
        return cls(mapping)

    def _swap(self, match):
        word = match.group(0)
        target = self.mapping.get(word.lower())
        if target is None:
            return word
        return target[:1].upper() + target[1:] if word[:1].isupper() else target

    def translate(self, chunk, source, target):
        self.calls.append((time.monotonic(), chunk))
        return WORD_RE.sub(self._swap, chunk)


class CommandBackend:
    """Ejecuta un traductor externo: fragmento por stdin, traduccion por stdout."""

    def __init__(self, command):
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)

    def translate(self, chunk, source, target):
        env = dict(os.environ, NEWSFLOW_SRC=source, NEWSFLOW_TGT=target)
        try:
            result = subprocess.run(self.argv, input=chunk, capture_output=True, text=True,
                                    encoding="utf-8", env=env)
        except OSError as e:
            raise TransientBackendError(str(e))
        if result.returncode != 0:
            raise TransientBackendError(result.stderr.strip() or f"codigo de salida {result.returncode}")
        output = result.stdout
        # salto de linea final que anade el traductor
        if output.endswith("\n") and not chunk.endswith("\n"):
            output = output[:-1]
        return output


def make_backend(spec):
    """Construye un backend a partir de `mock:<mapa.json>`, `command:<exe>` o `identity`."""
    kind, _, arg = spec.partition(":")
    if kind == "identity":
        return IdentityBackend()
    if kind == "mock":
        if not os.path.exists(arg):
            raise MissingFile(arg)
        return MockBackend.from_file(arg)
    if kind == "command" and arg:
        return CommandBackend(arg)
    raise ConfigError(f"backend desconocido '{spec}' (usa mock:<archivo>, command:<exe> o identity)")


def chunk_for_translation(text, max_chars, per_sentence=False):
    if len(text) <= max_chars:
        return [text]
    sentences = split_sentences(text)
    for i, sentence in enumerate(sentences):
        if len(sentence) > max_chars:
            raise OversizeSentence(i, len(sentence), max_chars)
    if per_sentence:
        return sentences
    chunks, current = [], ""
    for sentence in sentences:
        if current and len(current) + len(sentence) > max_chars:
            chunks.append(current)
            current = ""
        current += sentence
    if current:
        chunks.append(current)
    return chunks


class RateLimiter:
    """Garantiza al menos `delay` segundos entre el fin de una peticion y el inicio de la siguiente."""

    def __init__(self, delay, clock=time.monotonic, sleep=time.sleep):
        self.delay = delay
        self.clock = clock
        self.sleep = sleep
        self._last = None

    def wait(self, delay=None):
        delay = self.delay if delay is None else delay
        if self._last is not None:
            remaining = self._last + delay - self.clock()
            if remaining > 0:
                self.sleep(remaining)

    def mark(self):
        self._last = self.clock()


def _translate_chunk(index, chunk, backend, cfg, limiter):
    delay, reason = cfg.delay, ""
    for _ in range(MAX_RETRIES + 1):
        limiter.wait(delay)
        try:
            return backend.translate(chunk, cfg.source_lang, cfg.target_lang)
        except TransientBackendError as e:
            reason = str(e)
            delay *= 2
        finally:
            limiter.mark()
    raise BackendFailure(index, reason)


def translate_document(doc, backend, cfg=TranslateConfig(), limiter=None):
    if doc.language == cfg.target_lang:
        return doc
    limiter = limiter or RateLimiter(cfg.delay)
    chunks = chunk_for_translation(doc.text, cfg.max_chars, cfg.per_sentence)
    translated = [_translate_chunk(i, chunk, backend, cfg, limiter) for i, chunk in enumerate(chunks)]
    return replace(doc, text="".join(translated), language=cfg.target_lang)


def read_checkpoint(path):
    """Lee los documentos ya traducidos. Una ultima linea truncada se ignora."""
    done = {}
    if not path or not os.path.exists(path):
        return done
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if isinstance(record, dict) and "id" in record:
                    done[record["id"]] = record
    except OSError as e:
        raise CheckpointError(f"no se pudo leer el checkpoint '{path}': {e}")
    return done


def _append_checkpoint(path, doc):
    record = {"id": doc.id, "text": doc.text, "language": doc.language}
    try:
        with open(path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
            f.flush()
            os.fsync(f.fileno())
    except OSError as e:
        raise CheckpointError(f"no se pudo escribir el checkpoint '{path}': {e}")


def translate_corpus(corpus, backend, cfg=TranslateConfig(), checkpoint=None, on_document=None):
    """Traduce el corpus en orden. Con `checkpoint`, cada documento terminado se
    registra en disco y una ejecucion reanudada no lo vuelve a traducir."""
    done = read_checkpoint(checkpoint)
    limiter = RateLimiter(cfg.delay)
    out = []
    for doc in corpus:
        if doc.id in done:
            record = done[doc.id]
            translated = replace(doc, text=record["text"], language=record["language"])
        else:
            translated = translate_document(doc, backend, cfg, limiter)
            if checkpoint:
                _append_checkpoint(checkpoint, translated)
        out.append(translated)
        if on_document:
            on_document(translated)
    return Corpus(out, corpus.provenance)
