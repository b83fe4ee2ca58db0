"""Aumento de datos por sustitucion de sustantivos con su sinonimo mas parecido."""
import json
from dataclasses import dataclass, replace
from enum import Enum

from .corpus import Corpus
from .errors import ConfigError, DuplicateId
from .lexicon import similarity, synonyms, tag
from .textkit import Pos, tokenize


class AugmentMode(str, Enum):
    APPEND = "append"
    REPLACE = "replace"


AUGMENTED_SUFFIX = "-aug"


@dataclass(frozen=True)
class AugmentConfig:
    threshold: float = 0.40
    mode: AugmentMode = AugmentMode.APPEND
    seed: int = 0  # reservado; el procedimiento actual es determinista

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold debe estar en [0, 1], se recibio {self.threshold}")
        object.__setattr__(self, "mode", AugmentMode(self.mode))


@dataclass(frozen=True)
class Replacement:
    token_index: int
    original: str
    substitute: str
    similarity: float


@dataclass(frozen=True)
class AugmentTrace:
    replacements: tuple = ()
    doc_id: str = ""

    def __len__(self):
        return len(self.replacements)

    def records(self):
        return [
            {"doc_id": self.doc_id, "token_index": r.token_index, "original": r.original,
             "substitute": r.substitute, "similarity": r.similarity}
            for r in self.replacements
        ]


def match_case(template, word):
    if len(template) > 1 and template.isupper():
        return word.upper()
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def best_synonym(word, bundle):
    """Devuelve (sinonimo, similitud) con mayor similitud; empates por orden alfabetico."""
    scored = [(similarity(word, cand, bundle.embeddings), cand) for cand in synonyms(word, bundle.synonyms)]
    if not scored:
        return None, 0.0
    sim, cand = min(scored, key=lambda item: (-item[0], item[1]))
    return cand, sim


def augment_text(seq, bundle, cfg=AugmentConfig()):
    new_tokens, replacements = list(seq.tokens), []
    for i, tok in enumerate(seq.tokens):
        if tok.pos is not Pos.NOUN:
            continue
        candidate, sim = best_synonym(tok.normalized, bundle)
        if candidate is None or sim < cfg.threshold:
            continue
        surface = match_case(tok.surface, candidate)
        new_tokens[i] = replace(tok, surface=surface)
        replacements.append(Replacement(i, tok.surface, surface, sim))
    if not replacements:
        return seq, AugmentTrace()
    return seq.with_tokens(new_tokens), AugmentTrace(tuple(replacements))


def augment_document(doc, bundle, cfg=AugmentConfig()):
    seq = tag(tokenize(doc.text), bundle.pos)
    out, trace = augment_text(seq, bundle, cfg)
    return out.source, trace


def augment_corpus(corpus, bundle, cfg=AugmentConfig(), on_document=None):
    """Aplica el aumento a todo el corpus.

    Modo append: originales seguidos de una copia aumentada por documento (`<id>-aug`).
    Modo replace: cada original se sustituye en su lugar.
    """
    if cfg.mode is AugmentMode.APPEND:
        for row, doc in enumerate(corpus, start=len(corpus) + 1):
            if doc.id + AUGMENTED_SUFFIX in corpus:
                raise DuplicateId(doc.id + AUGMENTED_SUFFIX, row)
    augmented, traces = [], []
    for doc in corpus:
        text, trace = augment_document(doc, bundle, cfg)
        new_id = doc.id + AUGMENTED_SUFFIX if cfg.mode is AugmentMode.APPEND else doc.id
        augmented.append(replace(doc, id=new_id, text=text))
        traces.append(replace(trace, doc_id=new_id))
        if on_document:
            on_document(doc)
    if cfg.mode is AugmentMode.APPEND:
        docs = list(corpus.documents) + augmented
    else:
        docs = augmented
    return Corpus(docs, corpus.provenance), traces


def write_trace(traces, path):
    with open(path, "w", encoding="utf-8") as f:
        for trace in traces:
            for record in trace.records():
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
