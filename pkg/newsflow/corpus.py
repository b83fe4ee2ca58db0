"""Ingesta, validacion, particion y persistencia de corpus de noticias etiquetadas."""
import json
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import pandas as pd

from .errors import (
    BadLabel, BadSplit, CorpusIoError, DuplicateId, EmptyText, MissingColumn, TooFewDocuments,
)

COLUMNS = ["id", "text", "label", "split", "language"]
FORMATS = ("csv", "jsonl")


class Label(str, Enum):
    REAL = "real"
    FAKE = "fake"


class Split(str, Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: Label
    split: Split
    language: str = "en"

    @property
    def is_fake(self):
        return self.label is Label.FAKE


@dataclass(frozen=True)
class Corpus:
    """Lista ordenada de documentos con ids unicos. El orden de insercion es estable."""
    documents: tuple = ()
    provenance: str = ""
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        docs = tuple(self.documents)
        object.__setattr__(self, "documents", docs)
        index = {}
        for row, doc in enumerate(docs, start=1):
            if doc.id in index:
                raise DuplicateId(doc.id, row)
            index[doc.id] = doc
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, doc_id):
        return self._index[doc_id]

    def __contains__(self, doc_id):
        return doc_id in self._index

    @property
    def ids(self):
        return [doc.id for doc in self.documents]

    def filter(self, label=None, split=None):
        docs = [d for d in self.documents
                if (label is None or d.label is Label(label)) and (split is None or d.split is Split(split))]
        return Corpus(docs, self.provenance)

    def label_counts(self):
        return dict(Counter(d.label.value for d in self.documents))

    def split_counts(self):
        return dict(Counter(d.split.value for d in self.documents))


def concat(corpora, provenance=""):
    docs = [doc for corpus in corpora for doc in corpus]
    return Corpus(docs, provenance or "; ".join(c.provenance for c in corpora if c.provenance))


def four_way(corpus):
    """Separa el corpus en los cuatro datasets Real/Fake x Train/Test."""
    return {
        f"{label.value}-{split.value}": corpus.filter(label=label, split=split)
        for label in Label for split in Split
    }


def infer_format(path):
    ext = os.path.splitext(str(path))[1].lower().lstrip(".")
    if ext in ("jsonl", "ndjson"):
        return "jsonl"
    return "csv"


def _document_from_row(row_number, record):
    text = record.get("text", "")
    if not isinstance(text, str) or not text.strip():
        raise EmptyText(row_number)
    label = record.get("label", "")
    try:
        label = Label(label)
    except ValueError:
        raise BadLabel(row_number, label)
    split = record.get("split", "")
    try:
        split = Split(split)
    except ValueError:
        raise BadSplit(row_number, split)
    return Document(str(record["id"]), text, label, split, str(record.get("language", "")))


def _build(records, provenance):
    docs, seen = [], set()
    for row_number, record in enumerate(records, start=1):
        doc = _document_from_row(row_number, record)
        if doc.id in seen:
            raise DuplicateId(doc.id, row_number)
        seen.add(doc.id)
        docs.append(doc)
    return Corpus(docs, provenance)


def _read_csv(path):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise MissingColumn(COLUMNS[0])
    for column in COLUMNS:
        if column not in frame.columns:
            raise MissingColumn(column)
    return frame[COLUMNS].to_dict(orient="records")


def _read_jsonl(path):
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            if not isinstance(record, dict):
                raise CorpusIoError(f"{path}:{line_no}: cada linea debe ser un objeto JSON")
            for column in COLUMNS:
                if column not in record:
                    raise MissingColumn(column)
            records.append(record)
    return records


def load_corpus(path, format=None):
    """Carga y valida un corpus CSV o JSONL conservando el orden de las filas."""
    format = format or infer_format(path)
    if not os.path.exists(path):
        raise CorpusIoError(f"no existe el corpus '{path}'")
    try:
        records = _read_csv(path) if format == "csv" else _read_jsonl(path)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError, pd.errors.ParserError) as e:
        raise CorpusIoError(f"no se pudo leer '{path}': {e}")
    return _build(records, provenance=os.path.basename(str(path)))


def _records(corpus):
    return [
        {"id": d.id, "text": d.text, "label": d.label.value, "split": d.split.value, "language": d.language}
        for d in corpus
    ]


def save_corpus(corpus, path, format=None):
    format = format or infer_format(path)
    try:
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        if format == "csv":
            frame = pd.DataFrame(_records(corpus), columns=COLUMNS)
            frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\r\n")
        else:
            with open(path, "w", encoding="utf-8") as f:
                for record in _records(corpus):
                    f.write(json.dumps(record, ensure_ascii=False) + "\n")
    except OSError as e:
        raise CorpusIoError(f"no se pudo escribir '{path}': {e}")


def split_holdout(corpus, fraction, seed):
    """Separa una porcion estratificada por etiqueta. Devuelve (resto, holdout)."""
    if not 0 < fraction < 1:
        raise ValueError("fraction debe estar en (0, 1)")
    rng = random.Random(seed)
    held = set()
    for label in Label:
        ids = [d.id for d in corpus if d.label is label]
        if len(ids) < 2:
            raise TooFewDocuments(f"se necesitan al menos 2 documentos '{label.value}', hay {len(ids)}")
        count = int(fraction * len(ids) + 0.5)
        held.update(rng.sample(ids, count))
    rest = [d for d in corpus if d.id not in held]
    holdout = [d for d in corpus if d.id in held]
    return Corpus(rest, corpus.provenance), Corpus(holdout, corpus.provenance)
