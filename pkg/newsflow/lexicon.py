"""Conocimiento del aumentador: etiquetador POS por lexico, sinonimos y embeddings."""
import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import LexiconFormatError, MissingFile
from .textkit import Pos, TokenSeq, WORD_RE

POS_FILE = "pos.tsv"
SYNONYM_FILE = "synonyms.json"
EMBEDDING_FILE = "embeddings.txt"

_POS_NAMES = {"noun": Pos.NOUN, "verb": Pos.VERB, "adj": Pos.ADJECTIVE, "pron": Pos.PRONOUN, "other": Pos.OTHER}


def _read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise LexiconFormatError(f"{path}: no es UTF-8 ({e.reason})")


@dataclass(frozen=True)
class PosLexicon:
    entries: dict = field(default_factory=dict)

    def get(self, word):
        return self.entries.get(word.lower(), Pos.UNKNOWN)

    def __len__(self):
        return len(self.entries)

    @classmethod
    def load(cls, path):
        entries = {}
        for line_no, line in enumerate(_read_text(path).splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or parts[1].strip().lower() not in _POS_NAMES:
                raise LexiconFormatError(f"{path}:{line_no}: se espera 'palabra<TAB>{{noun|verb|adj|pron|other}}'")
            entries[parts[0].strip().lower()] = _POS_NAMES[parts[1].strip().lower()]
        return cls(entries)


@dataclass(frozen=True)
class SynonymDict:
    entries: dict = field(default_factory=dict)
    dropped: int = 0

    @classmethod
    def from_mapping(cls, mapping):
        """Normaliza a minusculas y descarta sinonimos de varias palabras o iguales a la entrada."""
        entries, dropped = {}, 0
        for head, candidates in mapping.items():
            head = head.strip().lower()
            kept = []
            for candidate in candidates:
                candidate = str(candidate).strip().lower()
                if not WORD_RE.fullmatch(candidate) or candidate == head or candidate in kept:
                    dropped += 1
                    continue
                kept.append(candidate)
            if kept:
                entries[head] = kept
        return cls(entries, dropped)

    @classmethod
    def load(cls, path):
        try:
            mapping = json.loads(_read_text(path))
        except json.JSONDecodeError as e:
            raise LexiconFormatError(f"{path}: JSON invalido ({e})")
        if not isinstance(mapping, dict) or not all(isinstance(v, list) for v in mapping.values()):
            raise LexiconFormatError(f"{path}: se espera un objeto palabra -> lista de sinonimos")
        return cls.from_mapping(mapping)


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict = field(default_factory=dict)

    def __post_init__(self):
        for word, vec in self.vectors.items():
            if vec.shape != (self.dimension,):
                raise LexiconFormatError(f"el vector de '{word}' no tiene {self.dimension} componentes")
            if not np.any(vec):
                raise LexiconFormatError(f"el vector de '{word}' es nulo")

    def __contains__(self, word):
        return word.lower() in self.vectors

    def __len__(self):
        return len(self.vectors)

    @classmethod
    def from_mapping(cls, mapping):
        vectors = {w.lower(): np.asarray(v, dtype=np.float64) for w, v in mapping.items()}
        dimension = len(next(iter(vectors.values()))) if vectors else 1
        return cls(dimension, vectors)

    @classmethod
    def load(cls, path):
        lines = _read_text(path).splitlines()
        header = lines[0].split() if lines else []
        try:
            count, dimension = (int(value) for value in header)
        except ValueError:
            raise LexiconFormatError(f"{path}:1: se espera la cabecera '<cantidad> <dimension>'")
        if dimension < 1:
            raise LexiconFormatError(f"{path}:1: la dimension debe ser >= 1")
        vectors = {}
        for line_no, line in enumerate(lines[1:], start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dimension + 1:
                raise LexiconFormatError(f"{path}:{line_no}: se esperaban {dimension} componentes")
            try:
                vectors[parts[0].lower()] = np.array(parts[1:], dtype=np.float64)
            except ValueError:
                raise LexiconFormatError(f"{path}:{line_no}: componente no numerico")
        if len(vectors) != count:
            raise LexiconFormatError(f"{path}: la cabecera declara {count} vectores y hay {len(vectors)}")
        return cls(dimension, vectors)

    def most_similar(self, word, k=5):
        """Las k palabras mas parecidas a `word` dentro de la tabla."""
        word = word.lower()
        if word not in self.vectors:
            return []
        scored = [(other, similarity(word, other, self)) for other in self.vectors if other != word]
        scored.sort(key=lambda item: (-item[1], item[0]))
        return scored[:k]


@dataclass(frozen=True)
class LexiconBundle:
    pos: PosLexicon
    synonyms: SynonymDict
    embeddings: EmbeddingTable

    @classmethod
    def empty(cls):
        return cls(PosLexicon(), SynonymDict(), EmbeddingTable(1))

    @classmethod
    def load(cls, directory):
        paths = [os.path.join(directory, name) for name in (POS_FILE, SYNONYM_FILE, EMBEDDING_FILE)]
        for path in paths:
            if not os.path.exists(path):
                raise MissingFile(path)
        return cls(PosLexicon.load(paths[0]), SynonymDict.load(paths[1]), EmbeddingTable.load(paths[2]))


def tag(seq, lex):
    tagged = tuple(replace(tok, pos=lex.get(tok.normalized)) for tok in seq)
    return TokenSeq(tagged, seq.source)


def synonyms(word, dictionary):
    return list(dictionary.entries.get(word.lower(), []))


def similarity(a, b, emb):
    """Coseno entre los vectores de `a` y `b`, recortado a [0, 1]. 0 si falta alguno."""
    a, b = a.lower(), b.lower()
    u, v = emb.vectors.get(a), emb.vectors.get(b)
    if u is None or v is None:
        return 0.0
    if a == b:
        return 1.0
    cosine = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return min(1.0, max(0.0, cosine))
