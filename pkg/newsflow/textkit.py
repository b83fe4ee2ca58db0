"""Tokenizacion, division en oraciones, stopwords y frecuencias de palabras."""
import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources

import pandas as pd

# Las marcas combinantes (NFD) pertenecen a la palabra que las precede.
WORD_RE = re.compile(r"\w[\w\u0300-\u036f]*")
TOKEN_RE = re.compile(WORD_RE.pattern + r"|[^\w\s]")
DEFAULT_STOPWORDS = "stopwords.txt"


class Pos(str, Enum):
    NOUN = "noun"
    VERB = "verb"
    ADJECTIVE = "adj"
    PRONOUN = "pron"
    OTHER = "other"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int
    pos: Pos = Pos.UNKNOWN

    @property
    def normalized(self):
        return unicodedata.normalize("NFC", self.surface.lower())

    @property
    def span(self):
        return (self.start, self.end)

    @property
    def is_word(self):
        return is_word(self.surface)


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple
    source: str

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    @property
    def surfaces(self):
        return [t.surface for t in self.tokens]

    def words(self):
        """Formas normalizadas de los tokens que no son puntuacion."""
        return [t.normalized for t in self.tokens if t.is_word]

    def detokenize(self):
        pieces, cursor = [], 0
        for tok in self.tokens:
            pieces.append(self.source[cursor:tok.start])
            pieces.append(tok.surface)
            cursor = tok.end
        pieces.append(self.source[cursor:])
        return "".join(pieces)

    def with_tokens(self, new_tokens):
        """Reconstruye el texto con nuevas superficies, conservando los huecos originales."""
        if len(new_tokens) != len(self.tokens):
            raise ValueError("la cantidad de tokens debe mantenerse")
        pieces, rebuilt, cursor, offset = [], [], 0, 0
        for old, new in zip(self.tokens, new_tokens):
            gap = self.source[cursor:old.start]
            pieces.append(gap)
            offset += len(gap)
            rebuilt.append(replace(new, start=offset, end=offset + len(new.surface)))
            pieces.append(new.surface)
            offset += len(new.surface)
            cursor = old.end
        pieces.append(self.source[cursor:])
        return TokenSeq(tuple(rebuilt), "".join(pieces))


def is_word(surface):
    return any(ch.isalnum() for ch in surface)


def tokenize(text):
    tokens = []
    for match in TOKEN_RE.finditer(text):
        surface = match.group(0)
        pos = Pos.UNKNOWN if WORD_RE.fullmatch(surface) else Pos.OTHER
        tokens.append(Token(surface, match.start(), match.end(), pos))
    return TokenSeq(tuple(tokens), text)


def split_sentences(text):
    # Regla literal: corta despues de cada punto, abreviaturas incluidas.
    return [piece for piece in re.split(r"(?<=\.)", text) if piece]


def load_stopwords(path=None):
    """Lee un archivo de stopwords (una por linea, '#' para comentarios).

    Sin `path` devuelve la lista por defecto (portugues + ingles) incluida en el paquete.
    """
    if path is None:
        content = resources.files("newsflow").joinpath("data", DEFAULT_STOPWORDS).read_text(encoding="utf-8")
    else:
        with open(path, "r", encoding="utf-8") as f:
            content = f.read()
    words = set()
    for line in content.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class FrequencyTable:
    entries: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def words(self):
        return [word for word, _ in self.entries]

    def to_frame(self):
        return pd.DataFrame(list(self.entries), columns=["word", "count"])

    def to_csv(self, path=None):
        """Sin `path` devuelve el CSV como texto."""
        return self.to_frame().to_csv(path, index=False, lineterminator="\n")

    def to_json(self):
        return json.dumps([[word, count] for word, count in self.entries], ensure_ascii=False)


def count_words(texts, stopwords=frozenset()):
    counts = Counter()
    for text in texts:
        for tok in tokenize(text):
            word = tok.normalized
            if tok.is_word and word not in stopwords:
                counts[word] += 1
    return counts


def word_frequencies(docs, stopwords=frozenset(), top_k=20):
    if top_k < 1:
        raise ValueError("top_k debe ser >= 1")
    counts = count_words((doc.text for doc in docs), stopwords)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return FrequencyTable(tuple(ranked[:top_k]))
