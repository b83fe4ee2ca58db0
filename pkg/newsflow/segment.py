"""Ventanas deslizantes de palabras, tokenizacion en sub-palabras y conversion a ids."""
import hashlib
from collections import Counter
from dataclasses import dataclass

from .errors import ConfigError, VocabFormatError
from .textkit import tokenize

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIALS = (PAD, UNK, CLS, SEP)
CONTINUATION = "##"
MAX_WORD_CHARS = 100


@dataclass(frozen=True)
class SegmentConfig:
    window_size: int = 150
    overlap: int = 30
    max_seq_len: int = 512

    def __post_init__(self):
        if self.window_size < 1:
            raise ConfigError("window_size debe ser >= 1")
        if not 0 <= self.overlap < self.window_size:
            raise ConfigError("overlap debe estar en [0, window_size)")
        if self.max_seq_len < self.window_size:
            raise ConfigError("max_seq_len debe ser >= window_size")

    @property
    def stride(self):
        return self.window_size - self.overlap


class SubwordVocab:
    """Vocabulario de piezas; el id de cada pieza es su posicion. Las cuatro primeras son especiales."""

    def __init__(self, pieces):
        pieces = list(pieces)
        if tuple(pieces[:4]) != SPECIALS:
            raise VocabFormatError(f"las primeras piezas deben ser {', '.join(SPECIALS)}")
        self.pieces = pieces
        self.index = {}
        for i, piece in enumerate(pieces):
            if piece in self.index:
                raise VocabFormatError(f"pieza duplicada '{piece}' en la linea {i + 1}")
            self.index[piece] = i

    pad_id, unk_id, cls_id, sep_id = 0, 1, 2, 3

    def __len__(self):
        return len(self.pieces)

    def __contains__(self, piece):
        return piece in self.index

    def id_of(self, piece):
        return self.index.get(piece, self.unk_id)

    def fingerprint(self):
        return hashlib.sha256("\n".join(self.pieces).encode("utf-8")).digest()

    def save(self, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(self.pieces) + "\n")

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as f:
            pieces = [line.rstrip("\n") for line in f]
        while pieces and pieces[-1] == "":
            pieces.pop()
        return cls(pieces)


def document_words(text):
    return tokenize(text).words()


def build_vocab(texts, max_words=30000):
    """Top-N palabras completas por frecuencia mas piezas de un caracter como respaldo cerrado."""
    counts = Counter()
    chars = set()
    for text in texts:
        for word in document_words(text):
            counts[word] += 1
            chars.update(word)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:max_words]
    pieces = list(SPECIALS) + [word for word, _ in ranked]
    seen = set(pieces)
    for ch in sorted(chars):
        for piece in (ch, CONTINUATION + ch):
            if piece not in seen:
                pieces.append(piece)
                seen.add(piece)
    return SubwordVocab(pieces)


def window_words(words, cfg):
    windows, start, n = [], 0, len(words)
    while start < n:
        windows.append((len(windows), list(words[start:start + cfg.window_size])))
        if start + cfg.window_size >= n:
            break
        start += cfg.stride
    return windows


def subword_tokenize(word, vocab):
    if len(word) > MAX_WORD_CHARS:
        return [vocab.unk_id]
    if word in vocab:
        return [vocab.index[word]]
    ids, start = [], 0
    while start < len(word):
        end, match = len(word), None
        while start < end:
            piece = word[start:end] if start == 0 else CONTINUATION + word[start:end]
            if piece in vocab:
                match = piece
                break
            end -= 1
        if match is None:
            return [vocab.unk_id]
        ids.append(vocab.index[match])
        start = end
    return ids


@dataclass(frozen=True)
class Segment:
    doc_id: str
    index: int
    word_window: tuple
    ids: tuple
    attention_len: int


def encode_segment(window, vocab, cfg, doc_id="", index=0):
    ids = [vocab.cls_id]
    for word in window:
        ids.extend(subword_tokenize(word, vocab))
    ids.append(vocab.sep_id)
    if len(ids) > cfg.max_seq_len:
        ids = ids[:cfg.max_seq_len - 1] + [vocab.sep_id]
    attention_len = len(ids)
    ids.extend([vocab.pad_id] * (cfg.max_seq_len - attention_len))
    return Segment(doc_id, index, tuple(window), tuple(ids), attention_len)


def segment_text(text, vocab, cfg, doc_id=""):
    """Segmentos codificados de un texto; un texto sin palabras produce un unico segmento vacio."""
    windows = window_words(document_words(text), cfg) or [(0, [])]
    return [encode_segment(window, vocab, cfg, doc_id, index) for index, window in windows]


def segment_document(doc, vocab, cfg):
    return segment_text(doc.text, vocab, cfg, doc.id)
