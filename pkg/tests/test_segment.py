import pytest

from newsflow.errors import ConfigError, VocabFormatError
from newsflow.segment import (
    CLS, PAD, SEP, UNK, SegmentConfig, SubwordVocab, build_vocab, encode_segment, segment_text,
    subword_tokenize, window_words,
)

SPECIALS = [PAD, UNK, CLS, SEP]


def _spans(windows, words):
    """Convierte cada ventana en su intervalo [inicio, fin) dentro de la lista de palabras."""
    spans = []
    for _, window in windows:
        start = int(window[0][1:])
        spans.append((start, start + len(window)))
    return spans


@pytest.mark.parametrize("n_words, expected", [
    (270, [(0, 150), (120, 270)]),
    (151, [(0, 150), (120, 151)]),
    (150, [(0, 150)]),
    (10, [(0, 10)]),
])
def test_sliding_windows(n_words, expected):
    words = [f"w{i}" for i in range(n_words)]
    windows = window_words(words, SegmentConfig(150, 30))

    assert _spans(windows, words) == expected
    assert [index for index, _ in windows] == list(range(len(expected)))


def test_consecutive_windows_share_the_overlap():
    words = [f"w{i}" for i in range(270)]
    (_, first), (_, second) = window_words(words, SegmentConfig(150, 30))

    assert first[120:150] == second[:30]
    covered = {w for _, window in window_words(words, SegmentConfig(150, 30)) for w in window}
    assert covered == set(words)


def test_no_words_means_no_windows():
    assert window_words([], SegmentConfig()) == []


def test_greedy_longest_match_with_continuation_pieces():
    vocab = SubwordVocab(SPECIALS + ["covid", "##19", "cov", "##id"])

    assert subword_tokenize("covid19", vocab) == [vocab.id_of("covid"), vocab.id_of("##19")]
    assert subword_tokenize("covid", vocab) == [vocab.id_of("covid")]
    assert subword_tokenize("sars", vocab) == [vocab.unk_id]


def test_overlong_word_maps_to_unknown():
    vocab = build_vocab(["a"])
    assert subword_tokenize("a" * 101, vocab) == [vocab.unk_id]


def test_build_vocab_orders_by_frequency_and_adds_characters():
    vocab = build_vocab(["chip chip vaccine", "Chip"], max_words=1)

    assert vocab.pieces[:5] == SPECIALS + ["chip"]
    assert "vaccine" not in vocab
    assert {"v", "##v", "c", "##c"} <= set(vocab.pieces)
    # todas las palabras del corpus se pueden escribir sin [UNK]
    assert vocab.unk_id not in subword_tokenize("vaccine", vocab)


def test_vocab_requires_specials_first():
    with pytest.raises(VocabFormatError):
        SubwordVocab(["hola", PAD, UNK, CLS, SEP])
    with pytest.raises(VocabFormatError):
        SubwordVocab(SPECIALS + ["a", "a"])


def test_vocab_file_and_fingerprint(tmp_path):
    vocab = build_vocab(["uno dos tres"])
    path = tmp_path / "vocab.txt"
    vocab.save(path)

    loaded = SubwordVocab.load(path)

    assert loaded.pieces == vocab.pieces
    assert loaded.fingerprint() == vocab.fingerprint()
    assert build_vocab(["otra cosa"]).fingerprint() != vocab.fingerprint()


def test_encoding_adds_specials_and_pads():
    vocab = SubwordVocab(SPECIALS + ["fake", "news"])
    cfg = SegmentConfig(window_size=4, overlap=1, max_seq_len=6)

    segment = encode_segment(["fake", "news"], vocab, cfg, doc_id="d", index=0)

    assert segment.ids == (vocab.cls_id, 4, 5, vocab.sep_id, vocab.pad_id, vocab.pad_id)
    assert segment.attention_len == 4


def test_truncation_keeps_sep_last():
    vocab = SubwordVocab(SPECIALS + ["a", "##b"])
    cfg = SegmentConfig(window_size=5, overlap=0, max_seq_len=5)

    segment = encode_segment(["ab"] * 5, vocab, cfg)

    assert len(segment.ids) == 5
    assert segment.ids[0] == vocab.cls_id
    assert segment.ids[-1] == vocab.sep_id
    assert segment.attention_len == 5


def test_segment_text_counts_and_empty_text():
    vocab = build_vocab(["x"])
    cfg = SegmentConfig(150, 30, 160)

    segments = segment_text(" ".join(["x"] * 270), vocab, cfg, doc_id="doc")
    empty = segment_text("...", vocab, cfg)

    assert [s.index for s in segments] == [0, 1]
    assert all(len(s.ids) == 160 for s in segments)
    assert segments[0].doc_id == "doc"
    assert len(empty) == 1 and empty[0].attention_len == 2


@pytest.mark.parametrize("kwargs", [
    {"window_size": 0}, {"window_size": 10, "overlap": 10}, {"window_size": 10, "overlap": 2, "max_seq_len": 5},
])
def test_segment_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SegmentConfig(**kwargs)


def test_randomized_windows_overlap_and_reconstruct():
    """Documentos aleatorios de 1 a 2000 palabras con (150, 30)."""
    import random
    cfg = SegmentConfig(150, 30)
    rng = random.Random(0)
    for _ in range(1000):
        words = [f"w{i}" for i in range(rng.randint(1, 2000))]

        windows = [window for _, window in window_words(words, cfg)]

        for current, following in zip(windows, windows[1:]):
            assert len(current) == 150
            assert current[-30:] == following[:30]
        rebuilt = list(windows[0]) + [w for window in windows[1:] for w in window[30:]]
        assert rebuilt == words
