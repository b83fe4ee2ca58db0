import json
import math
import random

import pytest

from newsflow.augment import (
    AugmentConfig, AugmentMode, augment_corpus, augment_document, augment_text, best_synonym, match_case,
    write_trace,
)
from newsflow.errors import ConfigError, DuplicateId
from newsflow.lexicon import EmbeddingTable, LexiconBundle, PosLexicon, SynonymDict, tag
from newsflow.textkit import Pos, tokenize

from conftest import make_corpus


@pytest.fixture
def bundle():
    """vaccine~inoculation con similitud 0.6 y disease~illness con 0.35."""
    illness_y = math.sqrt(1 - 0.35 ** 2)
    return LexiconBundle(
        PosLexicon({"vaccine": Pos.NOUN, "disease": Pos.NOUN, "prevents": Pos.VERB, "the": Pos.OTHER}),
        SynonymDict.from_mapping({"vaccine": ["inoculation"], "disease": ["illness"], "prevents": ["stops"]}),
        EmbeddingTable.from_mapping({
            "vaccine": [1.0, 0.0], "inoculation": [0.6, 0.8],
            "disease": [1.0, 0.0], "illness": [0.35, illness_y],
            "prevents": [1.0, 0.0], "stops": [1.0, 0.0],
        }),
    )


def test_only_nouns_above_threshold_are_replaced(bundle):
    # Setup
    seq = tag(tokenize("The vaccine prevents disease"), bundle.pos)

    # Acción
    out, trace = augment_text(seq, bundle, AugmentConfig(threshold=0.40))

    # Aserción
    assert out.source == "The inoculation prevents disease"
    assert len(trace) == 1
    replacement = trace.replacements[0]
    assert (replacement.token_index, replacement.original, replacement.substitute) == (1, "vaccine", "inoculation")
    assert replacement.similarity == pytest.approx(0.6)


def test_threshold_zero_replaces_every_noun_with_a_synonym(bundle):
    seq = tag(tokenize("The vaccine prevents disease"), bundle.pos)
    out, trace = augment_text(seq, bundle, AugmentConfig(threshold=0.0))

    assert out.source == "The inoculation prevents illness"
    assert [r.token_index for r in trace.replacements] == [1, 3]


def test_threshold_one_only_accepts_identical_vectors(bundle):
    seq = tag(tokenize("The vaccine prevents disease"), bundle.pos)
    out, trace = augment_text(seq, bundle, AugmentConfig(threshold=1.0))

    assert out.source == "The vaccine prevents disease"
    assert len(trace) == 0


def test_output_keeps_token_count_and_non_nouns(bundle):
    seq = tag(tokenize("The Vaccine, the VACCINE; the disease."), bundle.pos)
    out, _ = augment_text(seq, bundle, AugmentConfig(threshold=0.0))

    assert len(out) == len(seq)
    assert out.source == "The Inoculation, the INOCULATION; the illness."
    for before, after in zip(seq, out):
        if before.pos is not Pos.NOUN:
            assert before.surface == after.surface


def test_best_synonym_breaks_ties_alphabetically():
    bundle = LexiconBundle(
        PosLexicon({"car": Pos.NOUN}),
        SynonymDict.from_mapping({"car": ["vehicle", "automobile", "cart"]}),
        EmbeddingTable.from_mapping({"car": [1, 0], "vehicle": [1, 1], "automobile": [1, 1], "cart": [0, 1]}),
    )
    word, sim = best_synonym("car", bundle)

    assert word == "automobile"
    assert sim == pytest.approx(0.70711, abs=1e-5)
    assert best_synonym("bike", bundle) == (None, 0.0)


@pytest.mark.parametrize("template, word, expected", [
    ("vaccine", "shot", "shot"),
    ("Vaccine", "shot", "Shot"),
    ("VACCINE", "shot", "SHOT"),
    ("A", "shot", "Shot"),
])
def test_match_case(template, word, expected):
    assert match_case(template, word) == expected


def test_empty_lexicon_is_identity():
    text = "Nothing changes here, not even the vaccine."
    doc = make_corpus([("1", text, "real", "train")]).documents[0]

    out, trace = augment_document(doc, LexiconBundle.empty())

    assert out == text
    assert len(trace) == 0


def test_append_mode_doubles_the_corpus(bundle):
    """En modo append el corpus casi se duplica: originales seguidos de sus copias."""
    corpus = make_corpus([(f"d{i}", "The vaccine prevents disease", "fake", "train") for i in range(800)])

    out, traces = augment_corpus(corpus, bundle, AugmentConfig(mode="append"))

    assert len(out) == 1600
    assert out.ids[:800] == corpus.ids
    assert out.ids[800] == "d0-aug"
    assert out["d0-aug"].text == "The inoculation prevents disease"
    assert out["d0-aug"].label is corpus["d0"].label
    assert traces[0].doc_id == "d0-aug"


def test_append_mode_rejects_an_id_clash_before_augmenting(bundle):
    """Si `x` y `x-aug` ya estan en el corpus, el error llega antes de aumentar nada."""
    corpus = make_corpus([("x", "The vaccine", "real", "train"), ("y", "The disease", "fake", "train"),
                          ("x-aug", "Otra noticia", "fake", "test")])
    seen = []

    with pytest.raises(DuplicateId) as info:
        augment_corpus(corpus, bundle, AugmentConfig(mode="append"), on_document=seen.append)

    assert info.value.doc_id == "x-aug"
    assert seen == []
    # en modo replace los ids no cambian
    out, _ = augment_corpus(corpus, bundle, AugmentConfig(mode="replace"))
    assert out.ids == corpus.ids


def test_replace_mode_keeps_ids_and_size(bundle):
    corpus = make_corpus([("a", "The vaccine prevents disease", "real", "test"), ("b", "Sin cambios", "fake", "train")])

    out, _ = augment_corpus(corpus, bundle, AugmentConfig(mode=AugmentMode.REPLACE))

    assert out.ids == ["a", "b"]
    assert out["a"].text == "The inoculation prevents disease"
    assert out["b"].text == "Sin cambios"


def test_trace_is_written_as_jsonl(tmp_path, bundle):
    corpus = make_corpus([("a", "The vaccine prevents disease", "real", "train")])
    _, traces = augment_corpus(corpus, bundle)

    path = tmp_path / "trace.jsonl"
    write_trace(traces, path)

    records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    assert records == [{"doc_id": "a-aug", "token_index": 1, "original": "vaccine",
                        "substitute": "inoculation", "similarity": pytest.approx(0.6)}]


def test_invalid_threshold_is_a_config_error():
    with pytest.raises(ConfigError):
        AugmentConfig(threshold=1.5)


def test_randomized_augmentation_soundness():
    """1000 combinaciones aleatorias de corpus, lexico y umbral sin ninguna violacion."""
    vocabulary = [f"w{i}" for i in range(30)]
    for seed in range(1000):
        rng = random.Random(seed)
        # Setup: lexico aleatorio
        pos = PosLexicon({w: rng.choice([Pos.NOUN, Pos.VERB, Pos.OTHER]) for w in vocabulary})
        mapping = {w: rng.sample(vocabulary, rng.randint(0, 3)) for w in vocabulary}
        vectors = {w: [rng.uniform(-1, 1) for _ in range(3)] for w in vocabulary}
        bundle = LexiconBundle(pos, SynonymDict.from_mapping(mapping), EmbeddingTable.from_mapping(vectors))
        threshold = rng.choice([0.0, 0.2, 0.4, 0.6, 0.9, 1.0])
        cfg = AugmentConfig(threshold=threshold, mode=rng.choice(list(AugmentMode)))
        corpus = make_corpus([
            (f"d{i}", " ".join(rng.choice(vocabulary + [",", "."]) for _ in range(rng.randint(1, 12))),
             rng.choice(["real", "fake"]), "train")
            for i in range(rng.randint(1, 4))
        ])

        # Acción
        out, traces = augment_corpus(corpus, bundle, cfg)

        # Aserción
        assert augment_corpus(corpus, bundle, cfg) == (out, traces)
        expected_size = 2 * len(corpus) if cfg.mode is AugmentMode.APPEND else len(corpus)
        assert len(out) == expected_size
        augmented_docs = out.documents[len(corpus):] if cfg.mode is AugmentMode.APPEND else out.documents
        for original, augmented, trace in zip(corpus, augmented_docs, traces):
            before, after = tag(tokenize(original.text), pos), tokenize(augmented.text)
            assert len(before) == len(after)
            changed = [i for i, (a, b) in enumerate(zip(before, after)) if a.surface != b.surface]
            assert changed == [r.token_index for r in trace.replacements]
            for r in trace.replacements:
                assert before[r.token_index].pos is Pos.NOUN
                assert r.similarity >= threshold
