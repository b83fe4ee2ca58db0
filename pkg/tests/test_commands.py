import json
import random

from newsflow.augment import AugmentConfig
from newsflow.classifier import aggregate, metrics_from_predictions
from newsflow.commands import augment_file, run_pipeline, show_logs, stats_file, write_misclassified_frequencies
from newsflow.config import load_pipeline_config
from newsflow.corpus import load_corpus, save_corpus

from conftest import make_corpus

SHARED = ("government city people week year health minister press video message social network "
          "country state school family price market police water power").split()
REAL_ONLY = "ministry report officials study data committee budget hospital survey statistics".split()
FAKE_ONLY = "hoax secret miracle chip conspiracy elites cure plot scandal cover".split()


def _full_scale_corpus(seed, noise=0.05):
    """800 Train / 200 Test por clase, vocabularios parcialmente separables.

    Una fraccion `noise` de Train usa las palabras propias de la otra clase.
    """
    rng = random.Random(seed)
    rows = []
    for label, own, other in (("real", REAL_ONLY, FAKE_ONLY), ("fake", FAKE_ONLY, REAL_ONLY)):
        for split, n in (("train", 800), ("test", 200)):
            for i in range(n):
                pool = other if split == "train" and rng.random() < noise else own
                words = [rng.choice(pool) if rng.random() < 0.35 else rng.choice(SHARED)
                         for _ in range(rng.randint(20, 60))]
                rows.append((f"{label}-{split}-{i}", " ".join(words) + ".", label, split))
    return make_corpus(rows)


def _write_lexicon(directory):
    directory.mkdir()
    nouns = REAL_ONLY + FAKE_ONLY + ["fraud", "document", "research", "records"]
    (directory / "pos.tsv").write_text("".join(f"{w}\tnoun\n" for w in nouns), encoding="utf-8")
    synonyms = {"hoax": ["fraud"], "report": ["document"], "study": ["research"], "data": ["records"]}
    (directory / "synonyms.json").write_text(json.dumps(synonyms), encoding="utf-8")
    vectors = {"hoax": "1 0 0", "fraud": "0.9 0.1 0", "report": "0 1 0", "document": "0.1 0.9 0",
               "study": "0 0 1", "research": "0 0.2 0.9", "data": "1 1 0", "records": "0 0 1"}
    lines = [f"{len(vectors)} 3"] + [f"{w} {v}" for w, v in vectors.items()]
    (directory / "embeddings.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_scaled_experiment_with_before_after_comparison(tmp_path):
    # Setup
    corpus_path = tmp_path / "corpus.csv"
    save_corpus(_full_scale_corpus(seed=42), corpus_path)
    _write_lexicon(tmp_path / "lexicon")
    config = tmp_path / "run.toml"
    config.write_text(
        '[paths]\ncorpus = "corpus.csv"\nlexicon = "lexicon"\n'
        f'output = "{(tmp_path / "out").as_posix()}"\n\n'
        "[segment]\nmax_seq_len = 160\n\n"
        "[model]\nembed_dim = 16\ndense_dims = [32, 16, 8, 8, 1]\nlearning_rate = 0.005\nseed = 1\n\n"
        "[train]\nepochs = 10\npatience = 3\nbaseline = true\n",
        encoding="utf-8",
    )

    # Acción
    results = run_pipeline(load_pipeline_config(str(config)))

    # Aserción
    out = tmp_path / "out"
    assert results["metrics"].accuracy >= 0.95
    assert len(load_corpus(out / "train_augmented.csv")) == 2 * 1440
    comparison = json.loads((out / "comparison.json").read_text(encoding="utf-8"))
    assert comparison["test_accuracy"]["before"] >= 0.95
    delta = comparison["training_accuracy"]
    assert delta["delta"] == delta["after"] - delta["before"]
    assert delta["delta"] != 0
    assert comparison["loss"]["delta"] != 0.0
    report = json.loads((out / "train_report.json").read_text(encoding="utf-8"))
    assert report["best_epoch"] >= 1
    assert len(report["per_epoch"]["val_acc"]) <= 10
    trace = (out / "augment_trace.jsonl").read_text(encoding="utf-8").splitlines()
    assert trace and all(json.loads(line)["similarity"] >= 0.4 for line in trace)


def test_stats_file_prints_only_data_on_stdout(tmp_path, capsys):
    """La tabla de frecuencias va a stdout; el resto de mensajes, a stderr."""
    # Setup
    path = tmp_path / "c.csv"
    save_corpus(make_corpus([("1", "Pfizer chip, Pfizer chip, Microsoft.", "fake", "test")]), path)

    # Acción
    stats_file(str(path), 2, frozenset())

    # Aserción
    captured = capsys.readouterr()
    assert captured.out == "word,count\nchip,2\npfizer,2\n"


def test_misclassified_frequencies_only_use_wrong_documents(tmp_path):
    corpus = make_corpus([
        ("ok", "vaccine vaccine vaccine", "real", "test"),
        ("bad1", "pfizer chip microsoft", "fake", "test"),
        ("bad2", "chip microsoft", "fake", "test"),
    ])
    metrics = metrics_from_predictions(
        [aggregate("ok", [0.1]), aggregate("bad1", [0.2]), aggregate("bad2", [0.3])],
        {doc.id: doc.label for doc in corpus},
    )
    path = tmp_path / "freq.csv"

    write_misclassified_frequencies(corpus, metrics, str(path), frozenset(), top_k=3)

    assert path.read_text(encoding="utf-8").splitlines() == ["word,count", "chip,2", "microsoft,2", "pfizer,1"]


def test_show_logs_without_history(capsys):
    show_logs()

    captured = capsys.readouterr()
    assert "No se ha encontrado ningun historial" in captured.err


def test_augment_file_warns_about_dropped_synonyms(tmp_path, capsys):
    corpus_path = tmp_path / "c.csv"
    save_corpus(make_corpus([("1", "The hoax spread.", "fake", "train")]), corpus_path)
    _write_lexicon(tmp_path / "lexicon")
    (tmp_path / "lexicon" / "synonyms.json").write_text('{"hoax": ["fraud", "big lie"]}', encoding="utf-8")

    augmented, traces = augment_file(str(corpus_path), str(tmp_path / "out.csv"), str(tmp_path / "lexicon"),
                                     AugmentConfig())

    assert "1 sinonimos invalidos" in capsys.readouterr().err
    assert augmented["1-aug"].text == "The fraud spread."
    assert len(traces[0]) == 1
