import os
import json
from contextlib import contextmanager
from datetime import datetime

import click
import pandas as pd
from rich.panel import Panel
from rich.progress import Progress
from rich.table import Table

from .augment import AugmentMode, augment_corpus, write_trace
from .classifier import TrainedModel, evaluate, load_model, predict_text, save_model, train
from .config import check_inputs
from .corpus import Corpus, concat, four_way, load_corpus, save_corpus, split_holdout
from .errors import EmptyCorpus, MissingFile
from .lexicon import LexiconBundle
from .logs import log_operation, read_logs
from .segment import SubwordVocab, build_vocab
from .textkit import load_stopwords, word_frequencies
from .translate import make_backend, translate_corpus
from .utils import err_console, success, warn


@contextmanager
def _progress(description, total):
    with Progress(console=err_console, transient=True) as progress:
        task = progress.add_task(description, total=total)
        yield lambda *_: progress.advance(task)


def _counts_table(corpus, title):
    table = Table(title=title)
    table.add_column("dataset")
    table.add_column("documentos", justify="right")
    for name, part in four_way(corpus).items():
        table.add_row(name, str(len(part)))
    table.add_row("[bold]total[/bold]", f"[bold]{len(corpus)}[/bold]")
    return table


def _sidecar_vocab(model_path):
    return model_path + ".vocab"


def _require(path):
    if not os.path.exists(path):
        raise MissingFile(path)


# --- ingest ---

def ingest_corpora(inputs, out_path):
    """Valida uno o mas corpus, los une y los guarda en el formato del archivo de salida."""
    corpus = concat([load_corpus(path) for path in inputs])
    save_corpus(corpus, out_path)
    err_console.print(_counts_table(corpus, f"Corpus ingerido: {out_path}"))
    log_operation("ingest", f"{len(corpus)} documentos de {len(inputs)} archivo(s) -> {out_path}")
    return corpus


# --- augment ---

def run_augment(corpus, bundle, cfg):
    with _progress("Aumentando documentos", len(corpus)) as advance:
        return augment_corpus(corpus, bundle, cfg, on_document=advance)


def augment_file(in_path, out_path, lexicon_dir, cfg, trace_path=None):
    corpus = load_corpus(in_path)
    bundle = LexiconBundle.load(lexicon_dir)
    if bundle.synonyms.dropped:
        warn(f"Se descartaron {bundle.synonyms.dropped} sinonimos invalidos del diccionario.")
    augmented, traces = run_augment(corpus, bundle, cfg)
    save_corpus(augmented, out_path)
    if trace_path:
        write_trace(traces, trace_path)
    changed = sum(1 for t in traces if len(t))
    message = (f"{len(corpus)} -> {len(augmented)} documentos ({cfg.mode.value}); "
               f"{changed} con sustituciones, {sum(len(t) for t in traces)} sustantivos cambiados")
    success(message)
    log_operation("augment", message)
    return augmented, traces


# --- translate ---

def run_translate(corpus, backend, cfg, checkpoint=None):
    with _progress(f"Traduciendo {cfg.source_lang}->{cfg.target_lang}", len(corpus)) as advance:
        return translate_corpus(corpus, backend, cfg, checkpoint=checkpoint, on_document=advance)


def translate_file(in_path, out_path, backend_spec, cfg, checkpoint=None):
    corpus = load_corpus(in_path)
    backend = make_backend(backend_spec)
    translated = run_translate(corpus, backend, cfg, checkpoint)
    save_corpus(translated, out_path)
    message = f"{len(translated)} documentos traducidos a '{cfg.target_lang}' -> {out_path}"
    success(message)
    log_operation("translate", message)
    return translated


# --- train / eval / classify ---

def _print_epoch(epoch, stats):
    err_console.print(
        f"[dim]epoca {epoch:2d}[/dim]  loss {stats.train_loss:.4f}  acc {stats.train_acc:.4f}  "
        f"val_loss {stats.val_loss:.4f}  [cyan]val_acc {stats.val_acc:.4f}[/cyan]"
    )


def _report_panel(report, title):
    final = report.final
    body = "\n".join(f"[bold]{key.replace('_', ' ').upper()}:[/] [cyan]{value:.4f}[/]" for key, value in final.items())
    body += f"\n[bold]MEJOR EPOCA:[/] {report.best_epoch}"
    body += "  [yellow](parada temprana)[/yellow]" if report.stopped_early else ""
    return Panel(body, title=f"[bold magenta]{title}[/]", expand=False, border_style="magenta")


def load_or_build_vocab(path, corpus, vocab_size):
    if path and os.path.exists(path):
        return SubwordVocab.load(path)
    vocab = build_vocab((doc.text for doc in corpus), vocab_size)
    if path:
        vocab.save(path)
    return vocab


def fit_model(fit, val, vocab, mcfg, tcfg, scfg, title="Entrenamiento"):
    params, report = train(fit, val, vocab, mcfg, tcfg, scfg, on_epoch=_print_epoch)
    err_console.print(_report_panel(report, title))
    return TrainedModel(params, mcfg, scfg, vocab.fingerprint()), report


def train_file(train_path, vocab_path, model_path, mcfg, tcfg, scfg, val_fraction=0.1,
               vocab_size=30000, report_path=None):
    corpus = load_corpus(train_path).filter(split="train")
    if not len(corpus):
        raise EmptyCorpus(f"'{train_path}' no tiene documentos de entrenamiento")
    fit, val = split_holdout(corpus, val_fraction, mcfg.seed)
    vocab = load_or_build_vocab(vocab_path, fit, vocab_size)
    model, report = fit_model(fit, val, vocab, mcfg, tcfg, scfg)
    save_model(model, model_path)
    vocab.save(_sidecar_vocab(model_path))
    report_path = report_path or model_path + ".report.json"
    with open(report_path, 'w', encoding='utf-8') as f:
        f.write(report.to_json())
    message = (f"modelo guardado en {model_path} (mejor epoca {report.best_epoch}, "
               f"val_acc {report.final['validation_accuracy']:.4f})")
    success(message)
    log_operation("train", message)
    return model, report


def load_trained(model_path, vocab_path=None):
    _require(model_path)
    model = load_model(model_path)
    vocab_path = vocab_path or _sidecar_vocab(model_path)
    _require(vocab_path)
    vocab = SubwordVocab.load(vocab_path)
    model.check_vocab(vocab)
    return model, vocab


def write_misclassified_frequencies(corpus, metrics, path, stopwords, top_k=20):
    wrong = [corpus[doc_id] for doc_id in metrics.misclassified_ids]
    table = word_frequencies(wrong, stopwords, top_k)
    table.to_csv(path)
    return table


def _metrics_table(metrics, title):
    c = metrics.confusion
    table = Table(title=title)
    for column in ("accuracy", "loss", "tp", "fp", "tn", "fn", "errores"):
        table.add_column(column, justify="right")
    table.add_row(f"{metrics.accuracy:.4f}", f"{metrics.loss:.4f}", str(c.tp), str(c.fp), str(c.tn), str(c.fn),
                  str(len(metrics.misclassified_ids)))
    return table


def eval_file(model_path, test_path, vocab_path=None, freq_path=None, stopwords_path=None, top_k=20,
              metrics_path=None):
    model, vocab = load_trained(model_path, vocab_path)
    corpus = load_corpus(test_path).filter(split="test")
    metrics = evaluate(corpus, model.params, vocab, model.segment_config)
    err_console.print(_metrics_table(metrics, f"Evaluacion: {test_path}"))
    if freq_path:
        write_misclassified_frequencies(corpus, metrics, freq_path, load_stopwords(stopwords_path), top_k)
    if metrics_path:
        with open(metrics_path, 'w', encoding='utf-8') as f:
            json.dump(metrics.to_dict(), f, indent=2)
    correct = len(corpus) - len(metrics.misclassified_ids)
    message = f"{correct} de {len(corpus)} noticias correctas (accuracy {metrics.accuracy:.4f})"
    success(message)
    log_operation("eval", message)
    return metrics


def classify_text(model_path, text, vocab_path=None, doc_id="-"):
    model, vocab = load_trained(model_path, vocab_path)
    prediction = predict_text(text, model.params, vocab, model.segment_config, doc_id)
    click.echo(json.dumps(prediction.to_dict(), ensure_ascii=False))
    log_operation("classify", f"{doc_id}: {prediction.label.value} ({prediction.prob_fake:.4f})")
    return prediction


# --- stats ---

def stats_file(in_path, top_k, stopwords, label=None, split=None, fmt="csv", out_path=None):
    corpus = load_corpus(in_path).filter(label=label, split=split)
    table = word_frequencies(corpus, stopwords, top_k)
    payload = table.to_csv() if fmt == "csv" else table.to_json() + "\n"
    if out_path:
        with open(out_path, 'w', encoding='utf-8', newline='') as f:
            f.write(payload)
    else:
        click.echo(payload, nl=False)
    log_operation("stats", f"{len(table)} palabras de {len(corpus)} documentos ({in_path})")
    return table


def neighbors_word(lexicon_dir, word, top_k=10):
    """Las palabras del lexico mas parecidas a `word`, para ajustar el umbral de similitud."""
    bundle = LexiconBundle.load(lexicon_dir)
    ranked = bundle.embeddings.most_similar(word, top_k)
    if word.lower() not in bundle.embeddings:
        warn(f"'{word}' no tiene vector en {lexicon_dir}")
    frame = pd.DataFrame(ranked, columns=["word", "similarity"])
    click.echo(frame.to_csv(index=False, lineterminator="\n", float_format="%.4f"), nl=False)
    log_operation("neighbors", f"{len(ranked)} vecinos de '{word}'")
    return ranked


# --- pipeline ---

def _comparison(before, after, before_test, after_test):
    rows = {
        "training_accuracy": (before.final["general_accuracy"], after.final["general_accuracy"]),
        "best_epoch_train_accuracy": (before.final["best_epoch_train_accuracy"], after.final["best_epoch_train_accuracy"]),
        "validation_accuracy": (before.final["validation_accuracy"], after.final["validation_accuracy"]),
        "validation_loss": (before.final["validation_loss"], after.final["validation_loss"]),
        "loss": (before.final["loss"], after.final["loss"]),
        "test_accuracy": (before_test.accuracy, after_test.accuracy),
    }
    return {key: {"before": b, "after": a, "delta": a - b} for key, (b, a) in rows.items()}


def run_pipeline(cfg):
    """Secuencia completa: holdout -> aumento -> traduccion -> vocabulario -> entrenamiento -> evaluacion."""
    check_inputs(cfg)
    os.makedirs(cfg.output_dir, exist_ok=True)
    corpus = load_corpus(cfg.corpus)
    bundle = LexiconBundle.load(cfg.lexicon)
    stopwords = load_stopwords(cfg.stopwords)
    train_docs, test_docs = corpus.filter(split="train"), corpus.filter(split="test")
    fit, val = split_holdout(train_docs, cfg.val_fraction, cfg.model_config.seed)
    err_console.print(_counts_table(corpus, f"Corpus: {cfg.corpus}"))

    augmented, traces = run_augment(fit, bundle, cfg.augment)
    write_trace(traces, cfg.output("augment_trace.jsonl"))
    success(f"aumento: {len(fit)} -> {len(augmented)} documentos")

    baseline_fit = fit
    if cfg.backend:
        backend = make_backend(cfg.backend)
        if cfg.baseline and cfg.augment.mode is AugmentMode.REPLACE:
            baseline_fit = run_translate(fit, backend, cfg.translate)
        augmented = run_translate(augmented, backend, cfg.translate, cfg.checkpoint)
        val = run_translate(val, backend, cfg.translate, cfg.checkpoint)
        test_docs = run_translate(test_docs, backend, cfg.translate, cfg.checkpoint)
        if cfg.baseline and cfg.augment.mode is AugmentMode.APPEND:
            baseline_fit = Corpus([doc for doc in augmented if doc.id in fit], fit.provenance)
        success(f"traduccion a '{cfg.translate.target_lang}' completada")
    save_corpus(augmented, cfg.output("train_augmented.csv"))

    vocab = load_or_build_vocab(cfg.vocab, augmented, cfg.vocab_size)
    vocab.save(cfg.output("vocab.txt"))
    model, report = fit_model(augmented, val, vocab, cfg.model_config, cfg.train, cfg.segment,
                              "Despues del aumento")
    save_model(model, cfg.model_path)
    vocab.save(_sidecar_vocab(cfg.model_path))
    with open(cfg.output("train_report.json"), 'w', encoding='utf-8') as f:
        f.write(report.to_json())

    if not len(test_docs):
        raise EmptyCorpus(f"'{cfg.corpus}' no tiene documentos de prueba")
    metrics = evaluate(test_docs, model.params, vocab, cfg.segment)
    err_console.print(_metrics_table(metrics, "Prueba"))
    with open(cfg.output("eval.json"), 'w', encoding='utf-8') as f:
        json.dump(metrics.to_dict(), f, indent=2)
    write_misclassified_frequencies(test_docs, metrics, cfg.output("misclassified_freq.csv"), stopwords)

    results = {"report": report, "metrics": metrics}
    if cfg.baseline:
        base_vocab = build_vocab((doc.text for doc in baseline_fit), cfg.vocab_size)
        base_model, base_report = fit_model(baseline_fit, val, base_vocab, cfg.model_config, cfg.train,
                                            cfg.segment, "Antes del aumento")
        base_metrics = evaluate(test_docs, base_model.params, base_vocab, cfg.segment)
        comparison = _comparison(base_report, report, base_metrics, metrics)
        with open(cfg.output("comparison.json"), 'w', encoding='utf-8') as f:
            json.dump(comparison, f, indent=2)
        delta = comparison["training_accuracy"]["delta"]
        success(f"delta de accuracy de entrenamiento tras el aumento: {delta:+.4f}")
        results["comparison"] = comparison

    message = (f"pipeline completo en {cfg.output_dir}: test accuracy {metrics.accuracy:.4f}, "
               f"mejor epoca {report.best_epoch}")
    success(message)
    log_operation("pipeline", message)
    return results


# --- historial ---

def show_logs():
    logs = read_logs()
    if not logs:
        warn("No se ha encontrado ningun historial de operaciones.")
        return
    err_console.print("[bold magenta]Historial de Operaciones de newsflow[/]")
    err_console.print("[magenta]" + "-" * 60 + "[/magenta]")
    for entry in logs:
        status = "[green]✓ EXITO[/green]" if entry["success"] else "[red]✗ FALLO[/red]"
        ts = datetime.fromisoformat(entry["timestamp"]).strftime('%Y-%m-%d %H:%M:%S')
        err_console.print(f"\\[{ts}] - {status} - [bold]{entry['command']}[/bold]: {entry['message']}")
