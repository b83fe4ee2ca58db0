import sys
import functools

import click

from .commands import (
    augment_file, classify_text, eval_file, ingest_corpora, neighbors_word, run_pipeline, show_logs,
    stats_file, train_file, translate_file,
)
from .config import load_pipeline_config
from .errors import NewsflowError
from .interactive import launch_interactive_menu
from .logs import log_operation
from .textkit import load_stopwords
from .utils import display_banner


def domain_errors(command):
    """Convierte los errores de dominio en una linea `ERROR <code>: <detalle>` y salida 1."""
    def decorator(f):
        @functools.wraps(f)
        def wrapper(*args, **kwargs):
            try:
                return f(*args, **kwargs)
            except NewsflowError as e:
                detail = " ".join(str(e.detail).split())
                click.echo(f"ERROR {e.code}: {detail}", err=True)
                log_operation(command, f"{e.code}: {detail}", success=False)
                sys.exit(1)
        return wrapper
    return decorator


config_option = click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                             help="Archivo TOML o JSON con la configuracion; los flags tienen prioridad.")


def _need(value, flag):
    if value is None:
        raise click.UsageError(f"falta {flag} (o la ruta correspondiente en --config)")
    return value


@click.group(invoke_without_command=True)
@click.pass_context
def cli(ctx):
    """newsflow: aumento de datos, traduccion y clasificacion de noticias falsas."""
    display_banner()
    if ctx.invoked_subcommand is None:
        if sys.stdin.isatty() and sys.stdout.isatty():
            launch_interactive_menu()
        else:
            click.echo(ctx.get_help(), err=True)
            ctx.exit(2)


@cli.command()
@click.option('--in', 'inputs', multiple=True, required=True, type=click.Path(dir_okay=False),
              help="Corpus CSV o JSONL; se puede repetir.")
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False))
@domain_errors("ingest")
def ingest(inputs, out_path):
    """Valida, une y convierte corpus (Real/Fake x Train/Test)."""
    ingest_corpora(list(inputs), out_path)


@cli.command()
@config_option
@click.option('--in', 'in_path', type=click.Path(dir_okay=False))
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False))
@click.option('--lexicon', type=click.Path(file_okay=False))
@click.option('--threshold', type=float)
@click.option('--mode', type=click.Choice(['append', 'replace']))
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False))
@domain_errors("augment")
def augment(config_path, in_path, out_path, lexicon, threshold, mode, trace_path):
    """Sustituye sustantivos por su sinonimo mas parecido (similitud >= umbral)."""
    cfg = load_pipeline_config(config_path, {
        "paths.corpus": in_path, "paths.lexicon": lexicon,
        "augment.threshold": threshold, "augment.mode": mode,
    })
    augment_file(_need(cfg.corpus, "--in"), out_path, _need(cfg.lexicon, "--lexicon"), cfg.augment, trace_path)


@cli.command()
@config_option
@click.option('--in', 'in_path', type=click.Path(dir_okay=False))
@click.option('--out', 'out_path', required=True, type=click.Path(dir_okay=False))
@click.option('--backend', help="mock:<mapa.json>, command:<exe> o identity")
@click.option('--src')
@click.option('--tgt')
@click.option('--max-chars', type=int)
@click.option('--delay', help="Pausa entre peticiones, p. ej. 1s o 500ms.")
@click.option('--checkpoint', type=click.Path(dir_okay=False))
@click.option('--per-sentence', is_flag=True, default=None, help="Una peticion por oracion.")
@domain_errors("translate")
def translate(config_path, in_path, out_path, backend, src, tgt, max_chars, delay, checkpoint, per_sentence):
    """Traduce el corpus por fragmentos respetando el limite de caracteres."""
    cfg = load_pipeline_config(config_path, {
        "paths.corpus": in_path, "paths.checkpoint": checkpoint, "translate.backend": backend,
        "translate.src": src, "translate.tgt": tgt, "translate.max_chars": max_chars,
        "translate.delay": delay, "translate.per_sentence": per_sentence,
    })
    translate_file(_need(cfg.corpus, "--in"), out_path, _need(cfg.backend, "--backend"), cfg.translate,
                   cfg.checkpoint)


@cli.command()
@config_option
@click.option('--train', 'train_path', type=click.Path(dir_okay=False))
@click.option('--val-fraction', type=float)
@click.option('--vocab', 'vocab_path', type=click.Path(dir_okay=False),
              help="Vocabulario; si no existe se construye y se guarda aqui.")
@click.option('--vocab-size', type=int)
@click.option('--out', 'model_path', type=click.Path(dir_okay=False))
@click.option('--report', 'report_path', type=click.Path(dir_okay=False))
@click.option('--epochs', type=int)
@click.option('--patience', type=int)
@click.option('--batch-size', type=int)
@click.option('--seed', type=int)
@domain_errors("train")
def train(config_path, train_path, val_fraction, vocab_path, vocab_size, model_path, report_path, epochs,
          patience, batch_size, seed):
    """Entrena el clasificador con parada temprana."""
    # El vocabulario de --vocab puede no existir todavia; se resuelve aparte.
    cfg = load_pipeline_config(config_path, {
        "paths.corpus": train_path, "paths.model": model_path,
        "train.val_fraction": val_fraction, "train.vocab_size": vocab_size, "train.epochs": epochs,
        "train.patience": patience, "train.batch_size": batch_size, "model.seed": seed,
    })
    train_file(_need(cfg.corpus, "--train"), vocab_path or cfg.vocab, _need(cfg.model, "--out"),
               cfg.model_config, cfg.train, cfg.segment, cfg.val_fraction, cfg.vocab_size, report_path)


@cli.command(name="eval")
@click.option('--model', 'model_path', required=True, type=click.Path(dir_okay=False))
@click.option('--test', 'test_path', required=True, type=click.Path(dir_okay=False))
@click.option('--vocab', 'vocab_path', type=click.Path(dir_okay=False),
              help="Por defecto <modelo>.vocab")
@click.option('--misclassified-freq', 'freq_path', type=click.Path(dir_okay=False))
@click.option('--stopwords', 'stopwords_path', type=click.Path(dir_okay=False))
@click.option('--top', default=20, show_default=True, type=click.IntRange(min=1))
@click.option('--metrics-out', 'metrics_path', type=click.Path(dir_okay=False))
@domain_errors("eval")
def evaluate_cmd(model_path, test_path, vocab_path, freq_path, stopwords_path, top, metrics_path):
    """Evalua el modelo sobre la particion de prueba."""
    eval_file(model_path, test_path, vocab_path, freq_path, stopwords_path, top, metrics_path)


@cli.command()
@click.option('--model', 'model_path', required=True, type=click.Path(dir_okay=False))
@click.option('--text', 'text_file', required=True, type=click.File('r', encoding='utf-8'),
              help="Archivo de texto o '-' para stdin.")
@click.option('--vocab', 'vocab_path', type=click.Path(dir_okay=False))
@domain_errors("classify")
def classify(model_path, text_file, vocab_path):
    """Clasifica una noticia y emite la prediccion en JSON."""
    classify_text(model_path, text_file.read(), vocab_path, doc_id=text_file.name)


@cli.command()
@click.option('--in', 'in_path', required=True, type=click.Path(dir_okay=False))
@click.option('--top', default=20, show_default=True, type=click.IntRange(min=1))
@click.option('--stopwords', 'stopwords_path', type=click.Path(dir_okay=False),
              help="Lista propia; por defecto la lista portugues+ingles incluida.")
@click.option('--no-stopwords', is_flag=True, help="No filtrar stopwords.")
@click.option('--label', type=click.Choice(['real', 'fake']))
@click.option('--split', type=click.Choice(['train', 'test']))
@click.option('--format', 'fmt', default='csv', show_default=True, type=click.Choice(['csv', 'json']))
@click.option('--out', 'out_path', type=click.Path(dir_okay=False))
@domain_errors("stats")
def stats(in_path, top, stopwords_path, no_stopwords, label, split, fmt, out_path):
    """Tabla de frecuencias de palabras (la base de una nube de palabras)."""
    stopwords = frozenset() if no_stopwords else load_stopwords(stopwords_path)
    stats_file(in_path, top, stopwords, label, split, fmt, out_path)


@cli.command()
@click.option('--lexicon', required=True, type=click.Path(file_okay=False))
@click.option('--top', default=10, show_default=True, type=click.IntRange(min=1))
@click.argument('word')
@domain_errors("neighbors")
def neighbors(lexicon, top, word):
    """Palabras del lexico mas parecidas a WORD (similitud coseno)."""
    neighbors_word(lexicon, word, top)


@cli.command()
@config_option
@click.option('--out', 'output_dir', type=click.Path(file_okay=False))
@click.option('--seed', type=int)
@click.option('--epochs', type=int)
@click.option('--threshold', type=float)
@click.option('--baseline/--no-baseline', default=None,
              help="Entrena tambien sin aumento y compara antes/despues.")
@domain_errors("pipeline")
def pipeline(config_path, output_dir, seed, epochs, threshold, baseline):
    """Secuencia completa: aumento -> traduccion -> entrenamiento -> evaluacion."""
    cfg = load_pipeline_config(config_path, {
        "paths.output": output_dir, "model.seed": seed, "train.epochs": epochs,
        "augment.threshold": threshold, "train.baseline": baseline,
    })
    run_pipeline(cfg)


@cli.command()
def log():
    """Muestra el historial de operaciones de newsflow."""
    show_logs()


if __name__ == '__main__':
    cli()
