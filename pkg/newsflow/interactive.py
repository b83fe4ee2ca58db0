import os

from InquirerPy import inquirer
from InquirerPy.base.control import Choice

from .commands import classify_text, eval_file, run_pipeline, show_logs, stats_file
from .config import load_pipeline_config
from .errors import NewsflowError
from .logs import log_operation
from .textkit import load_stopwords
from .utils import err_console


def _ask_path(message, default=""):
    return inquirer.filepath(message=message, default=default,
                             validate=lambda p: os.path.exists(p),
                             invalid_message="El archivo no existe").execute()


def _stats():
    corpus = _ask_path("Corpus (CSV o JSONL):")
    label = inquirer.select(
        message="Clase:",
        choices=[Choice(None, name="Todas"), Choice("real", name="Real"), Choice("fake", name="Fake")],
    ).execute()
    top_k = int(inquirer.number(message="Cuantas palabras:", default=20, min_allowed=1).execute())
    stats_file(corpus, top_k, load_stopwords(), label=label)


def _pipeline():
    config_path = _ask_path("Archivo de configuracion (TOML o JSON):")
    run_pipeline(load_pipeline_config(config_path))


def _eval():
    model = _ask_path("Modelo entrenado:")
    test = _ask_path("Corpus de prueba:")
    eval_file(model, test)


def _classify():
    model = _ask_path("Modelo entrenado:")
    text_path = _ask_path("Archivo con la noticia:")
    with open(text_path, 'r', encoding='utf-8') as f:
        classify_text(model, f.read(), doc_id=text_path)


def launch_interactive_menu():
    """Menu interactivo con las operaciones mas habituales."""
    err_console.print("\nBienvenido a newsflow: aumento, traduccion y clasificacion de noticias falsas.\n")
    action_map = {
        "stats": _stats,
        "pipeline": _pipeline,
        "eval": _eval,
        "classify": _classify,
        "log": show_logs,
    }

    while True:
        err_console.print("[magenta]" + "="*60 + "[/magenta]")
        choice = inquirer.select(
            message="¿Que te gustaria hacer?",
            choices=[
                Choice("stats", name="Ver palabras mas frecuentes"),
                Choice("pipeline", name="Ejecutar el pipeline completo"),
                Choice("eval", name="Evaluar un modelo"),
                Choice("classify", name="Clasificar una noticia"),
                Choice("log", name="Ver historial de operaciones"),
                Choice(None, name="Salir"),
            ],
            default="stats"
        ).execute()

        if choice is None:
            err_console.print("¡Hasta luego!")
            break

        err_console.print("[magenta]" + "-"*60 + "[/magenta]")
        try:
            action_map[choice]()
        except NewsflowError as e:
            err_console.print(f"[red]✗ {e.code}: {e.detail}[/red]")
            log_operation(choice, f"{e.code}: {e.detail}", success=False)
