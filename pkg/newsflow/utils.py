import re
import sys

import pyfiglet
from rich.console import Console
from rich.text import Text

from .errors import ConfigError

# Todo lo que no son datos va a stderr; stdout queda libre para CSV/JSON.
err_console = Console(stderr=True)

_DURATION_RE = re.compile(r"^\s*(\d+(?:\.\d*)?|\.\d+)\s*(ms|s|m)?\s*$")
_UNITS = {"ms": 0.001, "s": 1.0, "m": 60.0, None: 1.0}


def display_banner():
    """
    Muestra un banner ASCII art con el nombre de la herramienta, alineado a la izquierda.
    Solo cuando stderr es una terminal.
    """
    if not sys.stderr.isatty():
        return
    banner_text = pyfiglet.figlet_format("NEWSFLOW", font="standard")
    err_console.print(Text(banner_text, style="bold magenta"))


def success(message):
    err_console.print(f"[green]✓ {message}[/green]")


def warn(message):
    err_console.print(f"[yellow]! {message}[/yellow]")


def parse_duration(value):
    """Convierte '1s', '500ms', '2m' o '0.1' a segundos."""
    if isinstance(value, (int, float)):
        return float(value)
    match = _DURATION_RE.match(str(value))
    if not match:
        raise ConfigError(f"duracion invalida '{value}' (ejemplos: 1s, 500ms, 0.1)")
    return float(match.group(1)) * _UNITS[match.group(2)]
