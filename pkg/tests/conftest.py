import pytest

from newsflow.corpus import Corpus, Document, Label, Split


@pytest.fixture(autouse=True)
def isolated_log(tmp_path, monkeypatch):
    """Cada test escribe su historial de operaciones en un directorio temporal."""
    log_file = tmp_path / "newsflow_log.json"
    monkeypatch.setenv("NEWSFLOW_LOG_FILE", str(log_file))
    return log_file


def make_corpus(rows):
    """Construye un Corpus a partir de tuplas (id, texto, etiqueta, particion[, idioma])."""
    docs = []
    for row in rows:
        doc_id, text, label, split = row[:4]
        language = row[4] if len(row) > 4 else "en"
        docs.append(Document(doc_id, text, Label(label), Split(split), language))
    return Corpus(docs, "fixture")
