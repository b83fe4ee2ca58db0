"""Errores de dominio de newsflow.

Cada error lleva un `code` corto que la CLI imprime como `ERROR <code>: <detalle>`.
"""


class NewsflowError(Exception):
    code = "newsflow"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail

    def __str__(self):
        return self.detail


# --- corpus ---

class MissingColumn(NewsflowError):
    code = "MissingColumn"

    def __init__(self, column):
        super().__init__(f"falta la columna '{column}'")
        self.column = column


class EmptyText(NewsflowError):
    code = "EmptyText"

    def __init__(self, row):
        super().__init__(f"texto vacio en la fila {row}")
        self.row = row


class DuplicateId(NewsflowError):
    code = "DuplicateId"

    def __init__(self, doc_id, row=None):
        where = f" (fila {row})" if row is not None else ""
        super().__init__(f"id duplicado '{doc_id}'{where}")
        self.doc_id = doc_id
        self.row = row


class BadLabel(NewsflowError):
    code = "BadLabel"

    def __init__(self, row, value=""):
        super().__init__(f"etiqueta invalida '{value}' en la fila {row} (se espera real|fake)")
        self.row = row


class BadSplit(NewsflowError):
    code = "BadSplit"

    def __init__(self, row, value=""):
        super().__init__(f"particion invalida '{value}' en la fila {row} (se espera train|test)")
        self.row = row


class TooFewDocuments(NewsflowError):
    code = "TooFewDocuments"


class CorpusIoError(NewsflowError):
    code = "IoError"


# --- lexicon ---

class LexiconFormatError(NewsflowError):
    code = "LexiconFormat"


# --- translate ---

class OversizeSentence(NewsflowError):
    code = "OversizeSentence"

    def __init__(self, index, length=None, limit=None):
        extra = f" ({length} > {limit} caracteres)" if length is not None else ""
        super().__init__(f"la oracion {index} excede el limite de la traduccion{extra}")
        self.index = index


class BackendFailure(NewsflowError):
    code = "BackendFailure"

    def __init__(self, chunk_index, reason=""):
        super().__init__(f"el backend fallo en el fragmento {chunk_index}: {reason}".rstrip(": "))
        self.chunk_index = chunk_index


class CheckpointError(NewsflowError):
    code = "IoError"


# --- segment / classifier ---

class VocabFormatError(NewsflowError):
    code = "VocabFormat"


class VocabMismatch(NewsflowError):
    code = "VocabMismatch"


class ModelFormatError(NewsflowError):
    code = "ModelFormat"


class ShapeMismatch(NewsflowError):
    code = "ShapeMismatch"


class EmptyCorpus(NewsflowError):
    code = "EmptyCorpus"


class EmptyDocument(NewsflowError):
    code = "EmptyDocument"


# --- cli / config ---

class ConfigError(NewsflowError):
    code = "Config"


class MissingFile(NewsflowError):
    code = "MissingFile"

    def __init__(self, path):
        super().__init__(f"no existe el archivo '{path}'")
        self.path = path
