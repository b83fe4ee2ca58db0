"""Clasificador real/fake: embeddings promediados, cinco capas densas con dropout,
entrenamiento con parada temprana y metricas a nivel de documento.

Todo el calculo es numpy en float64; el artefacto guarda los tensores en float32.
"""
import json
import math
import struct
from dataclasses import asdict, dataclass, field

import numpy as np
from sklearn.metrics import accuracy_score, confusion_matrix, log_loss

from .corpus import Label
from .errors import ConfigError, EmptyCorpus, EmptyDocument, ModelFormatError, ShapeMismatch, VocabMismatch
from .segment import SegmentConfig, SubwordVocab, segment_document, segment_text

MAGIC = b"TAUG"
FORMAT_VERSION = 1
N_DENSE = 5
PARAM_NAMES = ("embedding",) + tuple(f"{kind}{k}" for k in range(1, N_DENSE + 1) for kind in ("W", "b"))
EPS = 1e-7
EVAL_BATCH = 64


@dataclass(frozen=True)
class ModelConfig:
    embed_dim: int = 64
    dense_dims: tuple = (256, 128, 64, 32, 1)
    dropout_rate: float = 0.1
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dense_dims", tuple(int(d) for d in self.dense_dims))
        if len(self.dense_dims) != N_DENSE or self.dense_dims[-1] != 1:
            raise ConfigError("dense_dims debe tener 5 capas y la ultima de tamano 1")
        if self.embed_dim < 1 or min(self.dense_dims) < 1:
            raise ConfigError("las dimensiones deben ser positivas")
        if not 0 <= self.dropout_rate < 1:
            raise ConfigError("dropout_rate debe estar en [0, 1)")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate debe ser positivo")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    patience: int = 3
    batch_size: int = 32

    def __post_init__(self):
        if min(self.epochs, self.patience, self.batch_size) < 1:
            raise ConfigError("epochs, patience y batch_size deben ser positivos")
        if self.patience > self.epochs:
            raise ConfigError("patience no puede superar a epochs")


@dataclass(frozen=True)
class EpochStats:
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float


@dataclass
class TrainReport:
    """`best_epoch` es un numero de epoca (desde 1)."""
    per_epoch: list = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False
    final: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "final": self.final,
            "best_epoch": self.best_epoch,
            "stopped_early": self.stopped_early,
            "per_epoch": {key: [getattr(s, key) for s in self.per_epoch]
                          for key in ("train_loss", "train_acc", "val_loss", "val_acc")},
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    prob_fake: float
    segment_probs: tuple
    label: Label

    def to_dict(self):
        return {"doc_id": self.doc_id, "prob_fake": self.prob_fake,
                "segment_probs": list(self.segment_probs), "label": self.label.value}


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0


@dataclass
class EvalReport:
    accuracy: float
    loss: float
    confusion: Confusion
    misclassified_ids: list
    predictions: list = field(default_factory=list)

    def to_dict(self):
        return {"accuracy": self.accuracy, "loss": self.loss, "confusion": asdict(self.confusion),
                "misclassified_ids": list(self.misclassified_ids)}


@dataclass
class TrainedModel:
    params: dict
    model_config: ModelConfig
    segment_config: SegmentConfig
    vocab_fingerprint: bytes

    def check_vocab(self, vocab):
        if vocab.fingerprint() != self.vocab_fingerprint:
            raise VocabMismatch("el vocabulario no coincide con el usado para entrenar el modelo")


# --- parametros ---

def init_params(vocab_size, mcfg):
    rng = np.random.default_rng(mcfg.seed)
    params = {"embedding": rng.normal(0.0, 0.1, (vocab_size, mcfg.embed_dim))}
    fan_in = mcfg.embed_dim
    for k, width in enumerate(mcfg.dense_dims, start=1):
        params[f"W{k}"] = rng.normal(0.0, math.sqrt(2.0 / fan_in), (fan_in, width))
        params[f"b{k}"] = np.zeros(width)
        fan_in = width
    return params


def zero_params(vocab_size, mcfg):
    return {name: np.zeros_like(value) for name, value in init_params(vocab_size, mcfg).items()}


def copy_params(params):
    return {name: value.copy() for name, value in params.items()}


def _check_shapes(params, ids):
    missing = [name for name in PARAM_NAMES if name not in params]
    if missing:
        raise ShapeMismatch(f"faltan parametros: {', '.join(missing)}")
    vocab_size, width = params["embedding"].shape
    for k in range(1, N_DENSE + 1):
        w, b = params[f"W{k}"], params[f"b{k}"]
        if w.ndim != 2 or w.shape[0] != width or b.shape != (w.shape[1],):
            raise ShapeMismatch(f"la capa {k} espera entrada {width}, tiene {w.shape}")
        width = w.shape[1]
    if width != 1:
        raise ShapeMismatch("la ultima capa debe tener salida 1")
    if ids.size and (ids.max() >= vocab_size or ids.min() < 0):
        raise ShapeMismatch(f"hay ids fuera del vocabulario ({vocab_size})")


# --- red ---

def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def _forward(params, ids, train=False, rng=None, dropout_rate=0.0):
    mask = (ids != SubwordVocab.pad_id).astype(np.float64)
    counts = np.maximum(mask.sum(axis=1, keepdims=True), 1.0)
    h = (params["embedding"][ids] * mask[..., None]).sum(axis=1) / counts
    cache = {"ids": ids, "mask": mask, "counts": counts, "inputs": [h], "pre": [], "keep": []}
    for k in range(1, N_DENSE):
        z = h @ params[f"W{k}"] + params[f"b{k}"]
        h = np.maximum(z, 0.0)
        keep = None
        if train and dropout_rate > 0:
            keep = (rng.random(h.shape) >= dropout_rate) / (1.0 - dropout_rate)
            h = h * keep
        cache["pre"].append(z)
        cache["keep"].append(keep)
        cache["inputs"].append(h)
    logits = (h @ params[f"W{N_DENSE}"] + params[f"b{N_DENSE}"]).ravel()
    return logits, cache


def _backward(params, cache, logits, labels):
    dz = ((_sigmoid(logits) - labels) / len(labels))[:, None]
    grads = {}
    for k in range(N_DENSE, 0, -1):
        h_in = cache["inputs"][k - 1]
        grads[f"W{k}"] = h_in.T @ dz
        grads[f"b{k}"] = dz.sum(axis=0)
        dh = dz @ params[f"W{k}"].T
        if k > 1:
            keep = cache["keep"][k - 2]
            if keep is not None:
                dh = dh * keep
            dz = dh * (cache["pre"][k - 2] > 0)
    rows, cols = np.nonzero(cache["mask"])
    grad_emb = np.zeros_like(params["embedding"])
    np.add.at(grad_emb, cache["ids"][rows, cols], (dh / cache["counts"])[rows])
    grads["embedding"] = grad_emb
    return grads


def bce_from_logits(logits, labels):
    return float(np.mean(np.logaddexp(0.0, logits) - labels * logits))


def loss_and_grads(params, ids, labels, train=False, rng=None, dropout_rate=0.0):
    """Perdida de entropia cruzada binaria media y sus gradientes respecto a cada parametro."""
    ids = np.asarray(ids)
    labels = np.asarray(labels, dtype=np.float64)
    logits, cache = _forward(params, ids, train, rng, dropout_rate)
    return bce_from_logits(logits, labels), _backward(params, cache, logits, labels), logits


def predict_proba(params, ids):
    ids = np.atleast_2d(np.asarray(ids))
    _check_shapes(params, ids)
    probs = []
    for start in range(0, len(ids), EVAL_BATCH):
        logits, _ = _forward(params, ids[start:start + EVAL_BATCH])
        probs.append(np.clip(_sigmoid(logits), EPS, 1.0 - EPS))
    return np.concatenate(probs) if probs else np.zeros(0)


def forward(segment, params):
    """Probabilidad de fake de un segmento, en modo evaluacion."""
    ids = segment.ids if hasattr(segment, "ids") else segment
    return float(predict_proba(params, [ids])[0])


class Adam:
    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        c1, c2 = 1.0 - self.beta1 ** self.t, 1.0 - self.beta2 ** self.t
        for name, g in grads.items():
            self.m[name] = self.beta1 * self.m[name] + (1.0 - self.beta1) * g
            self.v[name] = self.beta2 * self.v[name] + (1.0 - self.beta2) * g * g
            params[name] -= self.lr * (self.m[name] / c1) / (np.sqrt(self.v[name] / c2) + self.eps)


class EarlyStopping:
    """Para cuando la precision de validacion no mejora (estrictamente) durante `patience` epocas."""

    def __init__(self, patience):
        self.patience = patience
        self.best_score = -math.inf
        self.best_epoch = 0
        self.best_params = None
        self.wait = 0

    def update(self, epoch, score, params=None):
        if score > self.best_score:
            self.best_score, self.best_epoch, self.wait = score, epoch, 0
            if params is not None:
                self.best_params = copy_params(params)
            return False
        self.wait += 1
        return self.wait >= self.patience


# --- datos codificados ---

@dataclass
class EncodedCorpus:
    ids: np.ndarray
    labels: np.ndarray
    doc_ids: list
    doc_labels: np.ndarray
    slices: list


def encode_corpus(corpus, vocab, scfg):
    rows, labels, slices, doc_ids, doc_labels = [], [], [], [], []
    for doc in corpus:
        segments = segment_document(doc, vocab, scfg)
        slices.append(slice(len(rows), len(rows) + len(segments)))
        rows.extend(seg.ids for seg in segments)
        labels.extend([float(doc.is_fake)] * len(segments))
        doc_ids.append(doc.id)
        doc_labels.append(float(doc.is_fake))
    ids = np.array(rows, dtype=np.int64).reshape(len(rows), scfg.max_seq_len)
    return EncodedCorpus(ids, np.array(labels), doc_ids, np.array(doc_labels), slices)


def aggregate(doc_id, segment_probs):
    """Media de las probabilidades de los segmentos; >= 0.5 es fake."""
    segment_probs = tuple(float(p) for p in segment_probs)
    prob = math.fsum(segment_probs) / len(segment_probs)
    return Prediction(doc_id, prob, segment_probs, Label.FAKE if prob >= 0.5 else Label.REAL)


def _predict_encoded(params, encoded):
    probs = predict_proba(params, encoded.ids)
    return [aggregate(doc_id, probs[sl]) for doc_id, sl in zip(encoded.doc_ids, encoded.slices)]


def metrics_from_predictions(predictions, truth):
    """Metricas de un conjunto de predicciones. `truth` mapea doc_id -> Label."""
    if not predictions:
        raise EmptyCorpus("no hay documentos que evaluar")
    y_true = np.array([Label(truth[pred.doc_id]) is Label.FAKE for pred in predictions], dtype=int)
    y_pred = np.array([pred.label is Label.FAKE for pred in predictions], dtype=int)
    probs = np.clip([pred.prob_fake for pred in predictions], EPS, 1.0 - EPS)
    tn, fp, fn, tp = confusion_matrix(y_true, y_pred, labels=[0, 1]).ravel()
    wrong = [pred.doc_id for pred, t, p in zip(predictions, y_true, y_pred) if t != p]
    return EvalReport(float(accuracy_score(y_true, y_pred)), float(log_loss(y_true, probs, labels=[0, 1])),
                      Confusion(int(tp), int(fp), int(tn), int(fn)), wrong, list(predictions))


def _encoded_metrics(params, encoded):
    truth = {doc_id: Label.FAKE if y else Label.REAL for doc_id, y in zip(encoded.doc_ids, encoded.doc_labels)}
    return metrics_from_predictions(_predict_encoded(params, encoded), truth)


# --- operaciones ---

def train(train_corpus, val_corpus, vocab, mcfg=ModelConfig(), tcfg=TrainConfig(), scfg=SegmentConfig(),
          on_epoch=None):
    """Entrena con parada temprana y devuelve los parametros de la mejor epoca."""
    if not len(train_corpus):
        raise EmptyCorpus("el corpus de entrenamiento esta vacio")
    if not len(val_corpus):
        raise EmptyCorpus("el corpus de validacion esta vacio")
    train_data = encode_corpus(train_corpus, vocab, scfg)
    val_data = encode_corpus(val_corpus, vocab, scfg)
    params = init_params(len(vocab), mcfg)
    _check_shapes(params, train_data.ids)
    rng = np.random.default_rng(np.random.SeedSequence(mcfg.seed).spawn(1)[0])
    optimizer = Adam(params, mcfg.learning_rate)
    stopper = EarlyStopping(tcfg.patience)
    report = TrainReport()
    n = len(train_data.labels)

    for epoch in range(1, tcfg.epochs + 1):
        order = rng.permutation(n)
        loss_sum, correct = 0.0, 0
        for start in range(0, n, tcfg.batch_size):
            batch = order[start:start + tcfg.batch_size]
            y = train_data.labels[batch]
            loss, grads, logits = loss_and_grads(params, train_data.ids[batch], y, True, rng, mcfg.dropout_rate)
            optimizer.step(params, grads)
            loss_sum += loss * len(batch)
            correct += int(np.sum((logits >= 0) == (y == 1.0)))
        val = _encoded_metrics(params, val_data)
        stats = EpochStats(loss_sum / n, correct / n, val.loss, val.accuracy)
        report.per_epoch.append(stats)
        stop = stopper.update(epoch, val.accuracy, params)
        if on_epoch:
            on_epoch(epoch, stats)
        if stop:
            report.stopped_early = True
            break

    params = stopper.best_params
    report.best_epoch = stopper.best_epoch
    best = report.per_epoch[report.best_epoch - 1]
    general = _encoded_metrics(params, train_data)
    report.final = {
        "general_accuracy": general.accuracy,
        "loss": general.loss,
        "validation_accuracy": best.val_acc,
        "validation_loss": best.val_loss,
        "best_epoch_train_accuracy": best.train_acc,
    }
    return params, report


def _predict_segments(doc_id, text, segments, params):
    if not text.strip():
        raise EmptyDocument(f"el documento '{doc_id}' esta vacio")
    return aggregate(doc_id, predict_proba(params, [seg.ids for seg in segments]))


def predict(doc, params, vocab, scfg=SegmentConfig()):
    """Prediccion de un documento: media de las probabilidades de sus ventanas."""
    return _predict_segments(doc.id, doc.text, segment_document(doc, vocab, scfg), params)


def predict_text(text, params, vocab, scfg=SegmentConfig(), doc_id=""):
    return _predict_segments(doc_id, text, segment_text(text, vocab, scfg, doc_id), params)


def evaluate(docs, params, vocab, scfg=SegmentConfig()):
    if not len(docs):
        raise EmptyCorpus("el corpus de evaluacion esta vacio")
    predictions = [predict(doc, params, vocab, scfg) for doc in docs]
    return metrics_from_predictions(predictions, {doc.id: doc.label for doc in docs})


# --- artefacto binario ---

def save_model(model, path):
    header = json.dumps({"model": asdict(model.model_config), "segment": asdict(model.segment_config)},
                        sort_keys=True).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<H", FORMAT_VERSION))
        f.write(struct.pack("<I", len(header)))
        f.write(header)
        f.write(model.vocab_fingerprint)
        f.write(struct.pack("<H", len(PARAM_NAMES)))
        for name in PARAM_NAMES:
            tensor = np.ascontiguousarray(model.params[name], dtype="<f4")
            f.write(struct.pack("<B", tensor.ndim))
            f.write(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
            f.write(tensor.tobytes(order="C"))


def _read(f, size):
    data = f.read(size)
    if len(data) != size:
        raise ModelFormatError("el archivo del modelo esta truncado")
    return data


def load_model(path):
    with open(path, "rb") as f:
        if _read(f, 4) != MAGIC:
            raise ModelFormatError(f"'{path}' no es un modelo newsflow")
        (version,) = struct.unpack("<H", _read(f, 2))
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"version de modelo no soportada: {version}")
        (header_len,) = struct.unpack("<I", _read(f, 4))
        try:
            header = json.loads(_read(f, header_len).decode("utf-8"))
            model_config, segment_config = ModelConfig(**header["model"]), SegmentConfig(**header["segment"])
        except (UnicodeDecodeError, ValueError, KeyError, TypeError, ConfigError) as e:
            raise ModelFormatError(f"cabecera de modelo invalida: {e}")
        fingerprint = _read(f, 32)
        (count,) = struct.unpack("<H", _read(f, 2))
        if count != len(PARAM_NAMES):
            raise ModelFormatError(f"se esperaban {len(PARAM_NAMES)} tensores, hay {count}")
        params = {}
        for name in PARAM_NAMES:
            (ndim,) = struct.unpack("<B", _read(f, 1))
            shape = struct.unpack(f"<{ndim}I", _read(f, 4 * ndim))
            size = int(np.prod(shape)) * 4
            params[name] = np.frombuffer(_read(f, size), dtype="<f4").reshape(shape).astype(np.float64)
    return TrainedModel(params, model_config, segment_config, fingerprint)
