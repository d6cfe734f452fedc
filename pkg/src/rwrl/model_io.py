"""Versioned line-oriented text serialization for trained models.

SVM files start with ``#rwrl-svm-v1``, k-NN files with ``#rwrl-knn-v1``.
Floats are written with repr(), which round-trips exactly, so a loaded
model reproduces bit-identical predictions.
"""

from __future__ import annotations

import numpy as np

from .errors import CorruptModelError, VersionMismatchError
from .knn import KnnModel
from .svm import BinaryMachine, KernelParams, SvmModel

SVM_VERSION = "#rwrl-svm-v1"
KNN_VERSION = "#rwrl-knn-v1"
_END = "end"


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def _parse_floats(fields, what: str) -> np.ndarray:
    try:
        return np.array([float(f) for f in fields], dtype=np.float64)
    except ValueError:
        raise CorruptModelError(f"non-numeric {what}") from None


def model_save(model) -> bytes:
    """Serialize an SvmModel or KnnModel to bytes."""
    if isinstance(model, SvmModel):
        return _save_svm(model)
    if isinstance(model, KnnModel):
        return _save_knn(model)
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _save_svm(model: SvmModel) -> bytes:
    p = model.params
    lines = [
        SVM_VERSION,
        f"kernel {p.kind} degree={int(p.degree)} gamma={float(p.gamma)!r} "
        f"coef0={float(p.coef0)!r} C={float(p.C)!r}",
        "classes " + " ".join(str(c) for c in model.classes),
        f"dim {model.dim}",
        "mean " + _floats(model.mean),
        "std " + _floats(model.std),
    ]
    for m in model.machines:
        lines.append(f"machine {m.first} {m.second} nsv={len(m.coefficients)} "
                     f"bias={float(m.bias)!r}")
        for coef, sv in zip(m.coefficients, m.support_vectors):
            lines.append(repr(float(coef)) + " " + _floats(sv))
    lines.append(_END)
    return ("\n".join(lines) + "\n").encode("ascii")


def _save_knn(model: KnnModel) -> bytes:
    lines = [
        KNN_VERSION,
        f"k {model.k}",
        "classes " + " ".join(str(c) for c in model.classes),
        f"dim {model.dim}",
        "mean " + _floats(model.mean),
        "std " + _floats(model.std),
        f"samples {len(model.samples)}",
    ]
    for label, row in zip(model.labels, model.samples):
        lines.append(f"{int(label)} " + _floats(row))
    lines.append(_END)
    return ("\n".join(lines) + "\n").encode("ascii")


class _Reader:
    def __init__(self, data: bytes):
        try:
            self.lines = data.decode("ascii").splitlines()
        except UnicodeDecodeError:
            raise CorruptModelError("model file is not ASCII text") from None
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise CorruptModelError("model file ends prematurely")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def expect(self, key: str) -> list[str]:
        fields = self.next().split()
        if not fields or fields[0] != key:
            raise CorruptModelError(f"expected {key!r} record")
        return fields[1:]


def model_load(data: bytes):
    """Deserialize bytes written by model_save."""
    reader = _Reader(data)
    header = reader.next().strip()
    if header == SVM_VERSION:
        return _load_svm(reader)
    if header == KNN_VERSION:
        return _load_knn(reader)
    if header.startswith("#rwrl-svm-v") or header.startswith("#rwrl-knn-v"):
        raise VersionMismatchError(f"unsupported model version {header!r}")
    raise CorruptModelError("unrecognized model header")


def _parse_kv(fields, keys) -> dict:
    out = {}
    for field in fields:
        if "=" not in field:
            raise CorruptModelError(f"bad key=value field {field!r}")
        key, value = field.split("=", 1)
        if key not in keys:
            raise CorruptModelError(f"unknown field {key!r}")
        out[key] = value
    missing = set(keys) - out.keys()
    if missing:
        raise CorruptModelError(f"missing fields {sorted(missing)}")
    return out


def _load_svm(reader: _Reader) -> SvmModel:
    fields = reader.expect("kernel")
    if not fields:
        raise CorruptModelError("kernel record lacks a kind")
    kv = _parse_kv(fields[1:], ("degree", "gamma", "coef0", "C"))
    try:
        params = KernelParams(fields[0], int(kv["degree"]), float(kv["gamma"]),
                              float(kv["coef0"]), float(kv["C"]))
    except ValueError as exc:
        raise CorruptModelError(f"bad kernel parameters: {exc}") from None
    classes = _parse_ints(reader.expect("classes"))
    dim = _parse_dim(reader)
    mean = _parse_floats(reader.expect("mean"), "mean")
    std = _parse_floats(reader.expect("std"), "std")
    if len(mean) != dim or len(std) != dim:
        raise CorruptModelError("scaling statistics disagree with dim")

    model = SvmModel(classes, params, mean, std)
    expected_pairs = len(classes) * (len(classes) - 1) // 2
    for _ in range(expected_pairs):
        head = reader.expect("machine")
        if len(head) != 4:
            raise CorruptModelError("bad machine record")
        first, second = _parse_ints(head[:2])
        kv = _parse_kv(head[2:], ("nsv", "bias"))
        try:
            nsv, bias = int(kv["nsv"]), float(kv["bias"])
        except ValueError:
            raise CorruptModelError("bad machine parameters") from None
        coefs = np.empty(nsv)
        svs = np.empty((nsv, dim))
        for row in range(nsv):
            fields = reader.next().split()
            if len(fields) != dim + 1:
                raise CorruptModelError(
                    f"support vector row has {len(fields)} fields, "
                    f"expected {dim + 1}")
            values = _parse_floats(fields, "support vector")
            coefs[row] = values[0]
            svs[row] = values[1:]
        model.machines.append(BinaryMachine(first, second, svs, coefs, bias))
    if reader.next().strip() != _END:
        raise CorruptModelError("missing end marker")
    return model


def _load_knn(reader: _Reader) -> KnnModel:
    fields = reader.expect("k")
    try:
        k = int(fields[0])
    except (IndexError, ValueError):
        raise CorruptModelError("bad k record") from None
    classes = _parse_ints(reader.expect("classes"))
    dim = _parse_dim(reader)
    mean = _parse_floats(reader.expect("mean"), "mean")
    std = _parse_floats(reader.expect("std"), "std")
    fields = reader.expect("samples")
    try:
        count = int(fields[0])
    except (IndexError, ValueError):
        raise CorruptModelError("bad samples record") from None
    labels = np.empty(count, dtype=np.int64)
    rows = np.empty((count, dim))
    for row in range(count):
        fields = reader.next().split()
        if len(fields) != dim + 1:
            raise CorruptModelError("bad sample row")
        labels[row] = _parse_ints(fields[:1])[0]
        rows[row] = _parse_floats(fields[1:], "sample")
    if reader.next().strip() != _END:
        raise CorruptModelError("missing end marker")
    return KnnModel(k, classes, mean, std, rows, labels)


def _parse_ints(fields) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise CorruptModelError("non-integer field") from None


def _parse_dim(reader: _Reader) -> int:
    fields = reader.expect("dim")
    try:
        return int(fields[0])
    except (IndexError, ValueError):
        raise CorruptModelError("bad dim record") from None
