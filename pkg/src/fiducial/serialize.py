"""JSON encoding of models, vectors, transformations and complex matrices.

Models are ``{"kind": ..., "n": ...}`` (composites add ``"parts"``);
vectors and matrices add ``"type"`` and row-major ``"entries"``. Complex
matrices are nested lists of ``[re, im]`` pairs.
"""

import numpy as np

from .classical import ClassicalModel
from .composition import compose_models
from .core import as_matrix, as_vector
from .errors import ConfigError
from .quantum import QuantumChannel, QuantumModel

KINDS = ("classical", "quantum")


def _require(obj, key, where):
    if not isinstance(obj, dict):
        raise ConfigError("expected a JSON object", where)
    if key not in obj:
        raise ConfigError(f"missing field {key!r}", where)
    return obj[key]


def model_from_descriptor(d, where="model"):
    """Rebuild a model from :meth:`TheoryModel.descriptor` output."""
    kind = _require(d, "kind", where)
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {KINDS}", f"{where}.kind")
    unknown = set(d) - {"kind", "n", "parts", "labels"}
    if unknown:
        raise ConfigError(f"unknown fields {sorted(unknown)}", where)
    if "parts" in d:
        parts = [model_from_descriptor(p, f"{where}.parts[{i}]") for i, p in enumerate(d["parts"])]
        if len(parts) != 2:
            raise ConfigError("a composite has exactly two parts", f"{where}.parts")
        model = compose_models(*parts)
        if "n" in d and d["n"] != model.n:
            raise ConfigError(f"n={d['n']} disagrees with parts (n={model.n})", f"{where}.n")
        return model
    n = _require(d, "n", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"n must be a positive integer, got {n!r}", f"{where}.n")
    labels = d.get("labels")
    if kind == "classical":
        return ClassicalModel(n, labels=labels)
    if labels is not None:
        # only standard-frame quantum models round-trip through labels
        return QuantumModel(n, labels=labels)
    return QuantumModel(n)


def vector_to_json(model, v, type_="state"):
    d = dict(model.descriptor())
    d["type"] = type_
    d["entries"] = [float(x) for x in v]
    return d


def vector_from_json(d, type_=None, where="input"):
    """Return ``(model, vector)``; checks ``type`` when given."""
    if type_ is not None and d.get("type", type_) != type_:
        raise ConfigError(f"expected type {type_!r}, got {d.get('type')!r}", f"{where}.type")
    entries = _require(d, "entries", where)
    model = model_from_descriptor({k: v for k, v in d.items() if k in ("kind", "n", "parts", "labels")}, where)
    try:
        v = as_vector(entries, model.k)
    except ValueError as exc:
        raise ConfigError(str(exc), f"{where}.entries") from None
    return model, v


def transform_to_json(model, z):
    d = dict(model.descriptor())
    d["type"] = "transform"
    d["entries"] = [[float(x) for x in row] for row in np.asarray(z)]
    return d


def transform_from_json(d, where="input"):
    entries = _require(d, "entries", where)
    model = model_from_descriptor({k: v for k, v in d.items() if k in ("kind", "n", "parts", "labels")}, where)
    try:
        z = as_matrix(entries, model.k)
    except ValueError as exc:
        raise ConfigError(str(exc), f"{where}.entries") from None
    return model, z


def complex_to_json(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def complex_from_json(obj, where="matrix"):
    """Decode a square matrix of ``[re, im]`` pairs (bare reals also accepted)."""
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("matrix entries must be numbers or [re, im] pairs", where) from None
    if a.ndim == 3 and a.shape[2] == 2:
        a = a[..., 0] + 1j * a[..., 1]
    elif a.ndim != 2:
        raise ConfigError(f"expected a square matrix of [re, im] pairs, got shape {a.shape}", where)
    if a.shape[0] != a.shape[1]:
        raise ConfigError(f"matrix must be square, got shape {a.shape}", where)
    return a.astype(complex)


def channel_from_json(d, where="channel"):
    """Channel from ``{"kraus": [...]}`` or ``{"choi": ...}``."""
    if not isinstance(d, dict):
        raise ConfigError("expected a JSON object", where)
    keys = {"kraus", "choi"} & set(d)
    if len(keys) != 1:
        raise ConfigError("give exactly one of 'kraus' or 'choi'", where)
    if "kraus" in d:
        ks = [complex_from_json(k, f"{where}.kraus[{i}]") for i, k in enumerate(d["kraus"])]
        if not ks:
            raise ConfigError("empty Kraus list", f"{where}.kraus")
        if len({k.shape for k in ks}) != 1:
            raise ConfigError("Kraus operators differ in shape", f"{where}.kraus")
        return QuantumChannel.from_kraus(ks)
    choi = complex_from_json(d["choi"], f"{where}.choi")
    n = int(round(np.sqrt(choi.shape[0])))
    if n * n != choi.shape[0]:
        raise ConfigError("Choi matrix side must be a perfect square", f"{where}.choi")
    return QuantumChannel(choi)


def channel_to_json(channel):
    return {"choi": complex_to_json(channel.choi)}
