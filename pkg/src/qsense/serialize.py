"""JSON interchange formats for matrices, states, ensembles, and channels.

Matrices travel as {"dim": n, "re": [[...]], "im": [[...]]} with row-major
real/imaginary parts; state vectors as {"re": [...], "im": [...]};
ensembles as {"weights": [...], "states": [vector, ...]}.  Channel specs
name a shipped family instead of serializing Kraus operators:
{"kind": "unitary" | "unitary+depolarizing", "h": matrix, "K": n, "gamma": g}.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import GeneratorSpec, ParamChannel, depolarizing_compose, unitary_channel
from .errors import ConfigError, IoError
from .states import Decomposition


def matrix_to_json(m: np.ndarray) -> dict:
    a = np.asarray(m, dtype=complex)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad matrix object: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ConfigError(
            f"matrix arrays must be {dim}x{dim}, got {re.shape} and {im.shape}"
        )
    return re + 1j * im


def vector_to_json(v: np.ndarray) -> dict:
    a = np.asarray(v, dtype=complex).ravel()
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def vector_from_json(obj: dict) -> np.ndarray:
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad vector object: {exc}") from exc
    if re.shape != im.shape or re.ndim != 1:
        raise ConfigError("vector re/im parts must be equal-length 1-D arrays")
    return re + 1j * im


def decomposition_to_json(d: Decomposition) -> dict:
    return {
        "weights": [float(w) for w in d.weights],
        "states": [vector_to_json(s) for s in d.states],
    }


def decomposition_from_json(obj: dict) -> Decomposition:
    try:
        weights = obj["weights"]
        states = [vector_from_json(s) for s in obj["states"]]
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad decomposition object: {exc}") from exc
    return Decomposition(weights=np.asarray(weights, dtype=float),
                         states=np.asarray(states, dtype=complex))


CHANNEL_KINDS = ("unitary", "unitary+depolarizing")


def channel_from_json(obj: dict) -> ParamChannel:
    kind = obj.get("kind")
    if kind not in CHANNEL_KINDS:
        raise ConfigError(f"channel kind must be one of {CHANNEL_KINDS}, got {kind!r}")
    if "h" not in obj or "K" not in obj:
        raise ConfigError("channel spec requires 'h' (matrix) and 'K' (site count)")
    h = matrix_from_json(obj["h"])
    g = GeneratorSpec(h=h, n_sites=int(obj["K"]))
    ch = unitary_channel(g)
    if kind == "unitary+depolarizing":
        if "gamma" not in obj:
            raise ConfigError("depolarizing channel spec requires 'gamma'")
        ch = depolarizing_compose(ch, float(obj["gamma"]))
    return ch


def channel_spec_to_json(h: np.ndarray, n_sites: int, gamma: float = 0.0) -> dict:
    spec = {"kind": "unitary", "h": matrix_to_json(h), "K": int(n_sites)}
    if gamma > 0.0:
        spec["kind"] = "unitary+depolarizing"
        spec["gamma"] = float(gamma)
    return spec


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc


def dump_json(obj: dict, path) -> None:
    try:
        Path(path).write_text(
            json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    except (OSError, ValueError) as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
