"""JSON chain configuration files.

Example::

    {
      "channels": 1,
      "dummy": 0,
      "B": 3,
      "layers": [
        {"kind": "conv", "weights": [[[1.0]], [[1.0]]]},
        {"kind": "pool-max", "size": 2}
      ]
    }

Sliding operations (``conv``, ``bias``, ``pointwise``) accumulate into the
sliding kernel of the current layer; a pooling entry (``pool-max``,
``pool-avg``, ``bypass``) closes it. Trailing sliding operations form a
final layer with a bypass. ``weights`` may be an inline ``c x m x n``
nested list or a path to a rank-3 NSF file relative to the config file.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Optional

from . import nsf
from .chain import ChainLayer, ProcessingChain, build_chain
from .cnn import FilterBank, avg_pool_kernel, bias_kernel, conv_kernel, max_pool_kernel, pointwise_kernel, relu
from .errors import ParseError
from .signal import Kernel, identity_kernel
from .windowed import slide

POINTWISE = {
    "identity": lambda x: x,
    "relu": relu,
    "tanh": math.tanh,
    "abs": abs,
    "square": lambda x: x * x,
    "sigmoid": lambda x: 1.0 / (1.0 + math.exp(-x)),
}


def compose_sliding(kernels: list) -> Kernel:
    """Single kernel equal to sliding the given kernels one after another."""
    if not kernels:
        return identity_kernel()
    if len(kernels) == 1:
        return kernels[0]
    arity = sum(k.arity - 1 for k in kernels) + 1

    def composite(window: tuple):
        x = window
        for k in kernels:
            x = slide(k, x)
        return x[0]

    return Kernel(arity, composite, "+".join(k.name for k in kernels))


def _sample(value: Any, m: int) -> tuple:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (float(value),) * m
    if isinstance(value, list) and len(value) == m and all(isinstance(v, (int, float)) for v in value):
        return tuple(float(v) for v in value)
    raise ParseError(f"dummy must be a number or a list of {m} numbers")


def _filter_bank(spec: Any, base: Path) -> FilterBank:
    if isinstance(spec, str):
        path = base / spec
        try:
            return nsf.to_filter_bank(nsf.read(path))
        except OSError as exc:
            raise ParseError(f"cannot read filter bank {path}: {exc.strerror}") from None
    try:
        return FilterBank(spec)
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"invalid inline filter bank: {exc}") from None


def chain_from_document(doc: Any, base: Path = Path(".")) -> ProcessingChain:
    if not isinstance(doc, dict):
        raise ParseError("chain config must be a JSON object")
    m = doc.get("channels", 1)
    if not isinstance(m, int) or m < 1:
        raise ParseError("'channels' must be a positive integer")
    dummy = _sample(doc.get("dummy", 0), m)
    declared: Optional[int] = doc.get("B")
    if declared is not None and (not isinstance(declared, int) or declared < 1):
        raise ParseError("'B' must be a positive integer")
    entries = doc.get("layers")
    if not isinstance(entries, list) or not entries:
        raise ParseError("'layers' must be a non-empty list")

    layers = []
    pending: list = []
    channels = m
    for pos, entry in enumerate(entries, start=1):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise ParseError(f"layer entry {pos} must be an object with a 'kind'")
        kind = entry["kind"]
        if kind == "conv":
            w = _filter_bank(entry.get("weights"), base)
            if w.m != channels:
                raise ParseError(f"layer entry {pos}: conv expects {w.m} channels, input has {channels}")
            pending.append(conv_kernel(w))
            channels = w.n
        elif kind == "bias":
            values = entry.get("values")
            if not isinstance(values, list) or len(values) != channels:
                raise ParseError(f"layer entry {pos}: bias needs a list of {channels} values")
            pending.append(bias_kernel(values))
        elif kind == "pointwise":
            name = entry.get("function")
            if name not in POINTWISE:
                raise ParseError(f"layer entry {pos}: unknown function {name!r}; known: {sorted(POINTWISE)}")
            pending.append(pointwise_kernel(POINTWISE[name], channels))
        elif kind in ("pool-max", "pool-avg"):
            size = entry.get("size")
            if not isinstance(size, int) or size < 1:
                raise ParseError(f"layer entry {pos}: pooling needs a positive integer 'size'")
            g = max_pool_kernel(size, channels) if kind == "pool-max" else avg_pool_kernel(size, channels)
            layers.append(ChainLayer(compose_sliding(pending), g))
            pending = []
        elif kind == "bypass":
            layers.append(ChainLayer(compose_sliding(pending), identity_kernel()))
            pending = []
        else:
            raise ParseError(f"layer entry {pos}: unknown kind {kind!r}")
    if pending:
        layers.append(ChainLayer(compose_sliding(pending), identity_kernel()))
    return build_chain(layers, dummy, declared)


def load_chain(path: str | Path) -> ProcessingChain:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return chain_from_document(doc, path.parent)

