"""Save and reload fitted models as versioned JSON documents."""
from __future__ import annotations

import json
from pathlib import Path

from .baselines import KnnModel, LdaModel, LogisticModel, PclrModel, PlsLdaModel
from .qbp import FittedQbp

_TYPES = {
    "qbplab.FittedQbp": FittedQbp,
    "qbplab.LogisticModel": LogisticModel,
    "qbplab.PclrModel": PclrModel,
    "qbplab.LdaModel": LdaModel,
    "qbplab.PlsLdaModel": PlsLdaModel,
    "qbplab.KnnModel": KnnModel,
}


def model_to_json(model) -> str:
    return json.dumps(model.to_dict(), indent=1, sort_keys=True)


def model_from_json(text: str):
    doc = json.loads(text)
    kind = doc.get("format") if isinstance(doc, dict) else None
    if kind not in _TYPES:
        raise ValueError(f"unrecognized model document format {kind!r}")
    return _TYPES[kind].from_dict(doc)


def save_model(model, path):
    Path(path).write_text(model_to_json(model) + "\n", encoding="utf-8")


def load_model(path):
    return model_from_json(Path(path).read_text(encoding="utf-8"))
