"""Plain-text model files.

Layout::

    enose-fis-model 1
    dims <n> <m> <L>
    combinator <sum|product>
    labels <json list>
    train eta=<eta> epochs=<epochs> seed=<seed|none> shuffle=<true|false>
    c
    <n rows of m numbers>
    sigma
    <n rows of m numbers>
    v
    <L rows of m numbers>

Numbers use Python's shortest round-trip repr, so loading restores the exact bits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import ParseError
from .fis import Combinator, FisModel
from .pipeline import TrainConfig

MAGIC = "enose-fis-model"
VERSION = 1


@dataclass(frozen=True, eq=False)
class ModelFile:
    model: FisModel
    labels: tuple[str, ...]
    train_config: TrainConfig | None = None


def dumps(model: FisModel, labels, train_config: TrainConfig | None = None) -> str:
    labels = list(labels)
    if len(labels) != model.L:
        raise ValueError(f"{len(labels)} labels for a model with {model.L} outputs")
    lines = [
        f"{MAGIC} {VERSION}",
        f"dims {model.n} {model.m} {model.L}",
        f"combinator {model.combinator.value}",
        f"labels {json.dumps(labels)}",
    ]
    if train_config is not None:
        tc = train_config
        seed = "none" if tc.seed is None else str(tc.seed)
        lines.append(
            f"train eta={tc.eta!r} epochs={tc.epochs} seed={seed} shuffle={str(tc.shuffle).lower()}"
        )
    for name in ("c", "sigma", "v"):
        lines.append(name)
        lines.extend(" ".join(repr(float(x)) for x in row) for row in getattr(model, name))
    return "\n".join(lines) + "\n"


def save(path, model: FisModel, labels, train_config: TrainConfig | None = None) -> None:
    Path(path).write_text(dumps(model, labels, train_config))


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, what: str) -> tuple[int, str]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of file, expected {what}", self.pos + 1)
        self.pos += 1
        return self.pos, self.lines[self.pos - 1]


def _matrix(lines: _Lines, name: str, rows: int, cols: int) -> np.ndarray:
    lineno, text = lines.next(f"section {name!r}")
    if text.strip() != name:
        raise ParseError(f"expected section {name!r}, got {text!r}", lineno)
    out = np.empty((rows, cols))
    for r in range(rows):
        lineno, text = lines.next(f"row {r + 1} of {name}")
        parts = text.split()
        if len(parts) != cols:
            raise ParseError(f"{name} row needs {cols} numbers, got {len(parts)}", lineno)
        try:
            out[r] = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-numeric entry in {name}", lineno) from None
    return out


def _train_config(lineno: int, text: str, m: int, combinator: Combinator) -> TrainConfig:
    try:
        fields = dict(item.split("=", 1) for item in text.split()[1:])
        seed = None if fields["seed"] == "none" else int(fields["seed"])
        return TrainConfig(
            eta=float(fields["eta"]),
            epochs=int(fields["epochs"]),
            seed=seed,
            m=m,
            combinator=combinator,
            shuffle=fields["shuffle"] == "true",
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad train line: {exc}", lineno) from None


def loads(text: str) -> ModelFile:
    lines = _Lines(text)
    lineno, head = lines.next("header")
    if head.split() != [MAGIC, str(VERSION)]:
        raise ParseError(f"not a version {VERSION} model file", lineno)

    lineno, dims = lines.next("dims")
    try:
        tag, *values = dims.split()
        n, m, L = (int(x) for x in values)
        if tag != "dims" or min(n, m, L) < 1:
            raise ValueError
    except ValueError:
        raise ParseError(f"bad dims line {dims!r}", lineno) from None

    lineno, comb = lines.next("combinator")
    try:
        tag, value = comb.split()
        if tag != "combinator":
            raise ValueError
        combinator = Combinator(value)
    except ValueError:
        raise ParseError(f"bad combinator line {comb!r}", lineno) from None

    lineno, lab = lines.next("labels")
    if not lab.startswith("labels "):
        raise ParseError("expected labels line", lineno)
    try:
        labels = tuple(json.loads(lab[len("labels "):]))
    except json.JSONDecodeError:
        raise ParseError("labels are not a JSON list", lineno) from None
    if len(labels) != L or not all(isinstance(x, str) for x in labels):
        raise ParseError(f"expected {L} string labels", lineno)

    train_config = None
    if lines.pos < len(lines.lines) and lines.lines[lines.pos].startswith("train "):
        lineno, text = lines.next("train")
        train_config = _train_config(lineno, text, m, combinator)

    c = _matrix(lines, "c", n, m)
    sigma = _matrix(lines, "sigma", n, m)
    v = _matrix(lines, "v", L, m)
    model = FisModel(c, sigma, v, combinator)
    model.validate()
    return ModelFile(model, labels, train_config)


def load(path) -> ModelFile:
    return loads(Path(path).read_text())
