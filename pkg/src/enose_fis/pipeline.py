"""Training and examination runs over labeled datasets."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import fis
from .data import LabeledDataset
from .evaluation import (
    ConfusionMatrix,
    EvalConfig,
    confusion_matrix,
    mean_rmse_matrix,
    segment_objects,
)
from .fis import Combinator, FisModel


def one_hot_targets(object_index: int, L: int) -> np.ndarray:
    """Target vector for object ``object_index`` (1-based) among ``L`` objects."""
    if not 1 <= object_index <= L:
        raise ValueError(f"object index must lie in 1..{L}, got {object_index}")
    y = np.zeros(L)
    y[object_index - 1] = 1.0
    return y


@dataclass(frozen=True)
class TrainConfig:
    eta: float = fis.DEFAULT_ETA
    epochs: int = 10
    seed: int | None = 1
    m: int = 10
    combinator: Combinator = Combinator.EXP_SUM
    shuffle: bool = False

    def __post_init__(self):
        if not 0.0 < self.eta < 1.0:
            raise ValueError(f"eta must lie in (0, 1), got {self.eta}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise ValueError(f"epochs must be a positive integer, got {self.epochs}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, "combinator", Combinator(self.combinator))


@dataclass(frozen=True)
class TrainResult:
    model: FisModel
    # training RMSE before the first epoch, then after each epoch
    rmse_trace: tuple[float, ...]


def split_train_test(dataset: LabeledDataset) -> tuple[LabeledDataset, LabeledDataset]:
    """First half of each object's samples trains, the rest tests; odd counts favor training."""
    train_blocks, test_blocks = [], []
    for label, block in zip(dataset.labels, dataset.blocks):
        if block.shape[0] < 2:
            raise ValueError(f"object {label!r} needs at least 2 samples, has {block.shape[0]}")
        cut = (block.shape[0] + 1) // 2
        train_blocks.append(block[:cut])
        test_blocks.append(block[cut:])
    return (
        LabeledDataset(dataset.labels, tuple(train_blocks), dataset.channels),
        LabeledDataset(dataset.labels, tuple(test_blocks), dataset.channels),
    )


def _stacked(dataset: LabeledDataset) -> tuple[np.ndarray, np.ndarray]:
    L = dataset.n_objects
    Z = np.concatenate(dataset.blocks)
    Y = np.concatenate(
        [np.tile(one_hot_targets(i + 1, L), (len(b), 1)) for i, b in enumerate(dataset.blocks)]
    )
    return Z, Y


def training_rmse(model: FisModel, dataset: LabeledDataset) -> float:
    Z, Y = _stacked(dataset)
    e = fis.infer_batch(model, Z) - Y
    return float(np.sqrt(np.sum(e**2) / Z.shape[0]))


def train(dataset: LabeledDataset, config: TrainConfig = TrainConfig()) -> TrainResult:
    """Fit a fresh model by per-sample gradient descent.

    Each epoch walks object 1's block, then object 2's, and so on, each sample
    paired with its object's one-hot target. ``shuffle`` permutes the pooled
    samples instead.
    """
    if dataset.n_objects == 0:
        raise ValueError("dataset has no objects")
    Z, Y = _stacked(dataset)
    if Z.shape[0] == 0:
        raise ValueError("dataset has no samples")
    if not np.all(np.isfinite(Z)):
        raise ValueError("dataset contains non-finite values")
    model = fis.init_model(dataset.n_channels, config.m, dataset.n_objects, config.combinator, config.seed)
    trace = [training_rmse(model, dataset)]
    # separate stream so shuffling never perturbs initialization
    order_rng = np.random.default_rng(None if config.seed is None else [config.seed, 1])
    c, sigma, v = model.c, model.sigma, model.v
    for _ in range(config.epochs):
        order = order_rng.permutation(Z.shape[0]) if config.shuffle else range(Z.shape[0])
        for k in order:
            c, sigma, v, _e = fis.update_arrays(c, sigma, v, config.combinator, Z[k], Y[k], config.eta)
        model = FisModel(c, sigma, v, config.combinator)
        model.validate()
        trace.append(training_rmse(model, dataset))
    return TrainResult(model, tuple(trace))


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    train_config: TrainConfig
    eval_config: EvalConfig
    model: FisModel
    rmse_trace: tuple[float, ...]
    confusion: ConfusionMatrix
    degenerate: bool
    # mean segment RMSE, rows = targets, columns = input objects
    mean_rmse: np.ndarray = field(repr=False)

    @property
    def efficiency(self) -> float:
        return self.confusion.efficiency

    def summary_rows(self) -> list[tuple[str, str]]:
        tc, ec = self.train_config, self.eval_config
        rows = [
            ("m", str(tc.m)),
            ("combinator", tc.combinator.value),
            ("eta", repr(tc.eta)),
            ("epsilon", repr(ec.epsilon)),
            ("epochs", str(tc.epochs)),
            ("seed", str(tc.seed)),
            ("segments", str(ec.segments)),
            ("parameters", str(self.model.n_parameters)),
            ("efficiency", f"{self.efficiency:.2f}"),
            ("degenerate", str(self.degenerate).lower()),
        ]
        labels = self.confusion.labels
        for o, out_label in enumerate(labels):
            for i, in_label in enumerate(labels):
                rows.append((f"pec[{out_label}][{in_label}]", f"{self.confusion.cells[o, i]:.2f}"))
        return rows

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        writer.writerows(self.summary_rows())
        return buf.getvalue()

    def report(self) -> str:
        tc, ec = self.train_config, self.eval_config
        lines = [
            f"rules m={tc.m} combinator={tc.combinator.value} eta={tc.eta} epochs={tc.epochs} seed={tc.seed}",
            f"epsilon={ec.epsilon} segments={ec.segments} parameters={self.model.n_parameters}",
            f"training rmse: {self.rmse_trace[0]:.4f} -> {self.rmse_trace[-1]:.4f}",
            self.confusion.render(),
        ]
        if self.degenerate:
            lines.append("WARNING: degenerate result, some objects are indistinguishable to the model")
        return "\n".join(lines)


def is_degenerate(mean_rmse: np.ndarray) -> bool:
    """True when two input objects share the same best-matching target."""
    best = np.argmin(mean_rmse, axis=0)
    return len(set(best.tolist())) < len(best)


def evaluate(model: FisModel, test: LabeledDataset, config: EvalConfig = EvalConfig()):
    if test.n_objects != model.L:
        raise ValueError(f"model has {model.L} outputs but data has {test.n_objects} objects")
    segments = segment_objects(test.blocks, config.segments)
    cm = confusion_matrix(model, segments, config.epsilon, test.labels, config.segments)
    return cm, mean_rmse_matrix(model, segments)


def run_experiment(
    dataset: LabeledDataset,
    train_config: TrainConfig = TrainConfig(),
    eval_config: EvalConfig = EvalConfig(),
) -> ExperimentResult:
    train_set, test_set = split_train_test(dataset)
    # fail on an unusable segment layout before spending time on training
    segment_objects(test_set.blocks, eval_config.segments)
    result = train(train_set, train_config)
    cm, mean = evaluate(result.model, test_set, eval_config)
    return ExperimentResult(
        train_config, eval_config, result.model, result.rmse_trace, cm, is_degenerate(mean), mean
    )
