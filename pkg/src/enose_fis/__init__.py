"""Gaussian fuzzy inference classifier for five-channel electronic-nose data."""

from .data import LabeledDataset, ParseError, SessionConfig, adc_to_volts, generate_session, read_csv, write_csv
from .evaluation import ConfusionMatrix, EvalConfig, confusion_matrix, examine, rmse, segment_passes
from .fis import Combinator, FisModel, InvalidModelError, firing_strengths, infer, init_model, output_errors, train_step
from .pipeline import TrainConfig, one_hot_targets, run_experiment, split_train_test, train

__all__ = [
    "Combinator",
    "ConfusionMatrix",
    "EvalConfig",
    "FisModel",
    "InvalidModelError",
    "LabeledDataset",
    "ParseError",
    "SessionConfig",
    "TrainConfig",
    "adc_to_volts",
    "confusion_matrix",
    "examine",
    "firing_strengths",
    "generate_session",
    "infer",
    "init_model",
    "one_hot_targets",
    "output_errors",
    "read_csv",
    "rmse",
    "run_experiment",
    "segment_passes",
    "split_train_test",
    "train",
    "train_step",
    "write_csv",
]
