"""Segment-RMSE examination, exam tallies and the confusion matrix."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fis import FisModel, infer_batch

DEFAULT_EPSILON = 0.1
DEFAULT_SEGMENTS = 16


@dataclass(frozen=True)
class EvalConfig:
    epsilon: float = DEFAULT_EPSILON
    segments: int = DEFAULT_SEGMENTS

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.segments) != self.segments or self.segments < 1:
            raise ValueError(f"segments must be a positive integer, got {self.segments}")


@dataclass(frozen=True)
class ExamTally:
    ec: int
    pec: float


def rmse(model: FisModel, samples, target) -> float:
    """Root of the per-sample summed squared output error, averaged over the segment."""
    Z = np.asarray(samples, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] == 0:
        raise ValueError("segment must contain at least one sample")
    y = np.asarray(target, dtype=np.float64)
    if y.shape != (model.L,):
        raise ValueError(f"target must have {model.L} entries, got shape {y.shape}")
    e = infer_batch(model, Z) - y
    return float(np.sqrt(np.sum(e**2) / Z.shape[0]))


def segment_passes(rmse_value: float, epsilon: float) -> bool:
    return rmse_value < epsilon


def pec(ec: int, total_segments: int = DEFAULT_SEGMENTS) -> float:
    return ec / total_segments * 100


def examine(
    model: FisModel,
    segments: Sequence,
    target,
    epsilon: float,
    total_segments: int = DEFAULT_SEGMENTS,
) -> ExamTally:
    """Count segments whose RMSE against ``target`` is below ``epsilon``.

    The percentage is taken over ``total_segments`` (all objects' segments
    together), not over ``len(segments)``.
    """
    if len(segments) == 0:
        raise ValueError("at least one segment is required")
    if len(segments) > total_segments:
        raise ValueError(f"{len(segments)} segments exceed the total of {total_segments}")
    ec = sum(segment_passes(rmse(model, seg, target), epsilon) for seg in segments)
    return ExamTally(ec, pec(ec, total_segments))


def segment_counts(n_objects: int, total_segments: int = DEFAULT_SEGMENTS) -> list[int]:
    """Split the segment budget across objects; the last one takes the remainder (16/3 -> 5, 5, 6)."""
    base, extra = divmod(total_segments, n_objects)
    if base == 0:
        raise ValueError(f"{total_segments} segments cannot cover {n_objects} objects")
    return [base] * (n_objects - 1) + [base + extra]


def split_segments(samples, count: int) -> list[np.ndarray]:
    """Cut ``samples`` into ``count`` equal consecutive segments, dropping the tail."""
    Z = np.asarray(samples)
    size = Z.shape[0] // count
    if size == 0:
        raise ValueError(f"{Z.shape[0]} samples cannot form {count} segments")
    return [Z[i * size : (i + 1) * size] for i in range(count)]


def segment_objects(blocks: Sequence, total_segments: int = DEFAULT_SEGMENTS) -> list[list[np.ndarray]]:
    return [
        split_segments(block, count)
        for block, count in zip(blocks, segment_counts(len(blocks), total_segments))
    ]


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """``cells[o][i]``: PEC of input object ``i`` examined against target ``o``."""

    cells: np.ndarray
    labels: tuple[str, ...]
    segments: int = DEFAULT_SEGMENTS

    @property
    def efficiency(self) -> float:
        return float(np.trace(self.cells))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.segments == other.segments
            and np.array_equal(self.cells, other.cells)
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["output/input", *self.labels])
        for label, row in zip(self.labels, self.cells):
            writer.writerow([label, *(f"{x:.2f}" for x in row)])
        writer.writerow(["efficiency", f"{self.efficiency:.2f}"])
        return buf.getvalue()

    def render(self) -> str:
        width = max(8, *(len(l) for l in self.labels)) + 2
        lines = [" " * width + "".join(l.rjust(width) for l in self.labels) + "   <- inputs"]
        for label, row in zip(self.labels, self.cells):
            lines.append(label.ljust(width) + "".join(f"{x:.2f}".rjust(width) for x in row))
        lines.append(f"efficiency: {self.efficiency:.2f}%")
        return "\n".join(lines)


def confusion_matrix(
    model: FisModel,
    per_object_segments: Sequence[Sequence],
    epsilon: float,
    labels: Sequence[str] | None = None,
    total_segments: int = DEFAULT_SEGMENTS,
) -> ConfusionMatrix:
    L = model.L
    if len(per_object_segments) != L:
        raise ValueError(f"expected segments for {L} objects, got {len(per_object_segments)}")
    if sum(len(s) for s in per_object_segments) != total_segments:
        raise ValueError(
            f"segment counts {[len(s) for s in per_object_segments]} do not sum to {total_segments}"
        )
    labels = tuple(labels) if labels is not None else tuple(str(i + 1) for i in range(L))
    targets = np.eye(L)
    cells = np.zeros((L, L))
    for i, segments in enumerate(per_object_segments):
        for o in range(L):
            cells[o, i] = examine(model, segments, targets[o], epsilon, total_segments).pec
    return ConfusionMatrix(cells, labels, total_segments)


def mean_rmse_matrix(model: FisModel, per_object_segments: Sequence[Sequence]) -> np.ndarray:
    """Average segment RMSE of each input object (columns) against each target (rows)."""
    L = model.L
    targets = np.eye(L)
    out = np.zeros((L, len(per_object_segments)))
    for i, segments in enumerate(per_object_segments):
        for o in range(L):
            out[o, i] = np.mean([rmse(model, seg, targets[o]) for seg in segments])
    return out
