"""Sensor datasets: ADC conversion, synthetic sessions, CSV files and the live line protocol."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .fis import CHANNELS

VOLTS_PER_UNIT = 0.0049
ADC_MAX = 1023
V_MAX = 5.0
REST_LABEL = "rest"
CSV_HEADER = (*CHANNELS, "label")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Per-object sample blocks in time order. ``blocks[i]`` is a (T_i, n) array
    of readings for ``labels[i]``."""

    labels: tuple[str, ...]
    blocks: tuple[np.ndarray, ...]
    channels: tuple[str, ...] = CHANNELS

    def __post_init__(self):
        labels = tuple(self.labels)
        blocks = tuple(np.array(b, dtype=np.float64).reshape(-1, len(self.channels)) for b in self.blocks)
        if len(labels) != len(blocks):
            raise ValueError("one sample block per label is required")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels: {labels}")
        for b in blocks:
            b.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "channels", tuple(self.channels))

    @property
    def n_objects(self) -> int:
        return len(self.labels)

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    def samples(self, label: str) -> np.ndarray:
        return self.blocks[self.labels.index(label)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledDataset):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.channels == other.channels
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )


@dataclass(frozen=True)
class RawAdcReading:
    channels: tuple[int, ...]

    def __post_init__(self):
        for value in self.channels:
            if not 0 <= value <= ADC_MAX:
                raise ValueError(f"ADC value {value} outside [0, {ADC_MAX}]")


def adc_to_volts(raw: RawAdcReading | Sequence[int]) -> np.ndarray:
    values = raw.channels if isinstance(raw, RawAdcReading) else tuple(raw)
    arr = np.asarray(values)
    if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"ADC reading must be a flat sequence of integers, got {values!r}")
    if np.any((arr < 0) | (arr > ADC_MAX)):
        raise ValueError(f"ADC values must lie in [0, {ADC_MAX}], got {values!r}")
    return arr.astype(np.float64) * VOLTS_PER_UNIT


def volts_to_adc(volts: Sequence[float]) -> tuple[int, ...]:
    return tuple(int(np.clip(round(v / VOLTS_PER_UNIT), 0, ADC_MAX)) for v in volts)


# Invented steady-state responses in volts above baseline, one profile per object.
# They are fixtures for the synthetic generator, not measurements. Each object
# drives one sensor much harder than the rest.
BASELINE = (0.20, 0.15, 0.25, 0.10, 0.18)
RESPONSE_PROFILES = {
    "papaya": (2.6, 0.4, 0.7, 0.2, 0.9),
    "orange": (0.5, 2.4, 0.3, 0.8, 0.4),
    "apple": (0.8, 0.6, 2.8, 0.3, 0.2),
    "onion": (0.6, 0.3, 0.5, 2.5, 0.7),
    "guava": (0.4, 0.7, 0.3, 0.5, 2.7),
    "banana": (1.6, 1.5, 0.4, 0.3, 0.6),
}
DEFAULT_OBJECTS = ("papaya", "orange", "apple")


def default_responses(objects: Sequence[str]) -> dict[str, tuple[float, ...]]:
    """Map labels onto the fixture profiles, by name if known, else by position."""
    if len(objects) > len(RESPONSE_PROFILES):
        raise ValueError(f"at most {len(RESPONSE_PROFILES)} synthetic objects are available")
    profiles = list(RESPONSE_PROFILES.values())
    return {
        label: RESPONSE_PROFILES.get(label, profiles[i]) for i, label in enumerate(objects)
    }


@dataclass
class SessionConfig:
    """Acquisition session: a long rest, then each object's exposure followed by a
    shorter rest. Durations are sample counts. Rest spans 10/3 of an exposure,
    mirroring 10 min rest against 3 min readings."""

    objects: tuple[str, ...] = DEFAULT_OBJECTS
    exposure_duration: int = 800
    rest_duration: int | None = None
    inter_rest_duration: int | None = None
    drift_rate: float = 0.5
    noise_std: float = 0.02
    baseline: tuple[float, ...] = BASELINE
    channel_response: dict[str, tuple[float, ...]] | None = None
    seed: int | None = 1

    def __post_init__(self):
        self.objects = tuple(self.objects)
        if self.rest_duration is None:
            self.rest_duration = round(self.exposure_duration * 10 / 3)
        if self.inter_rest_duration is None:
            self.inter_rest_duration = self.exposure_duration
        if self.channel_response is None:
            self.channel_response = default_responses(self.objects)
        if min(self.exposure_duration, self.rest_duration, self.inter_rest_duration) < 0:
            raise ValueError("durations must be non-negative")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        if self.drift_rate < 0:
            raise ValueError("drift_rate must be non-negative")
        if not self.objects or REST_LABEL in self.objects:
            raise ValueError(f"objects must be nonempty and must not use {REST_LABEL!r}")
        missing = [o for o in self.objects if o not in self.channel_response]
        if missing:
            raise ValueError(f"no channel response for {missing}")


def simulate_session(config: SessionConfig) -> list[tuple[str, np.ndarray]]:
    """Phases of a full session in time order, rest phases included."""
    rng = np.random.default_rng(config.seed)
    baseline = np.asarray(config.baseline, dtype=np.float64)
    n = baseline.shape[0]

    def noisy(clean):
        noise = rng.normal(0.0, config.noise_std, clean.shape) if config.noise_std > 0 else 0.0
        return np.clip(clean + noise, 0.0, V_MAX)

    def rest(count):
        return REST_LABEL, noisy(np.tile(baseline, (count, 1)))

    phases = [rest(config.rest_duration)]
    for idx, label in enumerate(config.objects):
        response = np.asarray(config.channel_response[label], dtype=np.float64)
        k = np.arange(1, config.exposure_duration + 1, dtype=np.float64)
        ramp = 1.0 - np.exp(-k * config.drift_rate)
        clean = baseline + ramp[:, None] * response[None, :]
        phases.append((label, noisy(clean.reshape(-1, n))))
        if idx < len(config.objects) - 1:
            phases.append(rest(config.inter_rest_duration))
    return phases


def dataset_from_phases(phases: Iterable[tuple[str, np.ndarray]], channels=CHANNELS) -> LabeledDataset:
    grouped: dict[str, list[np.ndarray]] = {}
    for label, block in phases:
        if label == REST_LABEL:
            continue
        grouped.setdefault(label, []).append(np.asarray(block, dtype=np.float64).reshape(-1, len(channels)))
    return LabeledDataset(
        tuple(grouped), tuple(np.concatenate(blocks) for blocks in grouped.values()), channels
    )


def generate_session(config: SessionConfig | None = None) -> LabeledDataset:
    return dataset_from_phases(simulate_session(config or SessionConfig()))


def _format(x: float) -> str:
    return repr(float(x))


def write_phases_csv(phases: Iterable[tuple[str, np.ndarray]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for label, block in phases:
            for row in np.asarray(block):
                writer.writerow([*map(_format, row), label])


def write_csv(dataset: LabeledDataset, path) -> None:
    if dataset.channels != CHANNELS:
        raise ValueError(f"CSV schema requires channels {CHANNELS}")
    write_phases_csv(zip(dataset.labels, dataset.blocks), path)


def read_csv(path, labels: Sequence[str] | None = None) -> LabeledDataset:
    """Load a session CSV; ``rest`` rows are dropped. With ``labels`` given, any
    other label is a parse error."""
    allowed = None if labels is None else set(labels) | {REST_LABEL}
    rows: list[tuple[str, list[float]]] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("missing header", 1)
        if tuple(header) != CSV_HEADER:
            raise ParseError(f"expected header {','.join(CSV_HEADER)}", 1)
        for row in reader:
            lineno = reader.line_num
            if not row:
                continue
            if len(row) != len(CSV_HEADER):
                raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", lineno)
            *cells, label = row
            try:
                values = [float(cell) for cell in cells]
            except ValueError:
                raise ParseError(f"non-numeric cell in {row!r}", lineno) from None
            if not all(math.isfinite(x) for x in values):
                raise ParseError(f"non-finite value in {row!r}", lineno)
            if not label or (allowed is not None and label not in allowed):
                raise ParseError(f"unknown label {label!r}", lineno)
            rows.append((label, values))
    return dataset_from_phases((label, np.array([values])) for label, values in rows)


@dataclass(frozen=True)
class StreamError:
    line_number: int
    line: str
    message: str


def parse_reading(line: str, channels: int = len(CHANNELS)) -> RawAdcReading:
    parts = line.strip().split(",")
    if len(parts) != channels:
        raise ValueError(f"expected {channels} values, got {len(parts)}")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError("values must be integers") from None
    return RawAdcReading(values)


def read_stream(lines: Iterable[str], channels: int = len(CHANNELS)) -> Iterator[RawAdcReading | StreamError]:
    """Parse ``v1,...,v5`` lines lazily. Bad lines come back as StreamError and
    the stream keeps going; blank lines are ignored."""
    for number, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        try:
            yield parse_reading(line, channels)
        except ValueError as exc:
            yield StreamError(number, line, str(exc))
