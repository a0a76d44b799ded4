"""Gaussian fuzzy inference model and its gradient-descent update.

Rule ``j`` fires with strength ``exp(-sum_i (z_i - c_ij)^2 / sigma_ij^2)`` and the
``L`` outputs are the firing-weighted average of the output centers ``v``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SIGMA_FLOOR = 1e-3
ACTIVATION_FLOOR = 1e-300
DEFAULT_ETA = 0.1

# Channel order of the electronic nose inputs z_1..z_5.
CHANNELS = ("mq135", "tgs2610", "mq2", "tgs2611", "mq3")


class InvalidModelError(ValueError):
    """Raised when model parameters are unusable (non-finite, non-positive widths)."""


class Combinator(str, enum.Enum):
    EXP_SUM = "sum"
    PRODUCT = "product"


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FisModel:
    """Rule base with input centers ``c`` (n x m), widths ``sigma`` (n x m)
    and output centers ``v`` (L x m). Arrays are read-only."""

    c: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    combinator: Combinator = Combinator.EXP_SUM

    def __post_init__(self):
        c, sigma, v = _frozen(self.c), _frozen(self.sigma), _frozen(self.v)
        if c.ndim != 2 or sigma.shape != c.shape or v.ndim != 2 or v.shape[1] != c.shape[1]:
            raise ValueError(
                f"inconsistent shapes: c {c.shape}, sigma {sigma.shape}, v {v.shape}"
            )
        if 0 in c.shape or v.shape[0] == 0:
            raise ValueError("model dimensions must be positive")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "combinator", Combinator(self.combinator))

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.c.shape[1]

    @property
    def L(self) -> int:
        return self.v.shape[0]

    @property
    def n_parameters(self) -> int:
        return 2 * self.c.size + self.v.size

    def validate(self) -> None:
        for name in ("c", "sigma", "v"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise InvalidModelError(f"{name} has non-finite entries")
        if np.any(self.sigma <= 0):
            raise InvalidModelError("sigma entries must be strictly positive")

    def same_parameters(self, other: FisModel) -> bool:
        return (
            self.combinator == other.combinator
            and np.array_equal(self.c, other.c)
            and np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.v, other.v)
        )


@dataclass(frozen=True)
class FiringVector:
    alphas: np.ndarray
    exponents: np.ndarray


def init_model(
    n: int,
    m: int,
    L: int,
    combinator: Combinator | str = Combinator.EXP_SUM,
    seed: int | None = None,
) -> FisModel:
    """Draw c, sigma, v uniformly on [0, 1); widths are floored at SIGMA_FLOOR."""
    for name, value in (("n", n), ("m", m), ("L", L)):
        if int(value) != value or value < 1:
            raise ValueError(f"{name} must be a positive integer, got {value!r}")
    rng = np.random.default_rng(seed)
    c = rng.random((n, m))
    sigma = np.maximum(rng.random((n, m)), SIGMA_FLOOR)
    v = rng.random((L, m))
    return FisModel(c, sigma, v, Combinator(combinator))


def _as_sample(model: FisModel, sample) -> np.ndarray:
    z = np.asarray(sample, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] != model.n:
        raise ValueError(f"sample must have {model.n} channels, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("sample values must be finite")
    return z


def _firing(c, sigma, combinator, z):
    # z may be (n,) or (T, n); broadcasting handles both
    scaled = (z[..., :, None] - c) ** 2 / sigma**2
    exponents = -scaled.sum(axis=-2)
    if combinator is Combinator.PRODUCT:
        alphas = np.prod(np.exp(-scaled), axis=-2)
    else:
        alphas = np.exp(exponents)
    return alphas, exponents


def firing_strengths(model: FisModel, sample) -> FiringVector:
    z = _as_sample(model, sample)
    if np.any(model.sigma <= 0):
        raise InvalidModelError("sigma entries must be strictly positive")
    alphas, exponents = _firing(model.c, model.sigma, model.combinator, z)
    return FiringVector(alphas, exponents)


def _normalize(alphas: np.ndarray) -> np.ndarray:
    """Normalized rule weights; uniform when total activation underflows."""
    total = alphas.sum(axis=-1, keepdims=True)
    uniform = np.full_like(alphas, 1.0 / alphas.shape[-1])
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(total < ACTIVATION_FLOOR, uniform, alphas / total)


def infer(model: FisModel, sample) -> np.ndarray:
    """Outputs y_hat (length L) for one sample."""
    z = _as_sample(model, sample)
    alphas, _ = _firing(model.c, model.sigma, model.combinator, z)
    return model.v @ _normalize(alphas)


def infer_batch(model: FisModel, samples) -> np.ndarray:
    """Vectorized ``infer`` over a (T, n) array; returns (T, L)."""
    Z = np.asarray(samples, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] != model.n:
        raise ValueError(f"samples must be shaped (T, {model.n}), got {Z.shape}")
    alphas, _ = _firing(model.c, model.sigma, model.combinator, Z)
    return _normalize(alphas) @ model.v.T


def output_errors(predicted, target) -> np.ndarray:
    y_hat = np.asarray(predicted, dtype=np.float64)
    y = np.asarray(target, dtype=np.float64)
    if y_hat.shape != y.shape or y_hat.ndim != 1:
        raise ValueError(f"length mismatch: predicted {y_hat.shape}, target {y.shape}")
    return y_hat - y


def _check_eta(eta: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError(f"learning rate must lie in (0, 1), got {eta}")


def update_arrays(c, sigma, v, combinator, z, y, eta):
    """One update on raw arrays. All deltas use the pre-update parameters."""
    d = z[:, None] - c
    alphas, _ = _firing(c, sigma, combinator, z)
    total = alphas.sum()
    if total < ACTIVATION_FLOOR:
        # output is the constant mean of v here, so only v moves
        w = np.full(alphas.shape, 1.0 / alphas.shape[0])
        e = v @ w - y
        return c, sigma, v - eta * np.outer(e, w), e
    w = alphas / total
    y_hat = v @ w
    e = y_hat - y
    # sum over outputs l of e_l * (v_lj - y_hat_l)
    g = e @ (v - y_hat[:, None])
    common = 2.0 * w * g
    new_c = c - eta * common * d / sigma**2
    new_sigma = np.maximum(sigma - eta * common * d**2 / sigma**3, SIGMA_FLOOR)
    new_v = v - eta * np.outer(e, w)
    return new_c, new_sigma, new_v, e


def train_step(model: FisModel, sample, target, eta: float = DEFAULT_ETA) -> FisModel:
    """Single gradient-descent step on 0.5 * sum_l e_l^2 for one (sample, target)."""
    _check_eta(eta)
    z = _as_sample(model, sample)
    y = np.asarray(target, dtype=np.float64)
    if y.shape != (model.L,):
        raise ValueError(f"target must have {model.L} entries, got shape {y.shape}")
    c, sigma, v, _ = update_arrays(model.c, model.sigma, model.v, model.combinator, z, y, eta)
    return FisModel(c, sigma, v, model.combinator)
