"""Seeded random streams and Gaussian noise generation."""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from ..utilities.error_handler import DomainError

SUPPORTED_BIT_GENERATORS = ("PCG64", "PCG64DXSM", "Philox", "SFC64", "MT19937")
_MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class RngState:
    """Immutable description of a random stream.

    Every call to ``generator()`` starts the stream from the beginning, so two
    equal states always produce the same samples. Independent child streams
    come from ``spawn``, which hashes the parent seed with the stream index.
    """
    seed: int
    algorithm: str = "PCG64"
    spawn_key: Tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= int(self.seed) <= _MAX_SEED:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}",
                              parameter="seed", value=self.seed)
        if self.algorithm not in SUPPORTED_BIT_GENERATORS:
            raise DomainError(
                f"unknown bit generator {self.algorithm!r}; "
                f"choose one of {', '.join(SUPPORTED_BIT_GENERATORS)}",
                parameter="algorithm", value=self.algorithm)

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=self.spawn_key)
        return np.random.Generator(getattr(np.random, self.algorithm)(sequence))

    def spawn(self, index: int) -> "RngState":
        """Child stream number ``index``."""
        if index < 0:
            raise DomainError(f"stream index must be non-negative, got {index}")
        return RngState(self.seed, self.algorithm, self.spawn_key + (int(index),))
RandomSource = Union[RngState, np.random.Generator]
Shape = Union[int, Tuple[int, ...]]


def _prepare(source: RandomSource, shape: Shape,
             variance: float) -> Tuple[np.random.Generator, Tuple[int, ...]]:
    shape = (int(shape),) if np.isscalar(shape) else tuple(int(s) for s in shape)
    if not shape or min(shape) < 1:
        raise DomainError(f"sample shape must be positive, got {shape}",
                          parameter="shape", value=shape)
    if not (variance > 0 and np.isfinite(variance)):
        raise DomainError(f"variance must be positive, got {variance}",
                          parameter="variance", value=variance)
    generator = source.generator() if isinstance(source, RngState) else source
    return generator, shape


def sample_complex_gaussian(source: RandomSource, shape: Shape, variance: float) -> np.ndarray:
    """
    Draw i.i.d. circularly symmetric complex Gaussian samples.

    Real and imaginary parts are independent with variance ``variance / 2``
    each, so ``E|v|^2 = variance``.

    Args:
        source: An ``RngState`` (restarted from its beginning) or a live
            generator that continues where it left off
        shape: Sample count or array shape, e.g. ``(runs, n_sensors)``
        variance: Per-sample power
    """
    generator, shape = _prepare(source, shape, variance)
    parts = generator.standard_normal(shape + (2,)) * np.sqrt(variance / 2.0)
    return parts[..., 0] + 1j * parts[..., 1]


def sample_real_gaussian(source: RandomSource, shape: Shape, variance: float) -> np.ndarray:
    """Draw i.i.d. real Gaussian samples with the given variance."""
    generator, shape = _prepare(source, shape, variance)
    return generator.standard_normal(shape) * np.sqrt(variance)
