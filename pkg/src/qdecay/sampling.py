"""Shot sampling and spin estimators.

Measurement statistics are multinomial draws from the squared amplitudes
of the final register state. Randomness is PCG64 throughout; independent
averaging rounds get independent streams derived from the master seed so
results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .linalg import StateVector


@dataclass(frozen=True)
class ShotRecord:
    """Counts from one batch of shots at one time point."""

    time_index: int
    counts: Mapping[str, int]
    n_shots: int
    seed: int

    def __post_init__(self) -> None:
        counts = dict(self.counts)
        if not counts:
            raise ValueError("a shot record needs at least one outcome")
        widths = {len(k) for k in counts}
        if len(widths) != 1:
            raise ValueError(f"outcome strings have mixed widths: {sorted(widths)}")
        for key, value in counts.items():
            if set(key) - {"0", "1"}:
                raise ValueError(f"outcome {key!r} is not a bit string")
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"count for {key!r} must be a non-negative int, got {value!r}")
        if sum(counts.values()) != self.n_shots:
            raise ValueError("counts must sum to n_shots")
        object.__setattr__(self, "counts", MappingProxyType(counts))


def round_stream(master_seed: int, round_index: int) -> np.random.Generator:
    """Independent PCG64 stream for one averaging round (rounds are 1-based)."""
    if round_index < 1:
        raise ValueError(f"round index is 1-based, got {round_index}")
    return np.random.Generator(np.random.PCG64(master_seed ^ round_index))


def outcome_probs(state: StateVector) -> np.ndarray:
    """Measurement probabilities |amplitude|^2 of a normalized state."""
    probs = np.abs(np.asarray(state, dtype=np.complex128)) ** 2
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"state is not normalized: probabilities sum to {total!r}")
    return probs


def sample_counts(
    probs,
    n_shots: int,
    seed: int,
    *,
    time_index: int = 0,
    rng: np.random.Generator | None = None,
) -> ShotRecord:
    """Multinomial draw of n_shots outcomes from a probability vector.

    The vector length must be a power of two so outcomes map to bit
    strings. Stray negatives below -1e-12 and sums outside 1 +/- 1e-9 are
    rejected; anything smaller is clamped and renormalized. Passing rng
    overrides the seed-derived generator (the seed is still recorded).
    """
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size < 2 or p.size & (p.size - 1):
        raise ValueError(f"need a power-of-two probability vector, got size {p.size}")
    if float(p.min()) < -1e-12:
        raise ValueError(f"probability {p.min()!r} is negative beyond tolerance")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total!r}, expected 1")
    if n_shots < 1:
        raise ValueError(f"n_shots must be positive, got {n_shots}")
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    gen = rng if rng is not None else np.random.Generator(np.random.PCG64(seed))
    draws = gen.multinomial(n_shots, p)
    width = p.size.bit_length() - 1
    counts = {format(k, f"0{width}b"): int(c) for k, c in enumerate(draws) if c}
    return ShotRecord(time_index=time_index, counts=counts, n_shots=n_shots, seed=seed)


def _require_width(record: ShotRecord, width: int) -> None:
    got = len(next(iter(record.counts)))
    if got != width:
        raise ValueError(f"expected {width}-bit outcomes, got {got}-bit")


def jz_single(record: ShotRecord) -> float:
    """Jz estimate from system+environment counts of the one-qubit run.

    The system bit is the first of the two; excited (0) counts +1/2 and
    ground (1) counts -1/2 regardless of the environment bit.
    """
    _require_width(record, 2)
    up = sum(c for k, c in record.counts.items() if k[0] == "0")
    down = record.n_shots - up
    return (up - down) / (2.0 * record.n_shots)


def jz_two(record: ShotRecord) -> float:
    """Jz estimate from 4-bit counts of the collective run.

    The first two bits index the spin state: 01 sits at the top of the
    triplet (+1), 11 at the bottom (-1), 00 and 10 contribute zero.
    """
    _require_width(record, 4)
    acc = 0
    for key, count in record.counts.items():
        sys = key[:2]
        if sys == "01":
            acc += count
        elif sys == "11":
            acc -= count
    return acc / record.n_shots


def average_and_variance(samples) -> tuple[float, float]:
    """Mean and population variance of a sample sequence."""
    xs = [float(x) for x in samples]
    if not xs:
        raise ValueError("need at least one sample")
    n = len(xs)
    mean = math.fsum(xs) / n
    # fsum keeps the cancellation error in the squared deviations from
    # masking a tiny true variance; clamp the residual negative dust.
    var = math.fsum((x - mean) ** 2 for x in xs) / n
    return mean, max(var, 0.0)


@dataclass(frozen=True)
class PointResult:
    """One time point of an experiment run."""

    time: float
    thetas: tuple[float, ...]
    weights: tuple[float, ...]
    jz_mean: float
    jz_variance: float
    jz_exact: float
    weight_counts: tuple[int, ...] = field(default=())


@dataclass(frozen=True)
class ExperimentResult:
    """Full sweep of one experiment: per-point data plus the run settings."""

    mode: str
    gamma: float
    n_shots: int
    n_ave: int
    seed: int
    initial: int | None
    exact: bool
    points: tuple[PointResult, ...]
    observed_outcomes: tuple[str, ...] = field(default=())
