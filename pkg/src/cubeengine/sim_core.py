"""Seeded random streams and summary statistics for the simulation modules.

Every Monte Carlo replication draws from its own stream, keyed by
``(seed, replication index)`` through numpy's ``SeedSequence`` spawn keys.
Replication ``i`` therefore never depends on replication ``j``, and results
are identical however the replications are scheduled across workers.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream", "StatSummary", "derive_stream", "run_blocks", "summarize", "MAX_SEED"]

MAX_SEED = 2**64 - 1


def _check_u64(value: int, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if not 0 <= value <= MAX_SEED:
        raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {value}")
    return value


@dataclass(frozen=True)
class RngStream:
    """Handle on one independent random stream.

    ``subkey`` extends the stream identity for nested draws (e.g. the inner
    Monte Carlo evaluations of a doubling game) without disturbing the
    parent stream.
    """

    seed: int
    stream_id: int
    subkey: tuple[int, ...] = ()

    def __post_init__(self):
        _check_u64(self.seed, "seed")
        _check_u64(self.stream_id, "stream_id")
        for k in self.subkey:
            _check_u64(k, "subkey entry")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, *self.subkey))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, *key: int) -> RngStream:
        return RngStream(self.seed, self.stream_id, self.subkey + tuple(int(k) for k in key))


def derive_stream(seed: int, replication_index: int) -> RngStream:
    return RngStream(_check_u64(seed, "seed"), _check_u64(replication_index, "replication_index"))


def run_blocks(worker, total: int, jobs: int = 1, block: int = 4096) -> list:
    """Call ``worker(start, stop)`` over ``[0, total)`` in fixed-size blocks.

    Results come back in block order.  Block boundaries do not depend on
    ``jobs``, so with per-index streams the output is the same for any
    degree of parallelism.  ``worker`` must be picklable when ``jobs > 1``.
    """
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    bounds = [(s, min(s + block, total)) for s in range(0, total, block)]
    if jobs == 1 or len(bounds) <= 1:
        return [worker(s, e) for s, e in bounds]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(worker, s, e) for s, e in bounds]
        return [f.result() for f in futures]


@dataclass(frozen=True)
class StatSummary:
    n: int
    mean: float
    stderr: float
    ci95: tuple[float, float]
    # n == 1: stderr is reported as 0 by convention and cannot be trusted
    degenerate: bool = False


def summarize(samples) -> StatSummary:
    """Mean, standard error (sample sd / sqrt(n)) and a normal 95% interval."""
    values = [float(s) for s in samples]
    if not values:
        raise ValueError("cannot summarize an empty sample")
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return StatSummary(1, mean, 0.0, (mean, mean), degenerate=True)
    stderr = statistics.stdev(values, xbar=mean) / math.sqrt(n)
    half = 1.96 * stderr
    return StatSummary(n, mean, stderr, (mean - half, mean + half))
