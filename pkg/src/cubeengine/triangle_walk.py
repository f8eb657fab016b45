"""Three-player board: a random walk on the triangular lattice.

Points are integer barycentric triples ``(a, b, c)`` with ``a + b + c = n``,
measured toward the vertices A, B and C.  An interior point steps to one of
its six lattice neighbours; a point on an edge (one coordinate zero) has lost
that player and walks along the edge; a vertex ends the game.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.linalg import spsolve

from .sim_core import RngStream, run_blocks

__all__ = [
    "PLAYERS",
    "TriPoint",
    "TriLattice",
    "TriEvaluation",
    "SolverError",
    "neighbors",
    "exact_evaluation",
    "simulate_round",
    "trace_round",
    "estimate_evaluation",
    "prob_vs_area",
]

PLAYERS = ("A", "B", "C")

# Ordered coordinate exchanges: +1 to one coordinate, -1 to another.
DIRECTIONS = np.array(
    [
        (1, -1, 0),
        (1, 0, -1),
        (-1, 1, 0),
        (0, 1, -1),
        (-1, 0, 1),
        (0, -1, 1),
    ],
    dtype=np.int64,
)
# Draws are uniform on 0..5; an edge walker uses draw % 2.
CHUNK = 256
RESIDUAL_TOL = 1e-10


class TriPoint(NamedTuple):
    a: int
    b: int
    c: int

    @classmethod
    def parse(cls, text: str) -> TriPoint:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected a,b,c, got {text!r}")
        return cls(*(int(p) for p in parts))


@dataclass(frozen=True)
class TriLattice:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"lattice needs an integer n >= 1, got {self.n!r}")

    def check(self, p) -> TriPoint:
        p = TriPoint(*p)
        if min(p) < 0 or sum(p) != self.n:
            raise ValueError(f"{tuple(p)} is not a point of the n={self.n} lattice")
        return p

    def points(self) -> list[TriPoint]:
        n = self.n
        return [TriPoint(a, b, n - a - b) for a in range(n + 1) for b in range(n + 1 - a)]

    def centroid(self) -> TriPoint:
        """Lattice point nearest the centre (exact when 3 divides n)."""
        q, r = divmod(self.n, 3)
        return TriPoint(q + (r > 0), q + (r > 1), q)

    def is_vertex(self, p: TriPoint) -> bool:
        return max(p) == self.n

    def is_edge(self, p: TriPoint) -> bool:
        return min(p) == 0 and max(p) < self.n


def _winner(p) -> str:
    return PLAYERS[int(np.argmax(p))]


def _edge_axes(p) -> tuple[int, int]:
    """The two live coordinates of an edge point, in index order."""
    live = [i for i in range(3) if p[i] != 0]
    return live[0], live[1]


def neighbors(lattice: TriLattice, p) -> list[TriPoint]:
    """Points reachable in one step: 6 inside, 2 along an edge, none at a vertex."""
    p = lattice.check(p)
    if lattice.is_vertex(p):
        return []
    if lattice.is_edge(p):
        i, j = _edge_axes(p)
        out = []
        for s in (1, -1):
            q = list(p)
            q[i] += s
            q[j] -= s
            out.append(TriPoint(*q))
        return out
    return [TriPoint(*(np.array(p) + d).tolist()) for d in DIRECTIONS]


@dataclass(frozen=True)
class TriEvaluation:
    """Win probabilities; optional per-component standard errors."""

    pA: float | Fraction
    pB: float | Fraction
    pC: float | Fraction
    stderr: tuple[float, float, float] | None = None

    def as_tuple(self):
        return (self.pA, self.pB, self.pC)


class SolverError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def exact_evaluation(lattice: TriLattice) -> dict[TriPoint, TriEvaluation]:
    """Absorption probabilities from every point, by one sparse direct solve.

    Each non-vertex point's value is the mean of its neighbours' values;
    vertices carry unit vectors.
    """
    pts = lattice.points()
    unknown = [p for p in pts if not lattice.is_vertex(p)]
    index = {p: i for i, p in enumerate(unknown)}
    rows, cols, vals = [], [], []
    rhs = np.zeros((len(unknown), 3))
    for i, p in enumerate(unknown):
        nbrs = neighbors(lattice, p)
        rows.append(i)
        cols.append(i)
        vals.append(1.0)
        w = 1.0 / len(nbrs)
        for q in nbrs:
            if lattice.is_vertex(q):
                rhs[i, int(np.argmax(q))] += w
            else:
                rows.append(i)
                cols.append(index[q])
                vals.append(-w)
    out = {}
    if unknown:
        mat = csr_matrix((vals, (rows, cols)), shape=(len(unknown),) * 2)
        sol = np.asarray(spsolve(mat.tocsc(), rhs)).reshape(len(unknown), 3)
        residual = float(np.max(np.abs(mat @ sol - rhs)))
        if not np.isfinite(residual) or residual > RESIDUAL_TOL:
            raise SolverError("lattice solve missed the residual bound", residual)
        for p, row in zip(unknown, sol):
            out[p] = TriEvaluation(*(float(v) for v in row))
    for p in pts:
        if lattice.is_vertex(p):
            unit = [0.0, 0.0, 0.0]
            unit[int(np.argmax(p))] = 1.0
            out[p] = TriEvaluation(*unit)
    return out


class DrawSource:
    """Sequential access to a stream's move draws, fetched in fixed chunks."""

    def __init__(self, gen: np.random.Generator):
        self._gen = gen
        self._buf = np.empty(0, dtype=np.int64)
        self._pos = 0

    def chunk(self) -> np.ndarray:
        """Remaining draws of the current chunk, or a fresh chunk."""
        if self._pos >= self._buf.size:
            self._buf = self._gen.integers(0, 6, size=CHUNK, dtype=np.int64)
            self._pos = 0
        return self._buf[self._pos:]

    def consume(self, count: int) -> None:
        self._pos += count

    def next(self) -> int:
        value = int(self.chunk()[0])
        self._pos += 1
        return value


def step(lattice: TriLattice, p: TriPoint, draw: int) -> TriPoint:
    """Move ``p`` by one draw; the single-step form of the vectorized walk."""
    if lattice.is_vertex(p):
        return p
    if lattice.is_edge(p):
        i, j = _edge_axes(p)
        s = 1 if draw % 2 == 0 else -1
        q = list(p)
        q[i] += s
        q[j] -= s
        return TriPoint(*q)
    return TriPoint(*(np.array(p) + DIRECTIONS[draw]).tolist())


def _walk(n: int, start, draws: DrawSource, record: bool):
    pos = np.array(start, dtype=np.int64)
    path = [tuple(int(v) for v in pos)] if record else None
    while pos.max() < n:
        chunk = draws.chunk()
        used = 0
        if pos.min() > 0:
            traj = pos + np.cumsum(DIRECTIONS[chunk], axis=0)
            hit = np.flatnonzero(traj.min(axis=1) == 0)
            stop = int(hit[0]) + 1 if hit.size else traj.shape[0]
            if record:
                path.extend(tuple(int(v) for v in row) for row in traj[:stop])
            pos = traj[stop - 1]
            used = stop
        if used < chunk.size and pos.min() == 0:
            i, j = _edge_axes(pos)
            signs = np.where(chunk[used:] % 2 == 0, 1, -1)
            along = pos[i] + np.cumsum(signs)
            hit = np.flatnonzero((along == 0) | (along == n))
            stop = int(hit[0]) + 1 if hit.size else along.size
            if record:
                for v in along[:stop]:
                    q = [0, 0, 0]
                    q[i], q[j] = int(v), n - int(v)
                    path.append(tuple(q))
            pos = pos.copy()
            pos[i], pos[j] = along[stop - 1], n - along[stop - 1]
            used += stop
        draws.consume(used)
    return _winner(pos), path


def simulate_round(lattice: TriLattice, start, stream: RngStream) -> str:
    """Walk from ``start`` until a vertex is reached; return its player."""
    start = lattice.check(start)
    return _walk(lattice.n, start, DrawSource(stream.generator()), record=False)[0]


def trace_round(lattice: TriLattice, start, stream: RngStream):
    """Like :func:`simulate_round` but also return the visited points."""
    start = lattice.check(start)
    winner, path = _walk(lattice.n, start, DrawSource(stream.generator()), record=True)
    return winner, [TriPoint(*p) for p in path]


def _count_block(n, start, seed, key, lo, hi):
    counts = [0, 0, 0]
    for rep in range(lo, hi):
        stream = RngStream(seed, rep, key)
        winner, _ = _walk(n, start, DrawSource(stream.generator()), record=False)
        counts[PLAYERS.index(winner)] += 1
    return counts


def win_counts(lattice: TriLattice, start, trials: int, seed: int, jobs: int = 1, key=()) -> list[int]:
    """Winner counts over ``trials`` replications; replication ``i`` uses stream ``(seed, i, key)``."""
    start = lattice.check(start)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    worker = partial(_count_block, lattice.n, tuple(start), seed, tuple(key))
    totals = [0, 0, 0]
    for block in run_blocks(worker, trials, jobs):
        totals = [t + c for t, c in zip(totals, block)]
    return totals


def estimate_evaluation(lattice: TriLattice, start, trials: int, seed: int, jobs: int = 1, key=()) -> TriEvaluation:
    """Monte Carlo win frequencies with binomial standard errors."""
    counts = win_counts(lattice, start, trials, seed, jobs, key)
    probs = [Fraction(c, trials) for c in counts]
    stderr = tuple(float(np.sqrt(float(p) * (1 - float(p)) / trials)) for p in probs)
    return TriEvaluation(*probs, stderr=stderr)


def prob_vs_area(lattice: TriLattice, start, trials: int, seed: int, jobs: int = 1):
    """Monte Carlo estimate minus the barycentric coordinates of ``start``.

    Returns ``(differences, estimate)``; the differences are exact Fractions
    and sum to zero.
    """
    start = lattice.check(start)
    est = estimate_evaluation(lattice, start, trials, seed, jobs)
    area = [Fraction(v, lattice.n) for v in start]
    diffs = tuple(p - q for p, q in zip(est.as_tuple(), area))
    return diffs, est
