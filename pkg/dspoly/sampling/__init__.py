"""
Seeded Dirichlet variates and posterior random polytopes.

Replicates are drawn in blocks of ``REPLICATE_BLOCK`` rows. Block ``b`` of a
test reads from ``SeedSequence(seed, spawn_key=(*prefix, b, channel))`` fed to
a counter-based Philox generator, and replicate ``r`` is row ``r % 256`` of
block ``r // 256``. Which worker draws a block never changes its rows.

The polytope width is drawn by inverse CDF from its own uniform channel, so
for a fixed stream a larger weakening only grows the width and shrinks the
location coordinates proportionally.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import gammaincinv

from dspoly.core import MAX_SEED, CountData, RandomPolytope
from dspoly.core.exceptions import (
    ComputationError,
    InvalidConcentrations,
    InvalidConfig,
)


REPLICATE_BLOCK: int = 256


class Channel(IntEnum):
    # nonzero and always the last spawn key entry, so no two paths collide
    CELLS = 1
    WIDTH = 2
    DATA = 3
    RESAMPLE = 4
    GENERIC = 5
    FOLDS = 6


def generator_for(seed: int, *path: int) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise InvalidConfig(f"seed must be a 64-bit unsigned int, got {seed}")
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(p) for p in path))
    return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class StreamKey:
    seed: int
    replicate_index: int
    prefix: Tuple[int, ...] = ()

    @property
    def block(self) -> int:
        return self.replicate_index // REPLICATE_BLOCK

    @property
    def offset(self) -> int:
        return self.replicate_index % REPLICATE_BLOCK

    def generator(self, channel: Channel) -> np.random.Generator:
        return generator_for(self.seed, *self.prefix, self.block, channel)


def stream_for(
    seed: int, replicate_index: int, prefix: Sequence[int] = ()
) -> StreamKey:
    if not 0 <= seed <= MAX_SEED:
        raise InvalidConfig(f"seed must be a 64-bit unsigned int, got {seed}")
    if replicate_index < 0:
        raise InvalidConfig(f"replicate index must be >= 0, got {replicate_index}")
    return StreamKey(seed=seed, replicate_index=replicate_index, prefix=tuple(prefix))


def _check_shapes(shapes: np.ndarray) -> np.ndarray:
    shapes = np.asarray(shapes, dtype=float)
    if shapes.ndim != 1 or shapes.size == 0:
        raise InvalidConcentrations("Expected a non-empty vector of concentrations")
    if not np.all(np.isfinite(shapes)):
        raise InvalidConcentrations("Concentrations must be finite")
    if np.any(shapes < 0.0):
        raise InvalidConcentrations(f"Negative concentration in {shapes.tolist()}")
    if not np.any(shapes > 0.0):
        raise InvalidConcentrations("All concentrations are zero")
    return shapes


def _gamma_rows(
    shapes: np.ndarray, rng: np.random.Generator, size: int
) -> np.ndarray:
    positive = shapes > 0.0
    gammas = rng.standard_gamma(
        np.where(positive, shapes, 1.0), size=(size, len(shapes))
    )
    # a zero concentration is a point mass at 0
    gammas[:, ~positive] = 0.0
    return gammas


def dirichlet_block(
    concentrations: Sequence[float], rng: np.random.Generator, size: int
) -> np.ndarray:
    shapes = _check_shapes(np.asarray(concentrations, dtype=float))
    gammas = _gamma_rows(shapes, rng, size)
    totals = gammas.sum(axis=1, keepdims=True)
    if np.any(totals <= 0.0):
        raise ComputationError("Gamma variates underflowed to zero")
    return gammas / totals


def dirichlet_draw(
    concentrations: Sequence[float], stream: StreamKey
) -> Tuple[float, ...]:
    rows = dirichlet_block(
        concentrations, stream.generator(Channel.GENERIC), REPLICATE_BLOCK
    )
    return tuple(float(value) for value in rows[stream.offset])


@dataclass(frozen=True, eq=False)
class PolytopeBatch:
    z0: np.ndarray
    z: np.ndarray

    def __len__(self) -> int:
        return len(self.z0)

    def polytope(self, index: int) -> RandomPolytope:
        return RandomPolytope(
            z0=float(self.z0[index]),
            z=tuple(float(value) for value in self.z[index]),
        )

    def head(self, rows: int) -> "PolytopeBatch":
        return PolytopeBatch(z0=self.z0[:rows], z=self.z[:rows])

    @classmethod
    def concatenate(cls, batches: Sequence["PolytopeBatch"]) -> "PolytopeBatch":
        return cls(
            z0=np.concatenate([batch.z0 for batch in batches]),
            z=np.concatenate([batch.z for batch in batches]),
        )


def polytope_block(
    shapes: Sequence[float],
    weaken_alpha: float,
    seed: int,
    block: int,
    prefix: Sequence[int] = (),
) -> PolytopeBatch:
    """Draws one block of Dirichlet(1 + weaken_alpha, shapes) polytopes."""
    if not weaken_alpha >= 0.0:
        raise InvalidConfig(f"weaken must be >= 0, got {weaken_alpha}")
    cell_shapes = _check_shapes(np.asarray(shapes, dtype=float))
    cells = _gamma_rows(
        cell_shapes,
        generator_for(seed, *prefix, block, Channel.CELLS),
        REPLICATE_BLOCK,
    )
    uniforms = generator_for(seed, *prefix, block, Channel.WIDTH).random(
        REPLICATE_BLOCK
    )
    width = gammaincinv(1.0 + weaken_alpha, uniforms)
    totals = width + cells.sum(axis=1)
    if np.any(totals <= 0.0):
        raise ComputationError("Gamma variates underflowed to zero")
    return PolytopeBatch(z0=width / totals, z=cells / totals[:, np.newaxis])


def replicate_blocks(replicates: int) -> List[Tuple[int, int]]:
    """(block, rows used) pairs covering ``replicates`` draws."""
    blocks = []
    for block in range(0, (replicates + REPLICATE_BLOCK - 1) // REPLICATE_BLOCK):
        rows = min(REPLICATE_BLOCK, replicates - block * REPLICATE_BLOCK)
        blocks.append((block, rows))
    return blocks


def draw_polytopes(
    shapes: Sequence[float],
    weaken_alpha: float,
    seed: int,
    replicates: int,
    prefix: Sequence[int] = (),
) -> PolytopeBatch:
    return PolytopeBatch.concatenate(
        [
            polytope_block(shapes, weaken_alpha, seed, block, prefix).head(rows)
            for block, rows in replicate_blocks(replicates)
        ]
    )


def polytope_draw(
    data: CountData, weaken_alpha: float, stream: StreamKey
) -> RandomPolytope:
    batch = polytope_block(
        data.as_array(), weaken_alpha, stream.seed, stream.block, stream.prefix
    )
    return batch.polytope(stream.offset)
