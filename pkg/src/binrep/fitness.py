"""Fitness functions over phenotypes.

Generalized ONEMAX scores an integer phenotype by its distance to a target.
The De Jong suite decodes fixed-point genotypes through a representation
and is minimized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ShapeError
from .representation import Representation


@dataclass(frozen=True)
class OneMaxTarget:
    ell: int
    a: int

    def __post_init__(self):
        if not 0 <= self.a < (1 << self.ell):
            raise DomainError(f"target {self.a} outside [0, {1 << self.ell})")

    @property
    def x_max(self) -> int:
        return (1 << self.ell) - 1


def onemax_fitness(t: OneMaxTarget, phenotype):
    """``x_max - |phenotype - a|``; accepts ints or integer arrays."""
    p = np.asarray(phenotype)
    if np.any((p < 0) | (p > t.x_max)):
        raise DomainError(f"phenotype outside [0, {t.x_max}]")
    out = t.x_max - np.abs(p - t.a)
    return int(out) if out.ndim == 0 else out


def onemax_table(t: OneMaxTarget, r: Representation) -> np.ndarray:
    """Fitness of every genotype, indexed by genotype."""
    if r.ell != t.ell:
        raise ShapeError(f"representation has ell={r.ell}, target has ell={t.ell}")
    return t.x_max - np.abs(r.perm - t.a)


@dataclass(frozen=True)
class LocalMaxReport:
    count: int
    maxima: list  # (genotype, phenotype, fitness) tuples, ascending genotype


def count_local_maxima(t: OneMaxTarget, r: Representation) -> LocalMaxReport:
    """Genotypes with no single-bit neighbor of strictly higher fitness."""
    f = onemax_table(t, r)
    idx = np.arange(r.size)
    is_max = np.ones(r.size, dtype=bool)
    for i in range(r.ell):
        is_max &= f[idx ^ (1 << i)] <= f
    gs = np.flatnonzero(is_max)
    return LocalMaxReport(len(gs), [(int(g), int(r.perm[g]), int(f[g])) for g in gs])


# Shekel's foxholes: a 5x5 grid at -32, -16, 0, 16, 32.
_GRID = np.array([-32.0, -16.0, 0.0, 16.0, 32.0])
FOXHOLES = np.stack([np.tile(_GRID, 5), np.repeat(_GRID, 5)])


def parabola(x):
    return np.sum(x * x, axis=-1)


def rosenbrock_saddle(x):
    x1, x2 = x[..., 0], x[..., 1]
    return 100.0 * (x1 * x1 - x2) ** 2 + (1.0 - x1) ** 2


def step(x):
    return np.sum(np.floor(x), axis=-1)


def quartic(x):
    i = np.arange(1, x.shape[-1] + 1)
    return np.sum(i * x ** 4, axis=-1)


def foxholes(x):
    # (..., 2) against (2, 25) -> (..., 25)
    diff = x[..., :, None] - FOXHOLES
    inner = np.arange(1, 26) + np.sum(diff ** 6, axis=-2)
    return 1.0 / (0.002 + np.sum(1.0 / inner, axis=-1))


@dataclass(frozen=True)
class DeJongSpec:
    id: str
    dims: int
    bits_per_dim: int
    lo: float
    hi: float
    optimum: float
    noisy: bool = False
    description: str = field(default="", compare=False)

    @property
    def genotype_length(self) -> int:
        return self.dims * self.bits_per_dim

    def with_bits(self, bits_per_dim: int) -> "DeJongSpec":
        return DeJongSpec(self.id, self.dims, bits_per_dim, self.lo, self.hi,
                          self.optimum, self.noisy, self.description)


DEJONG = {
    "f1": DeJongSpec("f1", 3, 10, -5.12, 5.12, 0.0, description="Parabola"),
    "f2": DeJongSpec("f2", 2, 12, -2.048, 2.048, 0.0, description="Rosenbrock's Saddle"),
    "f3": DeJongSpec("f3", 5, 10, -5.12, 5.12, -30.0, description="Step function"),
    "f4": DeJongSpec("f4", 30, 8, -1.28, 1.28, 0.0, noisy=True,
                     description="Quadratic with noise"),
    "f5": DeJongSpec("f5", 2, 17, -65.536, 65.536, 0.998003838, description="Shekel's foxholes"),
}

_FORMULAS = {"f1": parabola, "f2": rosenbrock_saddle, "f3": step, "f4": quartic, "f5": foxholes}


def decode(spec: DeJongSpec, bits, r: Representation) -> np.ndarray:
    """Map genotype bits (shape ``(..., dims * bits_per_dim)``) to reals, shape ``(..., dims)``.

    Each slice is read most-significant bit first as a genotype integer,
    mapped to its phenotype through ``r``, then scaled linearly so that
    phenotype 0 is ``lo`` and phenotype ``2**bits - 1`` is ``hi``.
    """
    bits = np.asarray(bits)
    if bits.shape[-1] != spec.genotype_length:
        raise ShapeError(f"{spec.id} expects {spec.genotype_length} bits, got {bits.shape[-1]}")
    if r.ell != spec.bits_per_dim:
        raise ShapeError(f"{spec.id} uses {spec.bits_per_dim}-bit slices, "
                         f"representation has ell={r.ell}")
    b = spec.bits_per_dim
    weights = 1 << np.arange(b - 1, -1, -1, dtype=np.int64)
    slices = bits.reshape(bits.shape[:-1] + (spec.dims, b)).astype(np.int64)
    phen = r.perm[slices @ weights]
    return spec.lo + phen * ((spec.hi - spec.lo) / ((1 << b) - 1))


def evaluate(spec: DeJongSpec, x, rng: Optional[np.random.Generator] = None):
    """Evaluate the De Jong formula on real vectors; noise is added only if ``rng`` is given."""
    x = np.asarray(x, dtype=float)
    val = _FORMULAS[spec.id](x)
    if spec.noisy and rng is not None:
        val = val + rng.standard_normal(np.shape(val))
    return val


def dejong_fitness(spec: DeJongSpec, bits, r: Representation,
                   rng: Optional[np.random.Generator] = None):
    """Fitness (to be minimized) of genotype bits; vectorized over leading axes."""
    return evaluate(spec, decode(spec, bits, r), rng)
