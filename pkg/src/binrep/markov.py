"""Exact Markov-chain model of single-bit-flip simulated annealing.

States are genotypes.  From genotype ``s`` each of the ``ell`` single-bit
neighbors is proposed with probability ``1/ell``; a proposal at least as
fit is accepted, a worse one with probability ``exp(-loss / T)``.  Masses
are projected onto phenotypes through the representation when read out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import BinrepError, DomainError, SizeError
from .fitness import OneMaxTarget, onemax_table
from .representation import Representation

MAX_ELL = 12


@dataclass(frozen=True)
class MarkovModel:
    representation: Representation
    a: int
    initial_temperature: float = 50.0
    cooling_factor: float = 0.995
    fixed_temperature: Optional[float] = None

    def __post_init__(self):
        if self.representation.ell > MAX_ELL:
            raise SizeError(f"Markov model supports ell <= {MAX_ELL}")
        OneMaxTarget(self.ell, self.a)  # validates the target
        if self.fixed_temperature is not None and not self.fixed_temperature > 0:
            raise DomainError("fixed_temperature must be positive")

    @property
    def ell(self) -> int:
        return self.representation.ell

    @property
    def fitness(self) -> np.ndarray:
        return onemax_table(OneMaxTarget(self.ell, self.a), self.representation)

    @property
    def optimum_genotype(self) -> int:
        return int(self.representation.inverse()[self.a])

    def temperature(self, step: int) -> float:
        """Temperature used for the transition from generation ``step`` to ``step + 1``."""
        if self.fixed_temperature is not None:
            return self.fixed_temperature
        return self.initial_temperature * self.cooling_factor ** step


def _neighbors(ell: int) -> np.ndarray:
    s = np.arange(1 << ell)
    return s[:, None] ^ (1 << np.arange(ell))[None, :]


def _acceptance(loss: np.ndarray, temperature: float) -> np.ndarray:
    if temperature == 0:
        return (loss <= 0).astype(float)
    with np.errstate(over="ignore"):
        return np.where(loss <= 0, 1.0, np.exp(-np.maximum(loss, 0) / temperature))


def build_transition_matrix(model: MarkovModel, temperature: float) -> np.ndarray:
    """Dense one-step matrix ``P[s, t]`` at a fixed temperature (``np.inf`` allowed)."""
    if not temperature > 0:
        raise DomainError(f"temperature must be positive, got {temperature}")
    return _matrix(model, temperature)


def zero_temperature_matrix(model: MarkovModel) -> np.ndarray:
    """Limit of the transition matrix as the temperature goes to zero."""
    return _matrix(model, 0.0)


def _matrix(model, temperature):
    f = model.fitness
    nb = _neighbors(model.ell)
    acc = _acceptance(f[:, None] - f[nb], temperature) / model.ell
    n = len(f)
    P = np.zeros((n, n))
    rows = np.repeat(np.arange(n), model.ell)
    P[rows, nb.ravel()] = acc.ravel()
    P[np.arange(n), np.arange(n)] = 1.0 - acc.sum(axis=1)
    return P


def genotype_trajectory(model: MarkovModel, generations: int) -> np.ndarray:
    """Genotype distribution after 0..``generations`` steps from the uniform start.

    Returns shape ``(generations + 1, 2**ell)``.  Only acceptance factors
    are recomputed per step; the neighbor structure is fixed.
    """
    f = model.fitness
    nb = _neighbors(model.ell)
    loss = f[:, None] - f[nb]
    n = len(f)
    out = np.empty((generations + 1, n))
    d = np.full(n, 1.0 / n)
    out[0] = d
    for step in range(generations):
        acc = _acceptance(loss, model.temperature(step)) / model.ell
        moved = d[:, None] * acc
        # bit flips are involutions, so inflow along bit i is moved[nb[:, i], i]
        d = d * (1.0 - acc.sum(axis=1)) + moved[nb, np.arange(model.ell)].sum(axis=1)
        out[step + 1] = d
    return out


def to_phenotypes(model: MarkovModel, genotype_mass: np.ndarray) -> np.ndarray:
    out = np.empty_like(genotype_mass)
    out[..., model.representation.perm] = genotype_mass
    return out


def phenotype_trajectory(model: MarkovModel, generations: int) -> np.ndarray:
    return to_phenotypes(model, genotype_trajectory(model, generations))


def evolve_distribution(model: MarkovModel, generations: int) -> np.ndarray:
    """Phenotype mass vector after ``generations`` cooled SA steps."""
    return phenotype_trajectory(model, generations)[-1]


@dataclass(frozen=True)
class AbsorbingClass:
    genotypes: tuple[int, ...]
    phenotypes: tuple[int, ...]
    probability: float


def absorption_probabilities(model: MarkovModel) -> list[AbsorbingClass]:
    """Where the zero-temperature chain ends up, starting from the uniform distribution.

    Closed communicating classes of the zero-temperature chain are the
    local maxima (a class has several genotypes only when equally fit
    neighbors trade places).  Absorption into each is solved directly from
    the transient block.
    """
    P = zero_temperature_matrix(model)
    n = P.shape[0]
    ncomp, label = connected_components(P > 0, directed=True, connection="strong")
    closed = []
    for c in range(ncomp):
        members = np.flatnonzero(label == c)
        others = np.setdiff1d(np.arange(n), members)
        if not P[np.ix_(members, others)].any():
            closed.append(members)
    if not closed:
        raise BinrepError("no closed class in the zero-temperature chain")
    recurrent = np.concatenate(closed)
    transient = np.setdiff1d(np.arange(n), recurrent)
    start = np.full(n, 1.0 / n)
    result = []
    if transient.size:
        Q = P[np.ix_(transient, transient)]
        # expected visits from the uniform start: x (I - Q) = start_T
        visits = np.linalg.solve((np.eye(len(transient)) - Q).T, start[transient])
    for members in closed:
        prob = start[members].sum()
        if transient.size:
            prob += visits @ P[np.ix_(transient, members)].sum(axis=1)
        gs = tuple(int(g) for g in members)
        result.append(AbsorbingClass(gs, tuple(int(model.representation.perm[g]) for g in gs),
                                     float(prob)))
    result.sort(key=lambda c: c.phenotypes)
    return result
