"""Locality metrics for nonredundant binary-integer representations.

All sums are accumulated as exact Python integers and divided last, so
equalities such as ``point_locality(make_sb(ell)) == (2**ell - 1) / ell``
hold exactly when compared as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import SizeError
from .representation import Representation, _check_ell, _popcount, _rng

GENERAL_LOCALITY_MAX_ELL = 14
GENERAL_LOCALITY_HARD_MAX_ELL = 16


def point_locality_bounds(ell: int) -> tuple[Fraction, Fraction]:
    """Tight (lower, upper) bounds on point locality at bit length ``ell``."""
    return Fraction((1 << ell) - 1, ell), Fraction(1 << (ell - 1))


def point_locality_sum(r: Representation) -> int:
    """Sum of ``|r(s ^ 2**i) - r(s)|`` over every genotype ``s`` and bit ``i``.

    Each unordered neighbor pair is counted twice, so the result is even.
    """
    perm = r.perm
    idx = np.arange(r.size, dtype=np.int64)
    # per-bit partial sums stay below 2**62 for ell <= 30
    return sum(int(np.abs(perm[idx ^ (1 << i)] - perm).sum()) for i in range(r.ell))


def point_locality(r: Representation) -> Fraction:
    """Mean absolute phenotype change over all single-bit flips."""
    return Fraction(point_locality_sum(r), r.ell << r.ell)


def rothlauf_dm(r: Representation) -> int:
    """Sum of ``|d_p - 1|`` over unordered genotype pairs at Hamming distance 1."""
    perm = r.perm
    idx = np.arange(r.size, dtype=np.int64)
    total = 0
    for i in range(r.ell):
        bit = 1 << i
        lo = idx[(idx & bit) == 0]
        total += int((np.abs(perm[lo | bit] - perm[lo]) - 1).sum())
    return total


def _pair_count(ell: int) -> int:
    n = 1 << ell
    return n * (n - 1) // 2


def _check_general_cap(ell, max_ell):
    cap = GENERAL_LOCALITY_MAX_ELL if max_ell is None else max_ell
    if cap > GENERAL_LOCALITY_HARD_MAX_ELL:
        raise SizeError(f"general locality is capped at ell <= {GENERAL_LOCALITY_HARD_MAX_ELL}")
    if ell > cap:
        raise SizeError(
            f"general locality at ell={ell} exceeds the cap {cap}; pass max_ell to override "
            f"(up to {GENERAL_LOCALITY_HARD_MAX_ELL}, runtime grows as 4**ell)")


def general_locality_sum(r: Representation, max_ell: Optional[int] = None) -> int:
    """Sum of ``|d_p - d_g|`` over unordered genotype pairs.

    Pairs are grouped by their XOR mask ``m``, which fixes the Hamming
    distance to ``popcount(m)``; every ordered pair appears once per mask so
    the ordered total is halved at the end.
    """
    _check_general_cap(r.ell, max_ell)
    perm = r.perm
    n = r.size
    idx = np.arange(n, dtype=np.int64)
    total = 0
    for m in range(1, n):
        dg = m.bit_count()
        total += int(np.abs(np.abs(perm[idx ^ m] - perm) - dg).sum())
    return total // 2


def general_locality(r: Representation, max_ell: Optional[int] = None) -> float:
    """Mean ``|d_p - d_g|`` over all unordered genotype pairs."""
    return float(Fraction(general_locality_sum(r, max_ell), _pair_count(r.ell)))


def distance_distortion(r: Representation, max_ell: Optional[int] = None) -> float:
    """Rothlauf's distance distortion, summed row by row over ``i < j``.

    Numerically identical to :func:`general_locality`; kept as a separate
    traversal so the two can cross-check each other.
    """
    _check_general_cap(r.ell, max_ell)
    perm = r.perm
    n = r.size
    idx = np.arange(n, dtype=np.int64)
    total = 0
    for i in range(n - 1):
        j = idx[i + 1:]
        dp = np.abs(perm[j] - perm[i])
        dg = _popcount(j ^ i)
        total += int(np.abs(dp - dg).sum())
    return float(Fraction(2 * total, n * (n - 1)))


def general_locality_lower_bound(ell: int) -> Fraction:
    """``(P - G) / C(2**ell, 2)`` with P the total phenotypic and G the total Hamming distance."""
    _check_ell(ell, 30)
    n = 1 << ell
    phen = (n - 1) * n * (n + 1) // 6
    ham = ell << (2 * (ell - 1))
    return Fraction(phen - ham, _pair_count(ell))


def expected_point_locality(ell: int) -> Fraction:
    """Mean point locality over all ``(2**ell)!`` representations: ``(2**ell + 1) / 3``."""
    _check_ell(ell, 62)
    return Fraction((1 << ell) + 1, 3)


@dataclass(frozen=True)
class LocalityReport:
    ell: int
    point_locality_num: int
    point_locality: Fraction
    dm: int
    general_locality: Optional[float] = None
    dc: Optional[float] = None

    def csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else f"{float(x):.3f}"
        return ",".join([str(self.ell), fmt(self.point_locality), str(self.dm),
                         fmt(self.general_locality), fmt(self.dc)])


def locality_report(r: Representation, general: bool = False,
                    max_ell: Optional[int] = None) -> LocalityReport:
    num = point_locality_sum(r)
    g = dc = None
    if general:
        g = general_locality(r, max_ell)
        dc = distance_distortion(r, max_ell)
    return LocalityReport(r.ell, num, Fraction(num, r.ell << r.ell), rothlauf_dm(r), g, dc)


def _batch_point_sums(perms: np.ndarray, ell: int) -> np.ndarray:
    """Point-locality numerators for each row of ``perms`` (shape ``(k, 2**ell)``)."""
    n = 1 << ell
    idx = np.arange(n)
    out = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(ell):
        out += np.abs(perms[:, idx ^ (1 << i)] - perms).sum(axis=1)
    return out


@dataclass(frozen=True)
class ExhaustiveReport:
    ell: int
    count: int
    minimum: Fraction
    maximum: Fraction
    mean: Fraction

    @property
    def lower_bound_ok(self) -> bool:
        return self.minimum == point_locality_bounds(self.ell)[0]

    @property
    def upper_bound_ok(self) -> bool:
        return self.maximum == point_locality_bounds(self.ell)[1]

    @property
    def mean_ok(self) -> bool:
        return self.mean == expected_point_locality(self.ell)

    @property
    def ok(self) -> bool:
        return self.lower_bound_ok and self.upper_bound_ok and self.mean_ok


def verify_bounds_exhaustive(ell: int) -> ExhaustiveReport:
    """Min, max and mean point locality over every permutation of ``range(2**ell)``."""
    if ell not in (1, 2, 3):
        raise SizeError(f"exhaustive enumeration supports ell <= 3, got {ell}")
    n = 1 << ell
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    sums = _batch_point_sums(perms, ell)
    denom = ell * n
    return ExhaustiveReport(
        ell=ell,
        count=len(perms),
        minimum=Fraction(int(sums.min()), denom),
        maximum=Fraction(int(sums.max()), denom),
        mean=Fraction(int(sums.sum()), denom * len(perms)),
    )


def monte_carlo_expected_locality(ell: int, trials: int, seed=None,
                                  chunk: int = 1 << 21) -> tuple[float, float]:
    """Sample mean and standard error of point locality over uniform random representations."""
    _check_ell(ell, 20)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = _rng(seed)
    n = 1 << ell
    rows = max(1, chunk // n)
    sums = []
    done = 0
    while done < trials:
        k = min(rows, trials - done)
        perms = rng.permuted(np.broadcast_to(np.arange(n, dtype=np.int64), (k, n)), axis=1)
        sums.append(_batch_point_sums(perms, ell))
        done += k
    values = np.concatenate(sums) / (ell * n)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")
    return mean, stderr
