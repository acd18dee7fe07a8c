"""Nonredundant bitstring-to-integer representations.

A representation of length ``ell`` is stored as a permutation ``perm`` of
``range(2**ell)`` where ``perm[g]`` is the phenotype (integer) of the
genotype whose standard-binary value is ``g``.  Single-bit mutation of
genotype ``g`` at bit ``i`` is ``g ^ (1 << i)``.
"""

from __future__ import annotations

import json
import random
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, ParseError, SizeError

MAX_ELL_DETERMINISTIC = 30
MAX_ELL_RANDOMIZED = 20
MAX_ELL_PATH_SEARCH = 20

# 5-bit constants used in the SA/ES/GA experiments.
NGG32 = (0, 1, 19, 2, 31, 28, 20, 3, 23, 26, 24, 25, 22, 27, 21, 4,
         13, 14, 18, 15, 30, 29, 17, 16, 12, 9, 11, 10, 7, 8, 6, 5)
UBL32 = (24, 1, 4, 19, 15, 16, 21, 13, 9, 26, 18, 0, 23, 12, 6, 22,
         3, 28, 20, 14, 30, 7, 5, 27, 29, 10, 8, 31, 2, 17, 25, 11)

KINDS = ("sb", "brg", "ngg", "ubl", "random", "harper-min", "harper-max",
         "suboptimal-gray")


class Representation:
    """Immutable genotype -> phenotype bijection on ``ell``-bit strings."""

    __slots__ = ("ell", "perm")

    def __init__(self, ell: int, perm, *, validate: bool = True):
        arr = np.array(perm, dtype=np.int64)
        if validate:
            _check_permutation(ell, arr)
        arr.flags.writeable = False
        object.__setattr__(self, "ell", int(ell))
        object.__setattr__(self, "perm", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Representation is immutable")

    @property
    def size(self) -> int:
        return 1 << self.ell

    def phenotype(self, genotype):
        return self.perm[genotype]

    def inverse(self) -> np.ndarray:
        """Genotype of each phenotype (the order in which phenotypes are laid out)."""
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.size, dtype=np.int64)
        inv.flags.writeable = False
        return inv

    def tolist(self) -> list[int]:
        return self.perm.tolist()

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return self.ell == other.ell and np.array_equal(self.perm, other.perm)

    def __hash__(self):
        return hash((self.ell, self.perm.tobytes()))

    def __len__(self):
        return self.size

    def __repr__(self):
        body = self.tolist() if self.ell <= 4 else f"<{self.size} entries>"
        return f"Representation(ell={self.ell}, perm={body})"


def _check_permutation(ell, arr):
    if not isinstance(ell, (int, np.integer)) or ell < 1:
        raise SizeError(f"ell must be a positive integer, got {ell!r}")
    n = 1 << int(ell)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ParseError(f"perm must have exactly 2**{ell} = {n} entries, got {arr.size}")
    bad = np.flatnonzero((arr < 0) | (arr >= n))
    if bad.size:
        raise ParseError(f"value {arr[bad[0]]} outside [0, {n})", position=int(bad[0]))
    seen = np.zeros(n, dtype=bool)
    seen[arr] = True
    if not seen.all():
        # first index whose value already appeared earlier
        _, first = np.unique(arr, return_index=True)
        dup = np.setdiff1d(np.arange(n), first)
        raise ParseError("not a permutation: repeated value", position=int(dup[0]))


def _check_ell(ell, hi, lo=1):
    if not isinstance(ell, (int, np.integer)) or isinstance(ell, bool) or not lo <= ell <= hi:
        raise SizeError(f"ell must be an integer in [{lo}, {hi}], got {ell!r}")


def _rng(seed) -> np.random.Generator:
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng(int(seed) & 0xFFFF_FFFF_FFFF_FFFF)


def make_sb(ell: int) -> Representation:
    """Standard binary: the identity permutation."""
    _check_ell(ell, MAX_ELL_DETERMINISTIC)
    return Representation(ell, np.arange(1 << ell, dtype=np.int64), validate=False)


def gray_encode(x):
    return x ^ (x >> 1)


def gray_decode(g):
    """Inverse of :func:`gray_encode` by XOR prefix scan; works on ints and int arrays."""
    shift = 1
    while shift < 64:
        g = g ^ (g >> shift)
        shift <<= 1
    return g


def make_brg(ell: int) -> Representation:
    """Binary reflected Gray: ``perm[g]`` is the rank of bitstring ``g`` in the reflected order."""
    _check_ell(ell, MAX_ELL_DETERMINISTIC)
    g = np.arange(1 << ell, dtype=np.int64)
    return Representation(ell, gray_decode(g), validate=False)


def make_ngg32() -> Representation:
    return Representation(5, NGG32)


def make_ubl32() -> Representation:
    return Representation(5, UBL32)


def make_random(ell: int, seed=None) -> Representation:
    """Uniformly random representation (Fisher-Yates shuffle from a seeded generator)."""
    _check_ell(ell, MAX_ELL_RANDOMIZED)
    return Representation(ell, _rng(seed).permutation(1 << ell), validate=False)


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def make_harper_max(ell: int, seed=None) -> Representation:
    """Labeling with the largest possible sum of neighbor differences.

    A random start vertex gets 0.  Vertices with the start's popcount parity
    get a shuffle of ``1 .. 2**(ell-1) - 1``; the opposite parity class gets
    a shuffle of ``2**(ell-1) .. 2**ell - 1``.  Since every hypercube edge
    joins the two parity classes, each edge spans the low and high halves.
    """
    _check_ell(ell, MAX_ELL_RANDOMIZED)
    rng = _rng(seed)
    n = 1 << ell
    half = n >> 1
    start = int(rng.integers(n))
    parity = start.bit_count() & 1
    low = rng.permutation(np.arange(1, half, dtype=np.int64))
    high = rng.permutation(np.arange(half, n, dtype=np.int64))
    perm = np.empty(n, dtype=np.int64)
    perm[start] = 0
    i = j = 0
    for v in range(n):
        if v == start:
            continue
        if v.bit_count() & 1 == parity:
            perm[v] = low[i]
            i += 1
        else:
            perm[v] = high[j]
            j += 1
    return Representation(ell, perm, validate=False)


def harper_min_labeling(ell: int, choose: Callable[[Sequence[int]], int]) -> np.ndarray:
    """Greedy labeling ``0, 1, 2, ...`` of the ``ell``-cube.

    At each step the next label goes to an unassigned vertex with the most
    already-labeled neighbors.  ``choose`` receives the tied candidates
    (the start step offers every vertex) and returns the one to label.
    Returns ``perm`` with ``perm[vertex] = label``.
    """
    n = 1 << ell
    count = np.zeros(n, dtype=np.int64)
    # buckets[c] holds unassigned vertices with c assigned neighbours; pos
    # gives each vertex's index inside its bucket for O(1) removal
    buckets: list[list[int]] = [list(range(n))] + [[] for _ in range(ell)]
    pos = list(range(n))
    perm = np.full(n, -1, dtype=np.int64)
    top = 0

    def remove(v, c):
        b = buckets[c]
        k = pos[v]
        last = b.pop()
        if last != v:
            b[k] = last
            pos[last] = k

    for label in range(n):
        while not buckets[top]:
            top -= 1
        cand = buckets[top]
        v = choose(cand) if len(cand) > 1 else cand[0]
        remove(v, top)
        perm[v] = label
        for i in range(ell):
            u = v ^ (1 << i)
            if perm[u] < 0:
                c = count[u]
                remove(u, c)
                count[u] = c + 1
                pos[u] = len(buckets[c + 1])
                buckets[c + 1].append(u)
                if c + 1 > top:
                    top = c + 1
    return perm


def make_harper_min(ell: int, seed=None) -> Representation:
    """Greedy minimum-locality labeling with seeded uniform tie-breaking."""
    _check_ell(ell, MAX_ELL_RANDOMIZED)
    pick = random.Random(int(seed) if seed is not None else None)
    perm = harper_min_labeling(ell, lambda cand: cand[pick.randrange(len(cand))])
    return Representation(ell, perm, validate=False)


def hamiltonian_path(ell: int, prefix: Sequence[int], seed: int = 0,
                     max_steps: Optional[int] = None) -> Optional[list[int]]:
    """Depth-first backtracking search for a Hamiltonian path of the ``ell``-cube.

    The path starts with ``prefix`` (which must itself be a valid walk).
    Neighbors are tried in ascending bit order.  With a nonzero ``seed``
    they are instead tried fewest-onward-moves first (Warnsdorff's rule)
    with seeded random tie-breaking.  Returns None if ``max_steps``
    node expansions pass without completing the path.
    """
    n = 1 << ell
    visited = bytearray(n)
    path = list(prefix)
    for v in path:
        visited[v] = 1
    tiebreak = random.Random(seed).random if seed else None
    bits = list(range(ell))

    def options(v):
        nbrs = [v ^ (1 << b) for b in bits]
        if tiebreak is not None:
            # fewest onward moves first, random among equals
            keys = {u: (sum(not visited[u ^ (1 << b)] for b in bits), tiebreak())
                    for u in nbrs}
            nbrs.sort(key=keys.__getitem__)
        return iter(nbrs)

    stack = [options(path[-1])]
    steps = 0
    while len(path) < n:
        if not stack:
            return None
        for u in stack[-1]:
            if not visited[u]:
                visited[u] = 1
                path.append(u)
                stack.append(options(u))
                break
        else:
            stack.pop()
            if len(path) <= len(prefix):
                return None
            visited[path.pop()] = 0
        steps += 1
        if max_steps is not None and steps > max_steps:
            return None
    return path


def _inductive_path(ell: int, rng: random.Random) -> list[int]:
    # Path through the 0-half, hop across the top bit, then a Gray walk of
    # the 1-half starting at the crossing point.  Permuting bit positions of
    # the reflected Gray walk keeps it Hamiltonian.
    if ell == 3:
        return [0, 1, 3, 7, 5, 4, 6, 2]
    lower = _inductive_path(ell - 1, rng)
    top = 1 << (ell - 1)
    order = list(range(ell - 1))
    rng.shuffle(order)

    def relabel(x):
        return sum(1 << order[b] for b in range(ell - 1) if x >> b & 1)

    end = lower[-1]
    return lower + [top | end ^ relabel(gray_encode(k)) for k in range(top)]


def make_suboptimal_gray(ell: int, seed: int = 0,
                         max_steps: Optional[int] = None) -> Representation:
    """Gray code whose first four genotypes are 0...000, 0...001, 0...011, 0...111.

    Labeling 0...111 with 3 (rather than 0...010) departs from every
    minimum-locality labeling, so the point locality is strictly above the
    lower bound.  The rest of the path comes from a depth-first search;
    should it exceed ``max_steps`` expansions the inductive half-cube
    construction is used instead, which always succeeds.  The default
    budget is ``16 * 2**ell`` expansions.  Seeded searches
    get slow past ``ell = 16`` (tens of seconds at 20).
    """
    if not isinstance(ell, (int, np.integer)) or ell < 3:
        raise DomainError(f"suboptimal Gray construction needs ell >= 3, got {ell!r}")
    _check_ell(ell, MAX_ELL_PATH_SEARCH, lo=3)
    if max_steps is None:
        max_steps = 16 << ell
    path = hamiltonian_path(ell, [0, 1, 3, 7], seed=seed, max_steps=max_steps)
    if path is None:
        path = _inductive_path(ell, random.Random(seed))
    perm = np.empty(1 << ell, dtype=np.int64)
    perm[np.asarray(path, dtype=np.int64)] = np.arange(1 << ell, dtype=np.int64)
    return Representation(ell, perm, validate=False)


def is_gray(r: Representation) -> bool:
    """True iff phenotypes k and k+1 always sit on genotypes one bit apart."""
    path = r.inverse()
    steps = path[1:] ^ path[:-1]
    return bool(np.all(_popcount(steps) == 1))


def named(kind: str, ell: int = 5, seed: int = 0) -> Representation:
    """Materialize one of the named representation kinds.

    ``ngg`` and ``ubl`` return the verbatim 5-bit constants at ``ell == 5``
    and otherwise fall back to :func:`make_suboptimal_gray` and
    :func:`make_harper_max` with the given seed.
    """
    kind = kind.lower().replace("_", "-")
    if kind == "sb":
        return make_sb(ell)
    if kind == "brg":
        return make_brg(ell)
    if kind in ("ngg", "ngg32"):
        return make_ngg32() if ell == 5 else make_suboptimal_gray(ell, seed)
    if kind in ("ubl", "ubl32"):
        return make_ubl32() if ell == 5 else make_harper_max(ell, seed)
    if kind in ("random", "randomuniform"):
        return make_random(ell, seed)
    if kind in ("harper-min", "harpermin"):
        return make_harper_min(ell, seed)
    if kind in ("harper-max", "harpermax"):
        return make_harper_max(ell, seed)
    if kind in ("suboptimal-gray", "suboptimalgray"):
        return make_suboptimal_gray(ell, seed)
    raise ValueError(f"unknown representation kind {kind!r}; expected one of {KINDS}")


def serialize(r: Representation) -> str:
    return json.dumps({"ell": r.ell, "perm": r.tolist()}, separators=(",", ":"))


def deserialize(text: str) -> Representation:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", position=exc.pos) from None
    if not isinstance(obj, dict) or set(obj) != {"ell", "perm"}:
        raise ParseError('expected an object with exactly the fields "ell" and "perm"')
    ell, perm = obj["ell"], obj["perm"]
    if not isinstance(ell, int) or isinstance(ell, bool) or not 1 <= ell <= MAX_ELL_DETERMINISTIC:
        raise ParseError(f'"ell" must be an integer in [1, {MAX_ELL_DETERMINISTIC}], got {ell!r}')
    if not isinstance(perm, list):
        raise ParseError('"perm" must be an array of integers')
    for k, v in enumerate(perm):
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"perm entry {v!r} is not an integer", position=k)
    return Representation(ell, perm)


def load(path) -> Representation:
    with open(path, encoding="utf-8") as fh:
        return deserialize(fh.read())


def save(r: Representation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(r))
        fh.write("\n")
