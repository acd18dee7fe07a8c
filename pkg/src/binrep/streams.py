"""Counter-based random streams, one per trial, evaluated for many trials at once.

Trial ``i`` under master seed ``s`` owns a SplitMix64 sequence keyed by a
hash of ``(s, i)``; draw ``(step, slot)`` is the output at counter
``step * SLOTS + slot``.  Because a draw depends only on ``(s, i, step,
slot)``, results do not change with batching, chunk size or worker count.
"""

from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
SLOTS = 64

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = (np.uint64(k) for k in (30, 27, 31, 11))


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _mix_int(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class TrialStreams:
    def __init__(self, master_seed: int, trial_ids):
        ids = np.asarray(trial_ids, dtype=np.uint64)
        seed_key = np.uint64(_mix_int(int(master_seed) + GOLDEN))
        with np.errstate(over="ignore"):
            self.keys = _mix(_mix(ids + np.uint64(1)) ^ seed_key)

    def __len__(self):
        return len(self.keys)

    def bits(self, step: int, slot: int = 0) -> np.ndarray:
        if not 0 <= slot < SLOTS:
            raise ValueError(f"slot must be in [0, {SLOTS})")
        offset = np.uint64(((step * SLOTS + slot + 1) * GOLDEN) & MASK)
        with np.errstate(over="ignore"):
            return _mix(self.keys + offset)

    def uniform(self, step: int, slot: int = 0) -> np.ndarray:
        """Floats in [0, 1) with 53 random bits."""
        return (self.bits(step, slot) >> _S11).astype(np.float64) * (1.0 / (1 << 53))

    def integers(self, high: int, step: int, slot: int = 0) -> np.ndarray:
        """Integers uniform on ``[0, high)`` (bias below ``high / 2**53``)."""
        return (self.uniform(step, slot) * high).astype(np.int64)
