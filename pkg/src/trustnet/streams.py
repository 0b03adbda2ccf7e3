"""Counter-based random substreams keyed by (master_seed, run, step, agent, slot).

Every random variate the simulation consumes is a pure function of its key, so
ensembles are bit-reproducible regardless of execution order or worker count.
The per-step hot path uses a vectorized SplitMix64; one-off needs (graph
construction, initial placement, probe selection) get an independent numpy
Generator seeded through blake2b.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(_GOLDEN)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)
_INV_2_53 = 1.0 / (1 << 53)


def _mix(z: int) -> int:
    """SplitMix64 finalizer on a Python int, mod 2**64."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _mix_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U_MIX2
    return z ^ (z >> np.uint64(31))


def stream_key(master_seed: int, run_index: int, step: int, slot: int) -> int:
    """Fold the addressing fields into one 64-bit stream key."""
    h = _mix((master_seed & _MASK) ^ _GOLDEN)
    h = _mix(h ^ (run_index & _MASK))
    h = _mix(h ^ (step & _MASK))
    h = _mix(h ^ (slot & _MASK))
    return h


def unit_uniforms(key: int, n: int) -> np.ndarray:
    """n uniforms in [0, 1); element i is agent i's variate for this key."""
    x = np.uint64(key) + _U_GOLDEN * np.arange(1, n + 1, dtype=np.uint64)
    return (_mix_vec(x) >> np.uint64(11)).astype(np.float64) * _INV_2_53


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from arbitrary labeled parts (for numpy Generators)."""
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(repr(p).encode())
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


class Substreams:
    """Addressable uniforms for one realization of one configuration."""

    def __init__(self, master_seed: int, run_index: int):
        self.master_seed = int(master_seed)
        self.run_index = int(run_index)

    def uniforms(self, step: int, slot: int, n: int) -> np.ndarray:
        return unit_uniforms(stream_key(self.master_seed, self.run_index, step, slot), n)

    def agent_uniform(self, step: int, slot: int, agent: int) -> float:
        """Scalar access to the same value uniforms() puts at index `agent`."""
        key = stream_key(self.master_seed, self.run_index, step, slot)
        x = (key + _GOLDEN * (agent + 1)) & _MASK
        return (_mix(x) >> 11) * _INV_2_53

    def generator(self, purpose: str) -> np.random.Generator:
        """Sequential Generator for one-off draws (topology, init placement)."""
        return np.random.default_rng(
            derive_seed(self.master_seed, self.run_index, purpose)
        )
