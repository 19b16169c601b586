"""Counter-based uniform random streams.

Every draw is a pure function of (seed, stream, index) built from the
splitmix64 finalizer, so parallel or resumed sampling reproduces bit-exactly
regardless of scheduling.  Stream quality is that of splitmix64, which is
ample for Monte Carlo estimates guarded by exact binomial intervals.
"""

from __future__ import annotations

import numpy as np

_GOLDEN_INT = 0x9E3779B97F4A7C15
_MIX1_INT = 0xBF58476D1CE4E5B9
_MIX2_INT = 0x94D049BB133111EB
_MASK = 0xFFFFFFFFFFFFFFFF

_GOLDEN = np.uint64(_GOLDEN_INT)
_MIX1 = np.uint64(_MIX1_INT)
_MIX2 = np.uint64(_MIX2_INT)
_INV_2_53 = 1.0 / (1 << 53)


def _finalize_int(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1_INT) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2_INT) & _MASK
    return (z ^ (z >> 31)) & _MASK


def _finalize(z: np.ndarray) -> np.ndarray:
    z = np.bitwise_xor(z, z >> np.uint64(30)) * _MIX1
    z = np.bitwise_xor(z, z >> np.uint64(27)) * _MIX2
    return np.bitwise_xor(z, z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> int:
    base = _finalize_int((seed & _MASK) + _GOLDEN_INT)
    return _finalize_int(base + ((stream & _MASK) * _GOLDEN_INT & _MASK))


def uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """count doubles in [0,1) at positions start..start+count-1 of one stream."""
    key = np.uint64(stream_key(seed, stream))
    idx = (np.arange(start, start + count, dtype=np.uint64) + np.uint64(1)) * _GOLDEN
    return (_finalize(key + idx) >> np.uint64(11)).astype(np.float64) * _INV_2_53


def uniform_block(seed: int, streams: np.ndarray, n_per_stream: int) -> np.ndarray:
    """(len(streams), n_per_stream) doubles; row i is the head of stream streams[i]."""
    base = np.uint64(_finalize_int((seed & _MASK) + _GOLDEN_INT))
    keys = _finalize(base + np.asarray(streams).astype(np.uint64) * _GOLDEN)
    idx = (np.arange(n_per_stream, dtype=np.uint64) + np.uint64(1)) * _GOLDEN
    words = _finalize(keys[:, None] + idx[None, :])
    return (words >> np.uint64(11)).astype(np.float64) * _INV_2_53


def standard_normals(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Box-Muller transform of paired uniforms; 1-u1 keeps the log argument in (0,1]."""
    r = np.sqrt(-2.0 * np.log1p(-u1))
    return r * np.cos(2.0 * np.pi * u2)
