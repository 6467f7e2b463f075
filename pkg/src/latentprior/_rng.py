"""Counter-based 64-bit stream (SplitMix64 finalizer over a keyed counter).

Every output word is a pure function of ``(seed, stream, counter)``, so a
batch can be generated in any order or split across workers and still come
out bit-identical.
"""
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO_POW_M53 = 2.0 ** -53


def _mix64(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def stream_key(seed: int, stream: int) -> np.ndarray:
    """Derive an independent 64-bit key for one logical stream of a seed."""
    s = np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    t = np.array([stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64(s ^ _mix64(t * _GOLDEN + _GOLDEN))


def words(key: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Raw 64-bit outputs for the given counters."""
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix64(key + (c + np.uint64(1)) * _GOLDEN)


def signed_unit(key: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """``2u - 1`` for a uniform ``u`` built from the top 53 bits of each word.

    ``u`` is taken at the midpoint of its 2^-53 cell, which keeps both ends
    of (-1, 1) out of reach; the result is exact (``u`` itself would not be
    representable above one half, so callers work with ``2u - 1`` directly).
    """
    top = (words(key, counters) >> np.uint64(11)).astype(np.int64)
    # |2k + 1 - 2^53| < 2^53, so the conversion to float is exact
    return (2 * top + (1 - 2 ** 53)).astype(np.float64) * _TWO_POW_M53


def derive_seed(seed: int, *path: int) -> int:
    """Deterministic child seed, e.g. one per audited lambda."""
    key = stream_key(seed, 0x5EED)
    for p in path:
        key = _mix64(key ^ words(key, np.array([p], dtype=np.uint64)))
    return int(key[0])
