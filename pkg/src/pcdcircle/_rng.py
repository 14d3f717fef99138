"""Counter-based uniform generator used for sampler initialization.

Every draw is a pure function of ``(seed, stream, counter)`` so runs can be
replayed bit-exactly in any language.  The construction is SplitMix64:

    key   = mix64(seed + stream * 0xD1B54A32D192ED03)
    z     = key + (counter + 1) * 0x9E3779B97F4A7C15
    bits  = mix64(z)
    u     = (bits >> 11) * 2**-53                 # in [0, 1)

    mix64(z):
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

All arithmetic is modulo 2**64.
"""

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
STREAM_MULT = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)

STREAM_INIT = 0
STREAM_PHI0 = 1


def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _as_u64(seed):
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return np.array([seed], dtype=np.uint64)


def uniform(seed, stream, counters):
    """Uniform doubles in [0, 1) for the given counters of one stream."""
    counters = np.atleast_1d(np.asarray(counters, dtype=np.uint64))
    with np.errstate(over="ignore"):
        key = _mix64(_as_u64(seed) + np.uint64(stream) * STREAM_MULT)
        bits = _mix64(key + (counters + np.uint64(1)) * GOLDEN)
    return (bits >> np.uint64(11)).astype(np.float64) * 2.0**-53
