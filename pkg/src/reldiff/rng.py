"""Counter-based random streams for scheduling-independent Monte Carlo.

Philox4x32-10, vectorized over numpy arrays of counters. Every Gaussian
draw is addressed by (seed, stream, path index, step index, lane), so an
ensemble split across any number of workers, or re-run path by path,
reproduces identical noise bit for bit.
"""

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK = np.uint64(0xFFFFFFFF)

# stream discriminators keep independent uses of the same seed apart
STREAM_NOISE = 0
STREAM_INIT = 1
STREAM_ORACLE = 2
STREAM_SAMPLER = 3
STREAM_SCRATCH = 4


def philox4x32(c0, c1, c2, c3, k0, k1, rounds=10):
    """One Philox4x32 block per element of the (broadcast) counter arrays.

    Returns four uint32-valued uint64 arrays. Reference: the Philox
    counter-based generator of Salmon, Moraes, Dror and Shaw (SC'11).
    """
    c0 = np.asarray(c0, dtype=np.uint64)
    c1 = np.asarray(c1, dtype=np.uint64)
    c2 = np.asarray(c2, dtype=np.uint64)
    c3 = np.asarray(c3, dtype=np.uint64)
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    for _ in range(rounds):
        p0 = _M0 * c0
        p1 = _M1 * c2
        hi0, lo0 = p0 >> np.uint64(32), p0 & _MASK
        hi1, lo1 = p1 >> np.uint64(32), p1 & _MASK
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = (k0 + _W0) & _MASK
        k1 = (k1 + _W1) & _MASK
    return c0, c1, c2, c3


def _key(seed, stream):
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    k0 = seed & 0xFFFFFFFF
    k1 = ((seed >> 32) ^ (stream * 0x9E3779B9)) & 0xFFFFFFFF
    return k0, k1


def _uniforms(seed, stream, path_ids, step, lane):
    """Four open-(0,1) uniforms per path from one Philox block."""
    pid = np.asarray(path_ids, dtype=np.uint64)
    c0 = np.full_like(pid, lane)
    c1 = np.full_like(pid, int(step) & 0xFFFFFFFF)
    c2 = pid & _MASK
    c3 = (pid >> np.uint64(32)) & _MASK
    k0, k1 = _key(seed, stream)
    words = philox4x32(c0, c1, c2, c3, k0, k1)
    scale = 1.0 / 4294967296.0
    return [(w.astype(np.float64) + 0.5) * scale for w in words]


def normals(seed, path_ids, step, count, stream=STREAM_NOISE):
    """Standard normal draws, shape (len(path_ids), count).

    Box-Muller on pairs of 32-bit uniforms; four normals per Philox call.
    """
    path_ids = np.asarray(path_ids, dtype=np.uint64)
    cols = []
    lanes = (count + 3) // 4
    for lane in range(lanes):
        u0, u1, u2, u3 = _uniforms(seed, stream, path_ids, step, lane)
        r0 = np.sqrt(-2.0 * np.log(u0))
        r1 = np.sqrt(-2.0 * np.log(u2))
        a0 = 2.0 * np.pi * u1
        a1 = 2.0 * np.pi * u3
        cols.extend([r0 * np.cos(a0), r0 * np.sin(a0), r1 * np.cos(a1), r1 * np.sin(a1)])
    return np.stack(cols[:count], axis=-1)


def uniforms(seed, path_ids, step, count, stream=STREAM_NOISE):
    """Open-(0,1) uniform draws, shape (len(path_ids), count)."""
    path_ids = np.asarray(path_ids, dtype=np.uint64)
    cols = []
    lanes = (count + 3) // 4
    for lane in range(lanes):
        cols.extend(_uniforms(seed, stream, path_ids, step, lane))
    return np.stack(cols[:count], axis=-1)
