"""Small deterministic generator shared by the compiled and the numpy paths.

L'Ecuyer's combined multiplicative LCG. All intermediate products stay below
2**47, so it runs identically on int64 arrays, numpy scalars and in numba.
"""
import numpy as np

from ._jit import njit

_M1 = 2147483563
_M2 = 2147483399
_A1 = 40014
_A2 = 40692


@njit
def rng_next(state):
    s1 = (_A1 * state[0]) % _M1
    s2 = (_A2 * state[1]) % _M2
    state[0] = s1
    state[1] = s2
    z = s1 - s2
    if z < 1:
        z += _M1 - 1
    return z


@njit
def rng_int(state, n):
    """Uniform integer in [0, n)."""
    return (rng_next(state) - 1) % n


@njit
def rng_float(state):
    """Uniform float in (0, 1)."""
    return rng_next(state) / _M1


def restart_seed(master_seed: int, restart: int) -> int:
    """Derive the 64-bit seed of one restart from the master seed."""
    words = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, restart]).generate_state(2)
    return (int(words[0]) << 32) | int(words[1])


class Rng:
    """Seeded generator state handed to the kernels as an int64[2] array."""

    def __init__(self, seed: int = 0):
        seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        hi, lo = seed >> 32, seed & 0xFFFFFFFF
        self.seed = seed
        self.state = np.array([1 + hi % (_M1 - 1), 1 + lo % (_M2 - 1)], dtype=np.int64)
        # decorrelate nearby seeds
        for _ in range(8):
            rng_next(self.state)

    def integer(self, n: int) -> int:
        return int(rng_int(self.state, n))

    def random(self) -> float:
        return float(rng_float(self.state))


def as_rng(rng) -> Rng:
    if isinstance(rng, Rng):
        return rng
    return Rng(0 if rng is None else rng)
