"""Reproducible Gaussian streams.

Every random quantity in an experiment is drawn from its own substream keyed
by (seed, trial_index, stream_tag) on a counter-based Philox generator, with
normals produced by Box-Muller on the raw uniforms.  Streams are therefore
independent of execution order and thread count, which is what makes parallel
and serial runs bit-identical.
"""

import numpy as np

# stream tags: one per random object within a trial
TAG_MATRIX = 0
TAG_NOISE = 1
TAG_DUAL_H = 2
TAG_DUAL_G = 3


def substream(seed: int, trial_index: int, tag: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(trial_index), int(tag)))
    return np.random.Generator(np.random.Philox(seed=ss))


def normals(seed: int, trial_index: int, tag: int, count: int) -> np.ndarray:
    """`count` i.i.d. standard normals via Box-Muller on Philox uniforms."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    gen = substream(seed, trial_index, tag)
    pairs = (count + 1) // 2
    u = gen.random(2 * pairs)
    u1 = 1.0 - u[:pairs]  # in (0, 1]: keeps log() finite
    u2 = u[pairs:]
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    z = np.concatenate([rad * np.cos(ang), rad * np.sin(ang)])
    return z[:count]


def normal_matrix(seed: int, trial_index: int, tag: int, rows: int, cols: int) -> np.ndarray:
    return normals(seed, trial_index, tag, rows * cols).reshape(rows, cols)
