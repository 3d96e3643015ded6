"""
Named, splittable random streams.

Every stream is addressed by the root seed plus a path of names and integers,
e.g. ``("noise", "qubit-1", "realization-7")``. Names are hashed to 32-bit
words with SHA-256 so the mapping is stable across platforms and processes.
"""

import hashlib

import numpy as np


def _word(part: str | int) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part)
    digest = hashlib.sha256(str(part).encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "little")


def stream_key(*path: str | int) -> tuple[int, ...]:
    return tuple(_word(p) for p in path)


def stream(seed: int, *path: str | int) -> np.random.Generator:
    """Counter-based generator for one named stream."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=stream_key(*path))
    return np.random.Generator(np.random.Philox(seq))


def stream_name(*path: str | int) -> str:
    return "/".join(str(p) for p in path)


def noise_stream(seed: int, qubit: int, realization: int) -> np.random.Generator:
    """Stream noise/qubit-i/realization-r."""
    return stream(seed, "noise", f"qubit-{qubit}", f"realization-{realization}")
