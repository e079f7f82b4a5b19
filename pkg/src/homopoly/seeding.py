"""Named random streams derived from one integer seed.

``stream(seed, name)`` seeds a :class:`random.Random` with the first eight
bytes (big-endian) of ``sha256(f"{seed}/{name}")``.  Every consumer asks for
its own name, so adding a check never shifts another check's draws.
"""

from __future__ import annotations

import hashlib
import random


def derive(seed: int, name: str) -> int:
    return int.from_bytes(hashlib.sha256(f"{seed}/{name}".encode()).digest()[:8], "big")


def stream(seed: int, name: str) -> random.Random:
    return random.Random(derive(seed, name))
