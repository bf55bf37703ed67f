"""Deterministic seed splitting.

Child seeds are the first 8 bytes (big-endian) of SHA-256 over the decimal
parts joined by ``/``, so ``derive_seed(7, "node", 3)`` hashes ``b"7/node/3"``.
"""

import hashlib
import random


def derive_seed(*parts) -> int:
    data = "/".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(data).digest()[:8], "big")


def rng_for(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
