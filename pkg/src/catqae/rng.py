"""Schedule-independent seed derivation.

Every random stream is keyed by a tuple such as
``(master_seed, experiment_id, estimator, config_index, rep_index)``.  The key
is rendered as ``"|"``-joined text, hashed with SHA-256, and the first eight
bytes (big-endian) become an unsigned 64-bit seed for numpy's PCG64.  The
mapping is fixed so results do not depend on execution order or worker count.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*key) -> int:
    text = "|".join(str(k) for k in key)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def make_rng(*key) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(*key)))
