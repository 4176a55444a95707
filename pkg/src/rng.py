# random number generation
# every stream is derived from the run seed and a list of labels
# so the same (seed, labels) always gives the same numbers
# and no module touches global random state
import hashlib
import numpy as np


def _digest(seed: int, labels) -> bytes:
    h = hashlib.sha512(b"seed:%d" % int(seed))
    for label in labels:
        # length prefix keeps ("ab", "c") and ("a", "bc") apart
        data = str(label).encode()
        h.update(len(data).to_bytes(4, "big"))
        h.update(data)
    return h.digest()


def derive_seed(seed: int, *labels) -> int:
    """64-bit integer seed for APIs that take plain integers"""
    return int.from_bytes(_digest(seed, labels)[:8], "big")


def generator(seed: int, *labels) -> np.random.Generator:
    """Independent numpy generator for (seed, labels)"""
    d = _digest(seed, labels)
    entropy = [int.from_bytes(d[i : i + 4], "big") for i in range(0, 32, 4)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
