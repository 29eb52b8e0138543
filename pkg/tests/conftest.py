import itertools
from functools import lru_cache

import numpy as np

from gsrep import liealg, irreps


@lru_cache(maxsize=None)
def algebra(kind: str, n: int):
    return liealg.build_algebra(kind, n)


@lru_cache(maxsize=None)
def cached_irrep(kind: str, n: int, lam: tuple):
    return irreps.irrep(algebra(kind, n), lam)


def dominant_box(n: int, lo: int, hi: int):
    """All weakly decreasing integer n-tuples with entries in [lo, hi]."""
    out = []
    for lam in itertools.product(range(hi, lo - 1, -1), repeat=n):
        if all(lam[i] >= lam[i + 1] for i in range(n - 1)):
            out.append(lam)
    return out


def su_dominant_box(n: int, lo: int, hi: int):
    """Distinct su(n) classes from the box, normalized to last entry 0."""
    classes = set()
    for lam in dominant_box(n, lo, hi):
        shift = lam[-1]
        classes.add(tuple(x - shift for x in lam))
    return sorted(classes, reverse=True)


# fixed derivation lists for the sweep fixtures: regular and singular, with zero
D_LISTS = {
    ("u", 2): [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (3.0, -1.0)],
    ("u", 3): [(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 1.0, 0.0),
               (2.0, 1.0, 0.0), (0.0, 1.0, 2.0), (1.0, -1.0, 0.0)],
    ("su", 3): [(0.0, 0.0, 0.0), (1.0, 0.0, -1.0), (1.0, 1.0, -2.0),
                (2.0, -1.0, -1.0), (1.0, -1.0, 0.0), (3.0, -1.0, -2.0)],
}


def rng(seed: int = 0):
    return np.random.default_rng(seed)


def random_unitary(n: int, generator) -> np.ndarray:
    z = generator.normal(size=(n, n)) + 1j * generator.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(n: int, generator) -> np.ndarray:
    z = generator.normal(size=(n, n)) + 1j * generator.normal(size=(n, n))
    return (z + z.conj().T) / 2.0
