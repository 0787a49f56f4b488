"""Shared helpers: seeded counter-based RNG streams and compensated sums."""

from __future__ import annotations

import zlib

import numpy as np


def make_rng(seed: int, stream: str) -> np.random.Generator:
    """Named, counter-based random stream.

    All randomness in the package and its sweeps flows through here so that a
    single config seed reproduces every artifact bit-for-bit across platforms.
    """
    key = zlib.crc32(stream.encode("utf-8"))
    return np.random.Generator(np.random.Philox(key=[seed, key]))


def kahan_sum(values) -> complex:
    """Compensated (Kahan) summation over an iterable of complex values."""
    s = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for v in values:
        y = v - comp
        t = s + y
        comp = (t - s) - y
        s = t
    return s


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish random unitary from a QR factorization of a Ginibre matrix."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
