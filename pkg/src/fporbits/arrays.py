"""Vectorized modular helpers on int64 arrays.

All routines assume p < 2**31 so that products of two reduced residues fit
in int64 without overflow.
"""

from __future__ import annotations

import numpy as np

MAX_VECTOR_PRIME = 1 << 31


def polyval_mod(coeffs, xs: np.ndarray, p: int) -> np.ndarray:
    """Evaluate the polynomial with the given low-to-high coefficients at
    every entry of xs, modulo p, by Horner's rule."""
    if p >= MAX_VECTOR_PRIME:
        raise ValueError(f"p = {p} too large for int64 vector arithmetic")
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = (acc * xs + int(c)) % p
    return acc


def modpow(xs: np.ndarray, e: int, p: int) -> np.ndarray:
    """Entrywise xs**e mod p, e >= 0, by binary exponentiation."""
    if p >= MAX_VECTOR_PRIME:
        raise ValueError(f"p = {p} too large for int64 vector arithmetic")
    if e < 0:
        raise ValueError("negative exponent")
    result = np.ones_like(xs)
    base = xs % p
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result
