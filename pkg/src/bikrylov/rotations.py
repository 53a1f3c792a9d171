"""Overflow-safe plane reflections used by the LQ/QR recurrences."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = ["GivensReflection", "sym_ortho", "apply_reflection"]


class GivensReflection(NamedTuple):
    """Coefficients (c, s) of the symmetric reflection [[c, s], [s, -c]]."""

    c: float
    s: float


def sym_ortho(a, b):
    """Construct the reflection that maps (a, b) onto (delta, 0).

    Parameters
    ----------
    a, b : scalar
        Entries to be rotated; typically a running diagonal and the
        off-diagonal entry to annihilate.

    Returns
    -------
    refl : GivensReflection
        Coefficients with c**2 + s**2 == 1 up to roundoff.
    delta : scalar
        The nonnegative norm hypot(a, b).

    Notes
    -----
    The degenerate input (0, 0) returns ((-1, 0), 0), matching the
    initialization convention of the LQ recurrences.  hypot keeps the
    computation overflow-safe and preserves the floating dtype.
    """
    zero = a * 0
    if a == 0 and b == 0:
        return GivensReflection(zero - 1, zero), zero
    delta = np.hypot(a, b)
    return GivensReflection(a / delta, b / delta), delta


def apply_reflection(refl, a, b):
    """Apply [[c, s], [s, -c]] to the pair (a, b).

    Involutive: applying the same reflection twice returns (a, b).
    """
    c, s = refl
    return c * a + s * b, s * a - c * b
