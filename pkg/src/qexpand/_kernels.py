"""Floating-point brute force: number of admissible digit prefixes of a given length.

This is an independent cross-check of the exact counter, not part of any
exact decision.  A prefix ``d_1..d_n`` is admissible for ``x`` when every
remainder ``q^i (x - sum_{j<=i} d_j q^-j)`` stays in ``[-tol, 1/(q-1) + tol]``.
For a point with finitely many expansions whose branchings all happen
before depth ``n`` the count equals the number of expansions.

The hot loop runs under numba when available; set ``QEXPAND_NO_NUMBA=1``
to force the vectorised numpy path.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("QEXPAND_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def count_prefixes_numpy(x: float, q: float, length: int, cap: int = 1 << 20, tol: float = 1e-7) -> int:
    """Frontier expansion over all remainders at once; returns ``cap + 1`` on overflow."""
    top = 1.0 / (q - 1.0)
    frontier = np.array([x], dtype=np.float64)
    for _ in range(length):
        scaled = q * frontier
        zero = scaled[scaled <= top + tol]
        one = scaled[scaled - 1.0 >= -tol] - 1.0
        frontier = np.concatenate((zero, one))
        if frontier.size > cap:
            return cap + 1
    return int(frontier.size)


def _count_prefixes_loop(x, q, length, cap, tol):
    top = 1.0 / (q - 1.0)
    rem = np.empty(length + 1, dtype=np.float64)
    nxt = np.zeros(length + 1, dtype=np.int64)  # next digit to try at each level (2 = done)
    rem[0] = x
    level = 0
    count = 0
    while level >= 0:
        if level == length:
            count += 1
            if count > cap:
                return cap + 1
            level -= 1
            continue
        d = nxt[level]
        if d >= 2:
            nxt[level] = 0
            level -= 1
            continue
        nxt[level] = d + 1
        r = q * rem[level] - d
        if r >= -tol and r <= top + tol:
            rem[level + 1] = r
            nxt[level + 1] = 0
            level += 1
    return count


if HAVE_NUMBA:
    count_prefixes_numba = njit(cache=False)(_count_prefixes_loop)
else:
    count_prefixes_numba = _count_prefixes_loop


def count_prefixes(x: float, q: float, length: int, cap: int = 1 << 20, tol: float = 1e-7) -> int:
    if HAVE_NUMBA:
        return int(count_prefixes_numba(float(x), float(q), int(length), int(cap), float(tol)))
    return count_prefixes_numpy(x, q, length, cap, tol)
