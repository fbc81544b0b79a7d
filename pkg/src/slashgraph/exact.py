"""Helpers for exact rational arithmetic on numpy arrays."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction
_INT64_SAFE = 2**62


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings and floats exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def fraction_array(values: Iterable) -> np.ndarray:
    """One-dimensional object array of Fractions."""
    items = [as_fraction(v) for v in values]
    out = np.empty(len(items), dtype=object)
    out[:] = items
    return out


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


def scaled_integers(values: Sequence[Fraction], den: int | None = None):
    """Return ``(numerators, den)`` with ``values == numerators / den``.

    The numerators come back as ``int64`` when every partial sum fits,
    otherwise as an object array of Python ints.
    """
    if den is None:
        den = common_denominator(values)
    nums = [int(Fraction(v) * den) for v in values]
    if sum(abs(n) for n in nums) < _INT64_SAFE:
        return np.asarray(nums, dtype=np.int64), den
    arr = np.empty(len(nums), dtype=object)
    arr[:] = nums
    return arr, den


def fits_int64(*bounds: int) -> bool:
    return all(abs(int(b)) < _INT64_SAFE for b in bounds)


def exact_gram(a: np.ndarray, b: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Exact matrix ``a @ diag(weights) @ b.T`` for Fraction-valued inputs.

    Rows are rescaled to integers first so the product is a single integer
    matmul; the returned array holds Fractions.
    """
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    da = common_denominator(a.ravel())
    db = common_denominator(b.ravel())
    dw = common_denominator(weights)
    ia = np.vectorize(lambda x: int(x * da), otypes=[object])(a) if a.size else a
    ib = np.vectorize(lambda x: int(x * db), otypes=[object])(b) if b.size else b
    iw = np.asarray([int(w * dw) for w in weights], dtype=object)
    bound = (
        max((abs(int(x)) for x in ia.ravel()), default=0)
        * max((abs(int(x)) for x in ib.ravel()), default=0)
        * int(sum(abs(int(x)) for x in iw))
    )
    if fits_int64(bound):
        g = (ia.astype(np.int64) * iw.astype(np.int64)) @ ib.astype(np.int64).T
    else:
        g = (ia * iw) @ ib.T
    scale = da * db * dw
    out = np.empty(g.shape, dtype=object)
    for idx, val in np.ndenumerate(g):
        out[idx] = Fraction(int(val), scale)
    return out


def rational_exponent(value: float, max_den: int = 64) -> Fraction | None:
    """Best small-denominator rational for ``value`` or None if far off."""
    cand = Fraction(value).limit_denominator(max_den)
    if abs(float(cand) - value) <= 1e-9 * max(1.0, abs(value)):
        return cand
    return None


def rational_power_ge(base: Fraction, exp: Fraction, rhs: Fraction) -> bool:
    """Exact test of ``base ** exp >= rhs`` for positive rationals."""
    p, q = exp.numerator, exp.denominator
    if p >= 0:
        return base**p >= rhs**q
    return rhs**q * base ** (-p) <= 1


def nullspace(rows: Sequence[Sequence[Fraction]], n_cols: int) -> list[list[Fraction]]:
    """Exact basis of ``{x : rows @ x = 0}`` by Gauss-Jordan elimination."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        lead = mat[r][c]
        mat[r] = [x / lead for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                factor = mat[i][c]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][f]
        basis.append(vec)
    return basis
