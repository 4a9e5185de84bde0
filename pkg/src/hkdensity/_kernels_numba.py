"""Jitted counting kernels.

Kept in a separate module so importing the package never pays numba's
import cost unless the jit backend is actually selected.  Both kernels
walk weak compositions of `degree` into `num_vars` parts in reverse
lexicographic order; the walk is allocation-free and the nogil flag lets
the colength series be filled from a thread pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def count_avoiding(num_vars: int, degree: int, forbidden: np.ndarray) -> int:
    """Count exponent vectors of total degree `degree` divisible by no forbidden row."""
    c = np.zeros(num_vars, dtype=np.int64)
    c[0] = degree
    rows = forbidden.shape[0]
    count = 0
    while True:
        hit = False
        for r in range(rows):
            ok = True
            for i in range(num_vars):
                if c[i] < forbidden[r, i]:
                    ok = False
                    break
            if ok:
                hit = True
                break
        if not hit:
            count += 1
        if c[num_vars - 1] == degree:
            break
        i = num_vars - 2
        while c[i] == 0:
            i -= 1
        s = 1
        for j in range(i + 1, num_vars):
            s += c[j]
            c[j] = 0
        c[i] -= 1
        c[i + 1] = s
    return count


@njit(cache=True, nogil=True)
def normal_form_keys(
    num_vars: int,
    degree: int,
    lhs: np.ndarray,
    delta: np.ndarray,
    gen: np.ndarray,
    base: int,
    out: np.ndarray,
) -> int:
    """Packed normal forms of gen * mu over normal monomials mu of total degree `degree`.

    `delta` is rhs - lhs; the rewrite v -> v + delta applies while v >= lhs,
    and because lhs and rhs have equal total degree the maximal number of
    applications is closed-form.  Keys are base-`base` digit packings of
    the reduced exponent vector.  Returns the number of keys written.
    """
    c = np.zeros(num_vars, dtype=np.int64)
    v = np.zeros(num_vars, dtype=np.int64)
    c[0] = degree
    idx = 0
    while True:
        divisible = True
        for i in range(num_vars):
            if c[i] < lhs[i]:
                divisible = False
                break
        if not divisible:  # mu normal
            for i in range(num_vars):
                v[i] = c[i] + gen[i]
            reducible = True
            for i in range(num_vars):
                if v[i] < lhs[i]:
                    reducible = False
                    break
            if reducible:
                t = np.int64(2**62)
                for i in range(num_vars):
                    if delta[i] < 0:
                        steps = (v[i] - lhs[i]) // (-delta[i])
                        if steps < t:
                            t = steps
                t += 1
                for i in range(num_vars):
                    v[i] += t * delta[i]
            key = np.int64(0)
            for i in range(num_vars - 1, -1, -1):
                key = key * base + v[i]
            out[idx] = key
            idx += 1
        if c[num_vars - 1] == degree:
            break
        i = num_vars - 2
        while c[i] == 0:
            i -= 1
        s = 1
        for j in range(i + 1, num_vars):
            s += c[j]
            c[j] = 0
        c[i] -= 1
        c[i + 1] = s
    return idx
