"""Counting kernels with a jitted fast path and a pure-numpy fallback.

Two enumeration-scale operations live here:

* ``composition_count_avoiding`` -- count the monomials of a fixed total
  degree divisible by none of a set of forbidden monomials, by walking
  every weak composition.  The closed-form counting in `rings` uses
  inclusion-exclusion instead; this kernel is the independent brute-force
  oracle the tests check it against, and the benchmark workload.
* ``rewrite_span_size`` -- for a one-rule binomial quotient, the number of
  distinct normal forms of generator * (normal monomial of complementary
  degree).  This is the hot path of every colength computation in such
  rings: the graded piece of the quotient by a Frobenius power is the
  Hilbert function minus this span size.

Backend selection: the ``HKD_KERNEL`` environment variable may be set to
``numba`` or ``numpy``; unset, the jit path is used when numba imports and
the numpy path otherwise.  Both backends are exact integer counting and
must agree bit for bit -- the test suite enforces this.
"""

from __future__ import annotations

import os
from functools import lru_cache
from typing import Sequence

import numpy as np

_KEY_LIMIT = 2**62  # packed normal-form keys must stay inside int64

VALID_BACKENDS = ("numba", "numpy")


@lru_cache(maxsize=1)
def _numba_module():
    try:
        from . import _kernels_numba
    except ImportError:
        return None
    return _kernels_numba


def backend_name(override: str | None = None) -> str:
    """Resolve the active backend: explicit override > HKD_KERNEL > auto."""
    choice = override or os.environ.get("HKD_KERNEL", "").strip().lower()
    if choice:
        if choice not in VALID_BACKENDS:
            raise ValueError(f"unknown kernel backend {choice!r}; use numba or numpy")
        if choice == "numba" and _numba_module() is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return choice
    return "numba" if _numba_module() is not None else "numpy"


# Small composition tables repeat heavily (every generator of the same degree
# asks for the same cofactor table, and the recursion re-derives each suffix
# table once per prefix value), so memoize them up to a global row budget.
# Oversized tables are rebuilt per call, keeping worst-case memory flat.
_COMP_CACHE: dict[tuple[int, int], np.ndarray] = {}
_COMP_ROWS_CACHED = 0
_COMP_ROWS_LIMIT = 1 << 21


def _compositions(num_vars: int, degree: int) -> np.ndarray:
    """All weak compositions of `degree` into `num_vars` parts, one per row."""
    global _COMP_ROWS_CACHED
    cached = _COMP_CACHE.get((num_vars, degree))
    if cached is not None:
        return cached
    if num_vars == 1:
        table = np.array([[degree]], dtype=np.int64)
    else:
        blocks = []
        for first in range(degree + 1):
            rest = _compositions(num_vars - 1, degree - first)
            block = np.empty((rest.shape[0], num_vars), dtype=np.int64)
            block[:, 0] = first
            block[:, 1:] = rest
            blocks.append(block)
        table = np.vstack(blocks)
    if _COMP_ROWS_CACHED + table.shape[0] <= _COMP_ROWS_LIMIT:
        table.flags.writeable = False
        _COMP_CACHE[(num_vars, degree)] = table
        _COMP_ROWS_CACHED += table.shape[0]
    return table


def _np_count_avoiding(num_vars: int, degree: int, forbidden: np.ndarray) -> int:
    comps = _compositions(num_vars, degree)
    excluded = np.zeros(comps.shape[0], dtype=bool)
    for row in forbidden:
        excluded |= np.all(comps >= row, axis=1)
    return int((~excluded).sum())


def _np_normal_form_keys(
    num_vars: int,
    degree: int,
    lhs: np.ndarray,
    delta: np.ndarray,
    gen: np.ndarray,
    base: int,
) -> np.ndarray:
    comps = _compositions(num_vars, degree)
    normal = ~np.all(comps >= lhs, axis=1)
    v = comps[normal] + gen
    reducible = np.all(v >= lhs, axis=1)
    if reducible.any():
        w = v[reducible]
        neg = np.flatnonzero(delta < 0)
        steps = np.min((w[:, neg] - lhs[neg]) // (-delta[neg]), axis=1) + 1
        v[reducible] = w + steps[:, None] * delta
    powers = base ** np.arange(num_vars, dtype=np.int64)
    return v @ powers


def composition_count_avoiding(
    num_vars: int,
    degree: int,
    forbidden: Sequence[Sequence[int]],
    backend: str | None = None,
) -> int:
    """Brute-force count of degree-`degree` monomials avoiding every forbidden divisor."""
    if num_vars < 1 or degree < 0:
        raise ValueError("need num_vars >= 1 and degree >= 0")
    if forbidden:
        rows = np.array([tuple(f) for f in forbidden], dtype=np.int64)
    else:
        rows = np.empty((0, num_vars), dtype=np.int64)
    if backend_name(backend) == "numba":
        return int(_numba_module().count_avoiding(num_vars, degree, rows))
    return _np_count_avoiding(num_vars, degree, rows)


def rewrite_span_size(
    num_vars: int,
    lhs: Sequence[int],
    rhs: Sequence[int],
    generators: Sequence[Sequence[int]],
    m: int,
    backend: str | None = None,
) -> int:
    """Distinct normal forms of gen * mu, deg(mu) = m - deg(gen), mu normal.

    This equals the dimension of degree-m graded piece of the ideal the
    generators span inside the one-rule binomial quotient: products with a
    normal cofactor already span by multiplicativity of normal forms, and
    distinct monomial normal forms are linearly independent.
    """
    lhs_a = np.array(lhs, dtype=np.int64)
    delta = np.array(rhs, dtype=np.int64) - lhs_a
    base = m + 1
    if base**num_vars >= _KEY_LIMIT:
        raise ValueError(f"degree {m} too large for packed normal-form keys")
    which = backend_name(backend)
    mod = _numba_module() if which == "numba" else None
    chunks = []
    for g in generators:
        k = m - sum(g)
        if k < 0:
            continue
        gen_a = np.array(g, dtype=np.int64)
        if mod is not None:
            bound = _composition_count(num_vars, k)
            out = np.empty(bound, dtype=np.int64)
            filled = mod.normal_form_keys(num_vars, k, lhs_a, delta, gen_a, base, out)
            chunks.append(out[:filled])
        else:
            chunks.append(
                _np_normal_form_keys(num_vars, k, lhs_a, delta, gen_a, base)
            )
    if not chunks:
        return 0
    return int(np.unique(np.concatenate(chunks)).size)


def _composition_count(num_vars: int, degree: int) -> int:
    import math

    return math.comb(degree + num_vars - 1, num_vars - 1)
