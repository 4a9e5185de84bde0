"""Desk-scale standard graded rings and exact Frobenius colength counting.

Four ring shapes are supported, every one standard graded over an implicit
field of characteristic p (the characteristic only enters through which
prime powers q = p^n the caller asks about):

* ``PolynomialRing(n)``           -- k[x_1..x_n]
* ``MonomialQuotientRing(n, R)``  -- k[x_1..x_n] / (monomials R)
* ``BinomialRewriteRing(n, l, r)``-- k[x_1..x_n] / (x^l - x^r), a one-rule
  rewriting system on exponent vectors; deg l = deg r and l != r make the
  rule terminating and (having a single rule on a commutative monoid)
  confluent, so normal forms are canonical.
* ``SegreProductRing(A, B)``      -- graded pieces (A_m tensor B_m).

Ideals are monomial: a ``MonomialIdeal`` lists generator exponent vectors;
for Segre products a ``SegreIdeal`` pairs one monomial ideal per factor,
and the colength of its Frobenius power is defined through the exact
graded identity

    len((A#B)/(I#J)^[q])_m
        = len(A_m)len(B_m) - (len(A_m)-len((A/I^[q])_m))(len(B_m)-len((B/J^[q])_m)),

i.e. the complement of the tensor product of the two ideal pieces.

Counting strategy: monomial colengths use inclusion-exclusion over the
divisibility lattice of the forbidden monomials (relations plus Frobenius
generators), which costs one signed binomial sum per degree after a single
subset expansion.  The brute-force composition walk in `kernels` serves as
the independent oracle in the tests.  One-rule binomial quotients count
the span of reduced generator multiples via the kernel backends.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

from . import kernels


class NotMPrimaryError(ValueError):
    """The ideal does not contain a power of the graded maximal ideal."""


def _as_exponent_vector(vec: Sequence[int], num_vars: int, what: str) -> tuple[int, ...]:
    out = tuple(int(e) for e in vec)
    if len(out) != num_vars:
        raise ValueError(f"{what} has arity {len(out)}, expected {num_vars}")
    if any(e < 0 for e in out):
        raise ValueError(f"{what} has a negative exponent: {out}")
    return out


@dataclass(frozen=True)
class PolynomialRing:
    num_vars: int

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")


@dataclass(frozen=True)
class MonomialQuotientRing:
    num_vars: int
    relations: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        rels = tuple(
            _as_exponent_vector(r, self.num_vars, "relation") for r in self.relations
        )
        if any(sum(r) == 0 for r in rels):
            raise ValueError("relations must have positive degree")
        object.__setattr__(self, "relations", rels)


@dataclass(frozen=True)
class BinomialRewriteRing:
    num_vars: int
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        lhs = _as_exponent_vector(self.lhs, self.num_vars, "lhs")
        rhs = _as_exponent_vector(self.rhs, self.num_vars, "rhs")
        if sum(lhs) != sum(rhs) or sum(lhs) == 0:
            raise ValueError("rewrite rule must preserve a positive total degree")
        if lhs == rhs:
            raise ValueError("rewrite rule must change the monomial")
        object.__setattr__(self, "lhs", lhs)
        object.__setattr__(self, "rhs", rhs)


@dataclass(frozen=True)
class SegreProductRing:
    left: "RingSpec"
    right: "RingSpec"

    def __post_init__(self):
        for side in (self.left, self.right):
            if isinstance(side, SegreProductRing):
                raise ValueError("nested Segre products are not supported")


RingSpec = Union[PolynomialRing, MonomialQuotientRing, BinomialRewriteRing, SegreProductRing]


@dataclass(frozen=True)
class MonomialIdeal:
    ring: RingSpec
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if isinstance(self.ring, SegreProductRing):
            raise ValueError("use SegreIdeal for Segre product rings")
        gens = tuple(
            _as_exponent_vector(g, self.ring.num_vars, "generator")
            for g in self.generators
        )
        if not gens:
            raise ValueError("ideal needs at least one generator")
        if any(sum(g) == 0 for g in gens):
            raise ValueError("generators must have positive degree")
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class SegreIdeal:
    left: MonomialIdeal
    right: MonomialIdeal


IdealSpec = Union[MonomialIdeal, SegreIdeal]


def maximal_ideal(ring: RingSpec) -> IdealSpec:
    """The graded maximal ideal (all variables), per factor for Segre products."""
    if isinstance(ring, SegreProductRing):
        return SegreIdeal(maximal_ideal(ring.left), maximal_ideal(ring.right))
    n = ring.num_vars
    units = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return MonomialIdeal(ring, units)


def frobenius_power(ideal: IdealSpec, q: int) -> IdealSpec:
    """The ideal of q-th powers of the generators (exponent vectors scaled by q)."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    if isinstance(ideal, SegreIdeal):
        return SegreIdeal(frobenius_power(ideal.left, q), frobenius_power(ideal.right, q))
    return MonomialIdeal(ideal.ring, tuple(tuple(q * e for e in g) for g in ideal.generators))


def generator_count(ideal: IdealSpec) -> int:
    """Supplied generator count; for Segre ideals the larger of the two sides."""
    if isinstance(ideal, SegreIdeal):
        return max(len(ideal.left.generators), len(ideal.right.generators))
    return len(ideal.generators)


# --- Hilbert functions ------------------------------------------------------


def _minimalize(vectors: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    """Keep only the minimal vectors under componentwise <= (divisibility)."""
    vecs = sorted(set(vectors), key=sum)
    out: list[tuple[int, ...]] = []
    for v in vecs:
        if not any(all(a <= b for a, b in zip(u, v)) for u in out):
            out.append(v)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _exclusion_degree_terms(
    num_vars: int, forbidden: tuple[tuple[int, ...], ...]
) -> tuple[tuple[int, int], ...]:
    """Signed degree multiset for counting monomials avoiding every divisor.

    Expands the inclusion-exclusion sum over subsets of `forbidden`,
    collapsing subsets with equal componentwise-max first and equal total
    degree second; only the degree matters for counting.
    """
    terms: dict[tuple[int, ...], int] = {(0,) * num_vars: 1}
    for f in forbidden:
        for v, c in list(terms.items()):
            w = tuple(max(a, b) for a, b in zip(v, f))
            terms[w] = terms.get(w, 0) - c
    by_degree: dict[int, int] = {}
    for v, c in terms.items():
        if c:
            by_degree[sum(v)] = by_degree.get(sum(v), 0) + c
    return tuple(sorted((d, c) for d, c in by_degree.items() if c))


def _count_avoiding(num_vars: int, forbidden: tuple[tuple[int, ...], ...], m: int) -> int:
    """Number of degree-m monomials in num_vars variables divisible by no forbidden one."""
    if m < 0:
        return 0
    terms = _exclusion_degree_terms(num_vars, forbidden)
    n1 = num_vars - 1
    return sum(c * math.comb(m - d + n1, n1) for d, c in terms if m >= d)


def hilbert_len(ring: RingSpec, m: int) -> int:
    """Vector-space dimension of the degree-m graded piece of the ring."""
    if m < 0:
        return 0
    if isinstance(ring, PolynomialRing):
        return math.comb(m + ring.num_vars - 1, ring.num_vars - 1)
    if isinstance(ring, MonomialQuotientRing):
        return _count_avoiding(ring.num_vars, _minimalize(ring.relations), m)
    if isinstance(ring, BinomialRewriteRing):
        return _count_avoiding(ring.num_vars, (ring.lhs,), m)
    if isinstance(ring, SegreProductRing):
        return hilbert_len(ring.left, m) * hilbert_len(ring.right, m)
    raise TypeError(f"not a ring spec: {ring!r}")


def _hilbert_window(ring: RingSpec) -> int:
    if isinstance(ring, PolynomialRing):
        return ring.num_vars + 8
    if isinstance(ring, MonomialQuotientRing):
        return sum(sum(r) for r in ring.relations) + 2 * ring.num_vars + 8
    if isinstance(ring, BinomialRewriteRing):
        return sum(ring.lhs) + 2 * ring.num_vars + 8
    return max(_hilbert_window(ring.left), _hilbert_window(ring.right)) + 4


def _difference(seq: Sequence[int]) -> list[int]:
    return [b - a for a, b in zip(seq, seq[1:])]


@lru_cache(maxsize=None)
def krull_dimension(ring: RingSpec) -> int:
    """Krull dimension, read off the growth of the Hilbert function.

    The Hilbert function eventually agrees with a polynomial of degree
    dim - 1 (dimension 0 means eventually zero), so the dimension is one
    more than the number of finite differences needed to reach a constant
    tail.  The scan window is generous for the desk-scale rings here.
    """
    if isinstance(ring, PolynomialRing):
        return ring.num_vars
    if isinstance(ring, SegreProductRing):
        dl, dr = krull_dimension(ring.left), krull_dimension(ring.right)
        if dl == 0 or dr == 0:
            return 0
        return dl + dr - 1
    window = _hilbert_window(ring)
    tail = ring.num_vars + 2
    seq = [hilbert_len(ring, m) for m in range(window + tail)]
    if all(v == 0 for v in seq[-tail:]):
        return 0
    for k in range(ring.num_vars + 1):
        if len(set(seq[-tail:])) == 1:
            return k + 1
        seq = _difference(seq)
    raise RuntimeError("Hilbert function did not stabilize in the scan window")


@lru_cache(maxsize=None)
def hilbert_stabilization_degree(ring: RingSpec) -> int:
    """Least degree from which the Hilbert function agrees with its polynomial.

    Detected as the point past which the dim-th finite difference vanishes.
    Used as a safety margin on top of the colength support bound.
    """
    d = krull_dimension(ring)
    window = _hilbert_window(ring) + d + 2
    seq = [hilbert_len(ring, m) for m in range(window)]
    for _ in range(d):
        seq = _difference(seq)
    s = len(seq)
    while s > 0 and seq[s - 1] == 0:
        s -= 1
    return s


# --- colength of Frobenius powers -------------------------------------------


def _validate_pair(ring: RingSpec, ideal: IdealSpec) -> None:
    if isinstance(ring, SegreProductRing):
        if not isinstance(ideal, SegreIdeal):
            raise ValueError("Segre product rings need a SegreIdeal")
        if ideal.left.ring != ring.left or ideal.right.ring != ring.right:
            raise ValueError("ideal factors do not live on the ring factors")
    else:
        if not isinstance(ideal, MonomialIdeal) or ideal.ring != ring:
            raise ValueError("ideal does not live on this ring")


def _piece_raw(ring: RingSpec, ideal: IdealSpec, q: int, m: int) -> int:
    if isinstance(ring, SegreProductRing):
        ll = hilbert_len(ring.left, m)
        lr = hilbert_len(ring.right, m)
        pl = _piece_raw(ring.left, ideal.left, q, m)
        pr = _piece_raw(ring.right, ideal.right, q, m)
        return ll * lr - (ll - pl) * (lr - pr)
    scaled = tuple(tuple(q * e for e in g) for g in ideal.generators)
    if isinstance(ring, BinomialRewriteRing):
        span = kernels.rewrite_span_size(ring.num_vars, ring.lhs, ring.rhs, scaled, m)
        return hilbert_len(ring, m) - span
    relations = ring.relations if isinstance(ring, MonomialQuotientRing) else ()
    return _count_avoiding(ring.num_vars, _minimalize(relations + scaled), m)


def _pure_power_degrees(ring: RingSpec, ideal: MonomialIdeal) -> dict[int, int]:
    """Per variable, the least e with x_i^e a generator multiple or a relation."""
    pure: dict[int, int] = {}
    relations = ring.relations if isinstance(ring, MonomialQuotientRing) else ()
    for vec in itertools.chain(ideal.generators, relations):
        support = [i for i, e in enumerate(vec) if e]
        if len(support) == 1:
            i = support[0]
            pure[i] = min(pure.get(i, vec[i]), vec[i])
    return pure


def _nilpotency_cap(ring: RingSpec, ideal: MonomialIdeal) -> int:
    pure = _pure_power_degrees(ring, ideal)
    if isinstance(ring, BinomialRewriteRing):
        max_gen = max(sum(g) for g in ideal.generators)
        return (ring.num_vars + 1) * (1 + sum(ring.lhs)) * (1 + max_gen)
    missing = [i for i in range(ring.num_vars) if i not in pure]
    if missing:
        # x_i^k stays normal and outside the ideal for every k: not primary.
        raise NotMPrimaryError("not m-primary")
    return sum(pure.values())


@lru_cache(maxsize=None)
def nilpotency_index(ring: RingSpec, ideal: IdealSpec) -> int:
    """Least n >= 1 with every degree-n element of the ring inside the ideal.

    Scans colength pieces at q = 1 for the first zero; in a standard graded
    ring a zero piece stays zero, so the first zero is the index.  The scan
    is capped (by the sum of minimal pure-power degrees when those exist,
    by a crude rewrite bound otherwise); hitting the cap means no power of
    the maximal ideal fits inside the ideal at desk scale.
    """
    _validate_pair(ring, ideal)
    if isinstance(ring, SegreProductRing):
        return max(
            nilpotency_index(ring.left, ideal.left),
            nilpotency_index(ring.right, ideal.right),
        )
    cap = _nilpotency_cap(ring, ideal)
    for n in range(1, cap + 1):
        if _piece_raw(ring, ideal, 1, n) == 0:
            return n
    raise NotMPrimaryError("not m-primary")


def _support_bound(ring: RingSpec, ideal: IdealSpec, q: int) -> int:
    n0 = nilpotency_index(ring, ideal)
    return n0 * generator_count(ideal) * q + hilbert_stabilization_degree(ring)


def graded_colength_piece(ring: RingSpec, ideal: IdealSpec, q: int, m: int) -> int:
    """dim_k of the degree-m piece of R / (q-th Frobenius power of the ideal).

    Raises NotMPrimaryError when the colength is infinite.  Every computed
    value is checked against the support bound n0 * mu * q + margin: pieces
    at or beyond it must vanish.
    """
    _validate_pair(ring, ideal)
    if q < 1:
        raise ValueError("q must be a positive integer")
    if m < 0:
        raise ValueError("degree must be non-negative")
    bound = _support_bound(ring, ideal, q)  # validates m-primality
    piece = _piece_raw(ring, ideal, q, m)
    if m >= bound and piece != 0:
        raise RuntimeError(
            f"support bound violated: piece {piece} at degree {m} >= {bound}"
        )
    return piece


def _thread_count() -> int:
    raw = os.environ.get("HKD_THREADS", "").strip()
    if raw:
        count = int(raw)
        if count < 1:
            raise ValueError("HKD_THREADS must be >= 1")
        return count
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def colength_series(ring: RingSpec, ideal: IdealSpec, q: int) -> tuple[int, ...]:
    """Graded colength pieces from degree 0 up to (excluding) the first zero.

    In a standard graded ring R_{m+1} = R_1 R_m, so a quotient piece that
    hits zero stays zero; the series therefore ends at the first zero.
    One-rule binomial quotients are the expensive case and are filled by a
    thread pool (HKD_THREADS, default one worker per core) -- the counting
    kernels run without the GIL.
    """
    _validate_pair(ring, ideal)
    if q < 1:
        raise ValueError("q must be a positive integer")
    bound = _support_bound(ring, ideal, q)
    threads = _thread_count() if isinstance(ring, BinomialRewriteRing) else 1
    series: list[int] = []

    def cut_done() -> bool:
        return bool(series) and series[-1] == 0

    if threads > 1:
        block = max(2 * threads, 8)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            m = 0
            while not cut_done() and m <= bound:
                ms = range(m, min(m + block, bound + 1))
                for piece in pool.map(lambda mm: _piece_raw(ring, ideal, q, mm), ms):
                    series.append(piece)
                    if piece == 0:
                        break
                m += block
    else:
        m = 0
        while not cut_done() and m <= bound:
            series.append(_piece_raw(ring, ideal, q, m))
            m += 1
    if not cut_done():
        raise RuntimeError(f"colength series did not terminate by degree {bound}")
    while series and series[-1] == 0:
        series.pop()
    return tuple(series)


def total_colength(ring: RingSpec, ideal: IdealSpec, q: int) -> int:
    """Total length of R / (q-th Frobenius power): the sum of all graded pieces."""
    return sum(colength_series(ring, ideal, q))


# --- minimal primes of squarefree monomial quotients -------------------------


def minimal_primes(ring: MonomialQuotientRing) -> tuple[tuple[int, ...], ...]:
    """Top-dimensional minimal primes, each as a sorted tuple of variable indices.

    Minimal primes of a squarefree monomial quotient are generated by
    variables forming minimal hitting sets of the relation supports.  Only
    components of full Krull dimension are returned (lower-dimensional
    components do not contribute to density limits).
    """
    if not isinstance(ring, MonomialQuotientRing):
        raise TypeError("minimal primes are computed for monomial quotient rings")
    if any(e > 1 for rel in ring.relations for e in rel):
        raise ValueError("additivity oracle requires reduced ring")
    supports = [frozenset(i for i, e in enumerate(rel) if e) for rel in ring.relations]
    universe = sorted(set().union(*supports)) if supports else []
    hitting: list[tuple[int, ...]] = []
    for size in range(len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            s = set(combo)
            if any(set(h) <= s for h in hitting):
                continue
            if all(s & sup for sup in supports):
                hitting.append(tuple(sorted(s)))
    dim = krull_dimension(ring)
    return tuple(
        sorted(h for h in hitting if ring.num_vars - len(h) == dim)
    )


# --- JSON codecs -------------------------------------------------------------


def ring_to_json(ring: RingSpec) -> dict:
    if isinstance(ring, PolynomialRing):
        return {"type": "polynomial", "vars": ring.num_vars}
    if isinstance(ring, MonomialQuotientRing):
        return {
            "type": "monomial_quotient",
            "vars": ring.num_vars,
            "relations": [list(r) for r in ring.relations],
        }
    if isinstance(ring, BinomialRewriteRing):
        return {
            "type": "binomial_rewrite",
            "vars": ring.num_vars,
            "lhs": list(ring.lhs),
            "rhs": list(ring.rhs),
        }
    if isinstance(ring, SegreProductRing):
        return {
            "type": "segre",
            "left": ring_to_json(ring.left),
            "right": ring_to_json(ring.right),
        }
    raise TypeError(f"not a ring spec: {ring!r}")


def ring_from_json(data: dict) -> RingSpec:
    kind = data.get("type")
    if kind == "polynomial":
        return PolynomialRing(int(data["vars"]))
    if kind == "monomial_quotient":
        return MonomialQuotientRing(
            int(data["vars"]), tuple(tuple(r) for r in data.get("relations", ()))
        )
    if kind == "binomial_rewrite":
        return BinomialRewriteRing(
            int(data["vars"]), tuple(data["lhs"]), tuple(data["rhs"])
        )
    if kind == "segre":
        return SegreProductRing(ring_from_json(data["left"]), ring_from_json(data["right"]))
    raise ValueError(f"unknown ring type: {kind!r}")


def ideal_to_json(ideal: IdealSpec) -> dict:
    if isinstance(ideal, SegreIdeal):
        return {
            "left": ideal_to_json(ideal.left),
            "right": ideal_to_json(ideal.right),
        }
    return {"generators": [list(g) for g in ideal.generators]}


def ideal_from_json(ring: RingSpec, data: dict) -> IdealSpec:
    if isinstance(ring, SegreProductRing):
        if "left" not in data or "right" not in data:
            raise ValueError("Segre ideals need 'left' and 'right' generator blocks")
        return SegreIdeal(
            ideal_from_json(ring.left, data["left"]),
            ideal_from_json(ring.right, data["right"]),
        )
    return MonomialIdeal(ring, tuple(tuple(g) for g in data["generators"]))
