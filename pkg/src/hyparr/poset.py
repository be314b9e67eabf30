"""Intersection poset, restrictions, and characteristic polynomials.

The characteristic polynomial is computed two independent ways: the
alternating sum over hyperplane subsets with nonempty intersection, and a
Moebius recursion over the intersection poset. The two must agree on every
input; the subset sum is the reference, the recursion the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import (
    DEFAULT_SUBSET_CAP,
    AffineSubspace,
    Arrangement,
    Hyperplane,
    SizeLimitError,
    ZERO,
    arrangement,
    canonicalize,
    dot,
    is_zero_vector,
    null_space,
    solve_affine,
    vec,
)


class FlatNotInPosetError(ValueError):
    """The given flat does not belong to the arrangement's poset."""


@dataclass(frozen=True)
class Flat:
    """A nonempty intersection of hyperplanes (R^d for the empty set).

    `containing` is maximal: it lists every hyperplane index whose hyperplane
    contains the flat, which makes it a unique key within one arrangement.
    """

    subspace: AffineSubspace
    dim: int
    containing: frozenset

    def contains_flat(self, other: "Flat") -> bool:
        return self.containing <= other.containing


@dataclass(frozen=True)
class CharPoly:
    """Integer polynomial sum(c_k t^k); `abs_coeffs` is the unsigned view."""

    dim: int
    coeffs: tuple

    @property
    def abs_coeffs(self) -> tuple:
        return tuple(
            (-1) ** (self.dim - k) * c for k, c in enumerate(self.coeffs)
        )

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: "CharPoly") -> "CharPoly":
        if other.dim != self.dim:
            raise ValueError("cannot add polynomials of different ambient degree")
        return CharPoly(
            self.dim, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )


def _hyperplane_contains(h: Hyperplane, sub: AffineSubspace) -> bool:
    if h.residual(sub.point) != 0:
        return False
    return all(dot(h.normal, b) == 0 for b in sub.basis)


def _max_containing(arr: Arrangement, sub: AffineSubspace) -> frozenset:
    return frozenset(
        i for i, h in enumerate(arr.hyperplanes) if _hyperplane_contains(h, sub)
    )


@lru_cache(maxsize=None)
def intersection_poset(arr: Arrangement) -> tuple:
    """All flats of the arrangement, R^dim included, deduplicated.

    Flats are found incrementally by intersecting known flats with single
    hyperplanes, which reaches every nonempty intersection of a subset.
    Sorted by descending dimension, then by the containing index set.
    """
    top_sub = solve_affine((), arr.dim)
    top = Flat(top_sub, arr.dim, _max_containing(arr, top_sub))
    flats = {top.containing: top}
    frontier = [top]
    while frontier:
        new = []
        for flat in frontier:
            for i in range(arr.m):
                if i in flat.containing:
                    continue
                members = sorted(flat.containing | {i})
                sub = solve_affine(
                    tuple(arr.hyperplanes[j] for j in members), arr.dim
                )
                if sub is None:
                    continue
                key = _max_containing(arr, sub)
                if key in flats:
                    continue
                found = Flat(sub, sub.dim, key)
                flats[key] = found
                new.append(found)
        frontier = new
    return tuple(
        sorted(flats.values(), key=lambda f: (-f.dim, sorted(f.containing)))
    )


def flats_of_dim(arr: Arrangement, j: int) -> tuple:
    return tuple(f for f in intersection_poset(arr) if f.dim == j)


def _find_flat(arr: Arrangement, flat: Flat) -> Flat:
    for candidate in intersection_poset(arr):
        if candidate.containing == flat.containing and candidate.dim == flat.dim:
            return candidate
    raise FlatNotInPosetError(f"flat with containing set {set(flat.containing)}")


def char_poly_whitney(arr: Arrangement, cap: int = DEFAULT_SUBSET_CAP) -> CharPoly:
    """Alternating sum of t^dim over hyperplane subsets with nonempty meet.

    Walks the subset tree with an incremental row echelon of [normal|offset]
    rows; a subset whose system is inconsistent is pruned together with all
    of its supersets (their intersections stay empty).
    """
    if arr.m > cap:
        raise SizeLimitError(f"m={arr.m} exceeds subset enumeration cap {cap}")
    d = arr.dim
    coeffs = [0] * (d + 1)
    rows = [list(h.normal) + [h.offset] for h in arr.hyperplanes]

    def reduce_row(row: list, echelon: list) -> Optional[list]:
        """None if dependent-consistent; 'bad' if inconsistent; else new row."""
        row = list(row)
        for piv in echelon:
            lead = next(j for j in range(d + 1) if piv[j] != 0)
            if row[lead] != 0:
                f = row[lead] / piv[lead]
                row = [a - f * b for a, b in zip(row, piv)]
        if all(q == 0 for q in row[:d]):
            return None if row[d] == 0 else "bad"
        return row

    def walk(i: int, echelon: list, count: int):
        if i == arr.m:
            coeffs[d - len(echelon)] += (-1) ** count
            return
        walk(i + 1, echelon, count)
        outcome = reduce_row(rows[i], echelon)
        if outcome == "bad":
            return
        walk(i + 1, echelon + [outcome] if outcome is not None else echelon, count + 1)

    walk(0, [], 0)
    return CharPoly(d, tuple(coeffs))


@lru_cache(maxsize=None)
def char_poly_moebius(arr: Arrangement) -> CharPoly:
    """Moebius-function route: sum of mu(R^d, F) t^dim(F) over flats."""
    flats = intersection_poset(arr)
    mu: dict = {}
    for flat in flats:  # descending dimension, R^d first
        total = 0
        for other in flats:
            if other is flat:
                break
            if other.containing < flat.containing:
                total += mu[other.containing]
        mu[flat.containing] = 1 - total if flat.dim == arr.dim else -total
    coeffs = [0] * (arr.dim + 1)
    for flat in flats:
        coeffs[flat.dim] += mu[flat.containing]
    return CharPoly(arr.dim, tuple(coeffs))


def restriction(arr: Arrangement, flat: Flat) -> Arrangement:
    """The arrangement induced on a flat, in the flat's own coordinates.

    Coordinates come from the flat's orthogonal basis; hyperplanes whose
    trace on the flat coincides are listed once.
    """
    flat = _find_flat(arr, flat)
    sub = flat.subspace
    traces = []
    seen = set()
    for i, h in enumerate(arr.hyperplanes):
        if i in flat.containing:
            continue
        normal = tuple(dot(b, h.normal) for b in sub.basis)
        if is_zero_vector(normal):
            continue  # parallel to the flat: empty trace
        offset = h.offset - dot(sub.point, h.normal)
        induced = canonicalize(normal, offset)
        if induced not in seen:
            seen.add(induced)
            traces.append(induced)
    return Arrangement(flat.dim, tuple(traces))


@lru_cache(maxsize=None)
def char_poly_level(arr: Arrangement, j: int) -> CharPoly:
    """Sum of restriction characteristic polynomials over dimension-j flats."""
    if not 0 <= j <= arr.dim:
        raise ValueError(f"level {j} out of range for dim {arr.dim}")
    total = CharPoly(j, (0,) * (j + 1))
    for flat in flats_of_dim(arr, j):
        total = total + char_poly_moebius(restriction(arr, flat))
    return total
