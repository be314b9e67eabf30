"""Exact rational geometry kernel.

Scalars are arbitrary-precision rationals (gmpy2.mpq when available), vectors
are plain tuples, and every predicate is decided exactly: there is no floating
point and no tolerance anywhere in this package's geometric computations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

ZERO = QQ(0)
ONE = QQ(1)

# Relation tags for linear constraints <coeffs, x> REL rhs.
LE = "<="
LT = "<"
EQ = "="

DEFAULT_SUBSET_CAP = 24


class ZeroNormalError(ValueError):
    """A hyperplane normal vector was zero."""


class DimensionMismatchError(ValueError):
    """Vector length does not match the ambient dimension."""


class SizeLimitError(RuntimeError):
    """Refusing a 2^m enumeration beyond the configured cap."""


def rat(value) -> QQ:
    """Coerce to an exact rational. Floats are rejected on purpose."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact geometry input")
    return QQ(value)


def format_rational(q) -> str:
    return str(QQ(q))


def vec(values: Iterable) -> tuple:
    return tuple(rat(v) for v in values)


def parse_point(text: str) -> tuple:
    """Parse a comma-separated rational point like "3,-1/2"."""
    text = text.strip()
    if not text:
        return ()
    return vec(part.strip() for part in text.split(","))


def format_point(point: Sequence) -> str:
    return ",".join(format_rational(q) for q in point)


def dot(a: Sequence, b: Sequence):
    acc = ZERO
    for x, y in zip(a, b):
        acc += x * y
    return acc


def vadd(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def vneg(a: Sequence) -> tuple:
    return tuple(-x for x in a)


def is_zero_vector(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def sqdist(a: Sequence, b: Sequence):
    acc = ZERO
    for x, y in zip(a, b):
        acc += (x - y) * (x - y)
    return acc


def sign(q) -> int:
    return (q > 0) - (q < 0)


def primitive_direction(v: Sequence) -> tuple:
    """Scale by a positive rational so entries are coprime integers."""
    denom_lcm = math.lcm(*(rat(x).denominator for x in v)) if v else 1
    ints = [int(rat(x) * denom_lcm) for x in v]
    g = math.gcd(*ints) if ints else 1
    if g == 0:
        return tuple(ints)
    return tuple(n // g for n in ints)


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane {x : <normal, x> = offset} in canonical form.

    The canonical representative has coprime integer normal entries with the
    first nonzero entry positive, so equality of hyperplanes as point sets is
    equality of values.
    """

    normal: tuple
    offset: object

    def residual(self, x: Sequence):
        return dot(self.normal, x) - self.offset

    def side(self, x: Sequence) -> int:
        return sign(self.residual(x))


def canonicalize(normal: Sequence, offset) -> Hyperplane:
    normal = vec(normal)
    offset = rat(offset)
    if is_zero_vector(normal):
        raise ZeroNormalError("hyperplane normal must be nonzero")
    denom_lcm = math.lcm(*(q.denominator for q in normal))
    ints = [int(q * denom_lcm) for q in normal]
    g = math.gcd(*ints)
    scale = QQ(denom_lcm, g)
    first = next(n for n in ints if n != 0)
    if first < 0:
        scale = -scale
    return Hyperplane(tuple(int(q * scale) for q in normal), offset * scale)


@dataclass(frozen=True)
class Arrangement:
    """A finite set of pairwise distinct affine hyperplanes in R^dim."""

    dim: int
    hyperplanes: tuple

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("ambient dimension must be >= 0")
        for h in self.hyperplanes:
            if len(h.normal) != self.dim:
                raise DimensionMismatchError(
                    f"hyperplane normal {h.normal} not of length {self.dim}"
                )
        if len(set(self.hyperplanes)) != len(self.hyperplanes):
            raise ValueError("hyperplanes must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.hyperplanes)

    def normals(self) -> tuple:
        return tuple(h.normal for h in self.hyperplanes)


def arrangement(dim: int, data: Iterable) -> Arrangement:
    """Build an arrangement from (normal, offset) pairs, canonicalizing each."""
    return Arrangement(dim, tuple(canonicalize(n, c) for n, c in data))


def sign_vector(arr: Arrangement, x: Sequence) -> tuple:
    if len(x) != arr.dim:
        raise DimensionMismatchError(f"point {x} not of length {arr.dim}")
    return tuple(h.side(x) for h in arr.hyperplanes)


def signs_to_str(signs: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in signs)


def signs_from_str(text: str) -> tuple:
    table = {"+": 1, "-": -1, "0": 0}
    try:
        return tuple(table[ch] for ch in text.strip())
    except KeyError as exc:
        raise ValueError(f"bad sign character in {text!r}") from exc


# ---------------------------------------------------------------------------
# Exact linear algebra


def _echelon(rows: list) -> tuple[list, list[int]]:
    """Reduced row echelon form (in place on copies). Returns rows, pivot cols."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    width = len(rows[0])
    pivots: list[int] = []
    r = 0
    for col in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [q * inv for q in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_of(vectors: Sequence[Sequence], dim: int) -> int:
    rows = [list(v) for v in vectors if not is_zero_vector(v)]
    if not rows:
        return 0
    reduced, pivots = _echelon(rows)
    return len(pivots)


def null_space(vectors: Sequence[Sequence], dim: int) -> tuple:
    """Basis of {u in R^dim : <v, u> = 0 for every v}."""
    rows = [list(v) for v in vectors if not is_zero_vector(v)]
    if not rows:
        return tuple(tuple(ONE if j == i else ZERO for j in range(dim)) for i in range(dim))
    reduced, pivots = _echelon(rows)
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for f in free:
        u = [ZERO] * dim
        u[f] = ONE
        for row, p in zip(reduced, pivots):
            u[p] = -row[f]
        basis.append(tuple(u))
    return tuple(basis)


def gram_schmidt(vectors: Sequence[Sequence]) -> tuple:
    """Orthogonalize without normalizing; squared lengths stay rational."""
    ortho: list[tuple] = []
    for v in vectors:
        w = tuple(v)
        for b in ortho:
            w = vsub(w, vscale(dot(w, b) / dot(b, b), b))
        if not is_zero_vector(w):
            ortho.append(w)
    return tuple(ortho)


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace point + span(basis) with an orthogonal rational basis."""

    point: tuple
    basis: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, x: Sequence) -> tuple:
        """Orthogonal projection of x onto the subspace."""
        r = vsub(x, self.point)
        out = self.point
        for b in self.basis:
            out = vadd(out, vscale(dot(r, b) / dot(b, b), b))
        return out

    def contains(self, x: Sequence) -> bool:
        return self.project(x) == tuple(x)


def affine_subspace(point: Sequence, spanning: Sequence[Sequence]) -> AffineSubspace:
    return AffineSubspace(vec(point), gram_schmidt(spanning))


def solve_affine(hyperplanes: Sequence[Hyperplane], dim: int) -> Optional[AffineSubspace]:
    """Exact solution set of <n_i, x> = c_i, or None when inconsistent.

    The empty system yields all of R^dim.
    """
    rows = [list(h.normal) + [h.offset] for h in hyperplanes]
    reduced, pivots = _echelon(rows)
    if dim in pivots:
        return None  # a row reduced to 0 = nonzero
    point = [ZERO] * dim
    for row, p in zip(reduced, pivots):
        point[p] = row[dim]
    free = [j for j in range(dim) if j not in pivots]
    basis = []
    for f in free:
        u = [ZERO] * dim
        u[f] = ONE
        for row, p in zip(reduced, pivots):
            u[p] = -row[f]
        basis.append(tuple(u))
    return affine_subspace(point, basis)


# ---------------------------------------------------------------------------
# Feasibility of mixed strict / non-strict rational linear systems


Constraint = tuple  # (coeffs tuple, rhs, rel) meaning <coeffs, x> REL rhs


def _normalize_inequality(coeffs: Sequence, rhs, rel: str):
    """Primitive-integer scaling by a positive rational; keeps orientation."""
    entries = list(coeffs) + [rhs]
    denom_lcm = math.lcm(*(rat(q).denominator for q in entries))
    ints = [int(rat(q) * denom_lcm) for q in entries]
    g = math.gcd(*ints)
    if g > 1:
        ints = [n // g for n in ints]
    return tuple(ints[:-1]), ints[-1], rel


def feasible(constraints: Sequence[Constraint], dim: int) -> Optional[tuple]:
    """Exact witness of a mixed strict/non-strict linear system, or None.

    Equalities are removed by Gaussian elimination first; the remaining
    inequalities go through Fourier-Motzkin elimination, which handles
    strictness exactly (a combined constraint is strict iff either parent
    is). A witness is reconstructed by back-substitution, picking interval
    midpoints. Fully deterministic.
    """
    eq_rows = []
    inequalities = []
    for coeffs, rhs, rel in constraints:
        coeffs = vec(coeffs)
        if len(coeffs) != dim:
            raise DimensionMismatchError("constraint width != dim")
        rhs = rat(rhs)
        if rel == EQ:
            eq_rows.append(list(coeffs) + [rhs])
        elif rel in (LE, LT):
            inequalities.append((coeffs, rhs, rel))
        else:
            raise ValueError(f"unknown relation {rel!r}")

    reduced, pivots = _echelon(eq_rows) if eq_rows else ([], [])
    if dim in pivots:
        return None
    pivot_expr = {}  # var -> (const, {free var: coeff}) with x_p = const + sum
    free_vars = [j for j in range(dim) if j not in pivots]
    for row, p in zip(reduced, pivots):
        pivot_expr[p] = (row[dim], {f: -row[f] for f in free_vars})

    # Substitute pivots out of the inequalities; support on free vars only.
    work = []
    for coeffs, rhs, rel in inequalities:
        new = {f: coeffs[f] for f in free_vars}
        const = ZERO
        for p, (c0, lin) in pivot_expr.items():
            cp = coeffs[p]
            if cp == 0:
                continue
            const += cp * c0
            for f, cf in lin.items():
                new[f] = new[f] + cp * cf
        work.append((new, rhs - const, rel))

    def push(system: dict, coeffs: dict, rhs, rel) -> bool:
        """Add a constraint; returns False on an immediate contradiction."""
        if all(v == 0 for v in coeffs.values()):
            return rhs > 0 or (rhs == 0 and rel == LE)
        key_coeffs, key_rhs, rel = _normalize_inequality(
            [coeffs[f] for f in sorted(coeffs)], rhs, rel
        )
        key = (key_coeffs, key_rhs)
        old = system.get(key)
        if old is None or (old[2] == LE and rel == LT):
            system[key] = (coeffs, rhs, rel)
        return True

    remaining = list(free_vars)
    system: dict = {}
    for coeffs, rhs, rel in work:
        if not push(system, coeffs, rhs, rel):
            return None
    levels = []  # (var, constraints snapshot) in elimination order

    while remaining:
        counts = {}
        for coeffs, rhs, rel in system.values():
            for f in remaining:
                if coeffs[f] != 0:
                    pos, neg = counts.get(f, (0, 0))
                    counts[f] = (pos + (coeffs[f] > 0), neg + (coeffs[f] < 0))
        var = min(remaining, key=lambda f: (counts.get(f, (0, 0))[0] * counts.get(f, (0, 0))[1], f))
        snapshot = list(system.values())
        levels.append((var, snapshot))
        uppers = [c for c in snapshot if c[0][var] > 0]
        lowers = [c for c in snapshot if c[0][var] < 0]
        keepers = [c for c in snapshot if c[0][var] == 0]
        system = {}
        for coeffs, rhs, rel in keepers:
            if not push(system, {f: coeffs[f] for f in remaining if f != var}, rhs, rel):
                return None
        for ucoeffs, urhs, urel in uppers:
            for lcoeffs, lrhs, lrel in lowers:
                a, b = ucoeffs[var], -lcoeffs[var]
                combo = {
                    f: b * ucoeffs[f] + a * lcoeffs[f]
                    for f in remaining
                    if f != var
                }
                rel = LT if LT in (urel, lrel) else LE
                if not push(system, combo, b * urhs + a * lrhs, rel):
                    return None
        remaining.remove(var)

    # Back-substitution: assign eliminated vars in reverse order.
    values = {}
    for var, snapshot in reversed(levels):
        lo = hi = None
        lo_strict = hi_strict = False
        for coeffs, rhs, rel in snapshot:
            cv = coeffs[var]
            if cv == 0:
                continue
            rest = sum((coeffs[f] * values[f] for f in coeffs if f != var and coeffs[f] != 0), ZERO)
            bound = (rhs - rest) / cv
            if cv > 0:
                if hi is None or bound < hi or (bound == hi and rel == LT):
                    hi, hi_strict = bound, rel == LT
            else:
                if lo is None or bound > lo or (bound == lo and rel == LT):
                    lo, lo_strict = bound, rel == LT
        if lo is None and hi is None:
            values[var] = ZERO
        elif lo is None:
            values[var] = hi - 1
        elif hi is None:
            values[var] = lo + 1
        elif lo == hi:
            assert not (lo_strict or hi_strict), "FM produced an empty interval"
            values[var] = lo
        else:
            assert lo < hi, "FM produced an empty interval"
            values[var] = (lo + hi) / 2

    witness = [ZERO] * dim
    for f in free_vars:
        witness[f] = values[f]
    for p, (c0, lin) in pivot_expr.items():
        witness[p] = c0 + sum((cf * values[f] for f, cf in lin.items()), ZERO)
    return tuple(witness)


def satisfies(constraints: Sequence[Constraint], x: Sequence) -> bool:
    """Exact re-substitution check of a witness."""
    for coeffs, rhs, rel in constraints:
        val = dot(vec(coeffs), x)
        rhs = rat(rhs)
        if rel == EQ and val != rhs:
            return False
        if rel == LE and not val <= rhs:
            return False
        if rel == LT and not val < rhs:
            return False
    return True


def nonneg_solve(generators: Sequence[Sequence], target: Sequence, dim: int) -> Optional[list]:
    """Exact lambda >= 0 with sum(lambda_i * g_i) = target, or None.

    Phase-one simplex with Bland's rule: deterministic and terminating.
    """
    target = vec(target)
    if is_zero_vector(target):
        return [ZERO] * len(generators)
    if not generators:
        return None
    n = len(generators)
    rows = []
    rhs = []
    for i in range(dim):
        row = [rat(g[i]) for g in generators]
        b = target[i]
        if b < 0:
            row = [-a for a in row]
            b = -b
        rows.append(row + [ONE if j == i else ZERO for j in range(dim)])
        rhs.append(b)
    basis = [n + i for i in range(dim)]
    ncols = n + dim
    red = [-sum(rows[i][j] for i in range(dim)) for j in range(ncols)]

    while True:
        enter = next((j for j in range(ncols) if red[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(dim):
            if rows[i][enter] > 0:
                ratio = rhs[i] / rows[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        assert best is not None, "phase-one objective is bounded"
        _, leave = best
        piv = rows[leave][enter]
        rows[leave] = [a / piv for a in rows[leave]]
        rhs[leave] = rhs[leave] / piv
        for i in range(dim):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
                rhs[i] = rhs[i] - f * rhs[leave]
        f = red[enter]
        red = [a - f * b for a, b in zip(red, rows[leave])]
        basis[leave] = enter

    if sum((rhs[i] for i in range(dim) if basis[i] >= n), ZERO) != 0:
        return None
    out = [ZERO] * n
    for i in range(dim):
        if basis[i] < n:
            out[basis[i]] = rhs[i]
    return out
