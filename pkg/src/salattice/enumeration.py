"""Exact-arithmetic lattice enumeration: shortest vector, closest vector,
successive minima, and radius-limited candidate collection.

Branch-and-bound over the basis coefficients with exact rational
Gram-Schmidt pruning.  The L1 and LINF searches prune through the euclidean
ball that contains their own balls, then evaluate their exact norm at the
leaves, so every answer is certified optimal.  A node budget guards against
runaway trees; exceeding it raises instead of returning an unverified answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, RankDeficient
from .linalg import Matrix, NormKind, Vector, nearest_int, norm_value

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class EnumResult:
    coeffs: tuple[int, ...]
    vector: Vector
    value: Fraction | int
    nodes: int


@dataclass(frozen=True)
class SuccessiveMinima:
    """Exact successive minima with witness vectors achieving them."""

    values: tuple
    witnesses: tuple[Vector, ...]
    coeffs: tuple[tuple[int, ...], ...]
    nodes: int


def _l2cap(value, kind: NormKind, n: int):
    # smallest squared-euclidean radius whose ball contains the `kind` ball
    v = Fraction(value)
    if kind is NormKind.L2:
        return v
    if kind is NormKind.L1:
        return v * v
    return n * v * v


class _Enumerator:
    def __init__(self, basis: Matrix, kind: NormKind, budget: int):
        if not basis.is_square:
            raise ValueError("enumeration basis must be square")
        self.n = basis.nrows
        self.cols = [ [Fraction(basis[i, j]) for i in range(self.n)] for j in range(self.n) ]
        self.kind = kind
        self.budget = budget
        self.nodes = 0
        self._gram_schmidt()

    def _gram_schmidt(self):
        n = self.n
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar: list[list[Fraction]] = []
        bsq: list[Fraction] = []
        for i in range(n):
            v = list(self.cols[i])
            for j in range(i):
                dot = sum(a * b for a, b in zip(self.cols[i], bstar[j]))
                m = dot / bsq[j]
                mu[i][j] = m
                if m:
                    v = [a - m * b for a, b in zip(v, bstar[j])]
            sq = sum(a * a for a in v)
            if sq == 0:
                raise RankDeficient("basis columns are linearly dependent")
            bstar.append(v)
            bsq.append(sq)
        self.mu = mu
        self.bstar = bstar
        self.bsq = bsq

    def _tau(self, target: Vector | None) -> list[Fraction]:
        if target is None:
            return [Fraction(0)] * self.n
        t = [Fraction(e) for e in target]
        return [
            sum(a * b for a, b in zip(t, self.bstar[j])) / self.bsq[j]
            for j in range(self.n)
        ]

    def _vector(self, z: list[int], target: Vector | None) -> Vector:
        w = [Fraction(0)] * self.n
        for j, zj in enumerate(z):
            if zj:
                col = self.cols[j]
                for i in range(self.n):
                    w[i] += zj * col[i]
        if target is not None:
            for i in range(self.n):
                w[i] -= Fraction(target[i])
        return Vector(w)

    def babai(self, target: Vector) -> list[int]:
        """Nearest-plane rounding; a valid starting candidate for closest."""
        tau = self._tau(target)
        z = [0] * self.n
        for level in range(self.n - 1, -1, -1):
            c = tau[level] - sum(z[j] * self.mu[j][level] for j in range(level + 1, self.n))
            z[level] = nearest_int(c)
        return z

    def search(
        self,
        *,
        target: Vector | None = None,
        cap_value=None,
        exclude_zero: bool = False,
        half_space: bool = False,
        collect: bool = False,
        accept=None,
    ):
        """DFS over coefficients.  In best mode, returns the minimizer of the
        norm value with deterministic tie-breaking (lexicographically smallest
        coefficient vector; sign-normalized first when half_space is on).  In
        collect mode, returns every candidate with value <= cap_value.
        """
        n = self.n
        tau = self._tau(target)
        cap = _l2cap(cap_value, self.kind, n)
        fixed_cap = cap if collect else None
        best = None  # (value, key, z, w)
        found: list[tuple] = []
        z = [0] * n

        def value_of(zvec: list[int]):
            w = self._vector(zvec, target)
            return norm_value(w, self.kind), w

        def leaf(partial):
            nonlocal cap, best
            zvec = list(z)
            if exclude_zero and all(e == 0 for e in zvec):
                return
            if self.kind is NormKind.L2:
                val = partial
                w = None
            else:
                val, w = value_of(zvec)
            if collect:
                if val <= cap_value:
                    if w is None:
                        w = self._vector(zvec, target)
                    if accept is None or accept(zvec, w):
                        found.append((tuple(zvec), w, val))
                return
            if best is not None and val > best[0]:
                return
            if w is None:
                w = self._vector(zvec, target)
            if accept is not None and not accept(zvec, w):
                return
            key = tuple(zvec)
            wkey = w
            if half_space:
                lead = next((e for e in key if e != 0), 0)
                if lead < 0:
                    key = tuple(-e for e in key)
                    wkey = -w
            if best is None or (val, key) < (best[0], best[1]):
                best = (val, key, wkey)
                cap = _l2cap(val, self.kind, n)

        def dfs(level: int, partial, suffix_zero: bool):
            if level < 0:
                leaf(partial)
                return
            c = tau[level] - sum(z[j] * self.mu[j][level] for j in range(level + 1, n))
            bsq = self.bsq[level]
            z0 = nearest_int(c)
            lo_start = z0 if not (half_space and suffix_zero) else max(z0, 0)
            up, down = lo_start, lo_start - 1
            up_alive = True
            down_alive = not (half_space and suffix_zero) or down >= 0
            while up_alive or down_alive:
                if up_alive:
                    du = Fraction(up) - c
                    if partial + du * du * bsq <= (fixed_cap if collect else cap):
                        self.nodes += 1
                        if self.nodes > self.budget:
                            raise BudgetExceeded(self.budget, self.nodes)
                        z[level] = up
                        dfs(level - 1, partial + du * du * bsq, suffix_zero and up == 0)
                        up += 1
                    else:
                        up_alive = False
                if down_alive:
                    dd = Fraction(down) - c
                    if partial + dd * dd * bsq <= (fixed_cap if collect else cap):
                        self.nodes += 1
                        if self.nodes > self.budget:
                            raise BudgetExceeded(self.budget, self.nodes)
                        z[level] = down
                        dfs(level - 1, partial + dd * dd * bsq, suffix_zero and down == 0)
                        down -= 1
                        if half_space and suffix_zero and down < 0:
                            down_alive = False
                    else:
                        down_alive = False
            z[level] = 0

        dfs(n - 1, Fraction(0), True)
        if collect:
            return found
        return best


def _min_column(basis: Matrix, kind: NormKind, skip=None):
    best = None
    for j in range(basis.ncols):
        col = basis.col(j)
        if skip is not None and skip(col):
            continue
        val = norm_value(col, kind)
        if best is None or val < best:
            best = val
    return best


def enum_shortest(basis: Matrix, kind: NormKind, budget: int = DEFAULT_BUDGET) -> EnumResult:
    """A true shortest nonzero lattice vector under `kind`, certified by
    exhaustive branch-and-bound.  Ties resolve to the lexicographically
    smallest sign-normalized coefficient vector.
    """
    enum = _Enumerator(basis, kind, budget)
    cap = _min_column(basis, kind)
    best = enum.search(cap_value=cap, exclude_zero=True, half_space=True)
    val, key, w = best
    return EnumResult(key, w, val, enum.nodes)


def enum_closest(
    basis: Matrix, target: Vector, kind: NormKind, budget: int = DEFAULT_BUDGET
) -> EnumResult:
    """The lattice vector closest to `target`; distance zero is possible."""
    enum = _Enumerator(basis, kind, budget)
    z0 = enum.babai(target)
    start = enum._vector(z0, target)
    cap = norm_value(start, kind)
    best = enum.search(target=target, cap_value=cap)
    val, key, w = best
    vec = Vector([a + Fraction(b) for a, b in zip(w, target)])
    return EnumResult(key, vec, val, enum.nodes)


def enum_successive(basis: Matrix, kind: NormKind, budget: int = DEFAULT_BUDGET) -> SuccessiveMinima:
    """All successive minima with witnesses, by greedily enumerating the
    shortest vector independent of those already chosen.
    """
    n = basis.nrows
    enum = _Enumerator(basis, kind, budget)
    echelon: list[tuple[int, list[Fraction]]] = []

    def reduce(vec) -> list[Fraction] | None:
        v = [Fraction(e) for e in vec]
        for pivot, row in echelon:
            if v[pivot]:
                f = v[pivot] / row[pivot]
                v = [a - f * b for a, b in zip(v, row)]
        pivot = next((i for i, e in enumerate(v) if e != 0), None)
        return None if pivot is None else v

    def independent(_z, w) -> bool:
        return reduce(w) is not None

    values = []
    witnesses = []
    coeffs = []
    for _ in range(n):
        cap = _min_column(basis, kind, skip=lambda col: reduce(col) is None)
        val, key, w = enum.search(
            cap_value=cap, exclude_zero=True, half_space=True, accept=independent
        )
        values.append(val)
        witnesses.append(w)
        coeffs.append(key)
        reduced = reduce(w)
        pivot = next(i for i, e in enumerate(reduced) if e != 0)
        echelon.append((pivot, reduced))
    return SuccessiveMinima(tuple(values), tuple(witnesses), tuple(coeffs), enum.nodes)


def enum_within(
    basis: Matrix,
    radius_value,
    kind: NormKind,
    budget: int = DEFAULT_BUDGET,
    target: Vector | None = None,
    exclude_zero: bool = False,
) -> list[tuple[tuple[int, ...], Vector, object]]:
    """Every lattice point v with norm value of (v - target) at most
    radius_value.  Without a target only one of each +-pair is returned (the
    one whose highest nonzero coefficient is positive); callers expand signs.
    Entries are (coefficients, v - target, value).
    """
    enum = _Enumerator(basis, kind, budget)
    half = target is None
    return enum.search(
        cap_value=radius_value,
        exclude_zero=exclude_zero or half,
        half_space=half,
        collect=True,
        target=target,
    )
