"""Exact solvers for the three problems posed on simultaneous-approximation
lattices: best coefficient for a short fractional part (shortest-vector
analogue), for a close fractional part relative to a target (closest-vector
analogue), and for n independent fractional parts (independent-vectors
analogue).

Three interchangeable modes:

* exact   -- "pullback": enumerate the original lattice inside a slightly
             inflated ball, map candidates through the inverse transform, and
             minimize on the SA side.  The inflation factor comes from exact
             operator-norm bounds on the perturbation, so optimality is
             certified without ever enumerating the huge-entry SA basis.
* direct  -- enumerate the SA lattice itself.  For constructed instances the
             adjugate columns of m_tilde give a well-conditioned basis of the
             same lattice (verified by a Hermite-normal-form identity); tiny
             hand-made inputs fall back to the canonical HNF basis.
* adversarial -- a worst-case but still valid gamma-oracle: among all answers
             within factor gamma of optimal, return one of maximal norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .approximate import SAInstance, recover_coefficient
from .enumeration import (
    DEFAULT_BUDGET,
    enum_closest,
    enum_shortest,
    enum_successive,
    enum_within,
)
from .errors import LatticeError, ModeUnavailable, NoSolution
from .linalg import (
    Matrix,
    NormKind,
    Vector,
    bareiss_det,
    bareiss_det_adj,
    centered_frac,
    hnf,
    leq_with_factor,
    norm_degree,
    norm_value,
    rat_inverse,
)
from . import serialize

MODE_EXACT = "exact"
MODE_DIRECT = "direct"
MODE_ADVERSARIAL = "adversarial"
ORACLE_MODES = (MODE_EXACT, MODE_DIRECT, MODE_ADVERSARIAL)

DIRECT_DIMENSION_CAP = 5
DIRECT_PLAIN_Q_BITS = 64  # HNF-basis enumeration is only viable for tiny denominators


@dataclass(frozen=True)
class SABasis:
    """Integer basis of q times the SA lattice generated by I_n and x."""

    q: int
    basis: Matrix

    @property
    def n(self) -> int:
        return self.basis.nrows


def sa_basis(x: Vector) -> SABasis:
    """Canonical Hermite-normal-form basis of q*(Z^n + x*Z), q = lcd(x)."""
    n = len(x)
    q = x.lcd()
    p = Vector(int(Fraction(e) * q) for e in x)
    stacked = Matrix.identity(n).scale(q).hstack(p)
    return SABasis(q=q, basis=hnf(stacked))


@dataclass(frozen=True)
class OracleAnswer:
    """Coefficients plus the exact norm value they achieve.

    `optimal` is the true optimum when the mode computes it (all built-in
    modes do); `certified` asserts achieved <= gamma * optimal.
    """

    coefficients: tuple[int, ...]
    achieved: Fraction | int
    optimal: Fraction | int | None
    certified: bool
    mode: str
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "coefficients": [serialize.int_str(b) for b in self.coefficients],
            "achieved": serialize.rat_str(self.achieved),
            "optimal": serialize.rat_str(self.optimal) if self.optimal is not None else None,
            "certified": self.certified,
            "mode": self.mode,
            "nodes": self.nodes,
        }


@dataclass
class OracleContext:
    """Everything an oracle needs beyond (gamma, x): the original basis and
    construction output for the pullback route, the norm, and budgets."""

    norm: NormKind
    mode: str = MODE_EXACT
    m: Matrix | None = None
    sa: SAInstance | None = None
    budget: int = DEFAULT_BUDGET
    direct_cap: int = DIRECT_DIMENSION_CAP
    _cache: dict = field(default_factory=dict, repr=False)

    def require_construction(self):
        if self.m is None or self.sa is None:
            raise ModeUnavailable(f"{self.mode} mode needs the original basis and its construction")

    @property
    def product(self) -> Matrix:
        if "product" not in self._cache:
            self.require_construction()
            self._cache["product"] = self.m * self.sa.m_tilde
        return self._cache["product"]

    @property
    def product_inverse(self) -> Matrix:
        if "product_inverse" not in self._cache:
            self._cache["product_inverse"] = rat_inverse(self.product)
        return self._cache["product_inverse"]

    @property
    def det_m(self) -> int:
        if "det_m" not in self._cache:
            self.require_construction()
            self._cache["det_m"] = bareiss_det(self.m)
        return self._cache["det_m"]

    def operator_eps(self) -> Fraction:
        """Certified upper bound on the operator norm of E = M*A/(c*det M)
        under the context norm; exact row/column sums, arithmetic-mean bound
        for the euclidean case."""
        if "eps" not in self._cache:
            self.require_construction()
            sa = self.sa
            scale = Fraction(1, abs(sa.c * self.det_m))
            e = (self.m * sa.perturbation).scale(scale)
            col_sum = max(sum(abs(e[i, j]) for i in range(e.nrows)) for j in range(e.ncols))
            row_sum = max(sum(abs(e[i, j]) for j in range(e.ncols)) for i in range(e.nrows))
            if self.norm is NormKind.L1:
                eps = Fraction(col_sum)
            elif self.norm is NormKind.LINF:
                eps = Fraction(row_sum)
            else:
                eps = Fraction(col_sum + row_sum, 2)  # >= sqrt(op1*opinf) >= op2
            if eps >= 1:
                raise LatticeError("perturbation too large to certify the pullback")
            self._cache["eps"] = eps
        return self._cache["eps"]

    def inflation_ratio(self):
        """((1+eps)/(1-eps))^p in the value domain of the context norm."""
        eps = self.operator_eps()
        r = (1 + eps) / (1 - eps)
        return r ** norm_degree(self.norm)

    def value_scale(self) -> Fraction:
        """Norm-value scale factor |c*det M|^p between the SA side and the
        original side (the remaining distortion is bounded by eps)."""
        d = abs(self.sa.c * self.det_m)
        return Fraction(d ** norm_degree(self.norm))


def _expand_signs(cands):
    for z, w, val in cands:
        yield z, w, val
        yield tuple(-e for e in z), -w, val


def _pull_sa_points(ctx: OracleContext, radius_value, target_m: Vector | None):
    """Enumerate original-lattice points in a ball and map them to the SA
    side.  Yields (y, value-of-(y - t') on SA side is NOT computed here)."""
    cands = enum_within(ctx.m, radius_value, ctx.norm, ctx.budget, target=target_m)
    inv = ctx.product_inverse
    if target_m is None:
        for z, w, _val in _expand_signs(cands):
            yield inv * w
    else:
        for _z, w, _val in cands:
            v = Vector([a + Fraction(b) for a, b in zip(w, target_m)])
            yield inv * v


def _direct_basis(ctx_or_none: OracleContext | None, x: Vector):
    """Basis of a scaled copy of the SA lattice suitable for enumeration,
    plus the integer scale: the adjugate of m_tilde when a construction is
    available (same lattice up to scale, certified via HNF), otherwise the
    canonical HNF basis for small denominators."""
    sab = None
    if ctx_or_none is not None and ctx_or_none.sa is not None:
        sa = ctx_or_none.sa
        if sa.n > ctx_or_none.direct_cap:
            raise ModeUnavailable(
                f"direct mode capped at n <= {ctx_or_none.direct_cap}, got {sa.n}"
            )
        det_mt, adj_mt = bareiss_det_adj(sa.m_tilde)
        q = x.lcd()
        if abs(det_mt) % q:
            raise LatticeError("lcd(x) does not divide det(m_tilde)")
        sigma = abs(det_mt) // q
        sab = sa_basis(x)
        if hnf(adj_mt) != sab.basis.scale(sigma):
            raise LatticeError("adjugate basis does not span the SA lattice")
        return adj_mt, abs(det_mt)
    q = x.lcd()
    if q.bit_length() > DIRECT_PLAIN_Q_BITS:
        raise ModeUnavailable(
            "direct mode without a construction context requires a small denominator"
        )
    sab = sa_basis(x)
    return sab.basis, q


def _scale_radius(value, scale: int, kind: NormKind):
    return value * Fraction(scale) ** norm_degree(kind)


def _unscale_value(value, scale: int, kind: NormKind):
    return value / Fraction(scale) ** norm_degree(kind)


# ---------------------------------------------------------------------------
# shortest fractional part


def _sap_exact(x: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    sv = enum_shortest(ctx.m, ctx.norm, ctx.budget)
    radius = sv.value * ctx.inflation_ratio()
    best = None
    for y in _pull_sa_points(ctx, radius, None):
        b = recover_coefficient(y, x)
        if b == 0:
            continue
        w = centered_frac(y)
        val = norm_value(w, ctx.norm)
        if val == 0:
            continue
        if best is None or (val, b) < (best[0], best[1]):
            best = (val, b)
    if best is None:
        raise NoSolution("no coefficient with nonzero fractional part in the ball")
    val, b = best
    return OracleAnswer((b,), val, val, True, MODE_EXACT, sv.nodes)


def _sap_direct(x: Vector, ctx: OracleContext | None, norm: NormKind, budget: int) -> OracleAnswer:
    basis, scale = _direct_basis(ctx, x)
    sv = enum_shortest(basis, norm, budget)
    y = Vector(Fraction(e, scale) for e in sv.vector)
    b = recover_coefficient(y, x)
    if b != 0:
        w = centered_frac(y)
        val = norm_value(w, norm)
        return OracleAnswer((b,), val, val, True, MODE_DIRECT, sv.nodes)
    # shortest vector was integral (toy inputs only): search the larger ball
    # around the b = 1 witness and exclude the integer sublattice
    witness = centered_frac(x)
    if witness.is_zero():
        raise NoSolution("x is integral; every fractional part is zero")
    radius = _scale_radius(norm_value(witness, norm), scale, norm)
    best = None
    for z, w, _val in _expand_signs(enum_within(basis, radius, norm, budget)):
        y = Vector(Fraction(e, scale) for e in w)
        b = recover_coefficient(y, x)
        if b == 0:
            continue
        wc = centered_frac(y)
        val = norm_value(wc, norm)
        if val == 0:
            continue
        if best is None or (val, b) < (best[0], best[1]):
            best = (val, b)
    if best is None:
        raise NoSolution("no coefficient with nonzero fractional part")
    val, b = best
    return OracleAnswer((b,), val, val, True, MODE_DIRECT, 0)


def _sap_adversarial(gamma: Fraction, x: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    opt = _sap_exact(x, ctx).achieved
    g = gamma ** norm_degree(ctx.norm)
    radius = opt * g * ctx.value_scale() * (1 + ctx.operator_eps()) ** norm_degree(ctx.norm)
    worst = None
    for y in _pull_sa_points(ctx, radius, None):
        b = recover_coefficient(y, x)
        if b == 0:
            continue
        w = centered_frac(y)
        val = norm_value(w, ctx.norm)
        if val == 0 or not leq_with_factor(val, opt, gamma, ctx.norm):
            continue
        if worst is None or (val, -b) > (worst[0], -worst[1]):
            worst = (val, b)
    val, b = worst
    return OracleAnswer((b,), val, opt, True, MODE_ADVERSARIAL, 0)


def sap_oracle(gamma: Fraction, x: Vector, ctx: OracleContext) -> OracleAnswer:
    """Best (or adversarially worst valid) coefficient b with
    0 < ||{b x}|| <= gamma * min over nonzero fractional parts."""
    if ctx.mode == MODE_EXACT:
        return _sap_exact(x, ctx)
    if ctx.mode == MODE_DIRECT:
        return _sap_direct(x, ctx, ctx.norm, ctx.budget)
    if ctx.mode == MODE_ADVERSARIAL:
        return _sap_adversarial(gamma, x, ctx)
    raise ValueError(f"unknown oracle mode {ctx.mode!r}")


# ---------------------------------------------------------------------------
# closest fractional part


def _cap_exact(x: Vector, t_prime: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    t_m = ctx.product * t_prime
    cv = enum_closest(ctx.m, t_m, ctx.norm, ctx.budget)
    radius = cv.value * ctx.inflation_ratio()
    best = None
    for y in _pull_sa_points(ctx, radius, t_m):
        b = recover_coefficient(y, x)
        w = centered_frac(y - t_prime)
        val = norm_value(w, ctx.norm)
        if best is None or (val, b) < (best[0], best[1]):
            best = (val, b)
    val, b = best
    return OracleAnswer((b,), val, val, True, MODE_EXACT, cv.nodes)


def _cap_direct(x: Vector, t_prime: Vector, ctx: OracleContext | None, norm: NormKind, budget: int) -> OracleAnswer:
    basis, scale = _direct_basis(ctx, x)
    t_scaled = Vector(Fraction(e) * scale for e in t_prime)
    cv = enum_closest(basis, t_scaled, norm, budget)
    y = Vector(Fraction(e) / scale for e in cv.vector)
    b = recover_coefficient(y, x)
    val = norm_value(centered_frac(y - t_prime), norm)
    return OracleAnswer((b,), val, val, True, MODE_DIRECT, cv.nodes)


def _cap_adversarial(gamma: Fraction, x: Vector, t_prime: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    opt = _cap_exact(x, t_prime, ctx).achieved
    t_m = ctx.product * t_prime
    g = gamma ** norm_degree(ctx.norm)
    radius = opt * g * ctx.value_scale() * (1 + ctx.operator_eps()) ** norm_degree(ctx.norm)
    worst = None
    for y in _pull_sa_points(ctx, radius, t_m):
        b = recover_coefficient(y, x)
        val = norm_value(centered_frac(y - t_prime), ctx.norm)
        if not leq_with_factor(val, opt, gamma, ctx.norm):
            continue
        if worst is None or (val, -b) > (worst[0], -worst[1]):
            worst = (val, b)
    val, b = worst
    return OracleAnswer((b,), val, opt, True, MODE_ADVERSARIAL, 0)


def cap_oracle(gamma: Fraction, x: Vector, t_prime: Vector, ctx: OracleContext) -> OracleAnswer:
    """Coefficient b with ||{b x - t'}|| within gamma of the minimum over
    all integers b; zero distance is allowed."""
    if ctx.mode == MODE_EXACT:
        return _cap_exact(x, t_prime, ctx)
    if ctx.mode == MODE_DIRECT:
        return _cap_direct(x, t_prime, ctx, ctx.norm, ctx.budget)
    if ctx.mode == MODE_ADVERSARIAL:
        return _cap_adversarial(gamma, x, t_prime, ctx)
    raise ValueError(f"unknown oracle mode {ctx.mode!r}")


# ---------------------------------------------------------------------------
# independent fractional parts


def _rank_filter(vectors):
    """Greedy independent subset: yields indices whose vectors extend the
    span, via exact rational elimination."""
    echelon = []
    for idx, v in enumerate(vectors):
        r = [Fraction(e) for e in v]
        for pivot, row in echelon:
            if r[pivot]:
                f = r[pivot] / row[pivot]
                r = [a - f * b for a, b in zip(r, row)]
        pivot = next((i for i, e in enumerate(r) if e != 0), None)
        if pivot is None:
            continue
        echelon.append((pivot, r))
        yield idx


def _canonical_candidates(ctx: OracleContext, x: Vector, radius_value):
    """Pulled-back SA points that are their own canonical representative,
    with coefficient and exact value; sorted by (value, coefficient)."""
    out = []
    seen = set()
    for y in _pull_sa_points(ctx, radius_value, None):
        b = recover_coefficient(y, x)
        if b == 0:
            continue
        if centered_frac(y) != y:
            continue
        if b in seen:
            continue
        seen.add(b)
        out.append((norm_value(y, ctx.norm), b, y))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def _siap_exact(x: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    n = ctx.sa.n
    sm = enum_successive(ctx.m, ctx.norm, ctx.budget)
    radius = sm.values[-1] * ctx.inflation_ratio()
    cands = _canonical_candidates(ctx, x, radius)
    chosen = [cands[i] for i in _rank_filter(v for _val, _b, v in cands)]
    if len(chosen) < n:
        raise NoSolution("could not assemble n independent fractional parts")
    chosen = chosen[:n]
    achieved = max(val for val, _b, _v in chosen)
    return OracleAnswer(tuple(b for _val, b, _v in chosen), achieved, achieved, True, MODE_EXACT, sm.nodes)


def _siap_direct(x: Vector, ctx: OracleContext | None, norm: NormKind, budget: int) -> OracleAnswer:
    basis, scale = _direct_basis(ctx, x)
    sm = enum_successive(basis, norm, budget)
    bs = []
    for w in sm.witnesses:
        y = Vector(Fraction(e, scale) for e in w)
        if centered_frac(y) != y:
            y = -y
            if centered_frac(y) != y:
                raise ModeUnavailable("a successive-minima witness is not a canonical fractional part")
        b = recover_coefficient(y, x)
        if b == 0:
            raise ModeUnavailable("a successive-minima witness lies in the integer sublattice")
        bs.append(b)
    achieved = _unscale_value(sm.values[-1], scale, norm)
    return OracleAnswer(tuple(bs), achieved, achieved, True, MODE_DIRECT, sm.nodes)


def _siap_adversarial(gamma: Fraction, x: Vector, ctx: OracleContext) -> OracleAnswer:
    ctx.require_construction()
    exact = _siap_exact(x, ctx)
    lam_n = exact.achieved
    g = gamma ** norm_degree(ctx.norm)
    radius = lam_n * g * ctx.value_scale() * (1 + ctx.operator_eps()) ** norm_degree(ctx.norm)
    cands = [
        (val, b, y)
        for val, b, y in _canonical_candidates(ctx, x, radius)
        if leq_with_factor(val, lam_n, gamma, ctx.norm)
    ]
    # worst valid answer: anchor on the largest admissible vector, then
    # complete to an independent set from the small end
    worst = max(cands, key=lambda t: (t[0], -t[1]))
    chosen = [worst]
    for val, b, y in cands:
        if len(chosen) == ctx.sa.n:
            break
        trial = chosen + [(val, b, y)]
        if len(list(_rank_filter(v for _val, _b, v in trial))) == len(trial):
            chosen.append((val, b, y))
    if len(chosen) < ctx.sa.n:
        raise NoSolution("could not complete an adversarial independent set")
    achieved = max(val for val, _b, _v in chosen)
    return OracleAnswer(tuple(b for _val, b, _v in chosen), achieved, lam_n, True, MODE_ADVERSARIAL, 0)


def siap_oracle(gamma: Fraction, x: Vector, ctx: OracleContext) -> OracleAnswer:
    """n coefficients whose fractional parts are linearly independent with
    maximal norm within gamma of the n-th successive minimum of the SA
    lattice."""
    if ctx.mode == MODE_EXACT:
        return _siap_exact(x, ctx)
    if ctx.mode == MODE_DIRECT:
        return _siap_direct(x, ctx, ctx.norm, ctx.budget)
    if ctx.mode == MODE_ADVERSARIAL:
        return _siap_adversarial(gamma, x, ctx)
    raise ValueError(f"unknown oracle mode {ctx.mode!r}")
