"""Gap-preserving reductions: solve shortest-vector, independent-vectors and
closest-vector problems on an arbitrary full-rank integer lattice through a
single oracle call on its simultaneous-approximation surrogate.

Each reduction builds the surrogate, asks the oracle for coefficients, takes
centered fractional parts, and multiplies back.  The answers land in the
original lattice with the oracle's approximation factor intact; both the
lattice vectors and their integer coordinates are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import serialize
from .approximate import MODE_STRICT, SAInstance, sa_approximate
from .errors import LatticeError, TargetDenominatorTooLarge
from .instances import GeneralInstance
from .linalg import Matrix, Vector, centered_frac, norm_value, solve_linear
from .oracles import OracleAnswer, OracleContext, cap_oracle, sap_oracle, siap_oracle


@dataclass(frozen=True)
class ReductionResult:
    """Lattice vectors v(i) = M*z0(i) answering the original problem, the
    integer coordinates z0(i), the oracle answer that produced them, and the
    surrogate instance used."""

    problem: str
    vectors: tuple[Vector, ...]
    coordinates: tuple[Vector, ...]
    answer: OracleAnswer
    sa: SAInstance
    achieved: Fraction | int

    def to_dict(self, inst: GeneralInstance) -> dict:
        single = self.problem in ("svp", "cvp")
        v_json = [serialize.rat_vector_json(v) for v in self.vectors]
        z_json = [serialize.int_vector_json(z) for z in self.coordinates]
        return {
            "problem": self.problem,
            "n": inst.n,
            "k": serialize.int_str(inst.k),
            "gamma": f"{inst.gamma[0]}/{inst.gamma[1]}",
            "norm": inst.norm.value,
            "v": v_json[0] if single else v_json,
            "z0": z_json[0] if single else z_json,
            "achieved": serialize.rat_str(self.achieved),
            "certified": self.answer.certified,
        }


def _context(inst: GeneralInstance, sa: SAInstance, oracle_mode: str, budget: int | None) -> OracleContext:
    kwargs = {} if budget is None else {"budget": budget}
    return OracleContext(norm=inst.norm, mode=oracle_mode, m=inst.m, sa=sa, **kwargs)


def _integral(v: Vector, what: str) -> Vector:
    # Vector canonicalizes integral Fractions to int on construction
    if not v.is_integral():
        raise LatticeError(f"{what} is not integral")
    return v


def reduce_svp(
    inst: GeneralInstance,
    oracle=sap_oracle,
    mode: str = MODE_STRICT,
    oracle_mode: str = "exact",
    budget: int | None = None,
) -> ReductionResult:
    """Nonzero v in M*Z^n with ||v|| <= gamma * min over nonzero lattice
    vectors, given any valid gamma-oracle for the surrogate problem."""
    sa = sa_approximate(inst, mode)
    ctx = _context(inst, sa, oracle_mode, budget)
    ans = oracle(inst.gamma_fraction, sa.x, ctx)
    b0 = ans.coefficients[0]
    w = centered_frac(sa.x.scale(b0))
    if w.is_zero():
        raise LatticeError("oracle returned a coefficient with zero fractional part")
    z0 = _integral(sa.m_tilde * w, "m_tilde * {b0 x}")
    v = inst.m * z0
    return ReductionResult("svp", (v,), (z0,), ans, sa, norm_value(v, inst.norm))


def reduce_sivp(
    inst: GeneralInstance,
    oracle=siap_oracle,
    mode: str = MODE_STRICT,
    oracle_mode: str = "exact",
    budget: int | None = None,
) -> ReductionResult:
    """n linearly independent vectors of M*Z^n, all within gamma of the n-th
    successive minimum."""
    sa = sa_approximate(inst, mode)
    ctx = _context(inst, sa, oracle_mode, budget)
    ans = oracle(inst.gamma_fraction, sa.x, ctx)
    if len(ans.coefficients) != inst.n:
        raise LatticeError("independent-vectors oracle must return n coefficients")
    vectors = []
    coords = []
    for b in ans.coefficients:
        w = centered_frac(sa.x.scale(b))
        z0 = _integral(sa.m_tilde * w, "m_tilde * {b x}")
        coords.append(z0)
        vectors.append(inst.m * z0)
    if abs_rank(vectors) != inst.n:
        raise LatticeError("reduced vectors are not linearly independent")
    achieved = max(norm_value(v, inst.norm) for v in vectors)
    return ReductionResult("sivp", tuple(vectors), tuple(coords), ans, sa, achieved)


def abs_rank(vectors) -> int:
    """Exact rank over the rationals."""
    echelon: list[list[Fraction]] = []
    for v in vectors:
        r = [Fraction(e) for e in v]
        for row in echelon:
            pivot = next(i for i, e in enumerate(row) if e != 0)
            if r[pivot]:
                f = r[pivot] / row[pivot]
                r = [a - f * b for a, b in zip(r, row)]
        if any(e != 0 for e in r):
            echelon.append(r)
    return len(echelon)


def reduce_cvp(
    inst: GeneralInstance,
    oracle=cap_oracle,
    mode: str = MODE_STRICT,
    oracle_mode: str = "exact",
    budget: int | None = None,
) -> ReductionResult:
    """v in M*Z^n with ||v - t|| <= gamma * dist(t, M*Z^n).  The oracle sees
    the target transported to the surrogate side; the answer is transported
    back with the same integer shift."""
    if inst.target is None:
        raise LatticeError("closest-vector reduction needs a target")
    if inst.target.lcd() > inst.k:
        raise TargetDenominatorTooLarge(f"lcd(target) > k = {inst.k}")
    sa = sa_approximate(inst, mode)
    ctx = _context(inst, sa, oracle_mode, budget)
    t_prime = solve_linear(ctx.product, inst.target)
    ans = oracle(inst.gamma_fraction, sa.x, t_prime, ctx)
    b0 = ans.coefficients[0]
    y = centered_frac(sa.x.scale(b0) - t_prime) + t_prime
    z0 = _integral(sa.m_tilde * y, "m_tilde * ({b0 x - t'} + t')")
    v = inst.m * z0
    achieved = norm_value(v - inst.target, inst.norm)
    return ReductionResult("cvp", (v,), (z0,), ans, sa, achieved)
