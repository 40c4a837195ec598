"""Construction of a simultaneous-approximation lattice that approximates a
given full-rank integer lattice.

The construction scales the adjugate of the input basis by a large multiplier
c, then perturbs a single subdiagonal entry per column until two designated
complementary minors become coprime; a Bezout pair for the corresponding
cofactors then extends the scaled basis to a unimodular generating set.  The
returned rational vector x, together with the integer columns, generates the
image of the original lattice under the inverse transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import serialize
from .errors import DimensionTooSmall, LatticeError, NoSolution
from .instances import GeneralInstance
from .linalg import Matrix, Vector, bareiss_det, bareiss_det_adj, hnf, solve_linear
from .numtheory import coprime_shift, ext_gcd

MODE_STRICT = "strict"
MODE_SMALL_N = "small_n"
MODES = (MODE_STRICT, MODE_SMALL_N)


def ceil_log2(v: int) -> int:
    """Smallest integer >= log2(v), for v >= 1."""
    if v < 1:
        raise ValueError("v must be positive")
    return (v - 1).bit_length()


def multiplier_c(n: int, k: int, mode: str = MODE_STRICT) -> int:
    """The scaling multiplier applied to the adjugate.

    strict (n >= 8): c = 1728*(n*k)^(3n+15).

    small_n (n >= 2): the smallest power of two exceeding
    max(12*k^(n+5)*n^(n+4)*L^2, 1728*k^(3n+15)*n^(3n+6), 94) with
    L = ceil(log2(2nk)); L^2 over-approximates the natural log term, so the
    sufficiency inequalities behind gap preservation still hold.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == MODE_STRICT:
        if n < 8:
            raise DimensionTooSmall(f"strict mode needs n >= 8, got {n}")
        return 1728 * (n * k) ** (3 * n + 15)
    if n < 2:
        raise DimensionTooSmall("need n >= 2")
    big_l = ceil_log2(2 * n * k)
    t1 = 12 * k ** (n + 5) * n ** (n + 4) * big_l * big_l
    t2 = 1728 * k ** (3 * n + 15) * n ** (3 * n + 6)
    lower = max(t1, t2, 94)
    return 1 << lower.bit_length()


def entry_bound(c: int, n: int, k: int) -> int:
    """Upper bound c*(2nk)^n on every entry magnitude during construction."""
    return c * (2 * n * k) ** n


@dataclass(frozen=True)
class TraceRecord:
    """One perturbation round: which column, how far it was shifted, the two
    minor determinants at exit, and the largest entry magnitude afterwards.

    `shift_bound` is the documented safety bound (a generous multiple of the
    squared bit length of the coprimality modulus); `modulus_bits` records
    the bit length of that modulus.
    """

    iteration: int
    shift: int
    det_b1: int
    det_b2: int
    max_abs: int
    modulus_bits: int
    shift_bound: int


@dataclass(frozen=True)
class InflationTrace:
    records: tuple[TraceRecord, ...]
    tie_break_applied: bool
    initial_max_abs: int

    def shifts(self) -> list[int]:
        return [r.shift for r in self.records]

    def to_dict(self) -> dict:
        return {
            "tie_break_applied": self.tie_break_applied,
            "initial_max_abs": serialize.int_str(self.initial_max_abs),
            "records": [
                {
                    "iteration": r.iteration,
                    "shift": r.shift,
                    "det_b1": serialize.int_str(r.det_b1),
                    "det_b2": serialize.int_str(r.det_b2),
                    "max_abs": serialize.int_str(r.max_abs),
                    "modulus_bits": r.modulus_bits,
                    "shift_bound": r.shift_bound,
                }
                for r in self.records
            ],
        }


@dataclass(frozen=True)
class SAInstance:
    """Output of the approximation: rational vector x and integer matrix
    m_tilde such that m_tilde * x = (b1, b2, 0, ..., 0) and the columns of
    m_tilde together with that vector generate Z^n.

    `perturbation` is m_tilde minus c times the adjugate of the input basis;
    it has at most one nonzero (non-negative) entry per row.
    """

    n: int
    k: int
    c: int
    mode: str
    x: Vector
    m_tilde: Matrix
    b1: int
    b2: int
    perturbation: Matrix
    trace: InflationTrace | None

    @property
    def b_vector(self) -> Vector:
        return Vector([self.b1, self.b2] + [0] * (self.n - 2))

    @property
    def q(self) -> int:
        """Least common denominator of x."""
        return self.x.lcd()

    def to_dict(self, include_trace: bool = True) -> dict:
        out = {
            "n": self.n,
            "k": serialize.int_str(self.k),
            "c": serialize.int_str(self.c),
            "mode": self.mode,
            "x": serialize.rat_vector_json(self.x),
            "m_tilde": serialize.int_matrix_json(self.m_tilde),
            "b1": serialize.int_str(self.b1),
            "b2": serialize.int_str(self.b2),
            "perturbation": serialize.int_matrix_json(self.perturbation),
        }
        if include_trace and self.trace is not None:
            out["trace"] = self.trace.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SAInstance":
        trace = None
        if "trace" in data:
            t = data["trace"]
            trace = InflationTrace(
                records=tuple(
                    TraceRecord(
                        iteration=r["iteration"],
                        shift=r["shift"],
                        det_b1=serialize.parse_int(r["det_b1"]),
                        det_b2=serialize.parse_int(r["det_b2"]),
                        max_abs=serialize.parse_int(r["max_abs"]),
                        modulus_bits=r["modulus_bits"],
                        shift_bound=r["shift_bound"],
                    )
                    for r in t["records"]
                ),
                tie_break_applied=t["tie_break_applied"],
                initial_max_abs=serialize.parse_int(t["initial_max_abs"]),
            )
        return cls(
            n=int(data["n"]),
            k=serialize.parse_int(data["k"]),
            c=serialize.parse_int(data["c"]),
            mode=data["mode"],
            x=serialize.parse_rat_vector(data["x"]),
            m_tilde=serialize.parse_int_matrix(data["m_tilde"]),
            b1=serialize.parse_int(data["b1"]),
            b2=serialize.parse_int(data["b2"]),
            perturbation=serialize.parse_int_matrix(data["perturbation"]),
            trace=trace,
        )


def side_minor_matrices(m_tilde: Matrix) -> tuple[Matrix, Matrix]:
    """The two complementary minors: m_tilde with column n and row 1
    (respectively row 2) removed."""
    n = m_tilde.nrows
    b1 = m_tilde.drop_row_col(0, n - 1)
    b2 = m_tilde.drop_row_col(1, n - 1)
    return b1, b2


def cofactor_pair(m_tilde: Matrix) -> tuple[int, int]:
    """The (1, n) and (2, n) cofactors of m_tilde (signed minors)."""
    n = m_tilde.nrows
    b1, b2 = side_minor_matrices(m_tilde)
    s1 = 1 if (1 + n) % 2 == 0 else -1
    s2 = -s1
    return s1 * bareiss_det(b1), s2 * bareiss_det(b2)


def sa_approximate(inst: GeneralInstance, mode: str = MODE_STRICT, include_trace: bool = True) -> SAInstance:
    """Build the approximating lattice description (x, m_tilde) for inst.

    The perturbation loop never recomputes the working minors from scratch:
    after a shift of x at column i, the new determinant equals the old one
    plus x times the previous column's determinant, and that identity drives
    the coprimality scan.
    """
    n, k = inst.n, inst.k
    c = multiplier_c(n, k, mode)
    bound = entry_bound(c, n, k)
    det_m, adj_m = bareiss_det_adj(inst.m)
    if det_m == 0:
        raise LatticeError("input basis is singular")  # unreachable past instance checks

    mt = [[c * adj_m[i, j] for j in range(n)] for i in range(n)]

    def max_abs() -> int:
        return max(abs(e) for row in mt for e in row)

    def check_bound(current: int):
        if current > bound:
            raise LatticeError(
                f"entry inflation exceeded its bound: {current} > {bound}"
            )

    initial_max = max_abs()
    check_bound(initial_max)

    # make the two designated top-left elements differ so the first
    # perturbation round can terminate
    tie_break = mt[1][0] == mt[0][0]
    if tie_break:
        mt[1][0] += 1

    def minor_det(rows: list[int], size: int) -> int:
        return bareiss_det(Matrix([mt[r][:size] for r in rows[:size]]))

    b1_rows = list(range(1, n))        # rows of m_tilde forming the first minor
    b2_rows = [0] + list(range(2, n))  # rows forming the second minor

    records = []
    prev1, prev2 = 1, 1  # determinants of the empty minors
    for i in range(1, n):
        det1_old = minor_det(b1_rows, i)
        det2_old = minor_det(b2_rows, i)
        modulus = abs(prev2 * det1_old - prev1 * det2_old)
        shift_bound = max(256, 4 * modulus.bit_length() ** 2)
        shift = coprime_shift(det1_old, prev1, det2_old, prev2, max_shift=shift_bound)
        if shift:
            mt[i][i - 1] += shift
            if i == 1:
                mt[0][0] += shift
        det1 = det1_old + prev1 * shift
        det2 = det2_old + prev2 * shift
        current_max = max_abs()
        check_bound(current_max)
        records.append(
            TraceRecord(
                iteration=i,
                shift=shift,
                det_b1=det1,
                det_b2=det2,
                max_abs=current_max,
                modulus_bits=modulus.bit_length(),
                shift_bound=shift_bound,
            )
        )
        prev1, prev2 = det1, det2

    m_tilde = Matrix(mt)
    cof1, cof2 = cofactor_pair(m_tilde)
    bez = ext_gcd(cof1, cof2)
    if bez.g != 1:
        raise LatticeError("complementary minors failed to reach coprimality")
    b1, b2 = bez.s, bez.t
    bvec = Vector([b1, b2] + [0] * (n - 2))
    x = solve_linear(m_tilde, bvec)

    sa = SAInstance(
        n=n,
        k=k,
        c=c,
        mode=mode,
        x=x,
        m_tilde=m_tilde,
        b1=b1,
        b2=b2,
        perturbation=m_tilde - adj_m.scale(c),
        trace=InflationTrace(tuple(records), tie_break, initial_max) if include_trace else None,
    )
    if m_tilde * x != Vector([Fraction(e) for e in bvec]):
        raise LatticeError("solution vector does not reproduce the Bezout column")
    if not generation_check(inst.m, sa):
        raise LatticeError("generation check failed on a fresh construction")
    return sa


def generation_check(m: Matrix, sa: SAInstance) -> bool:
    """True iff the columns of m_tilde extended by (b1, b2, 0, ..., 0)
    generate Z^n, verified two ways: the last column replaced by the Bezout
    vector must have determinant of magnitude 1, and the Hermite normal form
    of the extended matrix must be the identity.
    """
    if m.nrows != sa.n:
        raise ValueError("instance dimension mismatch")
    n = sa.n
    bvec = sa.b_vector
    det_form = abs(bareiss_det(sa.m_tilde.with_col_replaced(n - 1, bvec))) == 1
    hnf_form = hnf(sa.m_tilde.hstack(bvec)) == Matrix.identity(n)
    return det_form and hnf_form


def recover_coefficient(y: Vector, x: Vector) -> int:
    """Smallest b >= 0 with y - b*x an integer vector, modulo lcd(x).

    Solves the per-coordinate congruences b*num(x_i) = num(y_i)*stuff modulo
    the denominators and combines them with the general CRT; raises
    NoSolution when the congruences are inconsistent.
    """
    if len(y) != len(x):
        raise ValueError("dimension mismatch")
    r, m = 0, 1
    for yi, xi in zip(y, x):
        fy, fx = Fraction(yi), Fraction(xi)
        alpha = fx.numerator * fy.denominator
        beta = fy.numerator * fx.denominator
        mod = fx.denominator * fy.denominator
        g = math.gcd(alpha, mod)
        if beta % g:
            raise NoSolution("coordinate congruence unsolvable")
        alpha2, beta2, mod2 = alpha // g, beta // g, mod // g
        r2 = (beta2 * pow(alpha2, -1, mod2)) % mod2 if mod2 > 1 else 0
        g2 = math.gcd(m, mod2)
        if (r2 - r) % g2:
            raise NoSolution("coordinate congruences inconsistent")
        lcm = m // g2 * mod2
        step = mod2 // g2
        if step > 1:
            t = ((r2 - r) // g2 * pow(m // g2, -1, step)) % step
            r = (r + m * t) % lcm
        m = lcm
    q = x.lcd()
    if q % m:
        raise NoSolution("combined modulus does not divide the denominator lattice")
    return r % q if q > 1 else 0
