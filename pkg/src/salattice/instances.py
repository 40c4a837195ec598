"""Problem instances: a full-rank integer lattice basis with its magnitude
bound, approximation factor, norm, and optional rational target.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import serialize
from .errors import InstanceError
from .linalg import Matrix, NormKind, Vector, bareiss_det


@dataclass(frozen=True)
class GeneralInstance:
    """One lattice problem: minimize over M*Z^n under `norm`, factor gamma.

    Invariants (checked on construction): det(M) != 0, entries of M bounded
    by k, gamma = a/b with k >= a >= b >= 1, and any target has least common
    denominator at most k.
    """

    n: int
    k: int
    m: Matrix
    gamma: tuple[int, int]
    norm: NormKind
    target: Vector | None = None

    def __post_init__(self):
        if self.n < 2:
            raise InstanceError("dimension must be at least 2")
        if self.m.nrows != self.n or self.m.ncols != self.n:
            raise InstanceError("basis matrix must be n by n")
        if not self.m.is_integral():
            raise InstanceError("basis matrix must be integral")
        if self.k < 1:
            raise InstanceError("k must be positive")
        if self.m.max_abs() > self.k:
            raise InstanceError("matrix entries exceed the bound k")
        a, b = self.gamma
        if not (self.k >= a >= b >= 1):
            raise InstanceError(f"gamma = {a}/{b} must satisfy k >= a >= b >= 1")
        if self.target is not None:
            if len(self.target) != self.n:
                raise InstanceError("target dimension mismatch")
            if self.target.lcd() > self.k:
                raise InstanceError("target denominator exceeds k")
        if bareiss_det(self.m) == 0:
            raise InstanceError("basis matrix is singular")

    @property
    def gamma_fraction(self) -> Fraction:
        return Fraction(self.gamma[0], self.gamma[1])

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": serialize.int_str(self.k),
            "m": serialize.int_matrix_json(self.m),
            "gamma": f"{self.gamma[0]}/{self.gamma[1]}",
            "norm": self.norm.value,
        }
        if self.target is not None:
            out["target"] = serialize.rat_vector_json(self.target)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GeneralInstance":
        gamma = serialize.parse_rat(data["gamma"])
        target = None
        if data.get("target") is not None:
            target = serialize.parse_rat_vector(data["target"])
        return cls(
            n=int(data["n"]),
            k=serialize.parse_int(data["k"]),
            m=serialize.parse_int_matrix(data["m"]),
            gamma=(gamma.numerator, gamma.denominator),
            norm=NormKind.from_str(data["norm"]),
            target=target,
        )


def _trial_rng(seed: int, trial: int) -> random.Random:
    # per-trial stream so batches can run in any order and still reproduce
    return random.Random((seed << 32) ^ trial)


def random_instance(
    n: int,
    k: int,
    seed: int,
    *,
    gamma: tuple[int, int] = (1, 1),
    norm: NormKind = NormKind.L2,
    with_target: bool = False,
    trial: int = 0,
) -> GeneralInstance:
    """Deterministic random instance: entries uniform on [-k, k], resampled
    until the determinant is nonzero; target entries are uniform rationals
    with least common denominator at most k.
    """
    if n < 2 or k < 1:
        raise InstanceError("need n >= 2 and k >= 1")
    rng = _trial_rng(seed, trial)
    while True:
        m = Matrix([[rng.randint(-k, k) for _ in range(n)] for _ in range(n)])
        if bareiss_det(m) != 0:
            break
    target = None
    if with_target:
        den = rng.randint(1, k)
        target = Vector(Fraction(rng.randint(-k * den, k * den), den) for _ in range(n))
    return GeneralInstance(n=n, k=k, m=m, gamma=gamma, norm=norm, target=target)
